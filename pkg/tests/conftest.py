import numpy as np
import pytest

from elemsparse import DenseMatrix


@pytest.fixture
def toy() -> DenseMatrix:
    # rank-one workhorse: ||X||_F = 5, sum|X| = 7, hybrid p = [69/175, 106/175, 0, 0]
    return DenseMatrix(np.array([[3.0, 4.0], [0.0, 0.0]]))


@pytest.fixture
def single_cell() -> DenseMatrix:
    return DenseMatrix(np.array([[2.5]]))
