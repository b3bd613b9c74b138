"""Deterministic-seeded spectral-norm estimation by power iteration.

Used for error measurement ``||sketch - X||_2`` and for stable rank. The
difference operator is applied lazily (COO scatter plus dense matvec per
iteration), never densifying sketch - X.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import ShapeMismatchError

__all__ = ["SpectralConfig", "SpectralEstimate", "spectral_norm", "sketch_error"]


@dataclass(frozen=True)
class SpectralConfig:
    """Power-iteration controls.

    tol is the relative Rayleigh-quotient change threshold; seed fixes the
    random unit start vector, making every estimate deterministic.
    """

    tol: float = 1e-9
    max_iters: int = 5000
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


DEFAULT_CONFIG = SpectralConfig()


class SpectralEstimate(NamedTuple):
    value: float
    iterations: int
    converged: bool


def _start_vector(n: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.standard_normal(n)


def _as_array(a) -> np.ndarray:
    data = a if isinstance(a, np.ndarray) else getattr(a, "data", a)
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d operand, got ndim={arr.ndim}")
    return arr


def spectral_norm(a, cfg: SpectralConfig = DEFAULT_CONFIG) -> SpectralEstimate:
    """Estimate the top singular value of a dense matrix.

    Power iteration on v -> A^T(Av) from a seeded random unit vector; returns
    the square root of the Rayleigh quotient once its relative change drops
    below cfg.tol, or the best estimate with converged=False after
    cfg.max_iters. Non-convergence is signaled, not raised.
    """
    arr = _as_array(a)
    v0 = _start_vector(arr.shape[1], cfg.seed)
    value, iters, converged = kernels.power_iter_dense(arr, v0, cfg.tol, cfg.max_iters)
    return SpectralEstimate(float(value), int(iters), bool(converged))


def sketch_error(x, sketch, cfg: SpectralConfig = DEFAULT_CONFIG) -> float:
    """``||S - X||_2`` with S applied lazily from its COO triples.

    Accepts a SparseSketch (unwrapping its COO matrix) or a SparseCOO.
    """
    coo = getattr(sketch, "matrix", sketch)
    arr = _as_array(x)
    if (coo.m, coo.n) != arr.shape:
        raise ShapeMismatchError(
            f"sketch shape ({coo.m}, {coo.n}) does not match matrix shape {arr.shape}"
        )
    v0 = _start_vector(arr.shape[1], cfg.seed)
    value, _, _ = kernels.power_iter_diff(
        coo.rows, coo.cols, coo.vals, arr, v0, cfg.tol, cfg.max_iters
    )
    return float(value)
