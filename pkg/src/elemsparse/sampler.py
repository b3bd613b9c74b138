"""With-replacement cell sampling and construction of the sparse sketch.

The sketch of X from a sample multiset Omega of s cells is
``(1/s) * sum_t X[i_t, j_t] / p[i_t, j_t]`` placed at cell (i_t, j_t), with
repeated cells accumulating into a single COO triple. Draws use an alias
table (O(1) per draw after O(mn) setup) fed by a seeded PCG64 stream; per
draw, two uniforms are consumed in fixed order (slot, then coin), so a
(distribution, s, seed) triple always regenerates the identical sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import DistributionKind, SamplingDistribution, distribution_for_kind
from .errors import ShapeMismatchError, ZeroProbabilityError
from .matrix import DenseMatrix, SparseCOO

__all__ = [
    "AliasTable",
    "SampleSet",
    "SparseSketch",
    "build_alias_table",
    "reconstructed_probs",
    "draw_samples",
    "sampling_operator",
    "sparsify",
    "exact_expectation",
]

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class AliasTable:
    """Walker/Vose table over the mn cells of an m-by-n probability grid."""

    m: int
    n: int
    prob: np.ndarray
    alias: np.ndarray

    @property
    def size(self) -> int:
        return self.m * self.n


@dataclass(frozen=True, eq=False)
class SampleSet:
    """s sampled (i, j) cell indices plus the seed that produced them."""

    s: int
    pairs: np.ndarray
    seed: int

    def __post_init__(self):
        pairs = np.array(self.pairs, dtype=np.int64)
        if pairs.shape != (self.s, 2):
            raise ShapeMismatchError(f"expected pairs of shape ({self.s}, 2), got {pairs.shape}")
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)


@dataclass(frozen=True, eq=False)
class SparseSketch:
    """COO sketch together with the sampling provenance that built it."""

    matrix: SparseCOO
    s: int
    source_seed: int
    distribution_kind: DistributionKind


def build_alias_table(d: SamplingDistribution) -> AliasTable:
    prob, alias = kernels.alias_build(d.probs)
    prob.setflags(write=False)
    alias.setflags(write=False)
    return AliasTable(d.m, d.n, prob, alias)


def reconstructed_probs(table: AliasTable) -> np.ndarray:
    """Invert the table back to per-cell probabilities (diagnostic)."""
    recon = table.prob.copy()
    np.add.at(recon, table.alias, 1.0 - table.prob)
    return recon / table.size


def draw_samples(table: AliasTable, s: int, seed: int) -> SampleSet:
    """s i.i.d. with-replacement draws; a pure function of (table, s, seed)."""
    if s < 1:
        raise ValueError(f"sample count must be >= 1, got {s}")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random((s, 2))
    flat = kernels.alias_draw(table.prob, table.alias, u[:, 0], u[:, 1])
    pairs = np.stack((flat // table.n, flat % table.n), axis=1)
    return SampleSet(s, pairs, seed)


def sampling_operator(
    x: DenseMatrix, d: SamplingDistribution, omega: SampleSet
) -> SparseSketch:
    """Assemble the sketch: cell value = (times drawn) * x_ij / (s * p_ij)."""
    if (x.m, x.n) != (d.m, d.n):
        raise ShapeMismatchError(
            f"distribution shape ({d.m}, {d.n}) does not match matrix shape {x.shape}"
        )
    rows, cols = omega.pairs[:, 0], omega.pairs[:, 1]
    if rows.min() < 0 or rows.max() >= x.m or cols.min() < 0 or cols.max() >= x.n:
        raise ShapeMismatchError("sample indices out of range for this matrix")
    flat = rows * x.n + cols
    cells, counts = np.unique(flat, return_counts=True)
    p = d.probs[cells]
    if np.any(p <= 0.0):
        raise ZeroProbabilityError(
            "sample contains a cell with zero probability; "
            "the sample set does not belong to this distribution"
        )
    vals = counts * x.flat()[cells] / (omega.s * p)
    coo = SparseCOO(x.m, x.n, cells // x.n, cells % x.n, vals)
    return SparseSketch(coo, omega.s, omega.seed, d.kind)


def sparsify(
    x: DenseMatrix, s: int, seed: int, kind=DistributionKind.HYBRID
) -> SparseSketch:
    """End-to-end: build the kind's distribution, draw s cells, assemble."""
    d = distribution_for_kind(x, kind)
    table = build_alias_table(d)
    omega = draw_samples(table, s, seed & _SEED_MASK)
    return sampling_operator(x, d, omega)


def exact_expectation(x: DenseMatrix, d: SamplingDistribution) -> DenseMatrix:
    """Expected sketch: X restricted to the support of d (equals X whenever
    every nonzero cell has positive probability)."""
    if (x.m, x.n) != (d.m, d.n):
        raise ShapeMismatchError(
            f"distribution shape ({d.m}, {d.n}) does not match matrix shape {x.shape}"
        )
    return DenseMatrix(np.where(d.grid() > 0.0, x.data, 0.0))
