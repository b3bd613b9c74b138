"""Hot numeric kernels: numba-jitted implementations with pure-numpy fallbacks.

The jitted path is selected at import time whenever numba is importable and the
environment variable ``ELEMSPARSE_NO_NUMBA`` is unset/empty/"0". Setting
``ELEMSPARSE_NO_NUMBA=1`` forces the numpy fallbacks (useful on platforms
without a working LLVM toolchain, and for the benchmark in
``benchmarks/bench_kernels.py``).

Both paths implement identical floating-point comparisons for alias-table
construction and sampling, so sample index streams are bit-identical across
backends for the same inputs.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "HAVE_NUMBA",
    "USING_NUMBA",
    "active_backend",
    "alias_build",
    "alias_draw",
    "power_iter_dense",
    "power_iter_diff",
    "BACKENDS",
]

_ENV_FLAG = "ELEMSPARSE_NO_NUMBA"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        raise RuntimeError("numba is not available")


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip() not in ("", "0")


USING_NUMBA = HAVE_NUMBA and not _numba_disabled()


def active_backend() -> str:
    return "numba" if USING_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# alias-table construction (Walker/Vose two-stack method)
# ---------------------------------------------------------------------------

def _alias_build_numpy(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Build (prob, alias) arrays for O(1) weighted draws; O(size) setup."""
    size = probs.shape[0]
    scaled = probs * size
    prob = np.ones(size)
    alias = np.arange(size, dtype=np.int64)
    # Stack layout and pop order are fixed so both backends build identical
    # tables; entries left on either stack keep prob=1 and self-alias.
    below = np.nonzero(scaled < 1.0)[0]
    above = np.nonzero(scaled >= 1.0)[0]
    small = np.empty(size, dtype=np.int64)
    large = np.empty(size, dtype=np.int64)
    ns = below.shape[0]
    nl = above.shape[0]
    small[:ns] = below
    large[:nl] = above
    while ns > 0 and nl > 0:
        ns -= 1
        nl -= 1
        lo = small[ns]
        hi = large[nl]
        prob[lo] = scaled[lo]
        alias[lo] = hi
        scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0
        if scaled[hi] < 1.0:
            small[ns] = hi
            ns += 1
        else:
            large[nl] = hi
            nl += 1
    return prob, alias


def _make_alias_build_numba():
    @njit(cache=True, nogil=True)
    def _alias_build_numba(probs):
        size = probs.shape[0]
        scaled = probs * size
        prob = np.ones(size)
        alias = np.arange(size)
        small = np.empty(size, dtype=np.int64)
        large = np.empty(size, dtype=np.int64)
        ns = 0
        nl = 0
        for k in range(size):
            if scaled[k] < 1.0:
                small[ns] = k
                ns += 1
            else:
                large[nl] = k
                nl += 1
        while ns > 0 and nl > 0:
            ns -= 1
            nl -= 1
            lo = small[ns]
            hi = large[nl]
            prob[lo] = scaled[lo]
            alias[lo] = hi
            scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0
            if scaled[hi] < 1.0:
                small[ns] = hi
                ns += 1
            else:
                large[nl] = hi
                nl += 1
        return prob, alias

    return _alias_build_numba


# ---------------------------------------------------------------------------
# alias-table draws
# ---------------------------------------------------------------------------
#
# Per draw t, two uniforms are consumed in fixed order: u_slot[t] selects the
# table slot k = trunc(u_slot[t] * size) (clamped to size-1 in case the
# product rounds up to exactly size), and u_coin[t] < prob[k] keeps k, else
# takes alias[k].

def _alias_draw_numpy(prob, alias, u_slot, u_coin):
    size = prob.shape[0]
    k = (u_slot * size).astype(np.int64)
    np.minimum(k, size - 1, out=k)
    return np.where(u_coin < prob[k], k, alias[k])


def _make_alias_draw_numba():
    @njit(cache=True, nogil=True)
    def _alias_draw_numba(prob, alias, u_slot, u_coin):
        size = prob.shape[0]
        s = u_slot.shape[0]
        out = np.empty(s, dtype=np.int64)
        for t in range(s):
            k = np.int64(u_slot[t] * size)
            if k >= size:
                k = size - 1
            if u_coin[t] < prob[k]:
                out[t] = k
            else:
                out[t] = alias[k]
        return out

    return _alias_draw_numba


# ---------------------------------------------------------------------------
# power iteration on A^T A (top singular value squared = Rayleigh quotient)
# ---------------------------------------------------------------------------
#
# Both variants iterate v <- A^T(Av)/||A^T(Av)|| from the given start vector
# and stop when the Rayleigh quotient r = ||Av||^2 changes by less than
# tol * r between iterations. They return (sqrt(r), iterations, converged).

def _power_iter_dense_numpy(a, v0, tol, max_iters):
    v = v0 / np.sqrt(v0 @ v0)
    r_prev = 0.0
    r = 0.0
    for it in range(1, max_iters + 1):
        u = a @ v
        r = float(u @ u)
        if r == 0.0:
            return 0.0, it, True
        if it > 1 and abs(r - r_prev) <= tol * r:
            return float(np.sqrt(r)), it, True
        r_prev = r
        w = a.T @ u
        nw = float(np.sqrt(w @ w))
        if nw == 0.0:
            return float(np.sqrt(r)), it, True
        v = w / nw
    return float(np.sqrt(r)), max_iters, False


def _make_power_iter_dense_numba():
    @njit(cache=True, nogil=True)
    def _power_iter_dense_numba(a, v0, tol, max_iters):
        v = v0 / np.sqrt(np.dot(v0, v0))
        r_prev = 0.0
        r = 0.0
        for it in range(1, max_iters + 1):
            u = np.dot(a, v)
            r = np.dot(u, u)
            if r == 0.0:
                return 0.0, it, True
            if it > 1 and abs(r - r_prev) <= tol * r:
                return np.sqrt(r), it, True
            r_prev = r
            w = np.dot(a.T, u)
            nw = np.sqrt(np.dot(w, w))
            if nw == 0.0:
                return np.sqrt(r), it, True
            v = w / nw
        return np.sqrt(r), max_iters, False

    return _power_iter_dense_numba


def _power_iter_diff_numpy(rows, cols, vals, x, v0, tol, max_iters):
    """Power iteration on the lazily-applied operator (S - X), S in COO form."""
    m, n = x.shape
    v = v0 / np.sqrt(v0 @ v0)
    r_prev = 0.0
    r = 0.0
    for it in range(1, max_iters + 1):
        u = np.bincount(rows, weights=vals * v[cols], minlength=m) - x @ v
        r = float(u @ u)
        if r == 0.0:
            return 0.0, it, True
        if it > 1 and abs(r - r_prev) <= tol * r:
            return float(np.sqrt(r)), it, True
        r_prev = r
        w = np.bincount(cols, weights=vals * u[rows], minlength=n) - x.T @ u
        nw = float(np.sqrt(w @ w))
        if nw == 0.0:
            return float(np.sqrt(r)), it, True
        v = w / nw
    return float(np.sqrt(r)), max_iters, False


def _make_power_iter_diff_numba():
    @njit(cache=True, nogil=True)
    def _power_iter_diff_numba(rows, cols, vals, x, v0, tol, max_iters):
        nnz = rows.shape[0]
        v = v0 / np.sqrt(np.dot(v0, v0))
        r_prev = 0.0
        r = 0.0
        for it in range(1, max_iters + 1):
            u = -np.dot(x, v)
            for t in range(nnz):
                u[rows[t]] += vals[t] * v[cols[t]]
            r = np.dot(u, u)
            if r == 0.0:
                return 0.0, it, True
            if it > 1 and abs(r - r_prev) <= tol * r:
                return np.sqrt(r), it, True
            r_prev = r
            w = -np.dot(x.T, u)
            for t in range(nnz):
                w[cols[t]] += vals[t] * u[rows[t]]
            nw = np.sqrt(np.dot(w, w))
            if nw == 0.0:
                return np.sqrt(r), it, True
            v = w / nw
        return np.sqrt(r), max_iters, False

    return _power_iter_diff_numba


BACKENDS: dict[str, dict] = {
    "numpy": {
        "alias_build": _alias_build_numpy,
        "alias_draw": _alias_draw_numpy,
        "power_iter_dense": _power_iter_dense_numpy,
        "power_iter_diff": _power_iter_diff_numpy,
    }
}

if HAVE_NUMBA:
    BACKENDS["numba"] = {
        "alias_build": _make_alias_build_numba(),
        "alias_draw": _make_alias_draw_numba(),
        "power_iter_dense": _make_power_iter_dense_numba(),
        "power_iter_diff": _make_power_iter_diff_numba(),
    }

_active = BACKENDS[active_backend()]
alias_build = _active["alias_build"]
alias_draw = _active["alias_draw"]
power_iter_dense = _active["power_iter_dense"]
power_iter_diff = _active["power_iter_diff"]
