"""Numba implementations of the hot kernels.

Same contracts as ``_kernels_numpy``; the counter RNG reproduces the uint64
arithmetic of ``rng`` bit for bit, which the kernel tests assert.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._kernels_numpy import sign_block  # noqa: F401  (shared enumeration helper)

LOG2 = float(np.log(2.0))

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_FOLD_MULT = np.uint64(0xD1342543DE82EF95)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_INV_2_53 = float(2.0 ** -53)

# tags duplicated from rng (numba prefers plain constants in closures)
_TAG_U = np.uint64(2)
_TAG_X = np.uint64(3)
_TAG_Y = np.uint64(4)


@njit(cache=True)
def _mix64(x):
    x ^= x >> np.uint64(30)
    x *= _MIX_A
    x ^= x >> np.uint64(27)
    x *= _MIX_B
    return x ^ (x >> np.uint64(31))


@njit(cache=True)
def _fold(x, c):
    return _mix64(x ^ (c * _FOLD_MULT + _GOLDEN))


@njit(cache=True)
def _u01_4(seed, a, b, c, d):
    x = _mix64(seed + _GOLDEN)
    x = _fold(x, a)
    x = _fold(x, b)
    x = _fold(x, c)
    x = _fold(x, d)
    return float(x >> np.uint64(11)) * _INV_2_53


@njit(cache=True)
def _log_cosh(x):
    ax = abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LOG2


@njit(cache=True)
def cosh_chaos_logmeanexp(a_matrix):
    """log E_theta[ prod_j cosh((A theta)_j) ], exhaustive theta in {-1,+1}^dim.

    Walks the half-space with the last coordinate +1 in gray-code order
    (cosh is even, so -theta duplicates theta): each step updates A theta in
    O(rows) instead of a fresh matvec, with a periodic recompute to stop
    floating-point drift.
    """
    rows, dim = a_matrix.shape
    total = 1 << max(dim - 1, 0)
    refresh = 512
    theta = np.ones(dim, dtype=np.float64)
    v = np.zeros(rows, dtype=np.float64)
    for r in range(rows):
        acc = 0.0
        for j in range(dim):
            acc += a_matrix[r, j]
        v[r] = acc
    run_max = -np.inf
    run_sum = 0.0
    for i in range(total):
        if i > 0:
            j = 0
            while not (i >> j) & 1:
                j += 1
            theta[j] = -theta[j]
            if i % refresh == 0:
                for r in range(rows):
                    acc = 0.0
                    for jj in range(dim):
                        acc += a_matrix[r, jj] * theta[jj]
                    v[r] = acc
            else:
                step = 2.0 * theta[j]
                for r in range(rows):
                    v[r] += step * a_matrix[r, j]
        t = 0.0
        for r in range(rows):
            t += _log_cosh(v[r])
        if t > run_max:
            run_sum = run_sum * np.exp(run_max - t) + 1.0
            run_max = t
        else:
            run_sum += np.exp(t - run_max)
    return run_max + np.log(run_sum / float(total))


@njit(cache=True)
def cosh_chaos_terms(a_matrix, signs):
    n, dim = signs.shape
    rows = a_matrix.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        t = 0.0
        for r in range(rows):
            v = 0.0
            for j in range(dim):
                v += a_matrix[r, j] * signs[i, j]
            t += _log_cosh(v)
        out[i] = t
    return out


def cosh_chaos_logmeanexp_mc(a_matrix, signs):
    t = cosh_chaos_terms(a_matrix, signs)
    m = float(t.max())
    w = np.exp(t - m)
    mean_w = float(w.mean())
    stderr = float(w.std(ddof=1) / (mean_w * np.sqrt(len(w)))) if len(w) > 1 else np.inf
    return float(m + np.log(mean_w)), stderr


@njit(cache=True)
def _smp_trials_impl(seed, arm, n_players, cum_w, cdf_rows, public):
    n_trials, k = cdf_rows.shape
    n_cand, m, _ = cum_w.shape
    codes = np.zeros(n_trials, dtype=np.int64)
    chan = np.full(n_trials, -1, dtype=np.int64)
    for t in range(n_trials):
        tu = np.uint64(t)
        shared = -1
        if public:
            u = _u01_4(seed, _TAG_U, arm, tu, np.uint64(0))
            shared = min(int(u * n_cand), n_cand - 1)
            chan[t] = shared
        code = 0
        for i in range(n_players):
            iu = np.uint64(i)
            if public:
                c = shared
            else:
                u = _u01_4(seed, _TAG_U, arm, tu, iu + np.uint64(1))
                c = min(int(u * n_cand), n_cand - 1)
            ux = _u01_4(seed, _TAG_X, arm, tu, iu)
            x = 0
            while x < k - 1 and cdf_rows[t, x] <= ux:
                x += 1
            uy = _u01_4(seed, _TAG_Y, arm, tu, iu)
            y = 0
            while y < m - 1 and cum_w[c, y, x] <= uy:
                y += 1
            code = code * m + y
        codes[t] = code
    return codes, chan


def smp_trials(seed, arm, n_players, cum_w, cdf_rows, public):
    """See ``_kernels_numpy.smp_trials``."""
    return _smp_trials_impl(np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(arm),
                            n_players, cum_w, cdf_rows, bool(public))
