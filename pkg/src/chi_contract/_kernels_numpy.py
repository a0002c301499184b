"""Pure-numpy implementations of the hot kernels.

Mirrors ``_kernels_numba``; the backend is chosen in ``_backend``.  All
reductions use a fixed chunking so results are independent of how callers
schedule work.
"""

from __future__ import annotations

import numpy as np

from . import rng

LOG2 = float(np.log(2.0))
CHUNK = 1 << 14


def log_cosh(x):
    """Overflow-safe log cosh, elementwise."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LOG2


def sign_block(start: int, stop: int, dim: int) -> np.ndarray:
    """Rows ``start..stop-1`` of the {-1,+1}^dim enumeration (bit 0 -> coord 0,
    bit value 0 -> +1)."""
    idx = np.arange(start, stop, dtype=np.uint64)
    bits = (idx[:, None] >> np.arange(dim, dtype=np.uint64)[None, :]) & np.uint64(1)
    return 1.0 - 2.0 * bits.astype(np.float64)


def cosh_chaos_terms(a_matrix: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """t(theta) = sum_j log cosh((A theta)_j) for each row theta of ``signs``."""
    return log_cosh(signs @ a_matrix.T).sum(axis=1)


def cosh_chaos_logmeanexp(a_matrix: np.ndarray) -> float:
    """log E_theta[ prod_j cosh((A theta)_j) ] over exhaustive theta in {-1,+1}^dim.

    cosh is even, so theta and -theta contribute identically and only the
    half-space with the last coordinate fixed to +1 is enumerated.
    """
    dim = a_matrix.shape[1]
    total = 1 << max(dim - 1, 0)
    run_max = -np.inf
    run_sum = 0.0
    for start in range(0, total, CHUNK):
        signs = sign_block(start, min(start + CHUNK, total), dim)
        t = cosh_chaos_terms(a_matrix, signs)
        m = float(t.max())
        s = float(np.exp(t - m).sum())
        if m > run_max:
            run_sum = run_sum * np.exp(run_max - m) + s
            run_max = m
        else:
            run_sum += s * np.exp(m - run_max)
    return float(run_max + np.log(run_sum / total))


def cosh_chaos_logmeanexp_mc(a_matrix: np.ndarray, signs: np.ndarray):
    """Monte Carlo estimate of log E[prod_j cosh((A theta)_j)] from sampled signs.

    Returns (estimate, stderr_of_log) via the delta method.
    """
    t = cosh_chaos_terms(a_matrix, signs)
    m = float(t.max())
    w = np.exp(t - m)
    mean_w = float(w.mean())
    stderr = float(w.std(ddof=1) / (mean_w * np.sqrt(len(w)))) if len(w) > 1 else np.inf
    return float(m + np.log(mean_w)), stderr


def smp_trials(seed: int, arm: int, n_players: int, cum_w: np.ndarray,
               cdf_rows: np.ndarray, public: bool):
    """Simulate one arm of an SMP protocol for all trials at once.

    cum_w: (C, m, k) per-candidate column CDFs (last entry of each column 1.0).
    cdf_rows: (T, k) per-trial input CDF.
    Returns (message codes (T,), channel index (T,); -1 when private).
    """
    n_trials, k = cdf_rows.shape
    n_cand, m, _ = cum_w.shape
    tidx = np.arange(n_trials, dtype=np.uint64)
    pidx = np.arange(n_players, dtype=np.uint64)

    if public:
        uu = rng.u01(seed, rng.TAG_U, arm, tidx, 0)
        chan = np.minimum((uu * n_cand).astype(np.int64), n_cand - 1)
        chan_ti = np.broadcast_to(chan[:, None], (n_trials, n_players))
    else:
        uu = rng.u01(seed, rng.TAG_U, arm, tidx[:, None], pidx[None, :] + np.uint64(1))
        chan_ti = np.minimum((uu * n_cand).astype(np.int64), n_cand - 1)
        chan = np.full(n_trials, -1, dtype=np.int64)

    ux = rng.u01(seed, rng.TAG_X, arm, tidx[:, None], pidx[None, :])
    x = np.minimum((cdf_rows[:, None, :] <= ux[:, :, None]).sum(axis=2), k - 1)

    uy = rng.u01(seed, rng.TAG_Y, arm, tidx[:, None], pidx[None, :])
    cols = cum_w[chan_ti, :, x]                       # (T, n, m)
    y = np.minimum((cols <= uy[:, :, None]).sum(axis=2), m - 1)

    codes = np.zeros(n_trials, dtype=np.int64)
    for i in range(n_players):
        codes = codes * m + y[:, i]
    return codes, chan
