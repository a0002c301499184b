"""Counter-based random streams for reproducible, schedule-invariant experiments.

Every uniform is a pure function of ``(seed, *path)`` where the path encodes
coordinates such as (arm, trial, player, slot).  Streams therefore do not
depend on evaluation order and identical draws can be reproduced from any
worker.  The mixer is the SplitMix64 finalizer applied per path component.

All arithmetic is done on uint64 ndarrays (wraparound is silent there); the
numba kernels in ``_kernels_numba`` reimplement the same arithmetic and are
tested for bitwise agreement.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
FOLD_MULT = 0xD1342543DE82EF95
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
INV_2_53 = float(2.0 ** -53)

# path slots used by the simulator; kept here so both backends agree
TAG_Z = 1
TAG_U = 2
TAG_X = 3
TAG_Y = 4
RETRY_STRIDE = 1009

_U = np.uint64


def mix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on uint64 arrays."""
    x = x ^ (x >> _U(30))
    x = x * _U(MIX_A)
    x = x ^ (x >> _U(27))
    x = x * _U(MIX_B)
    return x ^ (x >> _U(31))


def counter_state(seed: int, *path) -> np.ndarray:
    """Mixed uint64 state for an integer path, broadcasting over components.

    Always returns an array of ndim >= 1 (0-d inputs are lifted so integer
    wraparound stays in silent array arithmetic).
    """
    x = mix64(np.atleast_1d(np.asarray(seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))
              + _U(GOLDEN))
    for component in path:
        c = np.atleast_1d(np.asarray(component, dtype=np.uint64))
        x = mix64(x ^ (c * _U(FOLD_MULT) + _U(GOLDEN)))
    return x


def u01(seed: int, *path):
    """Uniform [0, 1) draws indexed by path; shape follows broadcasting."""
    scalar = all(np.ndim(p) == 0 for p in path)
    x = counter_state(seed, *path)
    out = (x >> _U(11)).astype(np.float64) * INV_2_53
    return float(out[0]) if scalar else out


def rademacher_matrix(seed: int, tag: int, rows, cols: int, row_offset: int = 0):
    """Signs in {-1, +1} with entry (r, j) a pure function of (seed, tag, r, j).

    ``rows`` may be an int (rows 0..rows-1) or an array of row indices.
    """
    if np.isscalar(rows):
        ridx = np.arange(int(rows), dtype=np.uint64)
    else:
        ridx = np.asarray(rows, dtype=np.uint64)
    ridx = ridx + _U(row_offset)
    jidx = np.arange(cols, dtype=np.uint64)
    u = u01(seed, tag, ridx[:, None], jidx[None, :])
    return np.where(u < 0.5, -1.0, 1.0)
