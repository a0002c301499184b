"""Constraint families and reference channels.

Two families are modeled: ``comm`` channels whose reachable output alphabet
fits in ell bits, and ``ldp`` channels whose likelihood ratios across inputs
are bounded by e^rho.  Both families are convex, which the property tests
exercise through ``mix_channels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prob import Channel

RATIO_RTOL = 1e-12
REACHABLE_ATOL = 1e-12


@dataclass(frozen=True)
class ConstraintSpec:
    """Either comm(bits=ell) or ldp(rho)."""

    kind: str
    k: int
    bits: int | None = None
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in ("comm", "ldp"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.kind == "comm":
            if self.bits is None or int(self.bits) < 1:
                raise ValueError("comm constraint needs bits >= 1")
            object.__setattr__(self, "bits", int(self.bits))
        else:
            if self.rho is None or self.rho <= 0:
                raise ValueError("ldp constraint needs rho > 0")

    @property
    def rho_flagged(self) -> bool:
        """rho > 1 is allowed but outside the quadratic norm-bound regime."""
        return self.kind == "ldp" and self.rho is not None and self.rho > 1.0

    def describe(self) -> str:
        if self.kind == "comm":
            return f"comm(bits={self.bits})"
        return f"ldp(rho={self.rho})"


def standard_channel(name: str, k: int, *, bits: int | None = None,
                     rho: float | None = None, m: int | None = None) -> Channel:
    """Reference channels: identity, constant, parity, quantizer(bits),
    randomized_response(rho).

    Inputs are 0-indexed but parity follows the 1-indexed convention of the
    pair structure: input index 0 (first symbol) is odd, so it maps to output 1.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if name == "identity":
        return Channel(np.eye(k), name="identity")
    if name == "constant":
        mm = k if m is None else int(m)
        if mm < 1:
            raise ValueError("constant channel needs m >= 1")
        return Channel(np.full((mm, k), 1.0 / mm), name="constant")
    if name == "parity":
        if k % 2 != 0:
            raise ValueError("parity channel needs even k")
        W = np.zeros((2, k))
        for idx in range(k):
            W[(idx + 1) % 2, idx] = 1.0
        return Channel(W, name="parity")
    if name == "quantizer":
        if bits is None or bits < 1:
            raise ValueError("quantizer needs bits >= 1")
        mm = 2 ** bits
        W = np.zeros((mm, k))
        for idx in range(k):
            W[min(idx * mm // k, mm - 1), idx] = 1.0
        return Channel(W, name=f"quantizer({bits})")
    if name == "randomized_response":
        if rho is None or rho <= 0:
            raise ValueError("randomized_response needs rho > 0")
        e = math.exp(rho)
        W = np.full((k, k), 1.0 / (e + k - 1))
        np.fill_diagonal(W, e / (e + k - 1))
        return Channel(W, name=f"randomized_response({rho})")
    raise ValueError(f"unknown standard channel {name!r}")


def check_ldp(W: Channel, rho: float) -> tuple[bool, float]:
    """Worst likelihood ratio max_{y,x1,x2} W(y|x1)/W(y|x2), with 0/0 treated
    as 1 and a/0 as +infinity.  Returns (ratio <= e^rho, realized ratio)."""
    worst = 1.0
    for y in range(W.m):
        row = W.W[y]
        hi = float(row.max())
        lo = float(row.min())
        if hi == 0.0:
            continue
        if lo == 0.0:
            return False, math.inf
        worst = max(worst, hi / lo)
    return worst <= math.exp(rho) * (1.0 + RATIO_RTOL), worst


def check_comm(W: Channel, bits: int) -> bool:
    """True iff at most 2**bits outputs are reachable from some input."""
    reachable = int(np.sum(W.W.max(axis=1) > REACHABLE_ATOL))
    return reachable <= 2 ** bits


def satisfies(W: Channel, spec: ConstraintSpec) -> bool:
    if W.k != spec.k:
        raise ValueError(f"channel has k={W.k}, constraint spec has k={spec.k}")
    if spec.kind == "comm":
        return check_comm(W, spec.bits)
    ok, _ = check_ldp(W, spec.rho)
    return ok


def random_comm_channel(k: int, bits: int, rng: np.random.Generator) -> Channel:
    """Random channel with m = 2**bits outputs (an arbitrary stochastic matrix)."""
    m = 2 ** bits
    raw = rng.gamma(1.0, 1.0, size=(m, k))
    return Channel(raw / raw.sum(axis=0, keepdims=True))


def random_ldp_channel(k: int, rho: float, rng: np.random.Generator,
                       m: int | None = None) -> Channel:
    """Random rho-LDP channel.

    Draws a stochastic matrix, squeezes each output row into the multiplicative
    band [min, min*e^rho], renormalizes columns, and repeats the projection
    until check_ldp passes (column renormalization can stretch rows slightly,
    so one pass is not always enough).
    """
    m = k if m is None else m
    raw = rng.gamma(1.0, 1.0, size=(m, k))
    W = raw / raw.sum(axis=0, keepdims=True)
    e = math.exp(rho)
    for _ in range(200):
        lo = W.min(axis=1, keepdims=True)
        W = np.clip(W, lo, lo * e)
        W = W / W.sum(axis=0, keepdims=True)
        hi = W.max(axis=1)
        lo = W.min(axis=1)
        if np.all(hi <= lo * e * (1.0 + 1e-13)):
            break
    # projection lands on the ratio boundary; shrink half the draws toward the
    # row-mean constant channel (0-LDP) so the family interior is covered too
    if rng.random() < 0.5:
        theta = rng.uniform(0.1, 0.9)
        const = np.repeat(W.mean(axis=1, keepdims=True), k, axis=1)
        const = const / const.sum(axis=0, keepdims=True)
        W = (1.0 - theta) * W + theta * const
    ch = Channel(W)
    ok, ratio = check_ldp(ch, rho)
    if not ok:
        raise RuntimeError(f"LDP projection failed to converge: ratio {ratio}")
    return ch


def pair_splitting_channel(signs: np.ndarray) -> Channel:
    """Deterministic 1-bit channel sending one element of each consecutive pair
    to output 1: sign +1 routes the first element of the pair to 1."""
    signs = np.asarray(signs, dtype=np.float64).reshape(-1)
    if not np.all(np.abs(signs) == 1.0):
        raise ValueError("signs must be +-1")
    k = 2 * signs.size
    W = np.zeros((2, k))
    for i, s in enumerate(signs):
        first, second = 2 * i, 2 * i + 1
        if s > 0:
            W[1, first] = 1.0
            W[0, second] = 1.0
        else:
            W[0, first] = 1.0
            W[1, second] = 1.0
    return Channel(W, name=f"pair_split({''.join('+' if s > 0 else '-' for s in signs)})")


def all_pair_splitting_channels(k: int, dedupe_complement: bool = True) -> list[Channel]:
    """All deterministic pair-splitting channels on [k].

    With ``dedupe_complement`` the first sign is pinned to +1 since the
    complementary split is the same channel with outputs relabeled.
    """
    if k % 2 != 0:
        raise ValueError("pair splitting needs even k")
    half = k // 2
    free = half - 1 if dedupe_complement else half
    out = []
    for code in range(2 ** free):
        signs = np.ones(half)
        for j in range(free):
            pos = j + 1 if dedupe_complement else j
            if (code >> j) & 1:
                signs[pos] = -1.0
        out.append(pair_splitting_channel(signs))
    return out
