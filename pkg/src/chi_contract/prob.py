"""Distributions, channels, divergences, and exact product-space enumeration.

Conventions: alphabets are index sets [k] = {0, .., k-1}; a channel is a
column-stochastic m x k matrix with entry (y, x) the probability of output y
on input x.  Probability vectors within 1e-9 of the simplex are renormalized
exactly once at construction, anything further out is rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

SIMPLEX_ATOL = 1e-9
DEFAULT_STATE_CAP = 10 ** 7

DIVERGENCE_KINDS = ("tv", "kl", "chi2")


class CapExceededError(RuntimeError):
    """Exact enumeration would exceed the configured state-space cap."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over [k]."""

    k: int
    probs: np.ndarray

    def __init__(self, probs):
        p = np.asarray(probs, dtype=np.float64).reshape(-1)
        if p.size < 1:
            raise ValueError("empty probability vector")
        if np.min(p) < -SIMPLEX_ATOL or np.max(p) > 1.0 + SIMPLEX_ATOL:
            raise ValueError(f"entries outside [0, 1] beyond tolerance: {p}")
        p = np.clip(p, 0.0, None)
        total = p.sum()
        if abs(total - 1.0) > SIMPLEX_ATOL:
            raise ValueError(f"probabilities sum to {total}, not 1 within {SIMPLEX_ATOL}")
        p = p / total
        object.__setattr__(self, "k", p.size)
        object.__setattr__(self, "probs", _frozen(p))

    @staticmethod
    def uniform(k: int) -> "Distribution":
        return Distribution(np.full(k, 1.0 / k))

    def to_json(self) -> dict:
        return {"k": self.k, "probs": self.probs.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "Distribution":
        d = Distribution(obj["probs"])
        if "k" in obj and int(obj["k"]) != d.k:
            raise ValueError(f"declared k={obj['k']} but {d.k} entries")
        return d


@dataclass(frozen=True, eq=False)
class Channel:
    """Column-stochastic map from [k] inputs to [m] outputs; entry (y, x) = W(y|x)."""

    k: int
    m: int
    W: np.ndarray
    name: str = ""

    def __init__(self, W, name: str = ""):
        mat = np.asarray(W, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
            raise ValueError("channel matrix must be 2-d and nonempty")
        if np.min(mat) < -SIMPLEX_ATOL or np.max(mat) > 1.0 + SIMPLEX_ATOL:
            raise ValueError("channel entries outside [0, 1] beyond tolerance")
        mat = np.clip(mat, 0.0, None)
        colsums = mat.sum(axis=0)
        if np.max(np.abs(colsums - 1.0)) > SIMPLEX_ATOL:
            raise ValueError(f"channel columns must sum to 1 within {SIMPLEX_ATOL}: {colsums}")
        mat = mat / colsums
        object.__setattr__(self, "m", mat.shape[0])
        object.__setattr__(self, "k", mat.shape[1])
        object.__setattr__(self, "W", _frozen(mat))
        object.__setattr__(self, "name", name)

    def to_json(self) -> dict:
        return {"k": self.k, "m": self.m, "W": self.W.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "Channel":
        ch = Channel(obj["W"], name=obj.get("name", ""))
        if int(obj["k"]) != ch.k or int(obj["m"]) != ch.m:
            raise ValueError("declared (k, m) do not match matrix shape")
        return ch


@dataclass(frozen=True, eq=False)
class ProductSpec:
    """Ordered factors of an independent product; each factor is a Distribution
    or a (Channel, Distribution) pair pushed through the channel."""

    factors: tuple

    def __init__(self, factors: Sequence):
        if len(factors) < 1:
            raise ValueError("need at least one factor")
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    def output_dists(self) -> list[Distribution]:
        out = []
        for f in self.factors:
            if isinstance(f, Distribution):
                out.append(f)
            else:
                ch, dist = f
                out.append(apply_channel(ch, dist))
        return out


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def divergence(p: Distribution, q: Distribution, kind: str) -> float:
    """Total variation, KL divergence (natural log), or chi-square distance.

    KL and chi-square return math.inf when p puts mass where q has none;
    +infinity is a value, not an error, so inequality chains stay total.
    """
    if kind not in DIVERGENCE_KINDS:
        raise ValueError(f"unknown divergence kind {kind!r}")
    if p.k != q.k:
        raise ValueError(f"dimension mismatch: {p.k} vs {q.k}")
    pv, qv = p.probs, q.probs
    if kind == "tv":
        return float(0.5 * np.abs(pv - qv).sum())
    support_violation = np.any((qv == 0.0) & (pv > 0.0))
    if support_violation:
        return math.inf
    mask = qv > 0.0
    pm, qm = pv[mask], qv[mask]
    if kind == "kl":
        pos = pm > 0.0
        return float(np.sum(pm[pos] * np.log(pm[pos] / qm[pos])))
    return float(np.sum((pm - qm) ** 2 / qm))


def apply_channel(W: Channel, p: Distribution) -> Distribution:
    """Output distribution with mass sum_x p(x) W(y|x) at y."""
    if W.k != p.k:
        raise ValueError(f"dimension mismatch: channel k={W.k}, distribution k={p.k}")
    return Distribution(W.W @ p.probs)


def mix_channels(parts: Sequence[tuple[Channel, float]]) -> Channel:
    """Convex combination of channels sharing the input alphabet.

    Output alphabets are unioned by index: smaller channels are zero-padded to
    the largest m.
    """
    if not parts:
        raise ValueError("nothing to mix")
    weights = np.array([w for _, w in parts], dtype=np.float64)
    if np.min(weights) < -SIMPLEX_ATOL:
        raise ValueError("negative mixture weight")
    if abs(weights.sum() - 1.0) > SIMPLEX_ATOL:
        raise ValueError(f"mixture weights sum to {weights.sum()}, not 1")
    ks = {ch.k for ch, _ in parts}
    if len(ks) != 1:
        raise ValueError(f"input alphabet mismatch: {sorted(ks)}")
    k = ks.pop()
    m = max(ch.m for ch, _ in parts)
    acc = np.zeros((m, k))
    for ch, w in parts:
        acc[: ch.m, :] += w * ch.W
    return Channel(acc)


def enumerate_product(spec: ProductSpec, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    """Exact joint distribution of the product, indexed in mixed radix with the
    first factor most significant.  Raises CapExceededError past ``cap`` states."""
    dists = spec.output_dists()
    size = 1
    for d in dists:
        size *= d.k
        if size > cap:
            raise CapExceededError(f"product space needs {size}+ states, cap {cap}")
    joint = reduce(lambda a, b: np.multiply.outer(a, b), (d.probs for d in dists))
    return joint.reshape(-1)
