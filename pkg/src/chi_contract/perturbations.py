"""Perturbed families around the uniform distribution.

A family member is p_z with p_z(2i) = (1 + s*z_i)/k and p_z(2i+1) = (1 - s*z_i)/k
(0-indexed pairs), where s is the per-coordinate scale: 2*eps for the
pair-flip family with Rademacher parameters, c*eps for the general scaled
family.  The parameter law zeta is either Rademacher on {-1,+1}^(k/2), a
linear image z = V theta of a lower-dimensional Rademacher vector, or a
custom sampler; the first two keep every fluctuation functional exactly
computable through the cosh collapse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from scipy import stats

from . import rng as crng
from ._backend import kernels
from .prob import Distribution, Channel

EXHAUSTIVE_LIMIT = 20          # largest base dimension enumerated exactly
SUPPORT_CHUNK = 1 << 14
MEMBER_ATOL = 1e-12


class InvalidMemberError(ValueError):
    """A family member has entries outside [0, 1]."""


@dataclass(frozen=True, eq=False)
class PerturbationVector:
    """Normalized perturbation delta with delta(x) = (p(x) - q(x))/q(x)."""

    delta: np.ndarray

    def __init__(self, delta):
        object.__setattr__(self, "delta", np.asarray(delta, dtype=np.float64))


class RademacherLaw:
    """Z uniform on {-1,+1}^dim."""

    def __init__(self, dim: int):
        self.dim = int(dim)
        self.base_dim = int(dim)

    # z = M theta with theta Rademacher; M = I here
    def matrix(self) -> np.ndarray:
        return np.eye(self.dim)

    def exhaustive(self) -> bool:
        return self.base_dim <= EXHAUSTIVE_LIMIT

    def sample(self, n: int, seed: int, tag_offset: int = 0) -> np.ndarray:
        return crng.rademacher_matrix(seed, crng.TAG_Z + tag_offset, n, self.base_dim)

    def iter_support(self, chunk: int = SUPPORT_CHUNK) -> Iterator[tuple[np.ndarray, float]]:
        if not self.exhaustive():
            raise ValueError(f"support of size 2^{self.base_dim} too large to enumerate")
        total = 1 << self.base_dim
        w = 1.0 / total
        for start in range(0, total, chunk):
            yield kernels.sign_block(start, min(start + chunk, total), self.base_dim), w

    def to_json(self):
        return "rademacher"


class LinearRademacherLaw(RademacherLaw):
    """Z = V theta for theta uniform on {-1,+1}^cols(V)."""

    def __init__(self, V: np.ndarray):
        V = np.asarray(V, dtype=np.float64)
        if V.ndim != 2:
            raise ValueError("V must be a matrix")
        self.V = V
        self.dim = V.shape[0]
        self.base_dim = V.shape[1]

    def matrix(self) -> np.ndarray:
        return self.V

    def sample(self, n: int, seed: int, tag_offset: int = 0) -> np.ndarray:
        theta = crng.rademacher_matrix(seed, crng.TAG_Z + tag_offset, n, self.base_dim)
        return theta @ self.V.T

    def iter_support(self, chunk: int = SUPPORT_CHUNK) -> Iterator[tuple[np.ndarray, float]]:
        for theta, w in super().iter_support(chunk):
            yield theta @ self.V.T, w

    def to_json(self):
        return {"matrix_V": self.V.tolist()}


class CustomLaw:
    """Seeded sampler of parameter vectors in [-1, 1]^dim.

    Supports sampling-only functionals; the decoupled fluctuations need the
    Rademacher structure and reject this law.
    """

    def __init__(self, sampler: Callable[[int, int], np.ndarray], dim: int):
        self.sampler = sampler
        self.dim = int(dim)
        self.base_dim = None

    def exhaustive(self) -> bool:
        return False

    def matrix(self):
        raise TypeError("custom parameter law has no Rademacher structure")

    def sample(self, n: int, seed: int, tag_offset: int = 0) -> np.ndarray:
        z = np.asarray(self.sampler(n, seed + tag_offset), dtype=np.float64)
        if z.shape != (n, self.dim):
            raise ValueError(f"sampler returned shape {z.shape}, wanted {(n, self.dim)}")
        return z

    def iter_support(self, chunk: int = SUPPORT_CHUNK):
        raise ValueError("custom parameter law has no finite support")

    def to_json(self):
        return "custom"


@dataclass(frozen=True, eq=False)
class PerturbedFamily:
    """Family {p_z} around a full-support nominal q with pairwise +-scale z."""

    q: Distribution
    dim: int
    scale: float
    eps: float
    zeta: object
    label: str = ""

    def __post_init__(self):
        if self.q.k % 2 != 0:
            raise ValueError("nominal alphabet size must be even")
        if self.q.k != 2 * self.dim:
            raise ValueError("dim must be k/2")
        if np.min(self.q.probs) <= 0.0:
            raise ValueError("nominal must have full support")
        if self.zeta.dim != self.dim:
            raise ValueError("parameter law dimension must match k/2")

    @property
    def k(self) -> int:
        return self.q.k

    def delta_of(self, z: np.ndarray) -> np.ndarray:
        """Normalized perturbation vector for one parameter z."""
        return self.delta_matrix(np.asarray(z, dtype=np.float64)[None, :])[0]

    def delta_matrix(self, Z: np.ndarray) -> np.ndarray:
        """Rows of normalized perturbations for a batch of parameters."""
        Z = np.asarray(Z, dtype=np.float64)
        out = np.empty((Z.shape[0], self.k))
        out[:, 0::2] = self.scale * Z
        out[:, 1::2] = -self.scale * Z
        return out

    def member(self, z: np.ndarray, validate: bool = True) -> Distribution:
        probs = self.member_matrix(np.asarray(z, dtype=np.float64)[None, :],
                                   validate=validate)[0]
        return Distribution(probs)

    def member_matrix(self, Z: np.ndarray, validate: bool = True) -> np.ndarray:
        probs = self.q.probs[None, :] * (1.0 + self.delta_matrix(Z))
        if validate and np.min(probs) < -MEMBER_ATOL:
            bad = int(np.sum(probs.min(axis=1) < -MEMBER_ATOL))
            raise InvalidMemberError(
                f"{bad} of {Z.shape[0]} members have negative entries "
                f"(scale*|z| exceeds 1)")
        return probs

    def member_valid_mask(self, Z: np.ndarray) -> np.ndarray:
        return np.max(np.abs(np.asarray(Z, dtype=np.float64)), axis=1) * self.scale \
            <= 1.0 + MEMBER_ATOL

    def tv_to_nominal(self, Z: np.ndarray) -> np.ndarray:
        """d_TV(p_z, q) as half the l1 distance; equals (scale/k)*||z||_1 around
        uniform and stays meaningful for formally invalid members."""
        return np.abs(self.delta_matrix(Z) * self.q.probs[None, :]).sum(axis=1) / 2.0

    def support_size(self) -> int | None:
        if hasattr(self.zeta, "exhaustive") and self.zeta.exhaustive():
            return 1 << self.zeta.base_dim
        return None

    def to_json(self) -> dict:
        return {"q": self.q.probs.tolist(), "scale": self.scale,
                "eps": self.eps, "zeta": self.zeta.to_json()}

    @staticmethod
    def from_json(obj: dict) -> "PerturbedFamily":
        q = Distribution(obj["q"])
        scale = float(obj["scale"])
        zspec = obj["zeta"]
        if zspec == "rademacher":
            zeta = RademacherLaw(q.k // 2)
        elif isinstance(zspec, dict) and "matrix_V" in zspec:
            zeta = LinearRademacherLaw(np.asarray(zspec["matrix_V"]))
        else:
            raise ValueError(f"unsupported zeta spec {zspec!r}")
        eps = float(obj.get("eps", scale / 2.0))
        return PerturbedFamily(q, q.k // 2, scale, eps, zeta)


def paninski_family(k: int, eps: float) -> PerturbedFamily:
    """Pair-flip family around uniform: p_z(2i) = (1+2*eps*z_i)/k,
    p_z(2i+1) = (1-2*eps*z_i)/k for z uniform on {-1,+1}^(k/2)."""
    if k % 2 != 0:
        raise ValueError("k must be even")
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    return PerturbedFamily(Distribution.uniform(k), k // 2, 2.0 * eps, eps,
                           RademacherLaw(k // 2), label=f"paninski(k={k},eps={eps})")


def general_family(q: Distribution, c: float, eps: float, zeta) -> PerturbedFamily:
    """Scaled family around uniform with per-coordinate multiplier c*eps and an
    arbitrary parameter law for z in [-1, 1]^(k/2).

    With c=2 and Rademacher zeta this reproduces paninski_family exactly.
    Members with scale*|z_i| > 1 are formally invalid; construction succeeds
    and validity is reported where members are materialized.
    """
    if np.max(np.abs(q.probs - 1.0 / q.k)) > 1e-12:
        raise ValueError("general family is constructed around the uniform nominal")
    if c <= 0:
        raise ValueError("c must be positive")
    if not 0.0 < eps < 1.0 / c:
        raise ValueError(f"eps must lie in (0, 1/c) = (0, {1.0 / c})")
    return PerturbedFamily(q, q.k // 2, c * eps, eps, zeta,
                           label=f"general(k={q.k},c={c},eps={eps})")


def normalized_perturbation(p: Distribution, q: Distribution) -> PerturbationVector:
    """delta(x) = (p(x) - q(x))/q(x); its q-weighted squared norm is the
    chi-square distance."""
    if p.k != q.k:
        raise ValueError("dimension mismatch")
    if np.min(q.probs) <= 0.0:
        raise ValueError("q must have full support")
    return PerturbationVector((p.probs - q.probs) / q.probs)


def induced_perturbation(W: Channel, p: Distribution, q: Distribution) -> PerturbationVector:
    """Output-side perturbation delta^W(y) = (W(p)(y) - W(q)(y)) / W(q)(y).

    Outputs unreachable under q (zero denominator) get delta^W(y) = 0 and
    carry zero weight in every inner product.
    """
    if W.k != p.k or W.k != q.k:
        raise ValueError("dimension mismatch")
    wp = W.W @ p.probs
    wq = W.W @ q.probs
    out = np.zeros(W.m)
    mask = wq > 0.0
    out[mask] = (wp[mask] - wq[mask]) / wq[mask]
    return PerturbationVector(out)


def induced_delta_matrix(W: Channel, q: Distribution, delta_mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batch form: rows delta_z^W for rows delta_z of ``delta_mat``.

    Returns (matrix (S, m), output weights W(q)).
    """
    wq = W.W @ q.probs
    numer = delta_mat @ (W.W * q.probs[None, :]).T
    out = np.zeros_like(numer)
    mask = wq > 0.0
    out[:, mask] = numer[:, mask] / wq[None, mask]
    return out, wq


@dataclass(frozen=True)
class AlmostPerturbationReport:
    alpha_hat: float
    lower_99: float
    passed: bool
    method: str
    trials: int
    threshold: float = 0.1


def check_almost_perturbation(f: PerturbedFamily, eps: float, trials: int = 10_000,
                              seed: int = 0, method: str = "auto",
                              threshold: float = 0.1) -> AlmostPerturbationReport:
    """Estimate alpha = P(d_TV(p_Z, q) >= eps) and certify alpha >= threshold.

    Exhaustive laws are evaluated exactly (the lower bound equals alpha);
    sampled laws get a one-sided 99% Clopper-Pearson lower bound.
    """
    if method not in ("auto", "exact", "mc"):
        raise ValueError(f"unknown method {method!r}")
    exact_ok = f.support_size() is not None
    use_exact = (method == "exact") or (method == "auto" and exact_ok)
    if method == "exact" and not exact_ok:
        raise ValueError("exact evaluation needs an exhaustive parameter law")

    if use_exact:
        alpha = 0.0
        for Z, w in f.zeta.iter_support():
            alpha += w * float(np.sum(f.tv_to_nominal(Z) >= eps - 1e-12))
        return AlmostPerturbationReport(alpha, alpha, alpha >= threshold,
                                        "exact", f.support_size(), threshold)

    if trials < 1000:
        raise ValueError("need at least 1000 Monte Carlo trials")
    Z = f.zeta.sample(trials, seed)
    hits = int(np.sum(f.tv_to_nominal(Z) >= eps - 1e-12))
    alpha_hat = hits / trials
    if hits == 0:
        lower = 0.0
    else:
        lower = float(stats.beta.ppf(0.01, hits, trials - hits + 1))
    return AlmostPerturbationReport(alpha_hat, lower, lower >= threshold,
                                    "monte_carlo", trials, threshold)
