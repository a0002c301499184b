"""Channel informativeness matrix for consecutive input pairs.

For a channel W on an even alphabet, entry (i1, i2) of the matrix is

    sum_y (W(y|2i1) - W(y|2i1+1)) (W(y|2i2) - W(y|2i2+1)) / sum_x W(y|x)

(0-indexed pairs), with 0/0 terms defined as 0.  The matrix is positive
semidefinite: it is a sum of outer products b_y b_y^T with
b_y(i) = (W(y|2i) - W(y|2i+1)) / sqrt(sum_x W(y|x)).  Its nuclear norm drives
the learning and private-coin testing bounds, the Frobenius norm the
public-coin testing bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ConstraintSpec, satisfies
from .prob import Channel

EIG_CLAMP = 1e-12
PSD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HMatrix:
    """Symmetric PSD matrix with cached spectrum and norms."""

    dim: int
    entries: np.ndarray
    eigenvalues: np.ndarray      # ascending
    nuclear: float
    frobenius: float
    spectral_radius: float
    rank: int

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("matrix must be square")
        sym = 0.5 * (entries + entries.T)
        if np.max(np.abs(entries - sym)) > 1e-10:
            raise ValueError("matrix is not symmetric within tolerance")
        eigvals = np.linalg.eigvalsh(sym)
        if eigvals[0] < -PSD_TOL:
            raise ValueError(f"matrix is not PSD: min eigenvalue {eigvals[0]}")
        clamped = np.where(np.abs(eigvals) < EIG_CLAMP, 0.0, eigvals)
        object.__setattr__(self, "dim", sym.shape[0])
        object.__setattr__(self, "entries", sym)
        object.__setattr__(self, "eigenvalues", eigvals)
        object.__setattr__(self, "nuclear", float(np.abs(clamped).sum()))
        object.__setattr__(self, "frobenius", float(np.linalg.norm(sym)))
        object.__setattr__(self, "spectral_radius", float(np.max(np.abs(eigvals))))
        object.__setattr__(self, "rank", int(np.sum(clamped > 0.0)))
        self.entries.flags.writeable = False
        self.eigenvalues.flags.writeable = False

    @property
    def frobenius_sq(self) -> float:
        return self.frobenius ** 2

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": self.entries.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "nuclear": self.nuclear,
            "frobenius_sq": self.frobenius_sq,
            "spectral_radius": self.spectral_radius,
            "rank": self.rank,
        }


def pair_difference_profile(W: Channel) -> tuple[np.ndarray, np.ndarray]:
    """Per-output pair differences and output column sums.

    Returns (D, colsum) with D[y, i] = W(y|2i) - W(y|2i+1) and
    colsum[y] = sum_x W(y|x).
    """
    if W.k % 2 != 0:
        raise ValueError("channel input alphabet must be even")
    D = W.W[:, 0::2] - W.W[:, 1::2]
    colsum = W.W.sum(axis=1)
    return D, colsum


def h_matrix(W: Channel) -> HMatrix:
    """Informativeness matrix of a single channel, spectrum cached."""
    D, colsum = pair_difference_profile(W)
    inv = np.zeros_like(colsum)
    mask = colsum > 0.0
    inv[mask] = 1.0 / colsum[mask]
    entries = np.einsum("yi,yj,y->ij", D, D, inv)
    return HMatrix(entries)


def h_bar(channels: list[Channel]) -> HMatrix:
    """Entrywise average of h_matrix over a channel sequence."""
    if not channels:
        raise ValueError("need at least one channel")
    ks = {ch.k for ch in channels}
    if len(ks) != 1:
        raise ValueError(f"mixed input alphabets: {sorted(ks)}")
    acc = None
    for ch in channels:
        H = h_matrix(ch).entries
        acc = H.copy() if acc is None else acc + H
    return HMatrix(acc / len(channels))


@dataclass(frozen=True)
class NormBoundReport:
    nuclear: float
    frobenius_sq: float
    bound_nuclear: float
    bound_frobenius_sq: float
    passed: bool
    constraint: str


def norm_bound_values(spec: ConstraintSpec) -> tuple[float, float]:
    """(nuclear bound, squared-Frobenius bound) for a constraint family."""
    if spec.kind == "comm":
        return float(2 ** spec.bits), float(2 ** (spec.bits + 1))
    nuc = (math.exp(spec.rho) - 1.0) ** 2 / 2.0
    return nuc, nuc ** 2


def verify_norm_bounds(W: Channel, spec: ConstraintSpec,
                       rtol: float = 1e-9) -> NormBoundReport:
    """Check the norm ceilings of the constraint family on a member channel."""
    if not satisfies(W, spec):
        raise ValueError(f"channel does not satisfy {spec.describe()}")
    H = h_matrix(W)
    bn, bf = norm_bound_values(spec)
    passed = (H.nuclear <= bn * (1.0 + rtol) + rtol) and \
             (H.frobenius_sq <= bf * (1.0 + rtol) + rtol)
    return NormBoundReport(H.nuclear, H.frobenius_sq, bn, bf, passed, spec.describe())
