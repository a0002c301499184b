"""Sample-complexity lower-bound calculators.

Every bound is emitted at order level with constant 1; unspecified universal
constants stay in the formula string and are never folded into values.  The
three tasks and their rates in terms of the norm suprema over the allowed
channel family:

    learning         (k/eps^2) * (k / sup ||H||_*)
    testing_public   (sqrt(k)/eps^2) * (sqrt(k) / sup ||H||_F)
    testing_private  (sqrt(k)/eps^2) * (k / sup ||H||_*)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channels import ConstraintSpec
from .fluctuation import chi2_fluctuation, induced_chi2_fluctuation
from .perturbations import PerturbedFamily
from .prob import Channel

TASKS = ("learning", "testing_public", "testing_private")


@dataclass(frozen=True)
class BoundReport:
    task: str
    constraint: str
    k: int
    eps: float
    value: float
    formula: str
    caveats: tuple = field(default_factory=tuple)

    def to_row(self) -> list:
        return [self.task, self.constraint, self.k, self.eps, self.value,
                self.formula]

    def to_json(self) -> dict:
        return {"task": self.task, "constraint": self.constraint, "k": self.k,
                "eps": self.eps, "value": self.value, "formula": self.formula,
                "caveats": list(self.caveats)}


def _validate(k: int, eps: float) -> None:
    if k < 2 or k % 2 != 0:
        raise ValueError("k must be even and at least 2")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")


def lb_general(task: str, k: int, eps: float, sup_nuclear: float | None = None,
               sup_frobenius: float | None = None, constraint: str = "general",
               caveats: tuple = ()) -> BoundReport:
    """Order-level lower bound for a task given norm suprema over the family."""
    _validate(k, eps)
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    if task == "learning":
        if not sup_nuclear or sup_nuclear <= 0:
            raise ValueError("learning bound needs sup_nuclear > 0")
        value = (k / eps ** 2) * (k / sup_nuclear)
        formula = "(k/eps^2) * (k / sup nuclear); order-level, constant 1"
    elif task == "testing_public":
        if not sup_frobenius or sup_frobenius <= 0:
            raise ValueError("public testing bound needs sup_frobenius > 0")
        value = (math.sqrt(k) / eps ** 2) * (math.sqrt(k) / sup_frobenius)
        formula = "(sqrt(k)/eps^2) * (sqrt(k) / sup frobenius); order-level, constant 1"
    else:
        if not sup_nuclear or sup_nuclear <= 0:
            raise ValueError("private testing bound needs sup_nuclear > 0")
        value = (math.sqrt(k) / eps ** 2) * (k / sup_nuclear)
        formula = "(sqrt(k)/eps^2) * (k / sup nuclear); order-level, constant 1"
    return BoundReport(task, constraint, k, eps, value, formula, caveats)


def comm_suprema(bits: int) -> tuple[float, float]:
    """(nuclear, Frobenius) suprema used for the ell-bit table cells.

    The Frobenius supremum is 2^(ell/2), matching the table rates; the proven
    ceiling sqrt(2^(ell+1)) is a factor sqrt(2) larger and order-equivalent.
    """
    return float(2 ** bits), float(2.0 ** (bits / 2.0))


def ldp_suprema(rho: float) -> tuple[float, float]:
    """(nuclear, Frobenius) suprema for rho-LDP channels: both (e^rho - 1)^2 / 2."""
    nuc = (math.exp(rho) - 1.0) ** 2 / 2.0
    return nuc, nuc


def lb_table(k: int, eps: float, bits: int | None = None,
             rho: float | None = None) -> list[BoundReport]:
    """All table cells for the requested constraint rows (three per row)."""
    _validate(k, eps)
    if bits is None and rho is None:
        raise ValueError("need bits and/or rho")
    out: list[BoundReport] = []
    if bits is not None:
        spec = ConstraintSpec("comm", k, bits=bits)
        nuc, fro = comm_suprema(spec.bits)
        label = spec.describe()
        out.append(lb_general("learning", k, eps, sup_nuclear=nuc, constraint=label))
        out.append(lb_general("testing_public", k, eps, sup_frobenius=fro,
                              constraint=label))
        out.append(lb_general("testing_private", k, eps, sup_nuclear=nuc,
                              constraint=label))
    if rho is not None:
        spec = ConstraintSpec("ldp", k, rho=rho)
        nuc, fro = ldp_suprema(spec.rho)
        label = spec.describe()
        caveats = ("rho > 1: quadratic norm-bound regime assumed rho in (0, 1]",) \
            if spec.rho_flagged else ()
        out.append(lb_general("learning", k, eps, sup_nuclear=nuc,
                              constraint=label, caveats=caveats))
        out.append(lb_general("testing_public", k, eps, sup_frobenius=fro,
                              constraint=label, caveats=caveats))
        out.append(lb_general("testing_private", k, eps, sup_nuclear=nuc,
                              constraint=label, caveats=caveats))
    return out


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def hamming_ball_log2(m: int, t: int) -> float:
    """log2 of the number of binary strings of length m within Hamming
    distance t, exact via big-integer accumulation."""
    if t < 0 or t > m:
        raise ValueError("need 0 <= t <= m")
    total = sum(math.comb(m, j) for j in range(t + 1))
    return math.log2(total)


def fano_learning_bound(f: PerturbedFamily, channels: list[Channel] | None,
                        c_eps: float) -> float:
    """Multiple-hypothesis bound (log2 |P| - log2 C_eps) / fluctuation.

    ``c_eps`` counts the family members within TV eps/3 of any fixed member
    (the packing slack); the fluctuation is the plain chi-square fluctuation
    without channels and the worst induced one over the supplied channels.
    Returns +inf when the fluctuation is 0 (nothing is learnable through the
    channels).
    """
    size = f.support_size()
    if size is None:
        raise ValueError("need a finite (exhaustive) family")
    if c_eps < 1.0:
        raise ValueError("c_eps must be at least 1")
    log_members = math.log2(size) - math.log2(c_eps)
    if log_members <= 0.0:
        raise ValueError("packing slack c_eps swallows the whole family")
    if channels:
        fluct = max(induced_chi2_fluctuation(W, f).value for W in channels)
    else:
        fluct = chi2_fluctuation(f).value
    if fluct <= 0.0:
        return math.inf
    return log_members / fluct
