"""Fluctuation functionals of perturbed families, exact mixture oracles, and
the Rademacher-chaos MGF bound.

Four functionals are provided: the plain and channel-induced chi-square
fluctuations (average chi-square distance of members to the nominal) and
their decoupled counterparts log E exp(n <delta_Z, delta_Z'>), which control
the distance of the n-fold mixture to the nominal product.  All expectations
over a Rademacher copy collapse analytically to products of cosh; the
remaining expectation is exhaustive up to base dimension 20 and Monte Carlo
with a reported standard error beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ._backend import kernels
from .contraction import HMatrix, h_bar
from .perturbations import (EXHAUSTIVE_LIMIT, CustomLaw, PerturbedFamily,
                            RademacherLaw, induced_delta_matrix)
from .prob import CapExceededError, Channel

INGSTER_SUPPORT_CAP = 2048
BRUTE_FORCE_STATE_CAP = 10 ** 7
BRUTE_FORCE_WORK_CAP = 10 ** 8
DEFAULT_MC_TRIALS = 20_000


@dataclass(frozen=True)
class FluctuationReport:
    kind: str
    value: float
    method: str
    n: int
    mc_stderr: float | None = None
    family_id: str = ""
    channel_ids: tuple = ()


@dataclass(frozen=True)
class MixtureStats:
    chi2: float
    tv: float
    states: int


def _channel_ids(channels) -> tuple:
    out = []
    for i, ch in enumerate(channels or ()):
        out.append("raw" if ch is None else (ch.name or f"ch{i}"))
    return tuple(out)


def _require_rademacher_structure(f: PerturbedFamily, what: str) -> np.ndarray:
    if isinstance(f.zeta, CustomLaw):
        raise TypeError(f"{what} needs a Rademacher-structured parameter law; "
                        "got a custom sampler")
    return f.zeta.matrix()


def _member_chi2_rows(f: PerturbedFamily, Z: np.ndarray) -> np.ndarray:
    probs = f.member_matrix(Z, validate=True)
    diff = probs - f.q.probs[None, :]
    return (diff * diff / f.q.probs[None, :]).sum(axis=1)


def chi2_fluctuation(f: PerturbedFamily, trials: int = DEFAULT_MC_TRIALS,
                     seed: int = 0, method: str = "auto") -> FluctuationReport:
    """E_Z[chi2(p_Z, q)].

    For a plain Rademacher law every member sits at chi-square distance
    scale^2 exactly, so the closed form needs no enumeration.
    """
    if method == "auto":
        if type(f.zeta) is RademacherLaw:
            method = "closed_form"
        elif f.support_size() is not None:
            method = "exhaustive"
        else:
            method = "mc"
    if method == "closed_form":
        return FluctuationReport("chi2", f.scale ** 2, "closed_form", 1,
                                 family_id=f.label)
    if method == "exhaustive":
        total, val = 0.0, 0.0
        for Z, w in f.zeta.iter_support():
            val += w * _member_chi2_rows(f, Z).sum()
            total += w * Z.shape[0]
        return FluctuationReport("chi2", val / total, "exhaustive", 1,
                                 family_id=f.label)
    Z = f.zeta.sample(trials, seed)
    rows = _member_chi2_rows(f, Z)
    return FluctuationReport("chi2", float(rows.mean()), "monte_carlo", 1,
                             mc_stderr=float(rows.std(ddof=1) / math.sqrt(trials)),
                             family_id=f.label)


def induced_chi2_fluctuation(W: Channel, f: PerturbedFamily,
                             trials: int = DEFAULT_MC_TRIALS, seed: int = 0,
                             method: str = "auto") -> FluctuationReport:
    """E_Z[chi2(W(p_Z), W(q))], evaluated through the induced perturbations.

    Computed by direct summation over the parameter law (never through the
    informativeness-matrix identity, which the tests check against this).
    """
    if W.k != f.k:
        raise ValueError("channel and family alphabet sizes differ")
    if method == "auto":
        method = "exhaustive" if f.support_size() is not None else "mc"

    def rows_for(Z):
        deltas, wq = induced_delta_matrix(W, f.q, f.delta_matrix(Z))
        return (deltas * deltas * wq[None, :]).sum(axis=1)

    if method == "exhaustive":
        if f.support_size() is None:
            raise ValueError("exhaustive evaluation needs an exhaustive law")
        total, val = 0.0, 0.0
        for Z, w in f.zeta.iter_support():
            val += w * rows_for(Z).sum()
            total += w * Z.shape[0]
        return FluctuationReport("induced_chi2", val / total, "exhaustive", 1,
                                 family_id=f.label, channel_ids=_channel_ids([W]))
    Z = f.zeta.sample(trials, seed)
    rows = rows_for(Z)
    return FluctuationReport("induced_chi2", float(rows.mean()), "monte_carlo", 1,
                             mc_stderr=float(rows.std(ddof=1) / math.sqrt(trials)),
                             family_id=f.label, channel_ids=_channel_ids([W]))


def _decoupled_log_mgf(a_total: np.ndarray, base_dim: int, trials: int,
                       seed: int, force_mc: bool = False
                       ) -> tuple[float, str, float | None]:
    """log E_theta,theta'[exp(theta^T A theta')] for Rademacher theta, theta'.

    The theta' expectation is always collapsed to prod_j cosh((A theta)_j).
    """
    if base_dim <= EXHAUSTIVE_LIMIT and not force_mc:
        return float(kernels.cosh_chaos_logmeanexp(a_total)), "exhaustive", None
    from . import rng as crng
    signs = crng.rademacher_matrix(seed, crng.TAG_Z, trials, base_dim)
    val, stderr = kernels.cosh_chaos_logmeanexp_mc(a_total, signs)
    return val, "monte_carlo", stderr


def decoupled_fluctuation(f: PerturbedFamily, n: int,
                          trials: int = DEFAULT_MC_TRIALS, seed: int = 0,
                          method: str = "auto") -> FluctuationReport:
    """log E_{ZZ'}[exp(n <delta_Z, delta_Z'>)] with the correlation inner
    product taken under the nominal q.

    Around uniform the inner product is (2 scale^2 / k) z . z', so a plain
    Rademacher law has the closed form (k/2) log cosh(2 n scale^2 / k).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    M = _require_rademacher_structure(f, "decoupled fluctuation")
    coeff = 2.0 * n * f.scale ** 2 / f.k
    if method == "auto":
        method = "closed_form" if type(f.zeta) is RademacherLaw else "exhaustive"
    if method == "closed_form":
        if type(f.zeta) is not RademacherLaw:
            raise ValueError("closed form requires the plain Rademacher law")
        value = f.dim * _log_cosh_scalar(coeff)
        return FluctuationReport("decoupled", value, "closed_form", n,
                                 family_id=f.label)
    a_total = coeff * (M.T @ M)
    if method == "exhaustive" and f.zeta.base_dim > EXHAUSTIVE_LIMIT:
        raise CapExceededError(f"2^{f.zeta.base_dim} parameter vectors exceed "
                               "the exhaustive limit")
    value, how, stderr = _decoupled_log_mgf(a_total, f.zeta.base_dim, trials,
                                            seed, force_mc=(method == "mc"))
    return FluctuationReport("decoupled", value, how, n, mc_stderr=stderr,
                             family_id=f.label)


def induced_decoupled_fluctuation(channels: list[Channel], f: PerturbedFamily,
                                  trials: int = DEFAULT_MC_TRIALS, seed: int = 0
                                  ) -> FluctuationReport:
    """n-fold decoupled fluctuation of the channel-induced family.

    Evaluated through sum_j <delta_Z^{W_j}, delta_{Z'}^{W_j}> =
    (scale^2/k) Z^T (n Hbar) Z' with Hbar the averaged informativeness matrix.
    """
    if not channels:
        raise ValueError("need at least one channel")
    if any(ch.k != f.k for ch in channels):
        raise ValueError("channel and family alphabet sizes differ")
    hbar = h_bar(channels)
    rep = decoupled_from_hbar(hbar, f, len(channels), trials=trials, seed=seed)
    return FluctuationReport("induced_decoupled", rep.value, rep.method,
                             len(channels), mc_stderr=rep.mc_stderr,
                             family_id=f.label, channel_ids=_channel_ids(channels))


def decoupled_from_hbar(hbar: HMatrix, f: PerturbedFamily, n: int,
                        trials: int = DEFAULT_MC_TRIALS, seed: int = 0
                        ) -> FluctuationReport:
    """Same functional with a precomputed averaged matrix."""
    M = _require_rademacher_structure(f, "induced decoupled fluctuation")
    lam = n * f.scale ** 2 / f.k
    a_total = lam * (M.T @ hbar.entries @ M)
    value, how, stderr = _decoupled_log_mgf(a_total, f.zeta.base_dim, trials, seed)
    return FluctuationReport("induced_decoupled", value, how, n,
                             mc_stderr=stderr, family_id=f.label)


def _log_cosh_scalar(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def _support_matrix(f: PerturbedFamily, cap: int) -> tuple[np.ndarray, np.ndarray]:
    size = f.support_size()
    if size is None:
        raise ValueError("operation needs an exhaustive parameter law")
    if size > cap:
        raise CapExceededError(f"parameter support of {size} exceeds cap {cap}")
    blocks = [Z for Z, _ in f.zeta.iter_support()]
    Z = np.concatenate(blocks, axis=0)
    weights = np.full(Z.shape[0], 1.0 / Z.shape[0])
    return Z, weights


def _pair_gram(channel: Channel | None, f: PerturbedFamily, Z: np.ndarray) -> np.ndarray:
    """Gram matrix G[a, b] = <delta_{z_a}^{W}, delta_{z_b}^{W}> under the
    output law of the nominal (the nominal itself when channel is None)."""
    deltas = f.delta_matrix(Z)
    if channel is None:
        weighted = deltas * f.q.probs[None, :]
        return weighted @ deltas.T
    out, wq = induced_delta_matrix(channel, f.q, deltas)
    return (out * wq[None, :]) @ out.T


def ingster_chi2(channels: list[Channel | None], f: PerturbedFamily,
                 support_cap: int = INGSTER_SUPPORT_CAP) -> float:
    """Exact chi-square distance of the mixture of channel-output products to
    the nominal product: E_{ZZ'}[prod_j (1 + G_j(Z, Z'))] - 1.

    Entries of ``channels`` may be None for players observing raw samples.
    """
    if not channels:
        raise ValueError("need at least one player")
    for ch in channels:
        if ch is not None and ch.k != f.k:
            raise ValueError("channel and family alphabet sizes differ")
    Z, weights = _support_matrix(f, support_cap)
    prod = None
    cache: dict[int, np.ndarray] = {}
    for ch in channels:
        key = id(ch)
        if key not in cache:
            cache[key] = _pair_gram(ch, f, Z)
        G = cache[key]
        prod = (1.0 + G) if prod is None else prod * (1.0 + G)
    return float(weights @ prod @ weights - 1.0)


def brute_force_mixture_stats(channels: list[Channel] | None, f: PerturbedFamily,
                              n: int, state_cap: int = BRUTE_FORCE_STATE_CAP
                              ) -> MixtureStats:
    """Materialize the exact n-fold mixture law and compare it to the nominal
    product; the independent oracle for the mixture identities.

    With channels=None players observe raw samples.  Requires an exhaustive
    parameter law and a product space within the cap.
    """
    if channels is not None and len(channels) != n:
        raise ValueError(f"need {n} channels, got {len(channels)}")
    if channels is not None and any(ch is None for ch in channels):
        raise ValueError("use channels=None for raw observation, not None entries")
    mats = [None] * n if channels is None else [ch.W for ch in channels]
    sizes = [f.k if m is None else m.shape[0] for m in mats]
    states = 1
    for s in sizes:
        states *= s
        if states > state_cap:
            raise CapExceededError(f"product space needs {states}+ states")
    size = f.support_size()
    if size is None:
        raise ValueError("brute force needs an exhaustive parameter law")
    if size * states > BRUTE_FORCE_WORK_CAP:
        raise CapExceededError(f"{size} members x {states} states exceeds work cap")

    def product_law(probs: np.ndarray) -> np.ndarray:
        outs = [probs if m is None else m @ probs for m in mats]
        return reduce(lambda a, b: np.multiply.outer(a, b), outs).reshape(-1)

    nominal = product_law(f.q.probs)
    mixture = np.zeros(states)
    for Z, w in f.zeta.iter_support():
        members = f.member_matrix(Z, validate=True)
        for row in members:
            mixture += w * product_law(row)

    tv = 0.5 * float(np.abs(mixture - nominal).sum())
    mask = nominal > 0.0
    if np.any(mixture[~mask] > 1e-15):
        chi2 = math.inf
    else:
        diff = mixture[mask] - nominal[mask]
        chi2 = float(np.sum(diff * diff / nominal[mask]))
    return MixtureStats(chi2=chi2, tv=tv, states=states)


@dataclass(frozen=True)
class ChaosMgfReport:
    exact_log_mgf: float
    bound: float
    valid: bool
    lam: float


def chaos_mgf(H: HMatrix, lam: float) -> ChaosMgfReport:
    """Exact log E[exp(lam theta^T H theta')] for Rademacher theta, theta'
    against the closed bound (lam^2/2) ||H||_F^2 / (1 - 4 lam^2 rho(H)^2),
    valid for lam < 1/(2 rho(H))."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if H.dim > EXHAUSTIVE_LIMIT:
        raise CapExceededError(f"exact path caps the dimension at {EXHAUSTIVE_LIMIT}")
    exact = float(kernels.cosh_chaos_logmeanexp(lam * H.entries))
    rho = H.spectral_radius
    valid = (rho == 0.0) or (lam < 1.0 / (2.0 * rho))
    if valid:
        denom = 1.0 - 4.0 * lam * lam * rho * rho
        bound = 0.5 * lam * lam * H.frobenius_sq / denom if denom > 0 else math.inf
    else:
        bound = math.inf
    return ChaosMgfReport(exact_log_mgf=exact, bound=bound, valid=valid, lam=lam)
