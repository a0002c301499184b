"""SMP protocol simulator and exact small-instance oracles.

A protocol is n players, each holding one sample, each pushing it through a
channel drawn uniformly from a candidate set: one shared draw selects every
player's channel in public-coin mode, independent per-player draws in
private-coin mode.  Channel-output randomness is always private.  Trials are
driven by the counter RNG, so reports are bitwise reproducible for a fixed
seed and independent of scheduling.

The empirical two-arm total variation uses the plug-in estimator on the
joint message law (shared randomness included in public mode).  Its reported
standard error adds the folded-normal bias of the plug-in estimate to the
delta-method term, so +-3 stderr is an honest comparison band against the
exact oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np
from scipy.special import ndtr

from . import rng as crng
from ._backend import kernels
from .adversary import adversarial_perturbation
from .channels import all_pair_splitting_channels
from .fluctuation import brute_force_mixture_stats
from .perturbations import InvalidMemberError, PerturbedFamily, paninski_family
from .prob import CapExceededError, Channel, Distribution, mix_channels

EXACT_STATE_CAP = 1_000_000
EXACT_SUPPORT_CAP = 1 << 16
MAX_RESAMPLE_ROUNDS = 200
SCHEMA = "trial-report/1"


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    """n players, coin mode, candidate channel set, and the master seed."""

    n: int
    coin_mode: str
    candidates: tuple
    seed: int

    def __init__(self, n: int, coin_mode: str, candidates, seed: int):
        if n < 1:
            raise ValueError("need at least one player")
        if coin_mode not in ("private", "public"):
            raise ValueError("coin_mode must be 'private' or 'public'")
        candidates = tuple(candidates)
        if not candidates:
            raise ValueError("need at least one candidate channel")
        if len({ch.k for ch in candidates}) != 1 or len({ch.m for ch in candidates}) != 1:
            raise ValueError("candidate channels must share input and output alphabets")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "coin_mode", coin_mode)
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "seed", int(seed))

    @property
    def public(self) -> bool:
        return self.coin_mode == "public"

    @property
    def k(self) -> int:
        return self.candidates[0].k

    @property
    def m(self) -> int:
        return self.candidates[0].m


@dataclass(frozen=True, eq=False)
class TrialReport:
    trials: int
    seed: int
    coin_mode: str
    n: int
    n_states: int
    empirical_counts: np.ndarray      # (2, n_states): arm 0 null, arm 1 alt
    empirical_tv: float
    stderr: float
    exact_tv: float | None
    bayes_error: float | None
    resample_rate: float

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "trials": self.trials,
            "seed": self.seed,
            "coin_mode": self.coin_mode,
            "n": self.n,
            "n_states": self.n_states,
            "empirical_counts": self.empirical_counts.tolist(),
            "empirical_tv": self.empirical_tv,
            "stderr": self.stderr,
            "exact_tv": self.exact_tv,
            "bayes_error": self.bayes_error,
            "resample_rate": self.resample_rate,
        }


def _cdf_rows(probs: np.ndarray) -> np.ndarray:
    rows = np.cumsum(probs, axis=-1)
    rows[..., -1] = 1.0
    return rows


def _stacked_column_cdfs(candidates) -> np.ndarray:
    out = np.stack([np.cumsum(ch.W, axis=0) for ch in candidates])
    out[:, -1, :] = 1.0
    return out


def _sample_valid_params(f: PerturbedFamily, trials: int, seed: int
                         ) -> tuple[np.ndarray, float]:
    """Per-trial parameters conditioned on member validity via
    reject-and-resample; row t depends only on (seed, t, round)."""
    Z = f.zeta.sample(trials, seed)
    resampled = 0
    bad = ~f.member_valid_mask(Z)
    for round_ in range(1, MAX_RESAMPLE_ROUNDS + 1):
        if not bad.any():
            break
        resampled += int(bad.sum())
        fresh = f.zeta.sample(trials, seed, tag_offset=round_ * crng.RETRY_STRIDE)
        Z[bad] = fresh[bad]
        bad = ~f.member_valid_mask(Z)
    else:
        raise InvalidMemberError("could not draw valid members after "
                                 f"{MAX_RESAMPLE_ROUNDS} resampling rounds")
    return Z, resampled / trials


def plug_in_tv(counts0: np.ndarray, counts1: np.ndarray, trials: int
               ) -> tuple[float, float]:
    """Plug-in TV between two empirical laws and a bias-aware standard error.

    The error band combines the delta-method variance of the optimal-set
    statistic with the folded-normal variance and mean excess of the
    per-state |difference| terms, so states near the sign boundary (which
    both bias the plug-in upward and add variance the delta method misses)
    are covered.  Calibration: the normalized deviation from the exact TV
    has mean ~0.83 and stays within 3 in simulation.
    """
    p0 = counts0 / trials
    p1 = counts1 / trials
    diff = p1 - p0
    tv = 0.5 * float(np.abs(diff).sum())
    pos = diff > 0
    a1 = float(p1[pos].sum())
    a0 = float(p0[pos].sum())
    var_delta = max((a1 * (1 - a1) + a0 * (1 - a0)) / trials, 0.0)
    sig = np.sqrt((p0 * (1 - p0) + p1 * (1 - p1)) / trials)
    mask = sig > 0
    mu = diff[mask]
    s = sig[mask]
    folded = s * math.sqrt(2.0 / math.pi) * np.exp(-0.5 * (mu / s) ** 2) \
        + mu * (1.0 - 2.0 * ndtr(-mu / s))
    bias = 0.5 * float(np.sum(folded - np.abs(mu)))
    var_folded = 0.25 * float(np.sum((mu ** 2 + s ** 2) - folded ** 2))
    return tv, math.sqrt(var_delta + max(var_folded, 0.0)) + max(bias, 0.0)


def _product_law(out_probs: np.ndarray, n: int) -> np.ndarray:
    return reduce(lambda a, b: np.multiply.outer(a, b), [out_probs] * n).reshape(-1)


def _exact_arm_laws(cfg: ProtocolConfig, null_dist: Distribution,
                    alt: PerturbedFamily, state_cap: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Exact joint laws of (shared draw, messages) per arm, conditioned on
    member validity like the sampler; None when infeasible."""
    n_cand = len(cfg.candidates)
    per = cfg.m ** cfg.n
    states = per * (n_cand if cfg.public else 1)
    size = alt.support_size()
    if states > state_cap or size is None or size > EXACT_SUPPORT_CAP:
        return None

    def mixture_for(channel: Channel) -> np.ndarray:
        mix = np.zeros(per)
        total = 0.0
        for Z, w in alt.zeta.iter_support():
            valid = alt.member_valid_mask(Z)
            members = alt.member_matrix(Z[valid], validate=False)
            total += w * int(valid.sum())
            for row in members:
                mix += w * _product_law(channel.W @ row, cfg.n)
        if total <= 0.0:
            raise InvalidMemberError("no valid members in the family support")
        return mix / total

    if cfg.public:
        null_law = np.concatenate([
            _product_law(ch.W @ null_dist.probs, cfg.n) / n_cand
            for ch in cfg.candidates])
        alt_law = np.concatenate([mixture_for(ch) / n_cand for ch in cfg.candidates])
    else:
        mixed = mix_channels([(ch, 1.0 / n_cand) for ch in cfg.candidates])
        null_law = _product_law(mixed.W @ null_dist.probs, cfg.n)
        alt_law = mixture_for(mixed)
    return null_law, alt_law


def _decode_messages(codes: np.ndarray, n: int, m: int) -> np.ndarray:
    """Invert the mixed-radix message code back to per-player outputs."""
    out = np.empty((codes.size, n), dtype=np.int64)
    rest = codes.copy()
    for i in range(n - 1, -1, -1):
        out[:, i] = rest % m
        rest //= m
    return out


def simulate_smp(cfg: ProtocolConfig, null_dist: Distribution,
                 alt: PerturbedFamily, trials: int,
                 exact: str = "auto", state_cap: int = EXACT_STATE_CAP,
                 summary=None, summary_states: int | None = None
                 ) -> TrialReport:
    """Run both arms of the two-arm decision problem and compare message laws.

    Arm 0 draws samples from ``null_dist``; arm 1 draws a fresh family member
    per trial (parameters resampled until the member is a valid distribution)
    and samples from it.  The empirical law is over the joint (shared draw,
    message vector) in public mode and the message vector alone in private
    mode; the referee records statistics and never learns private draws.

    When the joint message space exceeds ``state_cap`` the plug-in estimate
    is refused unless a summary statistic is supplied: ``summary`` maps a
    (trials, n) matrix of per-player outputs to integer buckets below
    ``summary_states``, and the TV is estimated on the bucket laws (no exact
    oracle in that mode).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if null_dist.k != cfg.k or alt.k != cfg.k:
        raise ValueError("alphabet mismatch between config, null, and family")
    if cfg.n * math.log2(cfg.m) > 62:
        raise CapExceededError("message coding exceeds 62 bits; reduce n or m")
    n_cand = len(cfg.candidates)
    per = cfg.m ** cfg.n
    if summary is None:
        n_states = per * (n_cand if cfg.public else 1)
        if n_states > state_cap:
            raise CapExceededError(
                f"message space of {n_states} states exceeds the plug-in cap "
                f"{state_cap}; supply a summary statistic or reduce n")
    else:
        if not summary_states or summary_states < 1:
            raise ValueError("summary mode needs summary_states >= 1")
        n_states = summary_states * (n_cand if cfg.public else 1)
        if n_states > state_cap:
            raise CapExceededError("summary space still exceeds the plug-in cap")

    cum_w = _stacked_column_cdfs(cfg.candidates)
    null_rows = np.broadcast_to(_cdf_rows(null_dist.probs), (trials, cfg.k)).copy()
    Z, resample_rate = _sample_valid_params(alt, trials, cfg.seed)
    alt_rows = _cdf_rows(alt.member_matrix(Z, validate=False))

    counts = np.zeros((2, n_states))
    for arm, rows in ((0, null_rows), (1, alt_rows)):
        codes, chan = kernels.smp_trials(cfg.seed, arm, cfg.n, cum_w, rows,
                                         cfg.public)
        if summary is not None:
            buckets = np.asarray(summary(_decode_messages(codes, cfg.n, cfg.m)),
                                 dtype=np.int64)
            if buckets.min() < 0 or buckets.max() >= summary_states:
                raise ValueError("summary statistic left the declared range")
            joint = chan * summary_states + buckets if cfg.public else buckets
        else:
            joint = chan * per + codes if cfg.public else codes
        counts[arm] = np.bincount(joint, minlength=n_states)

    tv, stderr = plug_in_tv(counts[0], counts[1], trials)
    exact_tv = bayes = None
    if exact != "off" and summary is None:
        laws = _exact_arm_laws(cfg, null_dist, alt, state_cap)
        if laws is None and exact == "force":
            raise CapExceededError("exact law infeasible for this configuration")
        if laws is not None:
            exact_tv = 0.5 * float(np.abs(laws[1] - laws[0]).sum())
            bayes = 0.5 * (1.0 - exact_tv)
    return TrialReport(trials=trials, seed=cfg.seed, coin_mode=cfg.coin_mode,
                       n=cfg.n, n_states=n_states, empirical_counts=counts,
                       empirical_tv=tv, stderr=stderr, exact_tv=exact_tv,
                       bayes_error=bayes, resample_rate=resample_rate)


@dataclass(frozen=True)
class BayesErrorReport:
    tv: float
    bayes_error: float
    states: int


def exact_bayes_error(channels: list[Channel], f: PerturbedFamily,
                      n: int | None = None) -> BayesErrorReport:
    """Exact TV of the n-fold mixture of channel outputs against the nominal
    product, and the induced Bayes error (1 - tv)/2 for equal priors."""
    if not channels:
        raise ValueError("need at least one channel")
    n = len(channels) if n is None else int(n)
    seq = [channels[i % len(channels)] for i in range(n)]
    stats = brute_force_mixture_stats(seq, f, n)
    return BayesErrorReport(tv=stats.tv, bayes_error=0.5 * (1.0 - stats.tv),
                            states=stats.states)


@dataclass(frozen=True)
class SeparationReport:
    k: int
    n: int
    eps: float
    public_avg_tv: float
    private_best_tv: float
    n_candidates: int
    n_assignments: int


def pair_splitting_separation(k: int = 8, n: int = 2, eps: float = 1.0 / 32.0
                              ) -> SeparationReport:
    """Numeric demonstration of the public/private-coin separation mechanism
    at ell = 1.

    Public side: the pair-flip family keeps its exact mixture TV on average
    over a shared uniformly random pair-splitting channel used by all
    players.  Private side: for every fixed assignment of pair-splitting
    channels, the adversary redirects the family into the channels' blind
    directions; even the best fixed assignment retains at most the reported
    TV.  The private value sits strictly below the public one.
    """
    candidates = all_pair_splitting_channels(k)
    pan = paninski_family(k, eps)
    public_tvs = [brute_force_mixture_stats([W] * n, pan, n).tv for W in candidates]
    public_avg = float(np.mean(public_tvs))

    best = 0.0
    count = 0
    for assignment in product(candidates, repeat=n):
        adv = adversarial_perturbation(list(assignment), eps)
        tv = brute_force_mixture_stats(list(assignment), adv.family, n).tv
        best = max(best, tv)
        count += 1
    return SeparationReport(k=k, n=n, eps=eps, public_avg_tv=public_avg,
                            private_best_tv=best, n_candidates=len(candidates),
                            n_assignments=count)
