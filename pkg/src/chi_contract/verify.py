"""Invariant suite: one callable per check, shared by the CLI ``verify``
subcommand and the acceptance tests.

Each check returns a CheckResult; sizes default to the full acceptance
configuration and scale down under ``quick``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import adversary, bounds, simulate
from .channels import (ConstraintSpec, check_comm, check_ldp,
                       random_comm_channel, random_ldp_channel,
                       standard_channel)
from .contraction import (HMatrix, h_bar, h_matrix, pair_difference_profile,
                          verify_norm_bounds)
from .fluctuation import (brute_force_mixture_stats, chaos_mgf,
                          chi2_fluctuation, decoupled_fluctuation,
                          decoupled_from_hbar, induced_chi2_fluctuation,
                          ingster_chi2)
from .perturbations import paninski_family
from .prob import Channel, Distribution, apply_channel, divergence, mix_channels

CONDITION_THRESHOLD = 1.0 / 9.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(name: str, passed: bool, detail: str, t0: float) -> CheckResult:
    return CheckResult(name, bool(passed), detail, time.time() - t0)


def _random_channel(rng: np.random.Generator, k: int, m: int) -> Channel:
    raw = rng.gamma(1.0, 1.0, size=(m, k))
    return Channel(raw / raw.sum(axis=0, keepdims=True))


def _random_distribution(rng: np.random.Generator, k: int,
                         full_support: bool = True) -> Distribution:
    p = rng.dirichlet(np.full(k, 0.8))
    if full_support:
        p = 0.999 * p + 0.001 / k
    return Distribution(p)


# --- core probability invariants -------------------------------------------

def check_distance_inequalities(pairs: int = 1000, seed: int = 11) -> CheckResult:
    """2 tv^2 <= kl <= chi2 on random full-support pairs, slack 1e-12."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        k = int(rng.integers(2, 12))
        p = _random_distribution(rng, k)
        q = _random_distribution(rng, k)
        tv = divergence(p, q, "tv")
        kl = divergence(p, q, "kl")
        chi2 = divergence(p, q, "chi2")
        worst = max(worst, 2 * tv * tv - kl, kl - chi2)
    return _timed("distance-inequalities", worst <= 1e-12,
                  f"{pairs} pairs, worst slack {worst:.2e}", t0)


def check_data_processing(trials: int = 500, seed: int = 12) -> CheckResult:
    """Divergences never grow through a channel."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(2, 10))
        m = int(rng.integers(2, 10))
        W = _random_channel(rng, k, m)
        p = _random_distribution(rng, k)
        q = _random_distribution(rng, k)
        for kind in ("tv", "kl", "chi2"):
            before = divergence(p, q, kind)
            after = divergence(apply_channel(W, p), apply_channel(W, q), kind)
            worst = max(worst, after - before)
    return _timed("data-processing", worst <= 1e-10,
                  f"{trials} triples, worst growth {worst:.2e}", t0)


def check_mixture_linearity(trials: int = 300, seed: int = 13) -> CheckResult:
    """apply(mix) equals the mix of applies, entrywise 1e-12."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(2, 10))
        m = int(rng.integers(2, 8))
        W1 = _random_channel(rng, k, m)
        W2 = _random_channel(rng, k, m)
        theta = float(rng.uniform())
        p = _random_distribution(rng, k)
        mixed = mix_channels([(W1, theta), (W2, 1.0 - theta)])
        lhs = apply_channel(mixed, p).probs
        rhs = theta * apply_channel(W1, p).probs + (1 - theta) * apply_channel(W2, p).probs
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return _timed("mixture-linearity", worst <= 1e-12,
                  f"{trials} mixes, worst gap {worst:.2e}", t0)


# --- channel family invariants ----------------------------------------------

def check_family_convexity(pairs: int = 1000, seed: int = 14) -> CheckResult:
    """Mixing stays inside the ldp and comm families."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(pairs):
        k = int(rng.integers(2, 9))
        theta = float(rng.uniform())
        if i % 2 == 0:
            rho = float(rng.choice([0.1, 0.5, 1.0]))
            m = int(rng.integers(2, 6))
            W1 = random_ldp_channel(k, rho, rng, m=m)
            W2 = random_ldp_channel(k, rho, rng, m=m)
            mixed = mix_channels([(W1, theta), (W2, 1.0 - theta)])
            ok, _ = check_ldp(mixed, rho)
            bad += not ok
        else:
            bits = int(rng.integers(1, 4))
            W1 = random_comm_channel(k, bits, rng)
            W2 = random_comm_channel(k, bits, rng)
            mixed = mix_channels([(W1, theta), (W2, 1.0 - theta)])
            bad += not check_comm(mixed, bits)
    return _timed("constraint-convexity", bad == 0,
                  f"{pairs} mixed pairs, {bad} escapes", t0)


def check_ldp_difference_inequality(trials: int = 300, seed: int = 15) -> CheckResult:
    """W(y|i1) - W(y|i2) <= (e^rho - 1) W(y|i3), exhaustive over indices."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(2, 10))
        rho = float(rng.choice([0.1, 0.5, 1.0]))
        W = random_ldp_channel(k, rho, rng).W
        spread = W.max(axis=1) - W.min(axis=1)
        floor = (math.exp(rho) - 1.0) * W.min(axis=1)
        worst = max(worst, float(np.max(spread - floor)))
    return _timed("ldp-difference-inequality", worst <= 1e-12,
                  f"{trials} channels, worst excess {worst:.2e}", t0)


# --- contraction invariants --------------------------------------------------

def check_hmatrix_psd(trials: int = 10_000, seed: int = 16) -> CheckResult:
    """Min eigenvalue >= -1e-9 over random channels, mixed k <= 16, m <= 8."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        k = int(rng.choice([2, 4, 6, 8, 10, 12, 14, 16]))
        m = int(rng.integers(2, 9))
        H = h_matrix(_random_channel(rng, k, m))
        worst = min(worst, float(H.eigenvalues[0]))
    return _timed("hmatrix-psd", worst >= -1e-9,
                  f"{trials} channels, min eigenvalue {worst:.2e}", t0)


def check_hmatrix_decomposition(trials: int = 300, seed: int = 17) -> CheckResult:
    """Entrywise match with the rank-one output decomposition, 1e-10."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        k = int(rng.choice([2, 4, 8, 12, 16]))
        m = int(rng.integers(2, 9))
        W = _random_channel(rng, k, m)
        H = h_matrix(W)
        D, colsum = pair_difference_profile(W)
        rebuilt = np.zeros((k // 2, k // 2))
        for y in range(m):
            if colsum[y] > 0:
                b = D[y] / math.sqrt(colsum[y])
                rebuilt += np.outer(b, b)
        worst = max(worst, float(np.max(np.abs(rebuilt - H.entries))))
        worst = max(worst, H.frobenius - H.nuclear,
                    H.nuclear - math.sqrt(max(H.rank, 1)) * H.frobenius)
    return _timed("hmatrix-decomposition", worst <= 1e-10,
                  f"{trials} channels, worst entry gap {worst:.2e}", t0)


# --- acceptance criteria -----------------------------------------------------

def criterion_ingster_lecam(instances: int = 60, seed: int = 18) -> CheckResult:
    """Mixture chi-square identity against brute force (1e-9) and the
    tv^2 <= chi2 <= exp(decoupled) - 1 chain on every instance.

    The sweep walks the full (k, n, channel kind) grid first so every stated
    combination is covered, then fills up with random draws.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    grid = [(k, n, kind) for k in (2, 4) for n in (1, 2, 3)
            for kind in ("raw", "identity", "random")]
    worst_diff = 0.0
    worst_chain = 0.0
    done = 0
    for i in range(max(instances, len(grid))):
        if i < len(grid):
            k, n, kind = grid[i]
        else:
            k = int(rng.choice([2, 4]))
            n = int(rng.integers(1, 4))
            kind = ("raw", "identity", "random")[i % 3]
        fam = paninski_family(k, float(rng.uniform(0.05, 0.45)))
        if kind == "raw":
            chans = None
        elif kind == "identity":
            chans = [standard_channel("identity", k)] * n
        else:
            chans = [_random_channel(rng, k, int(rng.integers(2, 6)))
                     for _ in range(n)]
        stats = brute_force_mixture_stats(chans, fam, n)
        ing_channels = [None] * n if chans is None else chans
        ing = ingster_chi2(ing_channels, fam)
        worst_diff = max(worst_diff, abs(ing - stats.chi2))
        hbar_channels = [standard_channel("identity", k) if ch is None else ch
                         for ch in ing_channels]
        dec = decoupled_from_hbar(h_bar(hbar_channels), fam, n).value
        worst_chain = max(worst_chain,
                          stats.tv ** 2 - stats.chi2,
                          stats.chi2 - math.expm1(dec))
        done += 1
    passed = worst_diff <= 1e-9 and worst_chain <= 1e-9
    return _timed("ingster-lecam",
                  passed,
                  f"{done} instances, worst |ingster-brute| {worst_diff:.2e}, "
                  f"worst chain violation {worst_chain:.2e}", t0)


def criterion_pairwise_identity(n_channels: int = 200, seed: int = 19) -> CheckResult:
    """Induced chi-square fluctuation equals (4 eps^2/k) * nuclear, 1e-10,
    cycling the (k, eps) grid so every stated combination is exercised."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    grid = [(k, eps) for k in (4, 8, 16) for eps in (0.05, 0.1, 0.3)]
    worst = 0.0
    for i in range(n_channels):
        k, eps = grid[i % len(grid)]
        W = _random_channel(rng, k, int(rng.integers(2, 9)))
        fam = paninski_family(k, eps)
        lhs = induced_chi2_fluctuation(W, fam).value
        rhs = (4.0 * eps ** 2 / k) * h_matrix(W).nuclear
        worst = max(worst, abs(lhs - rhs))
    return _timed("pairwise-identity", worst <= 1e-10,
                  f"{n_channels} channels, worst gap {worst:.2e}", t0)


def criterion_norm_bounds(per_config: int = 1000, seed: int = 20) -> CheckResult:
    """Norm ceilings for ell-bit and rho-LDP channels; parity saturates ell=1."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    failures = 0
    checked = 0
    for bits in (1, 2, 3):
        for _ in range(per_config):
            k = int(rng.choice([4, 8, 16]))
            W = random_comm_channel(k, bits, rng)
            rep = verify_norm_bounds(W, ConstraintSpec("comm", k, bits=bits))
            failures += not rep.passed
            checked += 1
    for rho in (0.1, 0.5, 1.0):
        for _ in range(per_config):
            k = int(rng.choice([4, 8, 16]))
            W = random_ldp_channel(k, rho, rng)
            rep = verify_norm_bounds(W, ConstraintSpec("ldp", k, rho=rho))
            failures += not rep.passed
            checked += 1
    parity = h_matrix(standard_channel("parity", 4))
    tight = abs(parity.nuclear - 2.0) <= 1e-12 and abs(parity.frobenius_sq - 4.0) <= 1e-12
    return _timed("norm-bounds", failures == 0 and tight,
                  f"{checked} channels, {failures} violations; parity saturation "
                  f"{'exact' if tight else 'BROKEN'}", t0)


def criterion_chaos_mgf(matrices: int = 1000, seed: int = 21) -> CheckResult:
    """Exact chaos log-MGF never exceeds the closed bound on a lambda grid."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    violations = 0
    checked = 0
    worst = -math.inf
    for _ in range(matrices):
        dim = int(rng.integers(1, 15))
        width = int(rng.integers(1, dim + 2))
        B = rng.normal(size=(dim, width))
        H = HMatrix(B @ B.T)
        if H.spectral_radius == 0.0:
            continue
        for frac in (0.1, 0.3, 0.5, 0.7, 0.9, 0.95):
            lam = frac / (2.0 * H.spectral_radius)
            rep = chaos_mgf(H, lam)
            if not rep.valid:
                continue
            checked += 1
            gap = rep.exact_log_mgf - rep.bound
            worst = max(worst, gap)
            violations += gap > 0.0
    return _timed("chaos-mgf", violations == 0,
                  f"{checked} (H, lambda) points, {violations} violations, "
                  f"worst exact-bound {worst:.2e}", t0)


def criterion_maxmin(samples: int = 10_000, seed: int = 22,
                     sequences_per_k: int = 8) -> CheckResult:
    """Bottom-eigenspace construction: basis identities, the l1-mass
    certificate at 1/9 minus Monte Carlo slack, and exact invisibility
    against parity channels at k=4."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    worst_diag = 0.0
    cert_fail = 0
    for k in (8, 16, 32):
        for _ in range(sequences_per_k):
            n = int(rng.integers(1, 5))
            chans = [_random_channel(rng, k, int(rng.integers(2, 7)))
                     for _ in range(n)]
            hb = h_bar(chans)
            basis = adversary.adversarial_basis(hb)
            quarter = k // 4
            M = basis.V.T @ hb.entries @ basis.V
            worst_diag = max(worst_diag,
                             float(np.max(np.abs(M - np.diag(np.diag(M))))),
                             float(np.max(np.abs(np.diag(M) - basis.eigenvalues[:quarter]))),
                             float(np.max(np.abs(basis.V.T @ basis.V - np.eye(quarter)))))
            rel = float(np.linalg.norm(M) ** 2) - (4.0 / k) * hb.nuclear ** 2
            worst_rel = max(worst_rel, rel)
            Z = basis.V @ np.where(
                rng.random((quarter, samples)) < 0.5, -1.0, 1.0)
            alpha_hat = float(np.mean(
                np.abs(Z).sum(axis=0) >= k / (12.0 * math.sqrt(2.0))))
            slack = 2.326 * math.sqrt(max(alpha_hat * (1 - alpha_hat), 1e-12) / samples)
            cert_fail += alpha_hat < CONDITION_THRESHOLD - slack

    par = standard_channel("parity", 4)
    parity_ok = True
    for n in (1, 2, 3):
        adv = adversary.adversarial_perturbation([par] * n, eps=0.03)
        stats = brute_force_mixture_stats([par] * n, adv.family, n)
        parity_ok &= adv.fluctuation.value == 0.0 and stats.tv <= 1e-12
    passed = (worst_rel <= 1e-9 and worst_diag <= 1e-9 and cert_fail == 0
              and parity_ok)
    return _timed("maxmin-construction", passed,
                  f"basis identities worst {worst_diag:.2e}, norms-relation "
                  f"worst excess {worst_rel:.2e}, certificate failures {cert_fail}, "
                  f"parity invisibility {'exact' if parity_ok else 'BROKEN'}", t0)


def criterion_fluctuation_values(seed: int = 23) -> CheckResult:
    """Closed forms: chi2 fluctuation 4 eps^2 exactly; decoupled closed form
    vs exhaustive within 1e-10 up to k/2 = 12; quadratic ceiling
    16 n^2 eps^4 / k over the grid; monotone in n."""
    t0 = time.time()
    worst_closed = 0.0
    worst_ceiling = 0.0
    monotone_ok = True
    for k in (2, 4, 8, 16, 24):
        for eps in (0.05, 0.1, 0.25, 0.5):
            fam = paninski_family(k, eps)
            chi = chi2_fluctuation(fam).value
            worst_closed = max(worst_closed, abs(chi - 4.0 * eps ** 2))
            prev = 0.0
            for n in (1, 2, 5, 10):
                closed = decoupled_fluctuation(fam, n).value
                exact = decoupled_fluctuation(fam, n, method="exhaustive").value
                worst_closed = max(worst_closed, abs(closed - exact))
                worst_ceiling = max(worst_ceiling,
                                    closed - 16.0 * n ** 2 * eps ** 4 / k)
                monotone_ok &= closed >= prev - 1e-15
                prev = closed
    passed = worst_closed <= 1e-10 and worst_ceiling <= 1e-12 and monotone_ok
    return _timed("fluctuation-values", passed,
                  f"worst closed-vs-exhaustive {worst_closed:.2e}, worst ceiling "
                  f"excess {worst_ceiling:.2e}, monotone {monotone_ok}", t0)


def criterion_table_formulas() -> CheckResult:
    """Frozen table cells at (k=256, eps=0.1, ell=1) and centralized recovery."""
    t0 = time.time()
    cells = {r.task: r.value for r in bounds.lb_table(256, 0.1, bits=1)}
    ok = (abs(cells["learning"] - 3_276_800.0) < 1e-6 * 3_276_800.0
          and abs(cells["testing_public"] - 25_600.0 / math.sqrt(2.0)) < 1e-6 * 18_102.0
          and round(cells["testing_public"]) == 18_102
          and abs(cells["testing_private"] - 204_800.0) < 1e-6 * 204_800.0)
    k, eps = 64, 0.1
    ident = h_matrix(standard_channel("identity", k))
    learn = bounds.lb_general("learning", k, eps, sup_nuclear=ident.nuclear)
    test_pub = bounds.lb_general("testing_public", k, eps,
                                 sup_frobenius=ident.frobenius)
    central = (abs(learn.value - k / eps ** 2) < 1e-9
               and 0.5 * math.sqrt(k) / eps ** 2 <= test_pub.value
               <= 2.0 * math.sqrt(k) / eps ** 2)
    return _timed("table-formulas", ok and central,
                  f"comm cells {cells['learning']:.0f} / "
                  f"{cells['testing_public']:.1f} / {cells['testing_private']:.0f}; "
                  f"centralized learning {learn.value:.0f}", t0)


def criterion_simulator_fidelity(reps: int = 100, trials: int = 10_000,
                                 seed: int = 24) -> CheckResult:
    """Bitwise reproducibility plus empirical-vs-exact agreement within
    3 stderr on >= 99% of seeded repetitions (k=4, n=2)."""
    t0 = time.time()
    k = 4
    ident = standard_channel("identity", k)
    fam = paninski_family(k, 0.3)
    u = Distribution.uniform(k)
    cfg = simulate.ProtocolConfig(2, "private", [ident], seed=seed)
    r1 = simulate.simulate_smp(cfg, u, fam, trials)
    r2 = simulate.simulate_smp(cfg, u, fam, trials)
    bitwise = np.array_equal(r1.empirical_counts, r2.empirical_counts)
    hits = 0
    worst = 0.0
    for rep in range(reps):
        cfg = simulate.ProtocolConfig(2, "private", [ident], seed=seed + 1000 + rep)
        r = simulate.simulate_smp(cfg, u, fam, trials)
        dev = abs(r.empirical_tv - r.exact_tv) / r.stderr
        worst = max(worst, dev)
        hits += dev <= 3.0
    passed = bitwise and hits >= math.ceil(0.99 * reps)
    return _timed("simulator-fidelity", passed,
                  f"bitwise {'ok' if bitwise else 'BROKEN'}; {hits}/{reps} reps "
                  f"within 3 stderr, worst {worst:.2f}", t0)


# --- remaining invariants ----------------------------------------------------

def check_lattice_condition() -> CheckResult:
    """Hamming-ball count against the entropy ceiling for k divisible by 12."""
    t0 = time.time()
    worst = -math.inf
    for k in range(12, 241, 12):
        lhs = bounds.hamming_ball_log2(k // 2, k // 6)
        rhs = (k / 2.0) * bounds.binary_entropy(1.0 / 3.0)
        worst = max(worst, lhs - rhs)
    return _timed("lattice-condition", worst <= 0.0,
                  f"k in 12..240, worst log2 excess {worst:.3f}", t0)


def check_private_vs_public(trials: int = 200, seed: int = 25) -> CheckResult:
    """Private-coin testing bound dominates the public-coin bound on
    informativeness matrices of real channels."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(trials):
        k = int(rng.choice([4, 8, 16]))
        H = h_matrix(_random_channel(rng, k, int(rng.integers(2, 9))))
        if H.nuclear == 0.0 or H.frobenius == 0.0:
            continue
        eps = float(rng.uniform(0.05, 0.5))
        priv = bounds.lb_general("testing_private", k, eps, sup_nuclear=H.nuclear)
        pub = bounds.lb_general("testing_public", k, eps, sup_frobenius=H.frobenius)
        bad += priv.value < pub.value * (1.0 - 1e-9)
    return _timed("private-vs-public", bad == 0,
                  f"{trials} channels, {bad} order inversions", t0)


def check_separation_demo() -> CheckResult:
    """Best fixed pair-splitting assignment against the adversarial family is
    strictly blinder than shared random pair splitting against the pair-flip
    family."""
    t0 = time.time()
    rep = simulate.pair_splitting_separation(k=8, n=2, eps=1.0 / 32.0)
    passed = rep.private_best_tv < rep.public_avg_tv
    return _timed("separation-demo", passed,
                  f"private best tv {rep.private_best_tv:.2e} < public avg tv "
                  f"{rep.public_avg_tv:.2e}: {passed}", t0)


def check_backend_agreement(seed: int = 26) -> CheckResult:
    """Both kernel backends agree: bitwise for trial streams, 1e-9 for the
    chaos reduction."""
    t0 = time.time()
    from . import _kernels_numpy as knp
    try:
        from . import _kernels_numba as knb
    except ImportError:
        return _timed("backend-agreement", True, "numba unavailable; numpy only", t0)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        dim = int(rng.integers(1, 11))
        A = rng.normal(size=(int(rng.integers(1, 11)), dim))
        worst = max(worst, abs(knp.cosh_chaos_logmeanexp(A)
                               - knb.cosh_chaos_logmeanexp(A)))
    W = _random_channel(rng, 4, 3)
    cum_w = np.cumsum(W.W, axis=0)[None, :, :].copy()
    cum_w[:, -1, :] = 1.0
    cdf = np.broadcast_to(np.cumsum(np.full(4, 0.25)), (500, 4)).copy()
    cdf[:, -1] = 1.0
    same = True
    for public in (True, False):
        a = knp.smp_trials(3, 1, 2, cum_w, cdf, public)
        b = knb.smp_trials(3, 1, 2, cum_w, cdf, public)
        same &= np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    return _timed("backend-agreement", worst <= 1e-9 and same,
                  f"chaos worst gap {worst:.2e}, trial streams "
                  f"{'bitwise equal' if same else 'DIVERGED'}", t0)


SUITE = (
    ("distance-inequalities", check_distance_inequalities, {"pairs": 100}),
    ("data-processing", check_data_processing, {"trials": 100}),
    ("mixture-linearity", check_mixture_linearity, {"trials": 60}),
    ("constraint-convexity", check_family_convexity, {"pairs": 120}),
    ("ldp-difference-inequality", check_ldp_difference_inequality, {"trials": 60}),
    ("hmatrix-psd", check_hmatrix_psd, {"trials": 800}),
    ("hmatrix-decomposition", check_hmatrix_decomposition, {"trials": 60}),
    ("ingster-lecam", criterion_ingster_lecam, {"instances": 51}),
    ("pairwise-identity", criterion_pairwise_identity, {"n_channels": 50}),
    ("norm-bounds", criterion_norm_bounds, {"per_config": 80}),
    ("chaos-mgf", criterion_chaos_mgf, {"matrices": 120}),
    ("maxmin-construction", criterion_maxmin, {"samples": 4000, "sequences_per_k": 3}),
    ("fluctuation-values", criterion_fluctuation_values, {}),
    ("table-formulas", criterion_table_formulas, {}),
    ("simulator-fidelity", criterion_simulator_fidelity, {"reps": 30, "trials": 4000}),
    ("lattice-condition", check_lattice_condition, {}),
    ("private-vs-public", check_private_vs_public, {"trials": 60}),
    ("separation-demo", check_separation_demo, {}),
    ("backend-agreement", check_backend_agreement, {}),
)


def run_suite(quick: bool = False) -> list[CheckResult]:
    results = []
    for _, fn, quick_kwargs in SUITE:
        results.append(fn(**quick_kwargs) if quick else fn())
    return results
