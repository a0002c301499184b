import math

import numpy as np
import pytest

from chi_contract.adversary import (DEFAULT_C, adversarial_basis,
                                    adversarial_perturbation, maxmin_gap)
from chi_contract.channels import standard_channel
from chi_contract.contraction import HMatrix, h_bar
from chi_contract.fluctuation import brute_force_mixture_stats
from chi_contract.perturbations import check_almost_perturbation
from chi_contract.simulate import exact_bayes_error
from conftest import random_channel


class TestAdversarialBasis:
    def test_isotropic_spectrum(self):
        basis = adversarial_basis(HMatrix(np.eye(4)))
        M = basis.V.T @ np.eye(4) @ basis.V
        assert np.allclose(M, np.eye(2), atol=1e-12)

    def test_parity_bottom_eigenvector(self):
        hb = h_bar([standard_channel("parity", 4)])
        basis = adversarial_basis(hb)
        v = basis.V[:, 0]
        assert np.allclose(np.abs(v), 1.0 / math.sqrt(2.0), atol=1e-12)
        assert abs(v.sum()) <= 1e-12          # orthogonal to (1, 1)
        assert basis.eigenvalues == pytest.approx([0.0, 2.0], abs=1e-12)

    def test_norms_relation_and_diagonality(self, rng):
        for _ in range(200):
            k = int(rng.choice([8, 16, 32]))
            chans = [random_channel(rng, k, int(rng.integers(2, 7)))
                     for _ in range(int(rng.integers(1, 5)))]
            hb = h_bar(chans)
            basis = adversarial_basis(hb)
            quarter = k // 4
            M = basis.V.T @ hb.entries @ basis.V
            assert np.max(np.abs(basis.V.T @ basis.V - np.eye(quarter))) <= 1e-9
            assert np.max(np.abs(M - np.diag(np.diag(M)))) <= 1e-9
            assert np.max(np.abs(np.diag(M) - basis.eigenvalues[:quarter])) <= 1e-9
            assert np.linalg.norm(M) ** 2 <= (4.0 / k) * hb.nuclear ** 2 + 1e-9

    def test_odd_half_dimension_rejected(self):
        with pytest.raises(ValueError):
            adversarial_basis(HMatrix(np.eye(3)))

    def test_deterministic(self, rng):
        hb = h_bar([random_channel(rng, 8, 4)])
        a = adversarial_basis(hb)
        b = adversarial_basis(hb)
        assert np.array_equal(a.V, b.V)


class TestAdversarialPerturbation:
    def test_parity_family_is_invisible(self):
        par = standard_channel("parity", 4)
        for n in (1, 2, 3):
            adv = adversarial_perturbation([par] * n, eps=0.04)
            assert adv.fluctuation.value == 0.0
            stats = brute_force_mixture_stats([par] * n, adv.family, n)
            assert stats.tv <= 1e-12
            ber = exact_bayes_error([par] * n, adv.family, n)
            assert ber.bayes_error == pytest.approx(0.5, abs=1e-12)

    def test_identity_channels_leave_no_blind_direction(self):
        ident = standard_channel("identity", 8)
        adv = adversarial_perturbation([ident] * 2, eps=0.02)
        assert adv.fluctuation.value > 0.0

    def test_certificate_holds(self, rng):
        for k in (8, 16):
            chans = [random_channel(rng, k, 4) for _ in range(3)]
            adv = adversarial_perturbation(chans, eps=0.01,
                                           certificate_method="exact")
            assert adv.certificate.alpha_hat >= 1.0 / 9.0

    def test_certificate_mc_matches_exact(self, rng):
        chans = [random_channel(rng, 16, 4) for _ in range(2)]
        adv = adversarial_perturbation(chans, eps=0.01)
        mc = check_almost_perturbation(adv.family, 0.01, trials=10_000, seed=4,
                                       method="mc")
        assert abs(mc.alpha_hat - adv.certificate.alpha_hat) <= 0.05

    def test_invalid_rate_reported_not_fatal(self, rng):
        # near the eps ceiling large-k redirected coordinates can exceed 1
        k = 32
        chans = [random_channel(rng, k, 3) for _ in range(2)]
        eps = 0.95 / DEFAULT_C
        adv = adversarial_perturbation(chans, eps=eps)
        assert 0.0 <= adv.invalid_rate <= 1.0
        assert np.isfinite(adv.fluctuation.value)

    def test_ceiling_inside_regime(self, rng):
        # low-information channels keep max nuclear small, so the regime
        # condition holds with a handful of players
        for _ in range(20):
            k = int(rng.choice([8, 16]))
            rho = 0.2
            chans = [standard_channel("randomized_response", k, rho=rho)
                     for _ in range(3)]
            adv = adversarial_perturbation(chans, eps=0.01)
            assert adv.regime_ok
            assert adv.fluctuation.value <= adv.ceiling + 1e-12

    def test_eps_range_enforced(self):
        par = standard_channel("parity", 4)
        with pytest.raises(ValueError):
            adversarial_perturbation([par], eps=0.1)   # >= 1/c
        with pytest.raises(ValueError):
            adversarial_perturbation([par], eps=0.0)

    def test_k_divisibility(self):
        with pytest.raises(ValueError):
            adversarial_perturbation([standard_channel("parity", 6)], eps=0.01)


class TestMaxminGap:
    def test_parity_ratio_zero(self):
        gap = maxmin_gap([standard_channel("parity", 4)], eps=0.05, n=2)
        assert gap.adversarial_value == 0.0
        assert gap.paninski_value > 0.0
        assert gap.ratio == 0.0

    def test_identity_ratio_at_most_one(self):
        gap = maxmin_gap([standard_channel("identity", 8)], eps=0.05, n=3)
        assert gap.adversarial_value <= gap.paninski_value + 1e-9
        assert gap.ratio <= 1.0 + 1e-9

    def test_constant_both_zero(self):
        gap = maxmin_gap([standard_channel("constant", 4)], eps=0.05, n=2)
        assert gap.paninski_value == pytest.approx(0.0, abs=1e-15)
        assert gap.adversarial_value == pytest.approx(0.0, abs=1e-15)
        assert gap.ratio == 0.0

    def test_redirected_never_wins_random(self, rng):
        for _ in range(100):
            k = int(rng.choice([8, 16]))
            chans = [random_channel(rng, k, int(rng.integers(2, 6)))
                     for _ in range(int(rng.integers(1, 4)))]
            gap = maxmin_gap(chans, eps=0.05)
            assert gap.adversarial_value <= gap.paninski_value + 1e-9

    def test_channel_cycling(self):
        par = standard_channel("parity", 8)
        ident = standard_channel("identity", 8)
        g1 = maxmin_gap([par, ident], eps=0.05, n=4)
        g2 = maxmin_gap([par, ident, par, ident], eps=0.05)
        assert g1.paninski_value == pytest.approx(g2.paninski_value, abs=1e-14)
