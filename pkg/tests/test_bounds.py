import math

import pytest

from chi_contract.bounds import (binary_entropy, fano_learning_bound,
                                 hamming_ball_log2, lb_general, lb_table)
from chi_contract.channels import standard_channel
from chi_contract.contraction import h_matrix
from chi_contract.perturbations import paninski_family
from conftest import random_channel

H_THIRD = binary_entropy(1.0 / 3.0)


class TestLbGeneral:
    def test_centralized_learning(self):
        # identity channel available: sup nuclear = k, bound collapses to k/eps^2
        for k, eps in ((64, 0.1), (256, 0.05)):
            rep = lb_general("learning", k, eps, sup_nuclear=float(k))
            assert rep.value == pytest.approx(k / eps ** 2, rel=1e-12)

    def test_centralized_testing_public(self):
        k, eps = 64, 0.1
        ident = h_matrix(standard_channel("identity", k))
        rep = lb_general("testing_public", k, eps, sup_frobenius=ident.frobenius)
        target = math.sqrt(k) / eps ** 2
        assert 0.5 * target <= rep.value <= 2.0 * target

    def test_eps_scaling(self):
        a = lb_general("learning", 16, 0.2, sup_nuclear=4.0)
        b = lb_general("learning", 16, 0.1, sup_nuclear=4.0)
        assert b.value == pytest.approx(4.0 * a.value, rel=1e-12)

    def test_monotone_in_supremum(self):
        lo = lb_general("testing_private", 16, 0.1, sup_nuclear=8.0)
        hi = lb_general("testing_private", 16, 0.1, sup_nuclear=2.0)
        assert hi.value > lo.value

    def test_zero_supremum_rejected(self):
        with pytest.raises(ValueError):
            lb_general("learning", 16, 0.1, sup_nuclear=0.0)

    def test_unknown_task(self):
        with pytest.raises(ValueError):
            lb_general("sorting", 16, 0.1, sup_nuclear=1.0)

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            lb_general("learning", 15, 0.1, sup_nuclear=1.0)


class TestLbTable:
    def test_frozen_comm_cells(self):
        cells = {r.task: r.value for r in lb_table(256, 0.1, bits=1)}
        assert cells["learning"] == pytest.approx(3_276_800.0, rel=1e-9)
        assert cells["testing_public"] == pytest.approx(25_600.0 / math.sqrt(2.0),
                                                        rel=1e-9)
        assert round(cells["testing_public"]) == 18_102
        assert cells["testing_private"] == pytest.approx(204_800.0, rel=1e-9)

    def test_ldp_cells_use_nuclear_supremum(self):
        cells = {r.task: r for r in lb_table(256, 0.1, rho=1.0)}
        sup = (math.e - 1.0) ** 2 / 2.0
        assert sup == pytest.approx(1.476, abs=1e-3)
        assert cells["learning"].value == pytest.approx(
            (256 / 0.01) * (256 / sup), rel=1e-12)
        assert cells["testing_private"].value == pytest.approx(
            (16 / 0.01) * (256 / sup), rel=1e-12)

    def test_vacuous_comm_constraint_recovers_centralized_order(self):
        k, eps = 16, 0.1
        cells = {r.task: r.value for r in lb_table(k, eps, bits=4)}  # 2^4 = k
        assert cells["learning"] == pytest.approx(k / eps ** 2, rel=1e-12)
        assert cells["testing_public"] == pytest.approx(
            math.sqrt(k) / eps ** 2, rel=1e-12)

    def test_rho_caveat_flag(self):
        reports = lb_table(16, 0.1, rho=1.5)
        assert all(r.caveats for r in reports)
        reports = lb_table(16, 0.1, rho=0.9)
        assert all(not r.caveats for r in reports)

    def test_needs_a_constraint(self):
        with pytest.raises(ValueError):
            lb_table(16, 0.1)

    def test_both_rows(self):
        reports = lb_table(16, 0.1, bits=2, rho=0.5)
        assert len(reports) == 6

    def test_agreement_with_lb_general(self):
        from chi_contract.bounds import comm_suprema, ldp_suprema
        k, eps = 64, 0.2
        nuc, fro = comm_suprema(2)
        cells = {r.task: r.value for r in lb_table(k, eps, bits=2)}
        assert cells["learning"] == lb_general("learning", k, eps,
                                               sup_nuclear=nuc).value
        assert cells["testing_public"] == lb_general("testing_public", k, eps,
                                                     sup_frobenius=fro).value
        nuc, fro = ldp_suprema(0.3)
        cells = {r.task: r.value for r in lb_table(k, eps, rho=0.3)}
        assert cells["testing_private"] == lb_general("testing_private", k, eps,
                                                      sup_nuclear=nuc).value

    def test_private_dominates_public_on_channel_norms(self, rng):
        for _ in range(200):
            k = int(rng.choice([4, 8, 16]))
            H = h_matrix(random_channel(rng, k, int(rng.integers(2, 9))))
            if H.nuclear == 0.0:
                continue
            eps = float(rng.uniform(0.05, 0.5))
            priv = lb_general("testing_private", k, eps, sup_nuclear=H.nuclear)
            pub = lb_general("testing_public", k, eps, sup_frobenius=H.frobenius)
            assert priv.value >= pub.value * (1.0 - 1e-9)


class TestEntropyHelpers:
    def test_binary_entropy_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0
        assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)

    def test_hamming_ball_small_cases(self):
        assert hamming_ball_log2(3, 1) == pytest.approx(2.0, abs=1e-15)
        # 1 + 6 + 15 = 22 strings within distance 2 of a fixed 6-bit string
        assert hamming_ball_log2(6, 2) == pytest.approx(math.log2(22), abs=1e-15)
        assert hamming_ball_log2(6, 2) <= 6 * H_THIRD

    def test_full_cube(self):
        assert hamming_ball_log2(7, 7) == pytest.approx(7.0, abs=1e-15)

    def test_radius_bounds(self):
        with pytest.raises(ValueError):
            hamming_ball_log2(4, 5)

    def test_entropy_ceiling_on_sixth_radius(self):
        for k in range(12, 241, 12):
            assert hamming_ball_log2(k // 2, k // 6) <= (k / 2.0) * H_THIRD


class TestFanoLearningBound:
    def test_pair_flip_centralized_order(self):
        k, eps = 24, 0.1
        fam = paninski_family(k, eps)
        c_eps = 2.0 ** ((1.0 - H_THIRD) * k / 2.0)
        value = fano_learning_bound(fam, None, c_eps)
        expected = (k / 2.0) * H_THIRD / (4.0 * eps ** 2)
        assert value == pytest.approx(expected, rel=1e-9)
        assert 0.05 * k / eps ** 2 <= value <= 0.5 * k / eps ** 2

    def test_constant_channel_unlearnable(self):
        fam = paninski_family(8, 0.1)
        value = fano_learning_bound(fam, [standard_channel("constant", 8)], 2.0)
        assert value == math.inf

    def test_identity_channel_matches_centralized(self):
        fam = paninski_family(8, 0.1)
        a = fano_learning_bound(fam, None, 4.0)
        b = fano_learning_bound(fam, [standard_channel("identity", 8)], 4.0)
        assert a == pytest.approx(b, rel=1e-10)

    def test_packing_cannot_swallow_family(self):
        fam = paninski_family(8, 0.1)
        with pytest.raises(ValueError):
            fano_learning_bound(fam, None, 2.0 ** 5)
