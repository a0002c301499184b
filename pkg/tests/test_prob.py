import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chi_contract.prob import (CapExceededError, Channel, Distribution,
                               ProductSpec, apply_channel, divergence,
                               enumerate_product, mix_channels)
from conftest import random_channel, random_distribution


class TestDistribution:
    def test_renormalizes_within_tolerance(self):
        d = Distribution([0.5 + 4e-10, 0.5])
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            Distribution([0.6, 0.5])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Distribution([1.1, -0.1])

    def test_immutable(self):
        d = Distribution([0.5, 0.5])
        with pytest.raises(ValueError):
            d.probs[0] = 0.9

    def test_json_roundtrip(self):
        d = Distribution([0.3, 0.2, 0.5])
        d2 = Distribution.from_json(d.to_json())
        assert np.array_equal(d.probs, d2.probs)


class TestChannel:
    def test_columns_must_be_stochastic(self):
        with pytest.raises(ValueError):
            Channel([[0.6, 0.0], [0.6, 1.0]])

    def test_json_roundtrip(self):
        ch = Channel([[0.2, 0.7], [0.8, 0.3]])
        ch2 = Channel.from_json(ch.to_json())
        assert np.array_equal(ch.W, ch2.W)

    def test_json_shape_mismatch(self):
        obj = {"k": 3, "m": 2, "W": [[0.2, 0.7], [0.8, 0.3]]}
        with pytest.raises(ValueError):
            Channel.from_json(obj)


class TestDivergence:
    @pytest.mark.parametrize("kind", ["tv", "kl", "chi2"])
    def test_identical_is_zero(self, kind):
        p = Distribution([0.5, 0.5])
        assert divergence(p, p, kind) == pytest.approx(0.0, abs=1e-15)

    def test_tv_direct_summation(self):
        # 0.5 * (|0.6-0.5| + |0.4-0.5|) = 0.1
        assert divergence(Distribution([0.6, 0.4]), Distribution([0.5, 0.5]),
                          "tv") == pytest.approx(0.1, abs=1e-15)

    def test_chi2_direct_summation(self):
        # (0.1^2 + 0.1^2) / 0.5 = 0.04
        assert divergence(Distribution([0.6, 0.4]), Distribution([0.5, 0.5]),
                          "chi2") == pytest.approx(0.04, abs=1e-15)

    def test_support_violation_is_inf_not_error(self):
        p = Distribution([0.5, 0.5])
        q = Distribution([1.0, 0.0])
        assert divergence(p, q, "kl") == math.inf
        assert divergence(p, q, "chi2") == math.inf
        assert divergence(q, p, "kl") < math.inf

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            divergence(Distribution([1.0]), Distribution([0.5, 0.5]), "tv")

    def test_unknown_kind(self):
        p = Distribution([0.5, 0.5])
        with pytest.raises(ValueError):
            divergence(p, p, "hellinger")

    def test_distance_inequalities_random(self, rng):
        for _ in range(1000):
            k = int(rng.integers(2, 12))
            p = random_distribution(rng, k)
            q = random_distribution(rng, k)
            tv = divergence(p, q, "tv")
            kl = divergence(p, q, "kl")
            chi2 = divergence(p, q, "chi2")
            assert 2 * tv * tv <= kl + 1e-12
            assert kl <= chi2 + 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8),
           st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8))
    def test_distance_inequalities_property(self, raw_p, raw_q):
        k = min(len(raw_p), len(raw_q))
        p = Distribution(np.array(raw_p[:k]) / sum(raw_p[:k]))
        q = Distribution(np.array(raw_q[:k]) / sum(raw_q[:k]))
        tv = divergence(p, q, "tv")
        kl = divergence(p, q, "kl")
        chi2 = divergence(p, q, "chi2")
        assert 2 * tv * tv <= kl + 1e-12 <= chi2 + 2e-12


class TestApplyChannel:
    def test_identity(self):
        p = Distribution([0.3, 0.7])
        out = apply_channel(Channel(np.eye(2)), p)
        assert np.allclose(out.probs, p.probs, atol=1e-15)

    def test_constant_gives_uniform(self):
        W = Channel(np.full((3, 2), 1.0 / 3.0))
        out = apply_channel(W, Distribution([0.9, 0.1]))
        assert np.allclose(out.probs, 1.0 / 3.0, atol=1e-15)

    def test_parity_on_uniform(self):
        from chi_contract.channels import standard_channel
        out = apply_channel(standard_channel("parity", 4), Distribution.uniform(4))
        assert np.allclose(out.probs, [0.5, 0.5], atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_channel(Channel(np.eye(3)), Distribution([0.5, 0.5]))

    def test_data_processing(self, rng):
        for _ in range(500):
            k = int(rng.integers(2, 10))
            m = int(rng.integers(2, 10))
            W = random_channel(rng, k, m)
            p = random_distribution(rng, k)
            q = random_distribution(rng, k)
            for kind in ("tv", "kl", "chi2"):
                assert divergence(apply_channel(W, p), apply_channel(W, q), kind) \
                    <= divergence(p, q, kind) + 1e-10


class TestMixChannels:
    def test_single_part_is_identity_operation(self):
        W = Channel([[0.2, 0.7], [0.8, 0.3]])
        assert np.allclose(mix_channels([(W, 1.0)]).W, W.W, atol=1e-15)

    def test_two_deterministic_one_bit(self):
        a = Channel([[1.0, 1.0], [0.0, 0.0]])
        b = Channel([[1.0, 0.0], [0.0, 1.0]])
        mixed = mix_channels([(a, 0.5), (b, 0.5)])
        assert set(np.round(mixed.W, 12).ravel()) <= {0.0, 0.5, 1.0}

    def test_weights_must_sum_to_one(self):
        W = Channel(np.eye(2))
        with pytest.raises(ValueError):
            mix_channels([(W, 0.5), (W, 0.4)])

    def test_input_alphabet_mismatch(self):
        with pytest.raises(ValueError):
            mix_channels([(Channel(np.eye(2)), 0.5), (Channel(np.eye(3)), 0.5)])

    def test_output_union_pads(self):
        narrow = Channel([[1.0, 1.0]])          # m=1
        wide = Channel(np.eye(2))               # m=2
        mixed = mix_channels([(narrow, 0.5), (wide, 0.5)])
        assert mixed.m == 2
        assert np.allclose(mixed.W.sum(axis=0), 1.0, atol=1e-12)

    def test_apply_is_linear_in_mixture(self, rng):
        for _ in range(300):
            k = int(rng.integers(2, 10))
            m = int(rng.integers(2, 8))
            W1, W2 = random_channel(rng, k, m), random_channel(rng, k, m)
            theta = float(rng.uniform())
            p = random_distribution(rng, k)
            lhs = apply_channel(mix_channels([(W1, theta), (W2, 1 - theta)]), p).probs
            rhs = theta * apply_channel(W1, p).probs \
                + (1 - theta) * apply_channel(W2, p).probs
            assert np.max(np.abs(lhs - rhs)) <= 1e-12


class TestEnumerateProduct:
    def test_single_factor(self):
        p = Distribution([0.4, 0.6])
        assert np.allclose(enumerate_product(ProductSpec([p])), p.probs, atol=1e-15)

    def test_two_fair_coins(self):
        p = Distribution([0.5, 0.5])
        joint = enumerate_product(ProductSpec([p, p]))
        assert np.allclose(joint, 0.25, atol=1e-15)

    def test_tensor_product_values(self):
        joint = enumerate_product(
            ProductSpec([Distribution([0.6, 0.4]), Distribution([0.5, 0.5])]))
        assert np.allclose(joint, [0.3, 0.3, 0.2, 0.2], atol=1e-15)

    def test_channel_factor(self):
        from chi_contract.channels import standard_channel
        par = standard_channel("parity", 4)
        joint = enumerate_product(
            ProductSpec([(par, Distribution.uniform(4)), Distribution([1.0, 0.0])]))
        assert np.allclose(joint, [0.5, 0.0, 0.5, 0.0], atol=1e-15)

    def test_sums_to_one(self, rng):
        dists = [random_distribution(rng, int(rng.integers(2, 5))) for _ in range(5)]
        joint = enumerate_product(ProductSpec(dists))
        assert joint.sum() == pytest.approx(1.0, abs=1e-9)

    def test_cap(self):
        p = Distribution.uniform(10)
        with pytest.raises(CapExceededError):
            enumerate_product(ProductSpec([p] * 9), cap=10 ** 7)
