import math
from itertools import product

import numpy as np
import pytest

from chi_contract import rng as crng
from chi_contract import _kernels_numpy as knp

knb = pytest.importorskip("chi_contract._kernels_numba")


class TestCounterRng:
    def test_pure_function_of_path(self):
        assert crng.u01(7, 1, 2, 3) == crng.u01(7, 1, 2, 3)
        assert crng.u01(7, 1, 2, 3) != crng.u01(7, 1, 2, 4)
        assert crng.u01(7, 1, 2, 3) != crng.u01(8, 1, 2, 3)

    def test_vector_matches_scalar(self):
        vec = crng.u01(3, 1, np.arange(16), 5)
        for t in range(16):
            assert vec[t] == crng.u01(3, 1, t, 5)

    def test_range_and_mean(self):
        u = crng.u01(0, 9, np.arange(100_000), 0)
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.01

    def test_numba_bitwise_identical(self):
        for seed, a, b, c, d in product((0, 7, 2**63), (1, 2), (0, 5), (0, 3),
                                        (0, 9)):
            expected = crng.u01(seed, a, b, c, d)
            got = knb._u01_4(np.uint64(seed), np.uint64(a), np.uint64(b),
                             np.uint64(c), np.uint64(d))
            assert got == expected


class TestCoshChaosKernel:
    def brute(self, A):
        dim = A.shape[1]
        total = 0.0
        for bits in range(1 << dim):
            theta = np.array([1.0 - 2.0 * ((bits >> j) & 1) for j in range(dim)])
            total += float(np.prod(np.cosh(A @ theta)))
        return math.log(total / (1 << dim))

    def test_against_direct_enumeration(self, rng):
        for _ in range(25):
            r = int(rng.integers(1, 7))
            d = int(rng.integers(1, 9))
            A = rng.normal(size=(r, d))
            ref = self.brute(A)
            assert knp.cosh_chaos_logmeanexp(A) == pytest.approx(ref, abs=1e-11)
            assert knb.cosh_chaos_logmeanexp(A) == pytest.approx(ref, abs=1e-11)

    def test_backends_agree(self, rng):
        for _ in range(20):
            A = rng.normal(size=(int(rng.integers(1, 12)), int(rng.integers(1, 14))))
            a = knp.cosh_chaos_logmeanexp(A)
            b = knb.cosh_chaos_logmeanexp(A)
            assert a == pytest.approx(b, abs=1e-11)

    def test_zero_matrix(self):
        assert knp.cosh_chaos_logmeanexp(np.zeros((3, 4))) == 0.0

    def test_large_scale_no_overflow(self):
        A = 400.0 * np.ones((2, 2))
        val = knp.cosh_chaos_logmeanexp(A)
        assert np.isfinite(val)
        assert knb.cosh_chaos_logmeanexp(A) == pytest.approx(val, rel=1e-12)

    def test_mc_variant_consistent(self, rng):
        A = rng.normal(size=(4, 30)) * 0.05
        signs = crng.rademacher_matrix(5, 1, 20_000, 30)
        est_np, se_np = knp.cosh_chaos_logmeanexp_mc(A, signs)
        est_nb, se_nb = knb.cosh_chaos_logmeanexp_mc(A, signs)
        assert est_np == pytest.approx(est_nb, abs=1e-10)
        assert se_np == pytest.approx(se_nb, abs=1e-12)


class TestSmpKernel:
    def setup_method(self):
        rng0 = np.random.default_rng(4)
        W0 = rng0.dirichlet(np.ones(3), size=4).T      # (3, 4) column-stochastic
        W1 = rng0.dirichlet(np.ones(3), size=4).T
        self.cum_w = np.stack([np.cumsum(W0, axis=0), np.cumsum(W1, axis=0)])
        self.cum_w[:, -1, :] = 1.0
        cdf = np.cumsum(rng0.dirichlet(np.ones(4), size=64), axis=1)
        cdf[:, -1] = 1.0
        self.cdf_rows = cdf

    @pytest.mark.parametrize("public", [True, False])
    def test_backends_bitwise_equal(self, public):
        a_codes, a_chan = knp.smp_trials(9, 1, 3, self.cum_w, self.cdf_rows, public)
        b_codes, b_chan = knb.smp_trials(9, 1, 3, self.cum_w, self.cdf_rows, public)
        assert np.array_equal(a_codes, b_codes)
        assert np.array_equal(a_chan, b_chan)

    def test_codes_in_range(self):
        codes, chan = knp.smp_trials(9, 0, 3, self.cum_w, self.cdf_rows, True)
        assert codes.min() >= 0 and codes.max() < 3 ** 3
        assert chan.min() >= 0 and chan.max() < 2

    def test_private_mode_hides_channel(self):
        _, chan = knp.smp_trials(9, 0, 3, self.cum_w, self.cdf_rows, False)
        assert np.all(chan == -1)

    def test_marginal_frequencies(self):
        # single player, identity-ish check: output frequencies approach W @ p
        W = np.array([[0.7, 0.2], [0.3, 0.8]])
        cum_w = np.cumsum(W, axis=0)[None]
        cum_w[:, -1, :] = 1.0
        p = np.array([0.4, 0.6])
        cdf = np.broadcast_to(np.cumsum(p), (200_000, 2)).copy()
        cdf[:, -1] = 1.0
        codes, _ = knp.smp_trials(123, 0, 1, cum_w, cdf, False)
        freq = np.bincount(codes, minlength=2) / len(codes)
        assert np.max(np.abs(freq - W @ p)) < 0.005


class TestBackendSelection:
    def test_env_flag(self, monkeypatch):
        import importlib
        from chi_contract import _backend
        monkeypatch.setenv(_backend.BACKEND_ENV, "numpy")
        name, impl = _backend._select()
        assert name == "numpy"
        monkeypatch.setenv(_backend.BACKEND_ENV, "numba")
        name, impl = _backend._select()
        assert name == "numba"
        monkeypatch.setenv(_backend.BACKEND_ENV, "cuda")
        with pytest.raises(ValueError):
            _backend._select()
        monkeypatch.delenv(_backend.BACKEND_ENV)
        name, impl = _backend._select()
        assert name in ("numba", "numpy")
        importlib.reload(_backend)
