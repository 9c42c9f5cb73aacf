import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from sphere_dpp.errors import DomainError
from sphere_dpp.quadrature import gauss_jacobi_rule
from sphere_dpp.specfun import (EULER_GAMMA, PolyParams, digamma, gauss_2f1_at_one, gegenbauer_all,
                                gegenbauer_eval, harmonic_number, hyp4f3_ratio_terms, hyp4f3_terminating,
                                hyp4f3_terms, jacobi_eval, ln_gamma)

# high-precision values from mpmath.hyper on the defining 4F3 series
HYP_ORACLE = {(3, 5, 1.5): 0.767928746525455872964403679791,
              (2, 6, 1.0): 0.85503311871867532117902288854}


class TestGammaFamily:
    def test_ln_gamma_values(self):
        assert ln_gamma(1) == 0
        assert ln_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-15)
        assert ln_gamma(10) == pytest.approx(math.log(362880), rel=1e-15)

    @pytest.mark.parametrize("x", [0, -1.5])
    def test_ln_gamma_domain(self, x):
        with pytest.raises(DomainError):
            ln_gamma(x)

    def test_digamma_values(self):
        assert digamma(1) == pytest.approx(-EULER_GAMMA, abs=1e-15)
        assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-14)
        assert digamma(2) == pytest.approx(1 - EULER_GAMMA, abs=1e-15)
        with pytest.raises(DomainError):
            digamma(0.0)

    def test_digamma_recurrence_grid(self):
        for x in np.arange(1, 201) / 10:
            assert abs(digamma(x + 1) - digamma(x) - 1 / x) < 1e-12

    def test_harmonic_numbers(self):
        assert harmonic_number(0) == 0
        assert harmonic_number(3) == pytest.approx(11 / 6, rel=1e-15)
        assert harmonic_number(50) == pytest.approx(digamma(51) + EULER_GAMMA, abs=1e-12)

    @given(st.floats(1e-3, 1e3))
    def test_ln_gamma_matches_scipy(self, x):
        assert ln_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13, abs=1e-14)


class TestJacobi:
    def test_params_validate(self):
        with pytest.raises(DomainError):
            PolyParams(-1.0, 0.0, 2)
        with pytest.raises(DomainError):
            PolyParams(0.0, 0.0, -1)

    def test_degree_zero(self):
        assert jacobi_eval(PolyParams(0.3, 1.2, 0), 0.17) == 1.0

    def test_value_at_one(self):
        for d in range(2, 11):
            for L in range(0, 201, 7):
                want = math.exp(math.lgamma(L + d / 2 + 1) - math.lgamma(L + 1) - math.lgamma(d / 2 + 1))
                assert jacobi_eval(PolyParams.harmonic(d, L), 1.0) == pytest.approx(want, rel=1e-12)

    def test_matches_scipy(self):
        t = np.linspace(-1, 1, 101)
        for a, b, k in [(1, 0, 5), (1.5, 0.5, 12), (3, 2, 30)]:
            np.testing.assert_allclose(jacobi_eval(PolyParams(a, b, k), t), special.eval_jacobi(k, a, b, t),
                                       rtol=1e-11, atol=1e-11)

    def test_orthogonality_d2(self):
        rule = gauss_jacobi_rule(1, 0, 10)
        val = rule.integrate(jacobi_eval(PolyParams(1, 0, 5), rule.nodes) * jacobi_eval(PolyParams(1, 0, 3), rule.nodes))
        assert abs(val) < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 5, 8])
    def test_orthogonality_relative(self, d):
        p = PolyParams.harmonic(d, 0)
        rule = gauss_jacobi_rule(p.alpha, p.beta, 40)
        vals = [jacobi_eval(PolyParams(p.alpha, p.beta, L), rule.nodes) for L in range(30)]
        for i in range(30):
            diag = rule.integrate(vals[i] ** 2)
            for j in range(i):
                assert abs(rule.integrate(vals[i] * vals[j])) <= 1e-10 * diag


class TestGegenbauer:
    def test_simple_values(self):
        assert gegenbauer_eval(1.0, 0, 0.3) == 1.0
        assert gegenbauer_eval(1.0, 2, 0.5) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    def test_value_at_one(self, d):
        lam = (d - 1) / 2
        for k in range(15):
            assert gegenbauer_eval(lam, k, 1.0) == pytest.approx(math.comb(d + k - 2, k), rel=1e-13)

    def test_matches_scipy_and_all(self):
        t = np.linspace(-1, 1, 33)
        table = gegenbauer_all(1.5, 20, t)
        for k in range(21):
            np.testing.assert_allclose(gegenbauer_eval(1.5, k, t), special.eval_gegenbauer(k, 1.5, t),
                                       rtol=1e-11, atol=1e-11)
            np.testing.assert_allclose(table[k], gegenbauer_eval(1.5, k, t), rtol=1e-14, atol=1e-14)


class TestHypergeometric:
    def test_endpoints(self):
        for d in range(2, 7):
            for L in (0, 3, 11):
                assert hyp4f3_terminating(d, L, 0) == 1.0
                assert hyp4f3_terminating(d, L, d) == 1.0

    def test_small_s_limit(self):
        assert hyp4f3_terminating(3, 10, 1e-9) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("key", list(HYP_ORACLE))
    def test_against_oracle(self, key):
        assert hyp4f3_terminating(*key) == pytest.approx(HYP_ORACLE[key], rel=1e-13)

    def test_even_s_truncates(self):
        for L in (1, 4, 9):
            terms = hyp4f3_terms(4, L, 2.0)
            assert all(t == 0 for t in terms[2:])

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp4f3_terminating(2, 3, 2.5)
        with pytest.raises(DomainError):
            hyp4f3_terminating(2, 3, -0.1)

    def test_gauss_limit(self):
        assert gauss_2f1_at_one(2, 0) == pytest.approx(1.0)
        assert gauss_2f1_at_one(2, 2) == pytest.approx(1.0)
        assert gauss_2f1_at_one(4, 2) == pytest.approx(2 / 3)
        assert abs(hyp4f3_terminating(3, 40, 1.5) - gauss_2f1_at_one(3, 1.5)) < 5e-2

    def test_convergence_monotone(self):
        for d, s in [(2, 0.5), (3, 1.5), (4, 1.0), (6, 3.3)]:
            gaps = [abs(hyp4f3_terminating(d, L, s) - gauss_2f1_at_one(d, s)) for L in (10, 20, 40, 80)]
            assert gaps == sorted(gaps, reverse=True)

    def test_ratio_terms_bounded_and_decreasing(self):
        for d in range(2, 7):
            for L in range(0, 51, 5):
                for s in (0.1 * d, 0.5 * d, 0.95 * d):
                    r = hyp4f3_ratio_terms(d, L, s)
                    assert all(0 < x <= 1 for x in r)
                    assert all(b <= a for a, b in zip(r, r[1:]))

    @given(st.integers(2, 6), st.integers(0, 40), st.floats(0.01, 0.99))
    def test_sandwich_for_small_s(self, d, L, frac):
        s = 2 * frac
        f = hyp4f3_terminating(d, L, s)
        assert gauss_2f1_at_one(d, s) - 1e-12 <= f <= 1 + 1e-12
