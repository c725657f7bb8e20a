import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthotensor import (DomainError, bose_integral_h, fermi_integral_g,
                         gamma_fn, riemann_zeta, sommerfeld_g)
from orthotensor.moments import dirichlet_eta


def zeta_euler_maclaurin(s: float, terms: int = 40) -> float:
    """Independent zeta oracle: partial sum plus Euler-Maclaurin tail."""
    partial = sum(n ** -s for n in range(1, terms))
    n = float(terms)
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    tail += s / 12.0 * n ** (-s - 1)
    tail -= s * (s + 1) * (s + 2) / 720.0 * n ** (-s - 3)
    return partial + tail


class TestGamma:
    def test_integer(self):
        assert gamma_fn(1.0) == 1.0

    def test_half(self):
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_five_halves(self):
        assert gamma_fn(2.5) == pytest.approx(3.0 * math.sqrt(math.pi) / 4.0, rel=1e-13)

    @pytest.mark.parametrize("bad", [0.0, -1.0, -2.5])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            gamma_fn(bad)


class TestZeta:
    def test_basel(self):
        assert riemann_zeta(2.0) == pytest.approx(math.pi ** 2 / 6.0, rel=1e-11)

    def test_fourth(self):
        assert riemann_zeta(4.0) == pytest.approx(math.pi ** 4 / 90.0, rel=1e-11)

    def test_apery_against_euler_maclaurin(self):
        assert riemann_zeta(3.0) == pytest.approx(zeta_euler_maclaurin(3.0), rel=1e-11)
        assert riemann_zeta(3.0) == pytest.approx(1.2020569, rel=1e-7)

    def test_pole(self):
        with pytest.raises(DomainError):
            riemann_zeta(1.0)

    def test_continuation(self):
        # zeta(0) = -1/2, zeta(-1) = -1/12
        assert riemann_zeta(0.0) == pytest.approx(-0.5, rel=1e-12)
        assert riemann_zeta(-1.0) == pytest.approx(-1.0 / 12.0, rel=1e-12)

    def test_eta_at_one(self):
        assert dirichlet_eta(1.0) == pytest.approx(math.log(2.0), rel=1e-13)
        assert dirichlet_eta(2.0) == pytest.approx(math.pi ** 2 / 12.0, rel=1e-11)


class TestFermiIntegral:
    def test_small_fugacity_series(self):
        # alternating sum Gamma(2) * (z - z^2/2^2 + z^3/3^2 - ...)
        z = 0.01
        expected = math.gamma(2.0) * sum(
            (-1) ** (k + 1) * z ** k / k ** 2 for k in range(1, 9))
        assert fermi_integral_g(2.0, z) == pytest.approx(expected, rel=1e-12)
        assert fermi_integral_g(2.0, z) == pytest.approx(0.0099751, rel=1e-5)

    def test_log_two(self):
        # g_1(z) = ln(1 + z) exactly
        assert fermi_integral_g(1.0, 1.0) == pytest.approx(math.log(2.0), rel=1e-10)

    def test_against_polylog_oracle(self):
        for nu, z in [(0.5, 0.2), (1.5, 0.49), (2.5, 0.8), (3.5, 5.0),
                      (2.0, math.exp(20.0))]:
            oracle = float(-mpmath.gamma(nu) * mpmath.re(mpmath.polylog(nu, -z)))
            assert fermi_integral_g(nu, z) == pytest.approx(oracle, rel=1e-9)

    def test_sommerfeld_regime(self):
        ln_z = 20.0
        g = fermi_integral_g(2.0, math.exp(ln_z))
        expected = ln_z ** 2 / 2.0 * (1.0 + math.pi ** 2 / (3.0 * ln_z ** 2))
        assert g == pytest.approx(expected, rel=1e-4)

    @pytest.mark.parametrize("nu,z", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_domain(self, nu, z):
        with pytest.raises(DomainError):
            fermi_integral_g(nu, z)

    @settings(max_examples=60, deadline=None)
    @given(nu=st.floats(0.5, 6.5), z=st.floats(1e-6, 0.01))
    def test_small_z_first_omitted_term_bound(self, nu, z):
        lead = math.gamma(nu) * z
        assert abs(fermi_integral_g(nu, z) - lead) / lead <= 2.0 * z / 2.0 ** nu


class TestSommerfeld:
    def test_nu_one_exact(self):
        # nu (nu-1) = 0 kills every printed correction
        assert sommerfeld_g(1.0, 10.0) == 10.0

    def test_term_evaluation(self):
        ln_z = 20.0
        expected = (math.gamma(2.0) / math.gamma(3.0) * ln_z ** 2
                    * (1.0 + 2.0 * math.pi ** 2 / 6.0 / ln_z ** 2))
        assert sommerfeld_g(2.0, ln_z) == pytest.approx(expected, rel=1e-15)

    def test_agrees_with_integral(self):
        for nu in (1.5, 2.0, 2.5):
            s = sommerfeld_g(nu, 20.0)
            g = fermi_integral_g(nu, math.exp(20.0))
            assert s == pytest.approx(g, rel=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            sommerfeld_g(2.0, 0.0)


class TestBoseIntegral:
    def test_small_fugacity_series(self):
        z = 0.01
        expected = math.gamma(2.0) * sum(z ** k / k ** 2 for k in range(1, 9))
        assert bose_integral_h(2.0, z) == pytest.approx(expected, rel=1e-12)
        assert bose_integral_h(2.0, z) == pytest.approx(0.010025, rel=1e-4)

    def test_near_condensation(self):
        # h_{3/2}(z -> 1) -> Gamma(3/2) zeta(3/2), approached from below
        limit = math.gamma(1.5) * riemann_zeta(1.5)
        val = bose_integral_h(1.5, 1.0 - 1e-8)
        assert val == pytest.approx(limit, rel=3e-4)
        assert val < limit

    def test_against_polylog_oracle(self):
        for nu, z in [(0.5, 0.8), (0.75, 0.2), (1.0, 0.95), (1.5, 0.9),
                      (2.0, math.exp(-0.1)), (3.0, 0.99), (2.5, 0.51)]:
            oracle = float(mpmath.gamma(nu) * mpmath.polylog(nu, z))
            assert bose_integral_h(nu, z) == pytest.approx(oracle, rel=1e-9)

    def test_integer_branch_vs_quadrature(self):
        # alpha = 0.1 exercises the integer-order harmonic/log form
        z = math.exp(-0.1)
        oracle = float(mpmath.quad(
            lambda x: x / (mpmath.exp(x) / z - 1.0), [0, mpmath.inf]))
        assert bose_integral_h(2.0, z) == pytest.approx(oracle, rel=1e-6)

    @pytest.mark.parametrize("z", [0.0, 1.0, 1.2, -0.5])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            bose_integral_h(2.0, z)

    @settings(max_examples=60, deadline=None)
    @given(nu=st.floats(0.5, 6.5), z=st.floats(1e-6, 0.01))
    def test_small_z_first_omitted_term_bound(self, nu, z):
        lead = math.gamma(nu) * z
        assert abs(bose_integral_h(nu, z) - lead) / lead <= 2.0 * z / 2.0 ** nu
