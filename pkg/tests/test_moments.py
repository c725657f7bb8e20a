import json
import math

import mpmath
import pytest

from orthotensor import (ConvergenceError, DomainError, Family, MomentTable,
                         WeightSpec, build_moment_table, graphene_series_i2n,
                         moment_analytic, moment_quadrature)
from tests.conftest import BUILTIN_SPECS

PI = math.pi

# exact radial reductions for D = 1 (I_{2N} = raw moment / (2N-1)!!)
LEGENDRE_1D = (2.0, 2.0 / 3.0, 2.0 / 15.0, 2.0 / 105.0, 2.0 / 945.0)
CHEBYSHEV1_1D = (PI, PI / 2.0, PI / 8.0, PI / 48.0, PI / 384.0)
CHEBYSHEV2_1D = (PI / 2.0, PI / 8.0, PI / 48.0, PI / 384.0, PI / 3840.0)


class TestAnalyticClosedForms:
    def test_gaussian_is_unity(self):
        w = BUILTIN_SPECS["gaussian"]
        for D in range(1, 5):
            for N in range(5):
                assert moment_analytic(w, D, N) == 1.0

    def test_legendre_d1(self):
        w = BUILTIN_SPECS["legendre"]
        for N, expected in enumerate(LEGENDRE_1D):
            assert moment_analytic(w, 1, N) == pytest.approx(expected, rel=1e-14)

    def test_legendre_d1_radial_oracle(self):
        # I_2N * delta(1,...,1) must equal the raw integral of x^{2N} on [-1,1]
        from orthotensor import delta_full
        w = BUILTIN_SPECS["legendre"]
        for N in range(5):
            raw = 2.0 / (2 * N + 1)
            assert moment_analytic(w, 1, N) * delta_full((1,) * (2 * N)) == \
                pytest.approx(raw, rel=1e-14)

    def test_chebyshev1_d1(self):
        w = BUILTIN_SPECS["chebyshev1"]
        for N, expected in enumerate(CHEBYSHEV1_1D):
            assert moment_analytic(w, 1, N) == pytest.approx(expected, rel=1e-14)

    def test_chebyshev2_d1(self):
        w = BUILTIN_SPECS["chebyshev2"]
        for N, expected in enumerate(CHEBYSHEV2_1D):
            assert moment_analytic(w, 1, N) == pytest.approx(expected, rel=1e-14)

    def test_legendre_d3(self):
        # I_2 = 4 pi / 15: prefactor pi^{3/2}/Gamma(5/2) times 1/(2N+D)
        w = BUILTIN_SPECS["legendre"]
        assert moment_analytic(w, 3, 1) == pytest.approx(4.0 * PI / 15.0, rel=1e-14)

    def test_yukawa_frozen(self):
        # mu=2, D=3, N=1 collapses to pi/2 (tanh-sinh oracle below confirms)
        w = WeightSpec(family=Family.YUKAWA, mu=2.0)
        assert moment_analytic(w, 3, 1) == pytest.approx(PI / 2.0, rel=1e-13)
        oracle = float(mpmath.quad(
            lambda r: mpmath.exp(-2.0 * r) / r * r ** 4, [0, mpmath.inf]))
        oracle *= PI ** 1.5 / (2.0 ** 0 * math.gamma(2.5))
        assert moment_analytic(w, 3, 1) == pytest.approx(oracle, rel=1e-12)

    def test_custom_has_no_closed_form(self):
        w = WeightSpec(family=Family.CUSTOM, custom_radial=lambda r: math.exp(-r),
                       decays_superpolynomially=True)
        with pytest.raises(DomainError):
            moment_analytic(w, 2, 0)


class TestQuadrature:
    def test_gaussian(self):
        w = BUILTIN_SPECS["gaussian"]
        assert moment_quadrature(w, 2, 1, 1e-10) == pytest.approx(1.0, abs=1e-10)

    def test_legendre_d3(self):
        w = BUILTIN_SPECS["legendre"]
        assert moment_quadrature(w, 3, 1, 1e-10) == pytest.approx(4.0 * PI / 15.0,
                                                                  rel=1e-10)

    def test_fermi_matches_analytic(self):
        w = BUILTIN_SPECS["fermi_dirac"]
        a = moment_analytic(w, 2, 0)
        q = moment_quadrature(w, 2, 0, 1e-8)
        assert q == pytest.approx(a, rel=1e-8)

    @pytest.mark.parametrize("name", sorted(BUILTIN_SPECS))
    def test_all_families_cross_route(self, name):
        w = BUILTIN_SPECS[name]
        rel_tol = 1e-10
        for D in range(1, 5):
            if name == "yukawa" and D < 2:
                continue
            for N in range(5):
                a = moment_analytic(w, D, N)
                q = moment_quadrature(w, D, N, rel_tol)
                assert abs(a - q) / a <= 10.0 * rel_tol
                assert a > 0.0 and q > 0.0

    def test_degenerate_fermi_regime(self):
        w = WeightSpec(family=Family.FERMI_DIRAC, theta=1.0, z=math.exp(20.0))
        a = moment_analytic(w, 3, 2)
        q = moment_quadrature(w, 3, 2, 1e-10)
        assert q == pytest.approx(a, rel=1e-9)


class TestBuildTable:
    def test_gaussian_d4(self):
        t = build_moment_table(BUILTIN_SPECS["gaussian"], 4)
        assert t.values == (1.0, 1.0, 1.0, 1.0, 1.0)
        assert t.source == "analytic"

    def test_legendre_d1_values(self):
        t = build_moment_table(BUILTIN_SPECS["legendre"], 1)
        for got, expected in zip(t.values, LEGENDRE_1D):
            assert got == pytest.approx(expected, rel=1e-14)

    def test_chebyshev2_d1_values(self):
        t = build_moment_table(BUILTIN_SPECS["chebyshev2"], 1)
        for got, expected in zip(t.values, CHEBYSHEV2_1D):
            assert got == pytest.approx(expected, rel=1e-14)

    def test_custom_weight_goes_through_quadrature(self):
        lam = 3.7
        w = WeightSpec(
            family=Family.CUSTOM,
            custom_radial=lambda r: lam / (2 * PI) * math.exp(-r * r / 2.0),
            decays_superpolynomially=True)
        t = build_moment_table(w, 2)
        assert t.source == "quadrature"
        for v in t.values:
            assert v == pytest.approx(lam, rel=1e-9)

    def test_force_quadrature_flag(self):
        t = build_moment_table(BUILTIN_SPECS["legendre"], 2, force_quadrature=True)
        assert t.source == "quadrature"

    def test_odd_orders_are_zero_and_range_checked(self):
        t = build_moment_table(BUILTIN_SPECS["gaussian"], 2)
        assert t.i2n(3) == 0.0
        with pytest.raises(DomainError):
            t.i2n(10)

    def test_json_round_trip(self):
        t = build_moment_table(BUILTIN_SPECS["legendre"], 2)
        obj = json.loads(json.dumps(t.to_json_obj()))
        back = MomentTable.from_json_obj(obj)
        assert back == t

    def test_positive_values_enforced(self):
        with pytest.raises(DomainError):
            MomentTable(D=1, values=(1.0, -0.5), source="analytic")


class TestGrapheneSeries:
    @pytest.mark.parametrize("D", [1, 2, 3])
    @pytest.mark.parametrize("N", [0, 1, 2, 3, 4])
    def test_matches_quadrature_near_unit_fugacity(self, D, N):
        w = WeightSpec(family=Family.GRAPHENE, theta=1.0, z=0.98)
        q = moment_quadrature(w, D, N, 1e-11)
        s = graphene_series_i2n(D, N, 1.0, 0.98)
        assert s == pytest.approx(q, rel=1e-4)

    def test_cubic_error_decay(self):
        errs = []
        for z in (0.95, 0.99):
            w = WeightSpec(family=Family.GRAPHENE, theta=1.0, z=z)
            q = moment_quadrature(w, 2, 1, 1e-11)
            errs.append(abs(graphene_series_i2n(2, 1, 1.0, z) - q) / q)
        # (0.05/0.01)^3 = 125; allow a generous band around the cubic rate
        assert 40.0 < errs[0] / errs[1] < 400.0


class TestWeightSpecValidation:
    def test_yukawa_needs_d2(self):
        w = WeightSpec(family=Family.YUKAWA, mu=1.0)
        with pytest.raises(DomainError):
            moment_analytic(w, 1, 0)

    def test_bose_fugacity_range(self):
        with pytest.raises(DomainError):
            WeightSpec(family=Family.BOSE_EINSTEIN, z=1.2)
        with pytest.raises(DomainError):
            WeightSpec(family=Family.BOSE_EINSTEIN, z=0.0)

    def test_fermi_fugacity_positive(self):
        with pytest.raises(DomainError):
            WeightSpec(family=Family.FERMI_DIRAC, z=-1.0)

    def test_graphene_fugacity_cap(self):
        WeightSpec(family=Family.GRAPHENE, z=1.02)  # small overshoot allowed
        with pytest.raises(DomainError):
            WeightSpec(family=Family.GRAPHENE, z=1.5)

    def test_yukawa_mu_positive(self):
        with pytest.raises(DomainError):
            WeightSpec(family=Family.YUKAWA, mu=-1.0)

    def test_custom_needs_decay_certificate(self):
        with pytest.raises(DomainError):
            WeightSpec(family=Family.CUSTOM, custom_radial=lambda r: math.exp(-r))
        WeightSpec(family=Family.CUSTOM, custom_radial=lambda r: 1.0, xi_max=2.0)

    def test_bounded_families_pin_cutoff(self):
        assert WeightSpec(family=Family.LEGENDRE).xi_max == 1.0
        assert math.isinf(WeightSpec(family=Family.GAUSSIAN).xi_max)

    def test_from_dict(self):
        w = WeightSpec.from_dict({"family": "fermi_dirac", "theta": 1.0, "z": 0.5})
        assert w.family is Family.FERMI_DIRAC and w.z == 0.5
        with pytest.raises(DomainError):
            WeightSpec.from_dict({"family": "nope"})
