import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypbm.kernels import Dimension, EvaluationPoint
from hypbm.quadrature import QuadratureSpec
from hypbm.tails import (
    FluctuationPoint,
    direct_kernel_quadrature,
    normal_tail,
    radial_density,
    tail,
    tail_d3,
    tail_even,
    tail_odd,
)


class TestNormalTail:
    def test_center_and_limits(self):
        assert normal_tail(0.0) == 0.5
        assert normal_tail(math.inf) == 0.0
        assert normal_tail(-math.inf) == 1.0

    def test_reference_value(self):
        assert normal_tail(1.0) == pytest.approx(0.15865525393145705, rel=1e-13)

    @pytest.mark.parametrize("x", [-35.0, -8.0, -2.5, -0.3, 0.7, 3.0, 8.0, 20.0, 35.0])
    def test_against_mpmath(self, x):
        want = float(mp.ncdf(-mp.mpf(x)))
        assert normal_tail(x) == pytest.approx(want, rel=1e-12)

    @given(st.floats(min_value=-30, max_value=30))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_and_range(self, x):
        assert 0.0 <= normal_tail(x) <= 1.0
        assert normal_tail(x) + normal_tail(-x) == pytest.approx(1.0, abs=1e-14)


class TestFluctuationPoint:
    def test_threshold_pins_at_zero(self):
        fp = FluctuationPoint(Dimension(4), 4.0, -4.0)
        assert fp.boundary_x == -3.0
        assert fp.threshold == 0.0

    def test_threshold_formula(self):
        fp = FluctuationPoint(Dimension(3), 4.0, 0.5)
        assert fp.threshold == pytest.approx(0.5 * 2.0 + 4.0, rel=1e-15)

    def test_zero_exactly_at_boundary(self):
        fp = FluctuationPoint(Dimension(2), 9.0, -1.5)
        assert fp.threshold == 0.0

    def test_rejects_tiny_t(self):
        with pytest.raises(ValueError):
            FluctuationPoint(Dimension(3), 1e-5, 0.0)


class TestRadialDensity:
    def test_zero_at_origin(self):
        assert radial_density(3, EvaluationPoint(1.0, 0.0)) == 0.0

    def test_total_mass(self):
        res = direct_kernel_quadrature(3, 1.0, -10.0)
        assert res.value == pytest.approx(1.0, abs=1e-6)

    def test_mode_near_linear_growth(self):
        rs = np.linspace(10.0, 30.0, 401)
        dens = [radial_density(3, EvaluationPoint(20.0, float(r))) for r in rs]
        mode = float(rs[int(np.argmax(dens))])
        assert abs(mode - 20.0) < 2.0


class TestTailD3:
    def test_limits(self):
        assert tail_d3(1.0, 40.0).value == pytest.approx(0.0, abs=1e-12)
        assert tail_d3(1.0, -40.0).value == pytest.approx(1.0, abs=1e-12)

    def test_large_time_center(self):
        assert tail_d3(100.0, 0.0).value == pytest.approx(0.5398942280401433, abs=1e-10)

    def test_unit_time_center(self):
        assert tail_d3(1.0, 0.0).value == pytest.approx(0.8677014458364238, abs=1e-10)

    @pytest.mark.parametrize("x", [-2.0, -0.5, 0.0, 0.7, 2.5])
    def test_matches_direct_quadrature(self, x):
        a = tail_d3(1.0, x)
        b = direct_kernel_quadrature(3, 1.0, x)
        assert a.value == pytest.approx(b.value, abs=1e-8)


class TestTailOdd:
    def test_d3_reduces_exactly(self):
        a = tail_odd(3, 2.0, 0.3)
        b = tail_d3(2.0, 0.3)
        assert a.value == b.value

    def test_d5_vs_direct(self):
        a = tail_odd(5, 2.0, 0.5)
        b = direct_kernel_quadrature(5, 2.0, 0.5)
        assert a.value == pytest.approx(b.value, abs=1e-7)

    def test_boundary_terms_vanish_below_threshold(self):
        # T = 0 here, so the value is the reduced d=3 tail alone (= 1)
        t = 2.0
        x = -2.0 * math.sqrt(t) - 1.0
        est = tail_odd(5, t, x)
        assert est.value == pytest.approx(1.0, abs=1e-10)

    def test_rejects_even_dimension(self):
        with pytest.raises(ValueError):
            tail_odd(4, 1.0, 0.0)


class TestTailEven:
    def test_d2_vs_direct(self):
        for t, x in [(5.0, 0.3), (1.0, -1.0), (20.0, 1.5)]:
            a = tail_even(2, t, x)
            b = direct_kernel_quadrature(2, t, x)
            assert a.value == pytest.approx(b.value, abs=1e-6), (t, x)

    def test_d4_vs_direct(self):
        a = tail_even(4, 2.0, 1.0)
        b = direct_kernel_quadrature(4, 2.0, 1.0)
        assert a.value == pytest.approx(b.value, abs=1e-5)

    def test_pinned_threshold_gives_full_mass(self):
        for d, t in [(2, 1.0), (4, 5.0), (6, 100.0), (4, 1000.0)]:
            xb = FluctuationPoint(Dimension(d), t, 0.0).boundary_x
            assert tail_even(d, t, xb - 2.5).value == pytest.approx(1.0, abs=1e-9), (d, t)

    def test_branch_continuity(self):
        eps = 1e-6
        for d, t in [(2, 3.0), (4, 7.0), (6, 30.0)]:
            xb = FluctuationPoint(Dimension(d), t, 0.0).boundary_x
            lo = tail_even(d, t, xb - eps).value
            hi = tail_even(d, t, xb + eps).value
            assert abs(hi - lo) <= 1e-6 + 2.0 * eps, (d, t)

    def test_large_time_center_excess_constant(self):
        # sqrt(t) * (tail - 1/2) approaches 2 ln 2 / sqrt(2 pi) for d = 2
        got = math.sqrt(1e4) * (tail_even(2, 1e4, 0.0).value - 0.5)
        assert got == pytest.approx(2.0 * math.log(2.0) / math.sqrt(2.0 * math.pi), rel=1e-3)

    def test_rejects_odd_dimension(self):
        with pytest.raises(ValueError):
            tail_even(5, 1.0, 0.0)


class TestDispatchAndBounds:
    def test_method_tags(self):
        assert tail(3, 1.0, 0.0).method == "closed_form_d3"
        assert tail(5, 1.0, 0.0).method == "odd_reduction"
        assert tail(2, 1.0, 0.0).method == "even_decomposition"
        assert direct_kernel_quadrature(3, 1.0, 0.0).method == "direct_kernel_quadrature"

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_monotone_in_x(self, d):
        xs = np.linspace(-4.0, 4.0, 17)
        vals = [tail(d, 3.0, float(x)).value for x in xs]
        for a, b in zip(vals, vals[1:]):
            assert b <= a + 1e-9

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_values_in_unit_interval(self, d):
        for x in (-30.0, -3.0, 0.0, 3.0, 30.0):
            v = tail(d, 2.0, x).value
            assert 0.0 <= v <= 1.0

    def test_full_mass_below_pinned_threshold(self):
        for d in (2, 3, 4, 5):
            x = -0.5 * (d - 1) * math.sqrt(2.0) - 10.0
            assert tail(d, 2.0, x).value >= 1.0 - 1e-8

    def test_clt_convergence_monotone(self):
        for d in (2, 5):
            for x in (-1.0, 0.5, 2.0):
                deltas = [abs(tail(d, t, x).value - normal_tail(x)) for t in (10.0, 1e2, 1e3, 1e4)]
                for a, b in zip(deltas, deltas[1:]):
                    assert b <= 1.1 * a, (d, x, deltas)

    def test_clt_value_at_large_time(self):
        assert tail(3, 1e4, 1.0).value == pytest.approx(normal_tail(1.0), abs=2e-2)

    def test_stabilized_integrand_pointwise_bound(self):
        # the dominant even-d integrand (per unit 2w jacobian) is sandwiched
        # between 0 and (1 + |u|) e^{-u^2/2} 2^{n - 1/2}
        from hypbm.logspace import vlogcosh, vlogsinh

        d, t, x = 4, 3.0, -0.7
        n = 2
        sqrt_t = math.sqrt(t)
        T = FluctuationPoint(Dimension(d), t, x).threshold
        w = np.linspace(1e-6, 3.0, 200)
        u = x + w * w
        y = u * sqrt_t + (n - 0.5) * t
        log_gap = math.log(2.0) + vlogsinh(0.5 * (y + T)) + vlogsinh(0.5 * sqrt_t * w * w) - vlogcosh(y)
        vals = (1.0 + u / ((n - 0.5) * sqrt_t)) * np.exp(-0.5 * u * u + (n - 0.5) * (np.log1p(np.exp(-2 * y)) + log_gap))
        bound = (1.0 + np.abs(u)) * np.exp(-0.5 * u * u) * 2.0 ** (n - 0.5)
        assert np.all(vals >= 0.0)
        assert np.all(vals <= bound + 1e-12)


class TestDirectOracleGuards:
    def test_rejects_large_t(self):
        with pytest.raises(ValueError):
            direct_kernel_quadrature(3, 100.0, 0.0)

    def test_rejects_unsupported_dimension(self):
        with pytest.raises(ValueError):
            direct_kernel_quadrature(8, 1.0, 0.0)

    def test_error_estimate_within_spec(self):
        spec = QuadratureSpec()
        res = direct_kernel_quadrature(3, 1.0, 0.0, spec)
        assert res.error_estimate <= 1e-7
