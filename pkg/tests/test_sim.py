import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypbm.sim import (
    SimulationConfig,
    empirical_tail,
    ks_distance_to_normal,
    simulate_radial,
    simulate_radial_pair,
)
from hypbm.tails import tail

FAST = dict(t=2.0, step=1e-2, paths=4000, seed=11)


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"d": 1},
            {"t": 0.0},
            {"step": 0.0},
            {"step": 3.0},
            {"paths": 0},
            {"seed": -1},
            {"r0": 0.0},
            {"r0": 2.0},
        ],
    )
    def test_rejects_bad_fields(self, kwargs):
        base = dict(d=3, t=2.0, step=1e-2, paths=10, seed=1, r0=1e-3)
        base.update(kwargs)
        with pytest.raises(ValueError):
            SimulationConfig(**base)


class TestDeterminism:
    def test_single_path_bit_identical(self):
        cfg = SimulationConfig(d=3, t=1.0, step=1e-2, paths=1, seed=99)
        assert np.array_equal(simulate_radial(cfg), simulate_radial(cfg))

    def test_prefix_stability(self):
        # path i does not depend on how many paths were requested
        a = simulate_radial(SimulationConfig(d=3, t=1.0, step=1e-2, paths=7, seed=5))
        b = simulate_radial(SimulationConfig(d=3, t=1.0, step=1e-2, paths=300, seed=5))
        assert np.array_equal(a, b[:7])

    def test_seed_changes_output(self):
        a = simulate_radial(SimulationConfig(d=3, t=1.0, step=1e-2, paths=16, seed=1))
        b = simulate_radial(SimulationConfig(d=3, t=1.0, step=1e-2, paths=16, seed=2))
        assert not np.array_equal(a, b)


class TestLawChecks:
    def test_lln_trend(self):
        means = []
        for t in (5.0, 20.0, 80.0):
            s = simulate_radial(SimulationConfig(d=3, t=t, step=5e-3, paths=4000, seed=3))
            means.append(abs(float(s.mean()) / t - 1.0))
        assert means[2] < means[0]
        assert means[2] < 0.05

    def test_lln_d2_level_against_exact_mean(self):
        # the finite-t law sits measurably above t/2 (that offset is the
        # whole point of the rate experiments), so compare against the exact
        # mean of the radial law rather than the asymptote
        import numpy as np

        from hypbm.kernels import EvaluationPoint
        from hypbm.quadrature import DEFAULT_SPEC, integrate_adaptive
        from hypbm.tails import radial_density

        t = 20.0
        s = simulate_radial(SimulationConfig(d=2, t=t, step=5e-3, paths=4000, seed=4))

        def f(rs):
            return np.array([r * radial_density(2, EvaluationPoint(t, float(r))) if r > 0 else 0.0 for r in rs])

        upper = 0.5 * t + 12.0 * math.sqrt(t)
        exact_mean = integrate_adaptive(f, 0.0, upper, DEFAULT_SPEC, seed_points=[0.5 * t]).value
        se = float(s.std(ddof=1)) / math.sqrt(len(s))
        assert abs(float(s.mean()) - exact_mean) <= 3.0 * se
        assert abs(float(s.mean()) / t - 0.5) < 0.15

    def test_empirical_matches_analytic_tail(self):
        s = simulate_radial(SimulationConfig(d=3, t=5.0, step=2e-3, paths=20000, seed=8))
        for x in (-1.0, 0.0, 1.0):
            est = empirical_tail(s, 3, 5.0, x)
            want = tail(3, 5.0, x).value
            assert abs(est.estimate - want) <= 4.0 * est.standard_error, x

    def test_insensitive_to_starting_radius(self):
        a = simulate_radial(SimulationConfig(d=3, **FAST, r0=1e-3))
        b = simulate_radial(SimulationConfig(d=3, **FAST, r0=1e-2))
        ea = empirical_tail(a, 3, FAST["t"], 0.0)
        eb = empirical_tail(b, 3, FAST["t"], 0.0)
        assert abs(ea.estimate - eb.estimate) <= 4.0 * math.hypot(ea.standard_error, eb.standard_error)

    def test_reflection_floor_rarely_hit(self):
        _, stats = simulate_radial(SimulationConfig(d=2, t=3.0, step=1e-2, paths=2000, seed=21), collect_stats=True)
        assert stats.reflection_fraction < 1e-3

    def test_coupled_pair_tracks_closely(self):
        coarse, fine = simulate_radial_pair(SimulationConfig(d=3, **FAST))
        assert coarse.shape == fine.shape
        # same Brownian path: the two step sizes agree to the step-level bias
        assert float(np.mean(np.abs(coarse - fine))) < 0.05

    def test_pair_requires_integral_step_count(self):
        with pytest.raises(ValueError):
            simulate_radial_pair(SimulationConfig(d=3, t=1.0, step=0.3, paths=4, seed=1))


class TestEmpiricalTail:
    def test_minus_infinity_is_certain(self):
        s = simulate_radial(SimulationConfig(d=3, **FAST))
        est = empirical_tail(s, 3, FAST["t"], -math.inf)
        assert est.estimate == 1.0 and est.standard_error == 0.0

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            empirical_tail(np.array([]), 3, 1.0, 0.0)

    @given(st.integers(min_value=1, max_value=2**31), st.floats(min_value=-2, max_value=2))
    @settings(max_examples=25, deadline=None)
    def test_standard_error_formula(self, seed, x):
        rng = np.random.default_rng(seed)
        samples = rng.normal(loc=1.0, scale=1.0, size=256)
        est = empirical_tail(samples, 3, 1.0, x)
        assert est.standard_error == pytest.approx(
            math.sqrt(est.estimate * (1.0 - est.estimate) / 256.0)
        )
        assert 0.0 <= est.estimate <= 1.0


class TestKolmogorovSmirnov:
    def test_bounds(self):
        s = simulate_radial(SimulationConfig(d=3, **FAST))
        dist = ks_distance_to_normal(s, 3, FAST["t"])
        assert 0.0 <= dist <= 1.0

    def test_degenerate_samples(self):
        s = np.full(100, 2.0)
        assert ks_distance_to_normal(s, 3, 1.0) >= 0.5

    def test_matches_scipy(self):
        from scipy.stats import kstest

        rng = np.random.default_rng(7)
        s = rng.normal(size=500)
        got = ks_distance_to_normal(s, 3, 1.0)  # normalization: (s - 1)/1
        want = kstest((s - 1.0), "norm").statistic
        assert got == pytest.approx(want, rel=1e-12)

    def test_exact_normal_samples_close(self):
        rng = np.random.default_rng(12)
        z = rng.normal(size=20000)
        samples = z * math.sqrt(4.0) + 4.0  # matches d=3, t=4 normalization
        assert ks_distance_to_normal(samples, 3, 4.0) < 0.02

    def test_long_horizon_gaussianization(self):
        # roughly 35 s: the KS target combines the t^{-1/2} discrepancy scale
        # (~0.013 at t=1e3) with ~3e-3 Monte Carlo resolution at 1e5 paths;
        # the drift is constant to 1e-8 over most of the trajectory, so the
        # coarse step contributes no visible bias here
        s = simulate_radial(SimulationConfig(d=3, t=1000.0, paths=100_000, seed=12, step=0.1))
        assert ks_distance_to_normal(s, 3, 1000.0) <= 0.02
