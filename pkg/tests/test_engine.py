import numpy as np
import pytest

from mapbias import (
    BoundaryPolicy,
    ConfigurationError,
    MapParams,
    RetryContext,
    RngStream,
    apply_boundary,
    generate_trajectory,
    sample_x0,
    step,
)


class TestStep:
    def test_parabola_vertex(self):
        assert step(0.5, 4.0, 0.0) == 1.0

    def test_fixed_point(self):
        # 0.6 is the fixed point 1 - 1/mu for mu = 2.5
        assert abs(step(0.6, 2.5, 0.0) - 0.6) < 1e-12

    def test_with_noise_term(self):
        assert abs(step(0.2, 3.0, 0.1) - 0.58) < 1e-12

    def test_raw_value_may_leave_unit_interval(self):
        assert step(0.5, 4.0, 0.3) == pytest.approx(1.3)


class TestMapParams:
    def test_defaults(self):
        p = MapParams(mu=3.0)
        assert p.n == 25
        assert p.transient_skip == 0
        assert p.boundary_policy is BoundaryPolicy.CLAMP

    def test_accepts_closed_mu_range(self):
        # mu = 0 is the pure-noise control cell of the standard grid
        MapParams(mu=0.0, eps=0.125)
        MapParams(mu=4.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"mu": -0.1},
            {"mu": 4.1},
            {"mu": 1.0, "eps": -0.5},
            {"mu": 1.0, "delta": -0.1},
            {"mu": 1.0, "n": 0},
            {"mu": 1.0, "n": 65},
            {"mu": 1.0, "transient_skip": -1},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            MapParams(**kwargs)

    def test_immutable(self):
        p = MapParams(mu=3.0)
        with pytest.raises(AttributeError):
            p.mu = 2.0


class TestApplyBoundary:
    def test_clamp_floor(self):
        assert apply_boundary(-0.2, BoundaryPolicy.CLAMP) == 0.0

    def test_clamp_identity_inside(self):
        assert apply_boundary(0.7, BoundaryPolicy.CLAMP) == 0.7

    def test_clamp_ceiling(self):
        assert apply_boundary(1.3, BoundaryPolicy.CLAMP) == 1.0

    def test_resample_passthrough_inside(self):
        assert apply_boundary(0.4, BoundaryPolicy.RESAMPLE) == 0.4

    def test_resample_redraws_until_inside(self):
        rng = RngStream(3, 0)
        ctx = RetryContext(det_value=0.1, eps=0.375)
        x = apply_boundary(-0.05, BoundaryPolicy.RESAMPLE, rng, ctx)
        assert 0.0 <= x <= 1.0
        # the redraw always lands within eps of the deterministic image
        assert abs(x - 0.1) <= 0.375

    def test_resample_budget_exhaustion(self):
        # A deterministic image this far outside [0, 1] can never be fixed.
        rng = RngStream(3, 0)
        ctx = RetryContext(det_value=5.0, eps=0.1, budget=1000)
        with pytest.raises(ConfigurationError):
            apply_boundary(5.0, BoundaryPolicy.RESAMPLE, rng, ctx)

    def test_resample_requires_context(self):
        with pytest.raises(ValueError):
            apply_boundary(1.5, BoundaryPolicy.RESAMPLE)


class TestGenerateTrajectory:
    def test_attracting_fixed_point(self):
        params = MapParams(mu=2.5, n=5, transient_skip=1000)
        traj = generate_trajectory(params, 0.2, RngStream(1, 0))
        assert traj.shape == (5,)
        assert np.all(np.abs(traj - 0.6) < 1e-9)

    def test_hand_iteration_mu_one(self):
        params = MapParams(mu=1.0, n=3)
        traj = generate_trajectory(params, 0.3, RngStream(1, 0))
        assert traj == pytest.approx([0.21, 0.1659, 0.13837719], abs=1e-12)

    def test_period_three_window(self):
        params = MapParams(mu=3.83, n=6, transient_skip=1000)
        traj = generate_trajectory(params, 0.3, RngStream(1, 0))
        assert np.all(np.abs(traj[:3] - traj[3:]) < 1e-6)

    def test_deterministic_given_stream(self):
        params = MapParams(mu=3.0, eps=0.125, n=25, transient_skip=10)
        a = generate_trajectory(params, 0.37, RngStream(42, 7))
        b = generate_trajectory(params, 0.37, RngStream(42, 7))
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        params = MapParams(mu=3.0, eps=0.125, n=25)
        a = generate_trajectory(params, 0.37, RngStream(42, 0))
        b = generate_trajectory(params, 0.37, RngStream(42, 1))
        assert not np.array_equal(a, b)

    def test_values_stay_in_unit_interval(self):
        for policy in BoundaryPolicy:
            params = MapParams(
                mu=1.0, eps=0.375, n=64, transient_skip=100, boundary_policy=policy
            )
            traj = generate_trajectory(params, 0.5, RngStream(11, 0))
            assert np.all((traj >= 0.0) & (traj <= 1.0))

    def test_rejects_boundary_x0(self):
        params = MapParams(mu=2.0)
        for x0 in (0.0, 1.0, -0.3, 1.5):
            with pytest.raises(ValueError):
                generate_trajectory(params, x0, RngStream(1, 0))

    @pytest.mark.parametrize("mu", [1.5, 2.0, 2.5, 2.9])
    def test_fixed_point_convergence(self, mu):
        # mu in (1, 2.9], no noise: trajectories settle at 1 - 1/mu
        params = MapParams(mu=mu, n=5, transient_skip=10**4)
        for seed in range(5):
            x0 = sample_x0(RngStream(seed, 0))
            traj = generate_trajectory(params, x0, RngStream(seed, 1))
            assert np.all(np.abs(traj - (1.0 - 1.0 / mu)) < 1e-9)

    @pytest.mark.parametrize("mu", [0.4, 1.0])
    def test_decay_to_zero_without_noise(self, mu):
        # mu <= 1, no noise: non-increasing orbit heading to 0
        params = MapParams(mu=mu, n=64)
        traj = generate_trajectory(params, 0.9, RngStream(1, 0))
        assert np.all(np.diff(traj) <= 0.0)
        late = generate_trajectory(
            MapParams(mu=mu, n=1, transient_skip=10**4), 0.9, RngStream(1, 0)
        )
        assert late[0] < 1e-3

    def test_noise_bound_under_clamp(self):
        # Whenever the raw value stays inside [0, 1], the recorded value
        # is det + omega, so it sits within eps of the noise-free image.
        mu, eps = 3.0, 0.125
        rng = RngStream(5, 0)
        x = 0.37
        for _ in range(2000):
            det = step(x, mu)
            raw = det + rng.uniform(-eps, eps)
            nxt = apply_boundary(raw, BoundaryPolicy.CLAMP)
            if 0.0 <= raw <= 1.0:
                assert abs(nxt - det) <= eps
            x = nxt


class TestSampleX0:
    def test_deterministic_for_fresh_streams(self):
        assert sample_x0(RngStream(1, 0)) == sample_x0(RngStream(1, 0))

    def test_open_interval_and_mean(self):
        rng = RngStream(123, 0)
        draws = np.array([sample_x0(rng) for _ in range(10**6)])
        assert draws.min() > 0.0
        assert draws.max() < 1.0
        assert abs(draws.mean() - 0.5) < 0.002


class TestRngStream:
    def test_rejects_out_of_range_ids(self):
        with pytest.raises(ValueError):
            RngStream(-1, 0)
        with pytest.raises(ValueError):
            RngStream(0, 2**64)

    def test_same_stream_same_sequence(self):
        a = RngStream(9, 4).uniform(size=100)
        b = RngStream(9, 4).uniform(size=100)
        assert np.array_equal(a, b)

    def test_distinct_streams_independent_looking(self):
        a = RngStream(9, 0).uniform(size=1000)
        b = RngStream(9, 1).uniform(size=1000)
        assert not np.array_equal(a, b)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.1
