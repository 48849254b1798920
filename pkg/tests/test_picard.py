import numpy as np
import pytest

from picard_ns.picard import (
    VelocityHistory,
    extract_profiles,
    first_iterate,
    max_divergence,
    run_iteration,
    second_increment,
)
from picard_ns.spectral import ForceParams, GridSpec, TimeGrid, VelocityField


def scaled_history(hist: VelocityHistory, alpha: float) -> VelocityHistory:
    out = VelocityHistory(hist.grid, hist.tg, hist.store_every)
    for m, u in zip(hist.steps, hist.fields):
        out.record(m, VelocityField(alpha * u.ux, alpha * u.uy))
    return out


@pytest.fixture(scope="module")
def coarse():
    return GridSpec(8.0, 64), TimeGrid(1.0, 40)


class TestFirstIterate:
    def test_starts_at_rest_and_stays_solenoidal(self, coarse):
        grid, tg = coarse
        h = first_iterate(ForceParams(2, 3.0, 2.0, 0.1), grid, tg)
        assert h.steps[0] == 0 and h.fields[0].max_magnitude() == 0.0
        assert h.steps[-1] == tg.steps
        assert h.max_magnitude > 0
        for u in h.fields[1:]:
            assert max_divergence(u, grid) <= 1e-10 * u.max_magnitude()

    def test_linear_in_amplitude(self, coarse):
        grid, tg = coarse
        a = first_iterate(ForceParams(1, 1.0, 2.0, 0.1), grid, tg).max_magnitude
        b = first_iterate(ForceParams(1, 2.0, 2.0, 0.1), grid, tg).max_magnitude
        tiny = first_iterate(ForceParams(1, 1e-9, 2.0, 0.1), grid, tg).max_magnitude
        assert abs(b - 2 * a) <= 1e-12 * 2 * a
        assert tiny == pytest.approx(1e-9 * a, rel=1e-12)

    def test_storage_thinning_keeps_maximum(self, coarse):
        grid, tg = coarse
        p = ForceParams(1, 1.0, 2.0, 0.1)
        every = first_iterate(p, grid, tg, store_every=1)
        thin = first_iterate(p, grid, tg, store_every=7)
        assert thin.steps == [0, 7, 14, 21, 28, 35, 40]
        assert thin.max_magnitude == every.max_magnitude

    def test_mode_one_angular_structure(self):
        # radial velocity on a circle should be a pure cos(phi) profile
        grid = GridSpec(8.0, 256)
        h = first_iterate(ForceParams(1, 1.0, 2.0, 0.01), grid, TimeGrid(1.0, 50), store_every=50)
        u = h.final
        x, y = grid.xy
        r = np.hypot(x, y)
        with np.errstate(invalid="ignore"):
            ur = (u.ux * x + u.uy * y) / r
        phis = np.arctan2(y, x)
        ring = np.abs(r - 0.5) < 0.5 * grid.dx
        phi, val = phis[ring], ur[ring]
        basis = np.column_stack([np.cos(m * phi) for m in range(5)] + [np.sin(m * phi) for m in range(1, 5)])
        coef, *_ = np.linalg.lstsq(basis, val, rcond=None)
        assert abs(coef[1]) > 0
        assert coef[1] ** 2 / np.sum(coef**2) > 0.999


class TestSecondIncrement:
    def test_zero_first_iterate(self, coarse):
        grid, tg = coarse
        u1 = first_iterate(ForceParams(1, 1.0, 2.0, 0.1), grid, tg, store_every=1)
        u2 = second_increment(scaled_history(u1, 0.0), ForceParams(1, 1.0, 2.0, 0.1), grid, tg)
        assert u2.max_magnitude == 0.0

    @pytest.mark.parametrize("alpha", [0.5, 3.0, -2.0])
    def test_quadratic_scaling(self, coarse, alpha):
        grid, tg = coarse
        p = ForceParams(2, 50.0, 2.5, 0.05)
        u1 = first_iterate(p, grid, tg, store_every=1)
        base = second_increment(u1, p, grid, tg, store_every=1)
        scaled = second_increment(scaled_history(u1, alpha), p, grid, tg, store_every=1)
        for a, b in zip(base.fields[1:], scaled.fields[1:]):
            ref = alpha**2 * np.stack([a.ux, a.uy])
            err = np.abs(np.stack([b.ux, b.uy]) - ref).max()
            assert err <= 1e-10 * np.abs(ref).max()

    def test_matches_lockstep_run(self, coarse):
        grid, tg = coarse
        p = ForceParams(3, 20.0, 2.0, 0.05)
        u1 = first_iterate(p, grid, tg, store_every=1)
        u2 = second_increment(u1, p, grid, tg, store_every=1)
        res = run_iteration(p, grid, tg, store_every=1)
        assert res.max_u1 == u1.max_magnitude
        assert res.max_u2star == u2.max_magnitude
        assert np.array_equal(res.u2star_history.final.ux, u2.final.ux)

    def test_thinned_history_is_interpolated(self, coarse):
        grid, tg = coarse
        p = ForceParams(1, 10.0, 2.0, 0.1)
        exact = run_iteration(p, grid, tg).max_u2star
        approx = second_increment(first_iterate(p, grid, tg, store_every=4), p, grid, tg).max_magnitude
        assert approx == pytest.approx(exact, rel=1e-2)

    def test_grid_mismatch(self, coarse):
        grid, tg = coarse
        p = ForceParams(1, 1.0, 2.0, 0.1)
        u1 = first_iterate(p, grid, tg)
        with pytest.raises(ValueError):
            second_increment(u1, p, GridSpec(8.0, 32), tg)

    def test_smaller_than_first_iterate_at_largest_amplitude(self):
        res = run_iteration(ForceParams(1, 1000.0, 17.78, 0.01), GridSpec(), TimeGrid(), keep_fields=False)
        assert res.max_u2star < res.max_u1


class TestRunIteration:
    def test_zero_amplitude(self, coarse):
        grid, tg = coarse
        res = run_iteration(ForceParams(1, 0.0, 2.0, 0.1), grid, tg)
        assert res.max_u1 == 0.0 and res.max_u2star == 0.0
        assert res.ratio is None and not res.degenerate

    def test_underflowing_force_is_degenerate(self, coarse):
        grid, tg = coarse
        res = run_iteration(ForceParams(1, 1e-320, 2.0, 0.1), grid, tg)
        assert res.degenerate and res.ratio is None

    def test_divergence_tracked(self, coarse):
        grid, tg = coarse
        res = run_iteration(ForceParams(2, 30.0, 2.0, 0.05), grid, tg, store_every=1)
        assert 0 < res.u1_history.max_rel_divergence <= 1e-10
        assert res.u2star_history.max_rel_divergence <= 1e-10

    def test_divergence_measured_against_run_peak(self, coarse):
        grid, tg = coarse
        x, y = grid.xy
        h = VelocityHistory(grid, tg, store_every=1)
        h.record(1, VelocityField(np.ones_like(x), np.zeros_like(x)))
        # a decayed, slightly compressible snapshot
        h.record(2, VelocityField(1e-6 * np.sin(np.pi * x / grid.L), np.zeros_like(x)))
        expected = max_divergence(h.fields[1], grid) / 1.0
        assert h.max_abs_divergence == pytest.approx(expected)
        assert h.max_rel_divergence == pytest.approx(expected)

    def test_lean_mode_keeps_final_only(self, coarse):
        grid, tg = coarse
        res = run_iteration(ForceParams(1, 1.0, 2.0, 0.1), grid, tg, keep_fields=False)
        assert res.u1_history.steps == [tg.steps]
        assert res.ratio == run_iteration(ForceParams(1, 1.0, 2.0, 0.1), grid, tg).ratio


@pytest.fixture(scope="module")
def result():
    return run_iteration(ForceParams(1, 10.0, 2.5, 0.05), GridSpec(8.0, 128), TimeGrid(1.0, 50))


class TestProfiles:
    def test_origin_identical_for_all_angles(self, result):
        s = extract_profiles(result, [0.0], np.linspace(0, np.pi, 9))
        assert len({x.amp1 for x in s}) == 1 and len({x.amp2 for x in s}) == 1
        assert s[0].amp1 == pytest.approx(result.u1_history.final.magnitude()[64, 64], rel=1e-12)

    def test_reflection_symmetry(self, result):
        phis = np.linspace(0, np.pi, 17)
        upper = extract_profiles(result, [0.5, 1.0, 2.5], phis)
        lower = extract_profiles(result, [0.5, 1.0, 2.5], 2 * np.pi - phis)
        scale = max(s.amp1 for s in upper)
        for a, b in zip(upper, lower):
            assert abs(a.amp1 - b.amp1) <= 1e-10 * scale
            assert abs(a.amp2 - b.amp2) <= 1e-10 * scale

    def test_layout_and_sign(self, result):
        s = extract_profiles(result, [0.0, 1.5], [0.0, 1.0, 2.0])
        assert [(x.r, x.phi) for x in s] == [(0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (1.5, 0.0), (1.5, 1.0), (1.5, 2.0)]
        assert all(x.amp1 >= 0 and x.amp2 >= 0 for x in s)

    @pytest.mark.parametrize("r", [-0.1, 8.0, 7.95])
    def test_radius_outside_grid(self, result, r):
        with pytest.raises(ValueError):
            extract_profiles(result, [r], [0.0])
