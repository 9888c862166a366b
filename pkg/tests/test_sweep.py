import numpy as np
import numpy.testing as npt
import pytest

from hosdt import (
    BinaryGrid,
    ScalarField,
    SolverConfig,
    averaged_init,
    clamp_sign,
    recovery_check,
    run,
    sgnmin,
    shift_correction,
    sign_field,
    solve_signed_quadratic,
    sweep_once,
    sweep_orderings,
    upwind_neighbor_first_order,
    upwind_neighbor_high_order,
)
from hosdt.sweep import MACHINE_EPSILON

from conftest import random_image


class TestConfig:
    def test_defaults(self):
        cfg = SolverConfig()
        assert cfg.order == 5
        assert cfg.speed == 1.0
        assert cfg.delta == 1e-6
        assert cfg.max_iterations == 100
        assert np.isinf(cfg.narrowband_width)
        assert cfg.shift_correction is True
        assert cfg.epsilon == MACHINE_EPSILON == np.finfo(np.float64).eps

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"order": 3},
            {"delta": 0.0},
            {"speed": -1.0},
            {"max_iterations": -1},
            {"narrowband_width": 0.0},
            {"epsilon": 0.0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            SolverConfig(**kwargs)


class TestShiftCorrection:
    def test_midpoint_centering(self):
        phi = ScalarField(np.array([-MACHINE_EPSILON, 0.8]), (1.0,))
        signs = np.array([-1, 1], np.int8)
        shifted, constant = shift_correction(phi, signs)
        assert constant == pytest.approx(0.4)
        npt.assert_allclose(shifted.values, [-0.4, 0.4], atol=1e-12)

    def test_symmetric_field_unchanged(self):
        phi = ScalarField(np.array([-0.5, 0.5]), (1.0,))
        shifted, constant = shift_correction(phi, np.array([-1, 1], np.int8))
        assert constant == 0.0
        npt.assert_array_equal(shifted.values, phi.values)

    def test_single_phase_raises(self):
        phi = ScalarField(np.array([0.5, 0.7]), (1.0,))
        with pytest.raises(ValueError, match="no interface"):
            shift_correction(phi, np.array([1, 1], np.int8))

    def test_symmetry_and_sign_preservation(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            g = random_image(rng, max_size=8)
            phi = averaged_init(g)
            signs = sign_field(g)
            shifted, _ = shift_correction(phi, signs)
            lower = shifted.values[signs < 0].max()
            upper = shifted.values[signs > 0].min()
            assert lower == pytest.approx(-upper, abs=1e-12)
            npt.assert_array_equal(np.sign(shifted.values), signs)


class TestSweepOnce:
    def test_1d_fixed_point(self):
        g = BinaryGrid(np.array([0, 1, 0, 0], bool), (1.0,))
        phi = averaged_init(g)
        cfg = SolverConfig(order=1)
        band = np.ones(g.dims, bool)
        change = sweep_once(phi, sign_field(g), cfg, (1,), band)
        assert change == 0.0
        npt.assert_allclose(phi.values, [0.5, -0.5, 0.5, 1.5])

    def test_fixed_point_for_every_ordering(self):
        g = BinaryGrid(np.array([1, 1, 1, 0, 0, 0], bool), (1.0,))
        phi = averaged_init(g)
        cfg = SolverConfig(order=1)
        band = np.ones(g.dims, bool)
        for ordering in sweep_orderings(1):
            assert sweep_once(phi, sign_field(g), cfg, ordering, band) == 0.0

    @pytest.mark.parametrize("order", [1, 5])
    def test_recovery_after_any_single_sweep(self, order):
        rng = np.random.default_rng(17)
        for _ in range(15):
            g = random_image(rng, d=3, max_size=8)
            phi = averaged_init(g)
            cfg = SolverConfig(order=order)
            band = np.ones(g.dims, bool)
            ordering = sweep_orderings(3)[rng.integers(8)]
            sweep_once(phi, sign_field(g), cfg, ordering, band)
            assert recovery_check(phi, g)

    @pytest.mark.parametrize("order", [1, 5])
    def test_kernel_matches_public_operations(self, order):
        # a single-voxel band makes one kernel update observable; it must equal
        # the composition of the public neighbor/quadratic/clamp operations
        rng = np.random.default_rng(23)
        for _ in range(40):
            g = random_image(rng, max_size=7, min_size=2)
            phi = averaged_init(g)
            signs = sign_field(g)
            cfg = SolverConfig(order=order)
            idx = tuple(int(rng.integers(n)) for n in g.dims)
            s = int(signs[idx])
            neighbor = (
                upwind_neighbor_first_order if order == 1 else upwind_neighbor_high_order
            )
            q = np.array([neighbor(phi, idx, axis, s) for axis in range(g.ndim)])
            hh = np.array(g.spacing)
            key = np.lexsort((hh, s * q))
            candidate = solve_signed_quadratic(q[key], hh[key], cfg.speed, s)
            if order == 1:
                candidate = sgnmin(phi.values[idx], candidate, s)
            expected = clamp_sign(candidate, s, cfg.epsilon)

            band = np.zeros(g.dims, bool)
            band[idx] = True
            change = sweep_once(phi, signs, cfg, sweep_orderings(g.ndim)[0], band)
            assert phi.values[idx] == pytest.approx(expected, rel=1e-14, abs=1e-300)
            assert change == pytest.approx(abs(phi.values[idx] - averaged_init(g).values[idx]), abs=1e-14)

    def test_band_voxels_outside_never_written(self):
        g = BinaryGrid(np.array([0, 1, 0, 0, 0, 0], bool), (1.0,))
        phi = averaged_init(g)
        before = phi.values.copy()
        band = np.zeros(g.dims, bool)
        band[4] = True
        sweep_once(phi, sign_field(g), SolverConfig(order=5), (1,), band)
        untouched = np.ones(g.dims, bool)
        untouched[4] = False
        npt.assert_array_equal(phi.values[untouched], before[untouched])

    def test_degenerate_axis_rejected(self):
        g = BinaryGrid(np.array([[0, 1, 0]], dtype=bool), (1.0, 1.0))
        phi = averaged_init(g)
        with pytest.raises(ValueError, match="degenerate axis"):
            sweep_once(phi, sign_field(g), SolverConfig(), (1, 1), np.ones(g.dims, bool))


class TestRun:
    def test_zero_iterations_returns_init(self):
        g = BinaryGrid(np.array([0, 1, 0, 0], bool), (1.0,))
        phi, report = run(g, SolverConfig(max_iterations=0))
        npt.assert_array_equal(phi.values, averaged_init(g).values)
        assert report.error_history == []
        assert report.iterations_run == 0
        assert not report.converged

    def test_single_phase_raises(self):
        g = BinaryGrid(np.ones((3, 3), bool), (1.0, 1.0))
        with pytest.raises(ValueError, match="no interface"):
            run(g)

    @pytest.mark.parametrize("order", [1, 5])
    def test_output_invariants(self, order):
        rng = np.random.default_rng(29)
        for _ in range(10):
            g = random_image(rng, max_size=9)
            cfg = SolverConfig(order=order, max_iterations=4)
            phi, report = run(g, cfg)
            assert recovery_check(phi, g)
            assert np.abs(phi.values).min() >= cfg.epsilon
            assert len(report.error_history) == report.iterations_run
            if report.converged:
                assert report.error_history[-1] < cfg.delta
            if cfg.shift_correction:
                assert len(report.shift_history) == report.iterations_run

    def test_first_order_converges_exactly(self):
        g = BinaryGrid(np.array([0, 0, 1, 1, 0, 0, 0], bool), (2.0,))
        phi, report = run(g, SolverConfig(order=1, max_iterations=50))
        assert report.converged
        assert report.error_history[-1] < 1e-6

    def test_empty_narrowband_raises(self):
        g = BinaryGrid(np.array([0, 1, 0, 0], bool), (1.0,))
        with pytest.raises(ValueError, match="narrowband"):
            run(g, SolverConfig(narrowband_width=1e-9))

    def test_error_decreases_with_spacing_at_fixed_iteration(self):
        # banded sphere solves: E at iteration 3 is ordered by spacing
        from hosdt.studies import solve_sphere

        E3 = {}
        for h in (4.0, 2.0, 1.0):
            solve = solve_sphere(h, solve_band=15.0, max_iterations=3, delta=1e-300)
            E3[h] = solve.report.error_history[2]
        assert E3[1.0] < E3[2.0] < E3[4.0]
