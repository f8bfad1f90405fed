"""
Unit tests for detection module.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from src.detection import (DerivativeSettings, DetectionKind, SearchSettings, homodyne_stats,
                           intensity_stats, optimal_sensitivity, parity_expectation,
                           phase_sensitivity, search_grid, sensitivity_curve, signal_curve)
from src.exceptions import InvalidParameterError, SearchFailureError, StationaryPointError
from src.gaussian import (InputSpec, apply_bogoliubov, coherent_state,
                          squeezed_vacuum, tensor_product, vacuum_state)
from src.interferometer import InterferometerConfig, opa_map, photon_budget, propagate
from src.utils import load_config


class TestDetectionKind(unittest.TestCase):
    """Test cases for DetectionKind."""

    def test_defaults(self):
        self.assertEqual(DetectionKind.parity().modes, (1,))
        self.assertEqual(DetectionKind.homodyne().theta, 0.0)
        self.assertEqual(DetectionKind.intensity().modes, (0, 1))

    def test_single_mode_required(self):
        with self.assertRaises(InvalidParameterError):
            DetectionKind('parity', (0, 1))

    def test_unknown_name(self):
        with self.assertRaises(InvalidParameterError):
            DetectionKind('heterodyne', (1,))

    def test_from_config(self):
        config = load_config()
        det = DetectionKind.from_name('homodyne', config)
        self.assertIsNone(det.theta)
        self.assertEqual(det.modes, (0, 1))
        self.assertTrue(det.best_quadrature)
        self.assertEqual(det.label, 'HD')
        self.assertEqual(DetectionKind.from_name('intensity', config).modes, (0, 1))

    def test_from_config_fixed_angle(self):
        config = {'detection': {'homodyne_angle': 0.5, 'homodyne_modes': [1]}}
        det = DetectionKind.from_name('homodyne', config)
        self.assertEqual((det.modes, det.theta), ((1,), 0.5))
        self.assertFalse(det.best_quadrature)
        self.assertEqual(DetectionKind.from_name('homodyne', {}).theta, 0.0)

    def test_fixed_angle_needs_single_mode(self):
        with self.assertRaises(InvalidParameterError):
            DetectionKind.homodyne((0, 1), 0.3)
        with self.assertRaises(InvalidParameterError):
            DetectionKind.from_name('homodyne', {'detection': {'homodyne_angle': 0.0,
                                                               'homodyne_modes': [0, 1]}})

    def test_open_angle_only_for_homodyne(self):
        with self.assertRaises(InvalidParameterError):
            DetectionKind('parity', (1,), None)


class TestStatistics(unittest.TestCase):
    """Test cases for single-state detection statistics."""

    def test_parity_vacuum(self):
        self.assertAlmostEqual(parity_expectation(vacuum_state(2), 1), 1.0, places=12)

    def test_parity_coherent(self):
        self.assertAlmostEqual(parity_expectation(coherent_state(1.0), 0), 0.135335, places=6)

    def test_parity_output_at_balanced_point(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        out = propagate(spec, InterferometerConfig.balanced(1.0), 0.0)
        self.assertAlmostEqual(parity_expectation(out, 1), 1.0, places=9)

    def test_parity_bounded_on_random_states(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            state = tensor_product(coherent_state(complex(*rng.normal(size=2))),
                                   squeezed_vacuum(rng.uniform(0, 1.5), rng.uniform(0, 2 * np.pi)))
            state = apply_bogoliubov(state, opa_map(rng.uniform(0, 1.5), rng.uniform(0, np.pi)))
            for mode in (0, 1):
                value = parity_expectation(state, mode)
                self.assertGreaterEqual(value, -1.0)
                self.assertLessEqual(value, 1.0)

    def test_homodyne_vacuum(self):
        assert_allclose(homodyne_stats(vacuum_state(1), 0), (0.0, 0.5))

    def test_homodyne_squeezed_p_quadrature(self):
        _, var = homodyne_stats(squeezed_vacuum(1.0), 0, np.pi / 2)
        self.assertAlmostEqual(var, 0.067668, places=6)

    def test_homodyne_coherent(self):
        mean, var = homodyne_stats(coherent_state(2.0), 0, 0.0)
        self.assertAlmostEqual(mean, 2.828427, places=6)
        self.assertAlmostEqual(var, 0.5)

    def test_intensity_vacuum(self):
        assert_allclose(intensity_stats(vacuum_state(2), [0, 1]), (0.0, 0.0), atol=1e-15)

    def test_intensity_coherent_is_poissonian(self):
        assert_allclose(intensity_stats(coherent_state(2.0), [0]), (4.0, 4.0), atol=1e-12)

    def test_intensity_two_mode_squeezed(self):
        state = apply_bogoliubov(vacuum_state(2), opa_map(1.0, 0.0))
        mean, var = intensity_stats(state, [0, 1])
        self.assertAlmostEqual(mean, 2.762196, places=6)
        self.assertAlmostEqual(var, np.sinh(2.0) ** 2, places=9)

    def test_intensity_difference_is_noiseless_for_two_mode_squeezed(self):
        state = apply_bogoliubov(vacuum_state(2), opa_map(0.7, 0.0))
        _, var_a = intensity_stats(state, [0])
        _, var_total = intensity_stats(state, [0, 1])
        self.assertAlmostEqual(var_total, 4 * var_a, places=9)


class TestSignalCurve(unittest.TestCase):
    """Test cases for batched signals."""

    def setUp(self):
        """Set up test fixtures."""
        self.spec = InputSpec(kind='coherent-squeezed', alpha=1.0, r=0.5)
        self.config = InterferometerConfig.balanced(1.0, l1=0.1, l2=0.05)
        self.phis = np.array([-1.2, -0.3, 0.2, 0.9])

    def test_batch_matches_single_state(self):
        det = DetectionKind.parity()
        signal, variance = signal_curve(det, self.spec, self.config, self.phis)
        for phi, value, var in zip(self.phis, signal, variance):
            expected = parity_expectation(propagate(self.spec, self.config, phi), 1)
            self.assertAlmostEqual(value, expected, places=12)
            self.assertAlmostEqual(var, 1 - expected ** 2, places=12)

    def test_intensity_batch_matches_single_state(self):
        det = DetectionKind.intensity()
        signal, variance = signal_curve(det, self.spec, self.config, self.phis)
        for phi, value, var in zip(self.phis, signal, variance):
            expected = intensity_stats(propagate(self.spec, self.config, phi), [0, 1])
            assert_allclose((value, var), expected, rtol=1e-12)

    def test_even_signals(self):
        for det in (DetectionKind.parity(), DetectionKind.intensity()):
            plus, _ = signal_curve(det, self.spec, self.config, self.phis)
            minus, _ = signal_curve(det, self.spec, self.config, -self.phis)
            assert_allclose(plus, minus, rtol=1e-10)


class TestPhaseSensitivity(unittest.TestCase):
    """Test cases for phase_sensitivity."""

    def test_vacuum_parity_near_dark_point(self):
        phi = 1e-3
        for g in (0.5, 1.0, 2.0):
            big_s = np.sinh(2 * g) ** 2
            u = 2 * big_s * np.sin(phi / 2) ** 2
            exact = np.sqrt(2 * u + u ** 2) * (1 + u) / (big_s * np.sin(phi))
            result = phase_sensitivity(DetectionKind.parity(), InputSpec(),
                                       InterferometerConfig.balanced(g), phi)
            assert_allclose(result.delta_phi, exact, rtol=2e-6)
            assert_allclose(result.delta_phi, 1 / np.sinh(2 * g), rtol=1e-3)

    def test_coherent_squeezed_parity_limit(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        result = phase_sensitivity(DetectionKind.parity(), spec,
                                   InterferometerConfig.balanced(1.0), 1e-4)
        assert_allclose(result.delta_phi, 0.0487887, rtol=5e-5)

    def test_intensity_diverges_at_dark_point(self):
        spec = InputSpec(kind='coherent', alpha=2.0)
        with self.assertRaises(StationaryPointError) as ctx:
            phase_sensitivity(DetectionKind.intensity(), spec,
                              InterferometerConfig.balanced(1.0), 0.0)
        self.assertEqual(ctx.exception.phi, 0.0)

    def test_derivative_matches_five_point_stencil(self):
        spec = InputSpec(kind='coherent', alpha=1.5)
        config = InterferometerConfig.balanced(1.0, l1=0.05, l2=0.05)
        det = DetectionKind.parity()
        for phi in (0.3, 1.1, -2.0):
            h = 1e-3
            values, _ = signal_curve(det, spec, config, phi + h * np.array([-2, -1, 1, 2]))
            stencil = (values[0] - 8 * values[1] + 8 * values[2] - values[3]) / (12 * h)
            derivative = phase_sensitivity(det, spec, config, phi).derivative
            if abs(stencil) > 1e-6:
                self.assertAlmostEqual(derivative / stencil, 1.0, delta=1e-6)

    def test_curve_marks_stationary_points(self):
        curve = sensitivity_curve(DetectionKind.parity(), InputSpec(),
                                  InterferometerConfig.balanced(1.0), [0.0, 0.5])
        self.assertTrue(curve['stationary'][0])
        self.assertTrue(np.isnan(curve['delta_phi'][0]))
        self.assertTrue(np.isfinite(curve['delta_phi'][1]))

    def test_richardson_settings_from_config(self):
        settings = DerivativeSettings.from_config({'numerics': {'derivative_rel_step': 1e-5}})
        self.assertEqual(settings.rel_step, 1e-5)
        self.assertEqual(settings.richardson_rtol, 1e-6)


class TestBestQuadrature(unittest.TestCase):
    """Test cases for homodyne detection at the most sensitive quadrature."""

    def setUp(self):
        """Set up test fixtures."""
        self.det = DetectionKind.homodyne((0, 1), None)
        self.config = InterferometerConfig.balanced(1.0, 0.1, 0.1)

    def test_beats_every_fixed_angle(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, theta_alpha=0.3, r=0.5)
        phi = 0.4
        best = phase_sensitivity(DetectionKind.homodyne(1, None), spec, self.config, phi)
        thetas = np.linspace(0.0, np.pi, 1441)
        scan = np.array([sensitivity_curve(DetectionKind.homodyne(1, theta), spec, self.config,
                                           [phi])['delta_phi'][0] for theta in thetas])
        self.assertLessEqual(best.delta_phi, np.nanmin(scan) * (1 + 1e-9))
        assert_allclose(best.delta_phi, np.nanmin(scan), rtol=1e-4)
        gap = np.mod(best.quadrature[1] - thetas[np.nanargmin(scan)], np.pi)
        self.assertLess(min(gap, np.pi - gap), 5e-3)

    def test_picks_the_better_arm(self):
        spec = InputSpec(kind='two-coherent', alpha=2.0)
        curve = sensitivity_curve(self.det, spec, self.config, [0.2, 1.0])
        for mode in (0, 1):
            single = sensitivity_curve(DetectionKind.homodyne(mode, None), spec, self.config,
                                       [0.2, 1.0])
            self.assertTrue(np.all(curve['delta_phi'] <= single['delta_phi'] * (1 + 1e-12)))
        self.assertEqual(phase_sensitivity(self.det, spec, self.config, 0.2).quadrature[0], 0)

    def test_two_coherent_ordering(self):
        spec = InputSpec(kind='two-coherent', alpha=2.0)
        config = InterferometerConfig.balanced(1.0, 0.2, 0.2)
        _, hd = optimal_sensitivity(self.det, spec, config)
        _, intensity = optimal_sensitivity(DetectionKind.intensity(), spec, config)
        _, parity = optimal_sensitivity(DetectionKind.parity(), spec, config)
        assert_allclose(hd, 0.16455383, rtol=1e-4)
        self.assertLess(hd, intensity)
        self.assertLess(intensity, parity)

    def test_lossless_coherent_squeezed(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        _, delta = optimal_sensitivity(self.det, spec, InterferometerConfig.balanced(1.0))
        assert_allclose(delta, 0.05071596, rtol=1e-4)

    def test_vacuum_has_no_signal(self):
        curve = sensitivity_curve(self.det, InputSpec(), self.config, [0.3, 1.2])
        self.assertTrue(np.all(curve['stationary']))
        with self.assertRaises(StationaryPointError):
            phase_sensitivity(self.det, InputSpec(), self.config, 0.3)

    def test_signal_curve_follows_chosen_quadrature(self):
        spec = InputSpec(kind='coherent', alpha=1.5)
        result = phase_sensitivity(self.det, spec, self.config, 0.7)
        mode, theta = result.quadrature
        signal, variance = signal_curve(DetectionKind.homodyne(mode, theta), spec, self.config,
                                        [0.7])
        assert_allclose([signal[0], variance[0]], [result.signal, result.signal_variance],
                        rtol=1e-9)
        best_signal, _ = signal_curve(self.det, spec, self.config, [0.7])
        assert_allclose(best_signal[0], result.signal, rtol=1e-9)


class TestOptimalSensitivity(unittest.TestCase):
    """Test cases for optimal_sensitivity."""

    def setUp(self):
        """Set up test fixtures."""
        self.det = DetectionKind.parity()
        self.spec = InputSpec()

    def test_lossless_vacuum_optimum_at_zero(self):
        phi_opt, delta = optimal_sensitivity(self.det, self.spec, InterferometerConfig.balanced(1.0))
        self.assertLess(abs(phi_opt), 2e-3)
        self.assertAlmostEqual(delta, 0.275721, places=5)

    def test_loss_moves_optimum(self):
        phi_opt, _ = optimal_sensitivity(self.det, self.spec,
                                         InterferometerConfig.balanced(1.0, 0.1, 0.1))
        self.assertGreater(phi_opt, 1e-3)

    def test_near_shot_noise_at_critical_loss(self):
        config = InterferometerConfig.balanced(1.0, 0.07, 0.07)
        _, delta = optimal_sensitivity(self.det, self.spec, config)
        snl = 1.0 / np.sqrt(photon_budget(self.spec, config).n_tot)
        self.assertAlmostEqual(delta / snl, 1.0, delta=0.15)

    def test_degrades_with_loss(self):
        previous = 0.0
        for loss in (0.0, 0.05, 0.1, 0.2):
            _, delta = optimal_sensitivity(self.det, self.spec,
                                           InterferometerConfig.balanced(1.0, loss, loss))
            self.assertGreater(delta, previous)
            previous = delta

    def test_empty_window(self):
        with self.assertRaises(InvalidParameterError):
            search_grid((0.5, 0.5), SearchSettings())

    def test_no_finite_value(self):
        # intensity with full loss carries no phase information
        config = InterferometerConfig.balanced(1.0, 1.0, 1.0)
        with self.assertRaises(SearchFailureError):
            optimal_sensitivity(DetectionKind.intensity(), InputSpec(kind='coherent', alpha=1.0),
                                config, (0.1, 0.2))

    def test_grid_excludes_multiples_of_pi(self):
        grid = search_grid((-np.pi, np.pi), SearchSettings())
        self.assertFalse(np.any(np.abs(grid) < 1e-6))
        self.assertFalse(np.any(np.abs(np.abs(grid) - np.pi) < 1e-6))


if __name__ == '__main__':
    unittest.main()
