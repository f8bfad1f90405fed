"""
Unit tests for closed_forms module.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from src.closed_forms import (FormulaParams, _x1, _x3, _y1, _y2, _y3, hd_sensitivity_cf,
                              id_sensitivity_cf, parity_sensitivity_cf, parity_signal_ideal_cf,
                              parity_signal_lossy_cf, parity_signal_vacuum_loss_cf, quantum_limits)
from src.detection import (DetectionKind, optimal_sensitivity, parity_expectation,
                           phase_sensitivity, signal_curve)
from src.exceptions import InvalidParameterError, SingularFormulaError, UnsupportedInputError
from src.gaussian import InputSpec, reduce_to_mode
from src.interferometer import InterferometerConfig, propagate


def _pipeline_parity(spec, config, phi):
    signal, _ = signal_curve(DetectionKind.parity(), spec, config, np.array([phi]))
    return signal[0]


class TestIdealParitySignal(unittest.TestCase):
    """Test cases for the lossless parity signal."""

    def setUp(self):
        """Set up test fixtures."""
        self.config = InterferometerConfig.balanced(1.0)

    def test_matches_pipeline(self):
        for theta in (0.0, 0.4):
            spec = InputSpec(kind='coherent-squeezed', alpha=2.0, theta_alpha=theta, r=1.0)
            for phi in (-0.8, 0.05, 0.3, 2.0):
                expected = _pipeline_parity(spec, self.config, phi)
                value = parity_signal_ideal_cf(2.0, theta, 1.0, 1.0, phi)
                assert_allclose(value, expected, rtol=1e-8, atol=1e-14)

    def test_unity_at_balanced_point(self):
        self.assertAlmostEqual(parity_signal_ideal_cf(2.0, 0.0, 1.0, 1.0, 0.0), 1.0, places=12)

    def test_printed_form_differs(self):
        corrected = parity_signal_ideal_cf(2.0, 0.0, 1.0, 1.0, 0.0)
        printed = parity_signal_ideal_cf(2.0, 0.0, 1.0, 1.0, 0.0, printed=True)
        self.assertGreater(abs(corrected - printed), 0.5)
        self.assertAlmostEqual(parity_signal_ideal_cf(1.0, 0.0, 0.5, 0.0, 0.0, printed=True), 0.125)

    def test_sub_terms_match_output_covariance(self):
        spec = InputSpec(kind='coherent-squeezed', r=0.7)
        for phi in (0.2, 1.4):
            out = reduce_to_mode(propagate(spec, self.config, phi), 1)
            det = np.linalg.det(out.cov)
            assert_allclose(_x1(0.7, 1.0, phi), 256 * det, rtol=1e-9)
            assert_allclose(_x3(0.7, 1.0, phi), np.exp(1.4) * _x1(0.7, 1.0, phi), rtol=1e-12)


class TestLossyParitySignal(unittest.TestCase):
    """Test cases for the equal-loss parity signal."""

    def test_matches_pipeline(self):
        for r, loss in ((0.0, 0.2), (1.0, 0.05), (0.5, 0.3)):
            kind = 'coherent' if r == 0 else 'coherent-squeezed'
            spec = InputSpec(kind=kind, alpha=2.0, r=r)
            config = InterferometerConfig.balanced(1.0, loss, loss)
            for phi in (0.1, 0.3, 1.5):
                expected = _pipeline_parity(spec, config, phi)
                assert_allclose(parity_signal_lossy_cf(2.0, r, 1.0, phi, loss), expected,
                                rtol=1e-8, atol=1e-14)

    def test_reduces_to_ideal_without_loss(self):
        for phi in (0.2, 0.9):
            assert_allclose(parity_signal_lossy_cf(2.0, 1.0, 1.0, phi, 0.0),
                            parity_signal_ideal_cf(2.0, 0.0, 1.0, 1.0, phi), rtol=1e-9)

    def test_sub_terms(self):
        r, g, loss, phi = 0.6, 0.8, 0.15, 0.4
        spec = InputSpec(kind='coherent-squeezed', alpha=1.5, r=r)
        out = reduce_to_mode(propagate(spec, InterferometerConfig.balanced(g, loss, loss), phi), 1)
        y1 = _y1(r, g, phi, loss)
        assert_allclose(y1, 256 * np.linalg.det(out.cov), rtol=1e-9)
        assert_allclose(_y3(r, g, phi, loss), np.exp(2 * r) * y1, rtol=1e-9)
        parity = parity_expectation(out, 0)
        assert_allclose(_y2(1.5, r, g, phi, loss) / _y3(r, g, phi, loss),
                        -np.log(parity * np.sqrt(y1) / 8), rtol=1e-8)

    def test_rejects_full_loss(self):
        with self.assertRaises(InvalidParameterError):
            parity_signal_lossy_cf(1.0, 0.0, 1.0, 0.3, 1.0)


class TestParitySensitivity(unittest.TestCase):
    """Test cases for parity_sensitivity_cf."""

    def test_ideal_optimal_values(self):
        vacuum = parity_sensitivity_cf('ideal-optimal', FormulaParams(g=1.0))
        self.assertAlmostEqual(vacuum, 0.2757206, places=7)
        squeezed = parity_sensitivity_cf('ideal-optimal', FormulaParams(g=1.0, alpha=2.0, r=1.0))
        self.assertAlmostEqual(squeezed, 0.0487887, places=7)

    def test_ideal_optimal_phase_dependence(self):
        aligned = parity_sensitivity_cf('ideal-optimal', FormulaParams(g=1.0, alpha=2.0, r=1.0))
        rotated = parity_sensitivity_cf('ideal-optimal',
                                        FormulaParams(g=1.0, alpha=2.0, r=1.0, theta_alpha=np.pi / 2))
        self.assertGreater(rotated, aligned)

    def test_vacuum_loss_matches_pipeline(self):
        config = InterferometerConfig.balanced(1.0, 0.1, 0.1)
        for phi in (0.3, 1.0):
            expected = phase_sensitivity(DetectionKind.parity(), InputSpec(), config, phi).delta_phi
            value = parity_sensitivity_cf('vacuum-loss', FormulaParams(g=1.0, l1=0.1, l2=0.1), phi)
            assert_allclose(value, expected, rtol=1e-6)

    def test_vacuum_loss_signal(self):
        g, phi, loss = 1.0, 0.4, 0.2
        expected = _pipeline_parity(InputSpec(), InterferometerConfig.balanced(g, loss, loss), phi)
        assert_allclose(parity_signal_vacuum_loss_cf(g, phi, loss), expected, rtol=1e-10)

    def test_vacuum_loss_lossless_limit(self):
        value = parity_sensitivity_cf('vacuum-loss', FormulaParams(g=1.0), 1e-4)
        assert_allclose(value, 1 / np.sinh(2.0), rtol=1e-6)

    def test_coherent_equal_loss_matches_pipeline(self):
        params = FormulaParams(g=1.0, alpha=2.0, l1=0.1, l2=0.1)
        spec = InputSpec(kind='coherent', alpha=2.0)
        config = InterferometerConfig.balanced(1.0, 0.1, 0.1)
        for phi in (0.2, 0.8):
            expected = phase_sensitivity(DetectionKind.parity(), spec, config, phi).delta_phi
            assert_allclose(parity_sensitivity_cf('coherent-equal-loss', params, phi), expected,
                            rtol=1e-6)

    def test_unequal_loss_matches_pipeline(self):
        params = FormulaParams(g=1.0, alpha=2.0, l1=0.2, l2=0.05)
        spec = InputSpec(kind='coherent', alpha=2.0)
        config = InterferometerConfig.balanced(1.0, 0.2, 0.05)
        for phi in (0.3, 1.2):
            expected = phase_sensitivity(DetectionKind.parity(), spec, config, phi).delta_phi
            assert_allclose(parity_sensitivity_cf('unequal-loss', params, phi), expected, rtol=1e-6)

    def test_unequal_reduces_to_equal(self):
        params = FormulaParams(g=0.8, alpha=1.5, l1=0.15, l2=0.15)
        for phi in (0.25, 1.1, 2.5):
            assert_allclose(parity_sensitivity_cf('unequal-loss', params, phi),
                            parity_sensitivity_cf('coherent-equal-loss', params, phi), rtol=1e-9)

    def test_singular_at_dark_point(self):
        params = FormulaParams(g=1.0, alpha=2.0, l1=0.1, l2=0.1)
        for variant in ('coherent-equal-loss', 'unequal-loss'):
            with self.assertRaises(SingularFormulaError):
                parity_sensitivity_cf(variant, params, 0.0)
        with self.assertRaises(SingularFormulaError):
            parity_sensitivity_cf('vacuum-loss', FormulaParams(g=1.0, l1=0.1, l2=0.1), 0.0)

    def test_equal_loss_variant_rejects_unequal_losses(self):
        with self.assertRaises(InvalidParameterError):
            parity_sensitivity_cf('coherent-equal-loss', FormulaParams(g=1.0, alpha=1.0, l1=0.1), 0.3)

    def test_unknown_variant(self):
        with self.assertRaises(InvalidParameterError):
            parity_sensitivity_cf('two-coherent', FormulaParams(g=1.0), 0.3)


class TestHomodyneSensitivity(unittest.TestCase):
    """Test cases for hd_sensitivity_cf."""

    def test_coherent_squeezed_lossless(self):
        value = hd_sensitivity_cf('coherent-squeezed-loss', FormulaParams(g=1.0, alpha=2.0, r=1.0))
        self.assertAlmostEqual(value, 0.0507160, places=6)

    def test_coherent_squeezed_matches_search(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        _, delta = optimal_sensitivity(DetectionKind.homodyne(theta=np.pi / 2), spec,
                                       InterferometerConfig.balanced(1.0))
        assert_allclose(delta, 0.0507160, rtol=1e-3)

    def test_lossy_formula_overstates_pipeline(self):
        # the formula scales the loss noise by N_Tot/N_in, the model by cosh(2g)
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        det = DetectionKind.homodyne((0, 1), None)
        for loss, pipeline_value, formula_value in ((0.1, 0.10255147, 0.10770691),
                                                    (0.2, 0.14299535, 0.15128323)):
            config = InterferometerConfig.balanced(1.0, loss, loss)
            _, pipeline = optimal_sensitivity(det, spec, config)
            formula = hd_sensitivity_cf('coherent-squeezed-loss',
                                        FormulaParams.from_inputs(spec, config))
            assert_allclose(pipeline, pipeline_value, rtol=1e-4)
            assert_allclose(formula, formula_value, rtol=1e-6)
            self.assertGreater(formula / pipeline, 1.04)

    def test_lossy_pipeline_follows_p_quadrature_model(self):
        # P quadrature of arm b at the dark point
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        g, r, alpha = 1.0, 1.0, 2.0
        for loss in (0.0, 0.1, 0.2):
            config = InterferometerConfig.balanced(g, loss, loss)
            _, pipeline = optimal_sensitivity(DetectionKind.homodyne((0, 1), None), spec, config)
            model = (np.sqrt((1 - loss) * np.exp(-2 * r) + loss * np.cosh(2 * g))
                     / (np.sinh(2 * g) * np.sqrt(1 - loss) * alpha))
            assert_allclose(pipeline, model, rtol=1e-4)

    def test_two_coherent_matches_in_phase_amplitudes(self):
        spec = InputSpec(kind='two-coherent', alpha=2.0, theta_alpha=-np.pi / 4)
        det = DetectionKind.homodyne((0, 1), None)
        for loss in (0.0, 0.1):
            config = InterferometerConfig.balanced(1.0, loss, loss)
            _, pipeline = optimal_sensitivity(det, spec, config)
            formula = hd_sensitivity_cf('two-coherent', FormulaParams.from_inputs(spec, config))
            assert_allclose(pipeline, formula, rtol=1e-4)

    def test_two_coherent_default_phases_fall_short_of_formula(self):
        # with |i a/sqrt2, a/sqrt2> the first OPA amplifies by cosh(2g) instead of e^{2g}
        spec = InputSpec(kind='two-coherent', alpha=2.0)
        _, pipeline = optimal_sensitivity(DetectionKind.homodyne((0, 1), None), spec,
                                          InterferometerConfig.balanced(1.0))
        model = 1.0 / (2 * np.cosh(1.0) * np.sqrt(2.0 * np.cosh(2.0)))
        assert_allclose(pipeline, model, rtol=1e-4)
        self.assertAlmostEqual(model, 0.118126, places=6)

    def test_degrades_with_loss(self):
        previous = 0.0
        for loss in (0.0, 0.05, 0.1, 0.3):
            value = hd_sensitivity_cf('coherent-squeezed-loss',
                                      FormulaParams(g=1.0, alpha=2.0, r=1.0, l1=loss, l2=loss))
            self.assertGreater(value, previous)
            previous = value

    def test_two_coherent_forms_agree(self):
        for loss in (0.0, 0.2):
            params = FormulaParams(g=1.0, alpha=2.0, l1=loss, l2=loss)
            assert_allclose(hd_sensitivity_cf('two-coherent', params, form='cosh'),
                            hd_sensitivity_cf('two-coherent', params, form='nopa'), rtol=1e-12)
        self.assertAlmostEqual(hd_sensitivity_cf('two-coherent', FormulaParams(g=1.0, alpha=2.0)),
                               0.084289, places=6)

    def test_vacuum_rejected(self):
        with self.assertRaises(InvalidParameterError):
            hd_sensitivity_cf('coherent-squeezed-loss', FormulaParams(g=1.0))

    def test_unknown_form(self):
        with self.assertRaises(InvalidParameterError):
            hd_sensitivity_cf('two-coherent', FormulaParams(g=1.0, alpha=1.0), form='sinh')


class TestIntensitySensitivity(unittest.TestCase):
    """Test cases for id_sensitivity_cf."""

    def test_one_coherent_matches_total_counting(self):
        spec = InputSpec(kind='coherent', alpha=2.0)
        for loss in (0.0, 0.1, 0.3):
            config = InterferometerConfig.balanced(1.0, loss, loss)
            params = FormulaParams(g=1.0, alpha=2.0, l1=loss, l2=loss)
            for phi in (0.4, 1.3):
                expected = phase_sensitivity(DetectionKind.intensity(), spec, config, phi).delta_phi
                assert_allclose(id_sensitivity_cf('one-coherent', params, phi), expected, rtol=1e-6)

    def test_vacuum_matches_total_counting(self):
        config = InterferometerConfig.balanced(1.0, 0.1, 0.1)
        params = FormulaParams(g=1.0, l1=0.1, l2=0.1)
        for phi in (0.5, 2.0):
            expected = phase_sensitivity(DetectionKind.intensity(), InputSpec(), config, phi).delta_phi
            assert_allclose(id_sensitivity_cf('vacuum', params, phi), expected, rtol=1e-6)

    def test_vacuum_printed_sign_differs(self):
        params = FormulaParams(g=1.0, l1=0.1, l2=0.1)
        corrected = id_sensitivity_cf('vacuum', params, 0.5)
        printed = id_sensitivity_cf('vacuum', params, 0.5, printed=True)
        self.assertGreater(printed, corrected)

    def test_vacuum_lossless_limit(self):
        value = id_sensitivity_cf('vacuum', FormulaParams(g=1.0), 1e-3)
        assert_allclose(value, 1 / np.sinh(2.0), rtol=1e-4)

    def test_two_coherent_lossless(self):
        value = id_sensitivity_cf('two-coherent', FormulaParams(g=1.0, alpha=2.0))
        self.assertAlmostEqual(value, 1 / (2.0 * np.sinh(2.0)), places=12)

    def test_singular_phases(self):
        params = FormulaParams(g=1.0, alpha=1.0)
        for phi in (0.0, np.pi, 2 * np.pi):
            with self.assertRaises(SingularFormulaError):
                id_sensitivity_cf('one-coherent', params, phi)


class TestQuantumLimits(unittest.TestCase):
    """Test cases for quantum_limits."""

    def setUp(self):
        """Set up test fixtures."""
        self.config = InterferometerConfig.balanced(1.0)

    def test_vacuum(self):
        limits = quantum_limits(InputSpec(), self.config)
        self.assertAlmostEqual(limits.snl, 0.601689, places=6)
        self.assertAlmostEqual(limits.hl, 0.362031, places=6)
        self.assertAlmostEqual(limits.qcrb, 0.275721, places=6)

    def test_coherent(self):
        limits = quantum_limits(InputSpec(kind='coherent', alpha=2.0), self.config)
        self.assertAlmostEqual(limits.snl, 0.236949, places=6)
        self.assertAlmostEqual(limits.hl, 0.056146, places=6)

    def test_coherent_squeezed(self):
        limits = quantum_limits(InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0), self.config)
        self.assertAlmostEqual(limits.snl, 0.208483, places=6)
        self.assertAlmostEqual(limits.hl, 0.043465, places=6)
        self.assertLess(limits.qcrb, limits.snl)

    def test_ordering_for_all_inputs(self):
        for spec in (InputSpec(), InputSpec(kind='coherent', alpha=2.0),
                     InputSpec(kind='two-coherent', alpha=2.0)):
            limits = quantum_limits(spec, self.config)
            self.assertLessEqual(limits.hl, limits.snl)
            self.assertLessEqual(limits.qcrb, limits.snl)

    def test_rotated_squeezing_unsupported(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=1.0, r=0.5, theta_s=0.3)
        with self.assertLogs('src.closed_forms', level='WARNING'):
            limits = quantum_limits(spec, self.config)
        self.assertIsNone(limits.qcrb)
        with self.assertRaises(UnsupportedInputError):
            quantum_limits(spec, self.config, strict=True)


if __name__ == '__main__':
    unittest.main()
