"""
Unit tests for gaussian module.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from src.exceptions import DegenerateCovarianceError, InvalidParameterError
from src.gaussian import (BogoliubovMap, GaussianState, InputSpec, apply_bogoliubov,
                          coherent_state, make_input_state, photon_number, reduce_to_mode,
                          squeezed_vacuum, symplectic_form, tensor_product, vacuum_state,
                          wigner_value)
from src.interferometer import opa_map, phase_map


class TestInputSpec(unittest.TestCase):
    """Test cases for InputSpec validation."""

    def test_rejects_negative_squeezing(self):
        with self.assertRaises(InvalidParameterError):
            make_input_state(InputSpec(kind='coherent-squeezed', alpha=1.0, r=-0.1), 0)

    def test_rejects_squeezing_on_plain_coherent(self):
        with self.assertRaises(InvalidParameterError):
            InputSpec(kind='coherent', alpha=1.0, r=0.5)

    def test_rejects_amplitude_on_vacuum(self):
        with self.assertRaises(InvalidParameterError):
            InputSpec(kind='vacuum', alpha=1.0)

    def test_rejects_unknown_kind(self):
        with self.assertRaises(InvalidParameterError):
            InputSpec(kind='thermal')

    def test_photon_numbers(self):
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        self.assertAlmostEqual(spec.n_alpha, 4.0)
        self.assertAlmostEqual(spec.n_squeezed, 1.381098, places=6)
        self.assertAlmostEqual(spec.n_in, 5.381098, places=6)


class TestGaussianState(unittest.TestCase):
    """Test cases for GaussianState construction and invariants."""

    def test_rejects_asymmetric_covariance(self):
        with self.assertRaises(InvalidParameterError):
            GaussianState(np.zeros(2), np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_rejects_shape_mismatch(self):
        with self.assertRaises(InvalidParameterError):
            GaussianState(np.zeros(2), 0.5 * np.eye(4))

    def test_arrays_are_frozen(self):
        state = vacuum_state(1)
        with self.assertRaises(ValueError):
            state.mean[0] = 1.0

    def test_vacuum_is_physical(self):
        self.assertTrue(vacuum_state(3).is_physical())
        self.assertAlmostEqual(vacuum_state(1).uncertainty_eigenvalue(), 0.0, places=12)

    def test_unphysical_state_detected(self):
        state = GaussianState(np.zeros(2), 0.1 * np.eye(2))
        self.assertFalse(state.is_physical())
        with self.assertRaises(InvalidParameterError):
            state.check_physical()

    def test_symplectic_form(self):
        omega = symplectic_form(2)
        assert_allclose(omega @ omega, -np.eye(4))


class TestMakeInputState(unittest.TestCase):
    """Test cases for make_input_state."""

    def test_vacuum(self):
        state = make_input_state(InputSpec(), 0)
        assert_allclose(state.mean, np.zeros(4))
        assert_allclose(state.cov, 0.5 * np.eye(4))

    def test_coherent_mean(self):
        state = make_input_state(InputSpec(kind='coherent', alpha=2.0), 0)
        assert_allclose(state.mode_mean(0), [2.828427, 0.0], atol=1e-6)
        assert_allclose(state.mode_cov(0), 0.5 * np.eye(2))

    def test_squeezed_variances(self):
        state = make_input_state(InputSpec(kind='coherent-squeezed', r=1.0), 0)
        assert_allclose(np.diag(state.mode_cov(1)), [3.694528, 0.067668], atol=1e-6)

    def test_ancillas_are_vacuum(self):
        state = make_input_state(InputSpec(kind='coherent', alpha=1.0), 2)
        self.assertEqual(state.n_modes, 4)
        assert_allclose(state.cov[4:, 4:], 0.5 * np.eye(4))
        assert_allclose(state.mean[4:], np.zeros(4))

    def test_two_coherent_split(self):
        state = make_input_state(InputSpec(kind='two-coherent', alpha=2.0), 0)
        amp = 2.0 / np.sqrt(2.0)
        assert_allclose(state.mode_mean(0), np.sqrt(2.0) * np.array([0.0, amp]), atol=1e-12)
        assert_allclose(state.mode_mean(1), np.sqrt(2.0) * np.array([amp, 0.0]), atol=1e-12)
        self.assertAlmostEqual(photon_number(state, 0) + photon_number(state, 1), 4.0)

    def test_rotated_squeezing_keeps_photon_number(self):
        state = squeezed_vacuum(0.7, theta_s=1.1)
        self.assertAlmostEqual(photon_number(state, 0), np.sinh(0.7) ** 2)
        self.assertTrue(state.is_physical())

    def test_negative_ancilla_count(self):
        with self.assertRaises(InvalidParameterError):
            make_input_state(InputSpec(), -1)


class TestBogoliubovMap(unittest.TestCase):
    """Test cases for BogoliubovMap and apply_bogoliubov."""

    def setUp(self):
        """Set up test fixtures."""
        self.state = tensor_product(coherent_state(0.8 + 0.3j), squeezed_vacuum(0.4, 0.2))

    def test_identity(self):
        out = apply_bogoliubov(self.state, BogoliubovMap.identity(2))
        assert_allclose(out.mean, self.state.mean)
        assert_allclose(out.cov, self.state.cov)

    def test_opa_on_vacuum(self):
        out = apply_bogoliubov(vacuum_state(2), opa_map(1.0, 0.0))
        self.assertAlmostEqual(photon_number(out, 0), 1.381098, places=6)
        self.assertAlmostEqual(photon_number(out, 1), 1.381098, places=6)

    def test_phase_rotates_mean(self):
        phi = 0.6
        out = apply_bogoliubov(tensor_product(coherent_state(2.0), vacuum_state(1)), phase_map(phi))
        expected = np.sqrt(2.0) * 2.0 * np.array([np.cos(phi), np.sin(phi)])
        assert_allclose(out.mode_mean(0), expected, atol=1e-12)
        assert_allclose(out.mode_cov(0), 0.5 * np.eye(2), atol=1e-12)

    def test_lossless_maps_are_canonical(self):
        for g in (0.0, 0.5, 1.3):
            for theta in (0.0, 1.0, np.pi):
                self.assertTrue(opa_map(g, theta).is_metric_preserving())
        self.assertTrue(phase_map(2.1).is_metric_preserving())

    def test_preserves_uncertainty_and_determinant(self):
        bmap = opa_map(0.9, 0.4) @ phase_map(1.2) @ opa_map(0.5, 2.0)
        out = apply_bogoliubov(self.state, bmap)
        self.assertTrue(out.is_physical())
        assert_allclose(np.linalg.det(out.cov), np.linalg.det(self.state.cov), rtol=1e-10)

    def test_real_matrix_is_symplectic(self):
        s = (opa_map(0.7, 0.3) @ phase_map(0.9)).real_matrix
        omega = symplectic_form(2)
        assert_allclose(s @ omega @ s.T, omega, atol=1e-10)

    def test_composition_is_associative(self):
        first, second = opa_map(0.6, 0.0), phase_map(0.8)
        stepwise = apply_bogoliubov(apply_bogoliubov(self.state, first), second)
        combined = apply_bogoliubov(self.state, second @ first)
        assert_allclose(stepwise.mean, combined.mean, atol=1e-10)
        assert_allclose(stepwise.cov, combined.cov, atol=1e-10)

    def test_dimension_mismatch(self):
        with self.assertRaises(InvalidParameterError):
            apply_bogoliubov(vacuum_state(1), opa_map(0.5, 0.0))

    def test_embed_acts_as_identity_on_extra_modes(self):
        embedded = opa_map(0.5, 0.0).embed(4)
        assert_allclose(embedded.restrict([2, 3]), np.eye(2))
        self.assertEqual(embedded.conjugate, (0, 1, 0, 1))


class TestReduceToMode(unittest.TestCase):
    """Test cases for marginals."""

    def test_vacuum_marginal(self):
        reduced = reduce_to_mode(vacuum_state(2), 0)
        assert_allclose(reduced.cov, 0.5 * np.eye(2))

    def test_two_mode_squeezed_marginal_is_thermal(self):
        g = 0.8
        out = apply_bogoliubov(vacuum_state(2), opa_map(g, 0.3))
        for mode in (0, 1):
            reduced = reduce_to_mode(out, mode)
            assert_allclose(reduced.cov, 0.5 * np.cosh(2 * g) * np.eye(2), atol=1e-12)

    def test_product_marginal_unchanged(self):
        squeezed = squeezed_vacuum(1.0)
        reduced = reduce_to_mode(tensor_product(coherent_state(2.0), squeezed), 1)
        assert_allclose(reduced.cov, squeezed.cov)

    def test_out_of_range(self):
        with self.assertRaises(InvalidParameterError):
            reduce_to_mode(vacuum_state(2), 2)


class TestWignerValue(unittest.TestCase):
    """Test cases for wigner_value."""

    def test_vacuum_at_origin(self):
        self.assertAlmostEqual(wigner_value(vacuum_state(1), [0.0, 0.0]), 0.318310, places=6)

    def test_coherent_peak(self):
        state = coherent_state(1.5 - 0.5j)
        self.assertAlmostEqual(wigner_value(state, state.mean), 1.0 / np.pi, places=12)

    def test_vacuum_off_origin(self):
        self.assertAlmostEqual(wigner_value(vacuum_state(1), [1.0, 0.0]), 0.117099, places=6)

    def test_normalization(self):
        state = squeezed_vacuum(0.5, 0.3)
        sigma = np.sqrt(np.max(np.linalg.eigvalsh(state.cov)))
        axis = np.linspace(-6 * sigma, 6 * sigma, 121)
        step = axis[1] - axis[0]
        total = sum(wigner_value(state, [x, p]) for x in axis for p in axis) * step ** 2
        self.assertAlmostEqual(total, 1.0, delta=1e-4)

    def test_degenerate_covariance(self):
        state = GaussianState(np.zeros(2), np.diag([0.5, 0.0]))
        with self.assertRaises(DegenerateCovarianceError):
            wigner_value(state, [0.0, 0.0])

    def test_point_length(self):
        with self.assertRaises(InvalidParameterError):
            wigner_value(vacuum_state(2), [0.0, 0.0])


if __name__ == '__main__':
    unittest.main()
