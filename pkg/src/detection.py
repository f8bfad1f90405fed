"""
Detection module for su11sense.

This module computes detection-signal statistics (parity, homodyne
quadrature, photon counting) from Gaussian output states and turns them
into phase sensitivities by linear error propagation.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import (DegenerateCovarianceError, InvalidParameterError, SearchFailureError,
                         StationaryPointError)
from .gaussian import DET_FLOOR, GaussianState, InputSpec, reduce_to_mode, reduce_to_modes
from .interferometer import InterferometerConfig, output_moments

logger = logging.getLogger(__name__)

DETECTION_NAMES = ('parity', 'homodyne', 'intensity')
LABELS = {'parity': 'PD', 'homodyne': 'HD', 'intensity': 'ID'}


@dataclass(frozen=True)
class DetectionKind:
    """
    Which observable is measured at the output.

    Attributes:
        name: 'parity', 'homodyne' or 'intensity'.
        modes: Output modes measured. Parity uses one mode. Homodyne uses one
            mode at a fixed angle, or picks the better of several candidate
            modes when the angle is optimized.
        theta: Homodyne quadrature angle in radians. None selects the most
            sensitive quadrature at every phase.
    """
    name: str
    modes: Tuple[int, ...]
    theta: Optional[float] = 0.0

    def __post_init__(self):
        if self.name not in DETECTION_NAMES:
            raise InvalidParameterError(
                f"unknown detection '{self.name}', expected one of {', '.join(DETECTION_NAMES)}")
        modes = tuple(int(m) for m in self.modes)
        if not modes:
            raise InvalidParameterError("detection needs at least one mode")
        if self.name == 'parity' and len(modes) != 1:
            raise InvalidParameterError("parity detection acts on a single mode")
        if self.name == 'homodyne' and self.theta is not None and len(modes) != 1:
            raise InvalidParameterError(
                "homodyne at a fixed angle acts on a single mode; "
                "leave the angle unset to choose between modes")
        if self.name != 'homodyne' and self.theta is None:
            raise InvalidParameterError(f"{self.name} detection has no quadrature angle")
        object.__setattr__(self, 'modes', modes)

    @classmethod
    def parity(cls, mode: int = 1) -> 'DetectionKind':
        return cls('parity', (mode,))

    @classmethod
    def homodyne(cls, mode: Union[int, Sequence[int]] = 1,
                 theta: Optional[float] = 0.0) -> 'DetectionKind':
        modes = (mode,) if isinstance(mode, (int, np.integer)) else tuple(mode)
        return cls('homodyne', modes, None if theta is None else float(theta))

    @classmethod
    def intensity(cls, modes: Sequence[int] = (0, 1)) -> 'DetectionKind':
        return cls('intensity', tuple(modes))

    @classmethod
    def from_name(cls, name: str, config: Optional[Dict[str, Any]] = None) -> 'DetectionKind':
        """
        Build a detection from its name and the 'detection' config section.

        A null 'homodyne_angle' selects the best quadrature over the modes in
        'homodyne_modes'.

        Args:
            name: 'parity', 'homodyne' or 'intensity'.
            config: Full configuration dictionary.

        Returns:
            DetectionKind instance.
        """
        section = (config or {}).get('detection', {})
        if name == 'parity':
            return cls.parity(section.get('parity_mode', 1))
        if name == 'homodyne':
            angle = section.get('homodyne_angle', 0.0)
            return cls.homodyne(tuple(section.get('homodyne_modes', (1,))),
                                None if angle is None else float(angle))
        if name == 'intensity':
            return cls.intensity(section.get('intensity_modes', (0, 1)))
        raise InvalidParameterError(f"unknown detection '{name}'")

    @property
    def best_quadrature(self) -> bool:
        """Whether the homodyne angle (and arm) is chosen per phase."""
        return self.name == 'homodyne' and self.theta is None

    @property
    def label(self) -> str:
        return LABELS[self.name]


@dataclass(frozen=True)
class SensitivityResult:
    """
    Phase sensitivity at one operating point.

    For homodyne detection 'quadrature' holds the measured (mode, angle).
    """
    phi: float
    delta_phi: float
    detection: DetectionKind
    signal: float
    signal_variance: float
    derivative: float
    quadrature: Optional[Tuple[int, float]] = None


@dataclass(frozen=True)
class DerivativeSettings:
    """Finite-difference controls for d<signal>/dphi."""
    rel_step: float = 1e-6
    richardson_rtol: float = 1e-6
    stationary_floor: float = 1e-14

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]] = None) -> 'DerivativeSettings':
        section = (config or {}).get('numerics', {})
        return cls(rel_step=float(section.get('derivative_rel_step', cls.rel_step)),
                   richardson_rtol=float(section.get('richardson_rtol', cls.richardson_rtol)),
                   stationary_floor=float(section.get('stationary_floor', cls.stationary_floor)))


@dataclass(frozen=True)
class SearchSettings:
    """Controls for the optimal-phase search."""
    grid_step: float = 1e-3
    golden_tol: float = 1e-8
    window_padding: float = 1e-6

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]] = None) -> 'SearchSettings':
        section = (config or {}).get('search', {})
        return cls(grid_step=float(section.get('grid_step', cls.grid_step)),
                   golden_tol=float(section.get('golden_tol', cls.golden_tol)),
                   window_padding=float(section.get('window_padding', cls.window_padding)))


# Single-state statistics

def parity_expectation(state: GaussianState, mode: int) -> float:
    """
    Expectation of the parity operator (-1)^N on one mode.

    Args:
        state: Gaussian state.
        mode: Measured mode.

    Returns:
        <Pi> in [-1, 1].
    """
    reduced = reduce_to_mode(state, mode)
    log_pi = _log_parity(reduced.mean[None, :], reduced.cov[None, :, :])[0]
    return float(np.exp(log_pi))


def homodyne_stats(state: GaussianState, mode: int, theta: float = 0.0) -> Tuple[float, float]:
    """
    Mean and variance of the quadrature X(theta) = X cos(theta) + P sin(theta).
    """
    reduced = reduce_to_mode(state, mode)
    direction = np.array([np.cos(theta), np.sin(theta)])
    return float(direction @ reduced.mean), float(direction @ reduced.cov @ direction)


def intensity_stats(state: GaussianState, modes: Sequence[int]) -> Tuple[float, float]:
    """
    Mean and variance of the total photon number over a set of modes.

    The variance includes the cross-mode covariances.
    """
    reduced = reduce_to_modes(state, modes)
    mean, var = _intensity_moments(reduced.mean[None, :], reduced.cov[None, :, :])
    return float(mean[0]), float(var[0])


# Batched statistics over stacks of reduced moments

def _log_parity(means: np.ndarray, covs: np.ndarray, det_floor: float = DET_FLOOR) -> np.ndarray:
    dets = np.linalg.det(covs)
    if np.any(dets < det_floor):
        raise DegenerateCovarianceError(
            f"reduced covariance determinant {np.min(dets):.3e} below {det_floor:.0e}")
    quad = np.einsum('ni,ni->n', means, np.linalg.solve(covs, means[..., None])[..., 0])
    return -0.5 * np.log(4.0 * dets) - 0.5 * quad


def _intensity_moments(means: np.ndarray, covs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n_modes = means.shape[1] // 2
    traces = np.trace(covs, axis1=1, axis2=2)
    norm2 = np.einsum('ni,ni->n', means, means)
    mean = (traces - n_modes) / 2.0 + norm2 / 2.0
    var = (0.5 * np.einsum('nij,nji->n', covs, covs)
           + np.einsum('ni,nij,nj->n', means, covs, means)
           - n_modes / 4.0)
    return mean, var


def signal_curve(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                 phis: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Detection signal and its variance for a batch of phases.

    Args:
        det: Detection.
        spec: Input state.
        config: Interferometer parameters.
        phis: Phases.

    Returns:
        Tuple (signal, variance) of arrays shaped like phis.
    """
    phis = np.asarray(phis, dtype=float)
    if det.best_quadrature:
        best = _best_quadrature(det, spec, config, phis.reshape(-1), DerivativeSettings())
        return best['signal'].reshape(phis.shape), best['variance'].reshape(phis.shape)
    means, covs = output_moments(spec, config, phis.reshape(-1), det.modes)
    if det.name == 'parity':
        log_pi = _log_parity(means, covs)
        signal = np.exp(log_pi)
        variance = -np.expm1(2.0 * log_pi)
    elif det.name == 'homodyne':
        direction = np.array([np.cos(det.theta), np.sin(det.theta)])
        signal = means @ direction
        variance = np.einsum('i,nij,j->n', direction, covs, direction)
    else:
        signal, variance = _intensity_moments(means, covs)
    return signal.reshape(phis.shape), variance.reshape(phis.shape)


def _stencil_derivatives(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                         phis: np.ndarray, settings: DerivativeSettings):
    steps = settings.rel_step * np.maximum(1.0, np.abs(phis))
    offsets = np.stack([np.zeros_like(steps), -steps, steps, -steps / 2, steps / 2], axis=1)
    signal, variance = signal_curve(det, spec, config, phis[:, None] + offsets)

    wide = (signal[:, 2] - signal[:, 1]) / (2 * steps)
    narrow = (signal[:, 4] - signal[:, 3]) / steps
    disagree = np.abs(wide - narrow) > settings.richardson_rtol * np.maximum(np.abs(wide),
                                                                             np.abs(narrow))
    derivative = np.where(disagree, (4 * narrow - wide) / 3, wide)

    half_change = np.abs(signal[:, 2] - signal[:, 1]) / 2
    noise_floor = np.maximum(settings.stationary_floor,
                             1e3 * np.finfo(float).eps * np.maximum(1.0, np.abs(signal[:, 0])))
    stationary = half_change <= noise_floor
    return signal[:, 0], variance[:, 0], derivative, stationary


def _best_quadrature(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                     phis: np.ndarray, settings: DerivativeSettings) -> Dict[str, np.ndarray]:
    """
    Most sensitive homodyne quadrature at each phase over the candidate modes.

    On one mode with quadrature means x(phi) and covariance C, the error-
    propagation sensitivity of X(theta) is smallest along C^-1 dx/dphi,
    where it equals 1 / sqrt(dx^T C^-1 dx).
    """
    steps = settings.rel_step * np.maximum(1.0, np.abs(phis))
    offsets = np.stack([np.zeros_like(steps), -steps, steps, -steps / 2, steps / 2], axis=1)
    stencil = (phis[:, None] + offsets).reshape(-1)

    best: Optional[Dict[str, np.ndarray]] = None
    for mode in det.modes:
        means, covs = output_moments(spec, config, stencil, (mode,))
        means = means.reshape(phis.size, 5, 2)
        cov = covs.reshape(phis.size, 5, 2, 2)[:, 0]
        dets = np.linalg.det(cov)
        if np.any(dets < DET_FLOOR):
            raise DegenerateCovarianceError(
                f"mode {mode} covariance determinant {np.min(dets):.3e} below {DET_FLOOR:.0e}")

        wide = (means[:, 2] - means[:, 1]) / (2 * steps[:, None])
        narrow = (means[:, 4] - means[:, 3]) / steps[:, None]
        gap = np.linalg.norm(wide - narrow, axis=1)
        scale = np.maximum(np.linalg.norm(wide, axis=1), np.linalg.norm(narrow, axis=1))
        slope = np.where((gap > settings.richardson_rtol * scale)[:, None],
                         (4 * narrow - wide) / 3, wide)

        weighted = np.linalg.solve(cov, slope[..., None])[..., 0]
        theta = np.arctan2(weighted[:, 1], weighted[:, 0])
        direction = np.stack([np.cos(theta), np.sin(theta)], axis=1)

        half_change = np.linalg.norm(means[:, 2] - means[:, 1], axis=1) / 2
        noise_floor = np.maximum(
            settings.stationary_floor,
            1e3 * np.finfo(float).eps * np.maximum(1.0, np.linalg.norm(means[:, 0], axis=1)))
        stationary = half_change <= noise_floor
        information = np.einsum('ni,ni->n', slope, weighted)

        candidate = {
            'signal': np.einsum('ni,ni->n', direction, means[:, 0]),
            'variance': np.einsum('ni,nij,nj->n', direction, cov, direction),
            'derivative': np.einsum('ni,ni->n', direction, slope),
            'stationary': stationary,
            'information': np.where(stationary, 0.0, information),
            'mode': np.full(phis.size, mode),
            'theta': theta,
        }
        if best is None:
            best = candidate
        else:
            take = candidate['information'] > best['information']
            best = {key: np.where(take, candidate[key], best[key]) for key in best}
    return best


def sensitivity_curve(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                      phis: Sequence[float], settings: Optional[DerivativeSettings] = None
                      ) -> Dict[str, np.ndarray]:
    """
    Phase sensitivity over a batch of phases.

    Stationary points get NaN in 'delta_phi' and True in 'stationary'.

    Returns:
        Dictionary of arrays: phi, delta_phi, signal, variance, derivative,
        stationary. Homodyne curves also carry the measured 'mode' and 'theta'.
    """
    settings = settings or DerivativeSettings()
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if det.best_quadrature:
        best = _best_quadrature(det, spec, config, phis, settings)
        signal, variance = best['signal'], best['variance']
        derivative, stationary = best['derivative'], best['stationary']
    else:
        signal, variance, derivative, stationary = _stencil_derivatives(det, spec, config, phis,
                                                                        settings)
    with np.errstate(divide='ignore', invalid='ignore'):
        delta = np.sqrt(np.maximum(variance, 0.0)) / np.abs(derivative)
    delta = np.where(stationary | ~np.isfinite(delta), np.nan, delta)
    curve = {'phi': phis, 'delta_phi': delta, 'signal': signal, 'variance': variance,
             'derivative': derivative, 'stationary': stationary}
    if det.best_quadrature:
        curve['mode'], curve['theta'] = best['mode'], best['theta']
    elif det.name == 'homodyne':
        curve['mode'] = np.full(phis.size, det.modes[0])
        curve['theta'] = np.full(phis.size, det.theta)
    return curve


def phase_sensitivity(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                      phi: float, settings: Optional[DerivativeSettings] = None
                      ) -> SensitivityResult:
    """
    Phase sensitivity by error propagation, sqrt(Var S) / |d<S>/dphi|.

    Args:
        det: Detection.
        spec: Input state.
        config: Interferometer parameters.
        phi: Operating phase.
        settings: Finite-difference controls.

    Returns:
        SensitivityResult at phi.

    Raises:
        StationaryPointError: If the signal does not change with phi at this point.
    """
    curve = sensitivity_curve(det, spec, config, [phi], settings)
    derivative = float(curve['derivative'][0])
    if curve['stationary'][0] or not np.isfinite(curve['delta_phi'][0]):
        raise StationaryPointError(phi, derivative)
    logger.debug(f"{det.label} sensitivity at phi={phi:.6g}: {curve['delta_phi'][0]:.10g}")
    quadrature = None
    if 'mode' in curve:
        quadrature = (int(curve['mode'][0]), float(curve['theta'][0]))
    return SensitivityResult(phi=float(phi), delta_phi=float(curve['delta_phi'][0]),
                             detection=det, signal=float(curve['signal'][0]),
                             signal_variance=float(curve['variance'][0]), derivative=derivative,
                             quadrature=quadrature)


def is_even_signal(det: DetectionKind, spec: InputSpec, config: InterferometerConfig) -> bool:
    """Whether <S>(phi) is even in phi, so the two minima mirror each other."""
    return (det.name in ('parity', 'intensity') and spec.kind != 'two-coherent'
            and spec.theta_alpha == 0 and spec.theta_s == 0
            and config.theta1 == 0 and config.theta2 == np.pi)


def search_grid(window: Tuple[float, float], settings: SearchSettings) -> np.ndarray:
    """Dense phase grid over the window, padded away from multiples of pi."""
    low, high = window
    if not high > low:
        raise InvalidParameterError(f"empty phase window {window}")
    count = int(np.floor((high - low) / settings.grid_step + 1e-9)) + 1
    grid = low + settings.grid_step * np.arange(count)
    nearest = np.pi * np.round(grid / np.pi)
    return grid[np.abs(grid - nearest) >= settings.window_padding]


def optimal_sensitivity(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                        phi_window: Tuple[float, float] = (-np.pi, np.pi),
                        search: Optional[SearchSettings] = None,
                        settings: Optional[DerivativeSettings] = None) -> Tuple[float, float]:
    """
    Minimize the phase sensitivity over a phase window.

    A dense grid locates the best point, then golden-section search refines
    it. For even signals the minimum with phi >= 0 is returned.

    Args:
        det: Detection.
        spec: Input state.
        config: Interferometer parameters.
        phi_window: Search interval (low, high).
        search: Grid and refinement controls.
        settings: Finite-difference controls.

    Returns:
        Tuple (phi_opt, delta_phi_min).

    Raises:
        SearchFailureError: If no finite sensitivity exists in the window.
    """
    search = search or SearchSettings()
    settings = settings or DerivativeSettings()
    grid = search_grid(phi_window, search)
    curve = sensitivity_curve(det, spec, config, grid, settings)
    delta = curve['delta_phi']
    finite = np.isfinite(delta)
    if not np.any(finite):
        raise SearchFailureError(
            f"no finite {det.label} sensitivity in window [{phi_window[0]:.4g}, {phi_window[1]:.4g}]")

    best = int(np.nanargmin(delta))
    phi_opt, delta_min = float(grid[best]), float(delta[best])

    if 0 < best < grid.size - 1 and finite[best - 1] and finite[best + 1]:
        def objective(phi):
            if np.abs(phi - np.pi * np.round(phi / np.pi)) < search.window_padding:
                return np.inf
            value = sensitivity_curve(det, spec, config, [phi], settings)['delta_phi'][0]
            return value if np.isfinite(value) else np.inf

        try:
            refined = minimize_scalar(objective, bracket=(grid[best - 1], grid[best], grid[best + 1]),
                                      method='golden', tol=search.golden_tol)
            if np.isfinite(refined.fun) and refined.fun <= delta_min:
                phi_opt, delta_min = float(refined.x), float(refined.fun)
        except (ValueError, RuntimeError) as e:
            logger.debug(f"golden refinement skipped at phi={phi_opt:.6g}: {str(e)}")

    if phi_opt < 0 and is_even_signal(det, spec, config):
        phi_opt = -phi_opt
    logger.debug(f"{det.label} optimum: phi={phi_opt:.8g}, delta_phi={delta_min:.10g}")
    return phi_opt, delta_min
