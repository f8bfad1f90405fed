"""
Interferometer module for su11sense.

This module builds the transfer maps of a lossy SU(1,1) interferometer
(two optical parametric amplifiers around a phase shift, with photon loss
on both arms between them) and propagates Gaussian input states through it.

Mode layout of the lossy path: 0 = arm a (phase-sensing), 1 = arm b,
2 = loss ancilla of arm a, 3 = loss ancilla of arm b. The ideal path uses
modes 0 and 1 only.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .exceptions import InvalidParameterError
from .gaussian import (BogoliubovMap, GaussianState, InputSpec, apply_bogoliubov,
                       make_input_state)

logger = logging.getLogger(__name__)

ARM_MODES = (0, 1)
LOSSY_MODES = 4


@dataclass(frozen=True)
class InterferometerConfig:
    """
    OPA strengths and phases plus the internal arm losses.

    Attributes:
        g1, g2: OPA gains (>= 0).
        theta1, theta2: OPA pump phases in radians.
        l1: Loss fraction on arm a (phase-sensing arm).
        l2: Loss fraction on arm b.
    """
    g1: float = 1.0
    g2: float = 1.0
    theta1: float = 0.0
    theta2: float = np.pi
    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        for name in ('g1', 'g2', 'theta1', 'theta2', 'l1', 'l2'):
            if not np.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.g1 < 0 or self.g2 < 0:
            raise InvalidParameterError(f"OPA gains must be >= 0, got g1={self.g1}, g2={self.g2}")
        _check_loss(self.l1, 'l1')
        _check_loss(self.l2, 'l2')

    @classmethod
    def balanced(cls, g: float, l1: float = 0.0, l2: float = 0.0) -> 'InterferometerConfig':
        """Second OPA undoes the first: g1 = g2 = g, theta1 = 0, theta2 = pi."""
        return cls(g1=g, g2=g, theta1=0.0, theta2=np.pi, l1=l1, l2=l2)

    @property
    def lossless(self) -> bool:
        return self.l1 == 0 and self.l2 == 0

    def with_loss(self, l1: float, l2: float) -> 'InterferometerConfig':
        return InterferometerConfig(self.g1, self.g2, self.theta1, self.theta2, l1, l2)


@dataclass(frozen=True)
class PhotonBudget:
    """Photon numbers inside the interferometer."""
    n_opa: float
    n_in: float
    n_tot: float


def _check_loss(value: float, name: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"loss {name} must lie in [0, 1], got {value}")


def opa_map(g: float, theta: float) -> BogoliubovMap:
    """
    Two-mode squeezing stage on (a, b*).

    Args:
        g: Gain, >= 0.
        theta: Pump phase in radians.

    Returns:
        2-mode Bogoliubov map.
    """
    if g < 0:
        raise InvalidParameterError(f"OPA gain must be >= 0, got {g}")
    c, s = np.cosh(g), np.sinh(g)
    return BogoliubovMap(np.array([[c, np.exp(1j * theta) * s],
                                   [np.exp(-1j * theta) * s, c]]))


def phase_map(phi: float) -> BogoliubovMap:
    """Phase shift phi on arm a."""
    return BogoliubovMap(np.diag([np.exp(1j * phi), 1.0]))


def loss_map(l1: float, l2: float) -> BogoliubovMap:
    """
    Fictitious beam splitters coupling each arm to its vacuum ancilla.

    Arm rows keep sqrt(1 - L) of the arm amplitude and take in sqrt(L) of
    the ancilla. The ancilla rows carry the opposite sign so the four-mode
    map is canonical.

    Args:
        l1: Loss on arm a.
        l2: Loss on arm b.

    Returns:
        4-mode Bogoliubov map on (a, b*, v_a, v_b*).
    """
    _check_loss(l1, 'l1')
    _check_loss(l2, 'l2')
    ta, ra = np.sqrt(1.0 - l1), np.sqrt(l1)
    tb, rb = np.sqrt(1.0 - l2), np.sqrt(l2)
    return BogoliubovMap(np.array([
        [ta, 0.0, ra, 0.0],
        [0.0, tb, 0.0, rb],
        [-ra, 0.0, ta, 0.0],
        [0.0, -rb, 0.0, tb],
    ]))


def build_transfer(config: InterferometerConfig, phi: float, lossy: bool = True) -> BogoliubovMap:
    """
    Compose the interferometer map in propagation order.

    The order is OPA1, phase, loss, OPA2, so the lossy map with zero loss
    reduces to the ideal map on the arm modes.

    Args:
        config: Interferometer parameters.
        phi: Phase shift on arm a.
        lossy: Build the 4-mode map with ancillas instead of the 2-mode one.

    Returns:
        Composed Bogoliubov map.
    """
    opa1 = opa_map(config.g1, config.theta1)
    opa2 = opa_map(config.g2, config.theta2)
    shift = phase_map(phi)
    if not lossy:
        return opa2 @ shift @ opa1
    n = LOSSY_MODES
    return opa2.embed(n) @ loss_map(config.l1, config.l2) @ shift.embed(n) @ opa1.embed(n)


def propagate(spec: InputSpec, config: InterferometerConfig, phi: float,
              lossy: bool = True) -> GaussianState:
    """
    Output state of the interferometer.

    Returns:
        4-mode state (arms and ancillas) when lossy, otherwise 2-mode.
    """
    if not lossy and not config.lossless:
        raise InvalidParameterError("the ideal path cannot carry loss; use lossy=True")
    ancillas = LOSSY_MODES - 2 if lossy else 0
    state = make_input_state(spec, ancillas)
    return apply_bogoliubov(state, build_transfer(config, phi, lossy))


def _rotation_batch(phis: np.ndarray, n_quad: int) -> np.ndarray:
    """Real matrices of the phase stage for every phi, shape (N, n_quad, n_quad)."""
    count = phis.size
    rot = np.broadcast_to(np.eye(n_quad), (count, n_quad, n_quad)).copy()
    cos, sin = np.cos(phis), np.sin(phis)
    rot[:, 0, 0] = cos
    rot[:, 0, 1] = -sin
    rot[:, 1, 0] = sin
    rot[:, 1, 1] = cos
    return rot


def output_moments(spec: InputSpec, config: InterferometerConfig, phis: Sequence[float],
                   modes: Sequence[int] = ARM_MODES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Output means and covariances of selected modes for a batch of phases.

    The state after OPA1 and the phase-independent tail (loss then OPA2) are
    computed once; only the phase rotation varies across the batch.

    Args:
        spec: Input state.
        config: Interferometer parameters.
        phis: Phases to evaluate.
        modes: Output modes to keep (indices into the 4-mode layout).

    Returns:
        Tuple (means, covs) of shapes (N, 2k) and (N, 2k, 2k).
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    modes = list(modes)
    for mode in modes:
        if not 0 <= mode < LOSSY_MODES:
            raise InvalidParameterError(f"mode {mode} out of range for the lossy layout")
    n = LOSSY_MODES
    after_opa1 = apply_bogoliubov(make_input_state(spec, n - 2),
                                  opa_map(config.g1, config.theta1).embed(n))
    tail = (opa_map(config.g2, config.theta2).embed(n) @ loss_map(config.l1, config.l2)).real_matrix
    idx = np.array([[2 * m, 2 * m + 1] for m in modes]).reshape(-1)
    transfer = np.einsum('ij,njk->nik', tail[idx], _rotation_batch(phis, 2 * n))
    means = transfer @ after_opa1.mean
    covs = np.einsum('nij,jk,nlk->nil', transfer, after_opa1.cov, transfer)
    covs = 0.5 * (covs + np.swapaxes(covs, 1, 2))
    return means, covs


def photon_budget(spec: InputSpec, config: InterferometerConfig) -> PhotonBudget:
    """
    Photon numbers used for the shot-noise and Heisenberg limits.

    N_OPA = 2 sinh^2 g1, N_in = N_alpha + N_s, N_Tot = (N_OPA + 1) N_in + N_OPA.
    """
    n_opa = 2.0 * np.sinh(config.g1) ** 2
    n_in = spec.n_in
    n_tot = (n_opa + 1.0) * n_in + n_opa
    return PhotonBudget(n_opa=float(n_opa), n_in=float(n_in), n_tot=float(n_tot))
