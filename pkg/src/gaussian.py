"""
Gaussian state module for su11sense.

This module represents multimode bosonic Gaussian states by their
quadrature mean vector and covariance matrix, and applies linear
Bogoliubov transformations to them.

Conventions:
    Quadratures are ordered (X1, P1, X2, P2, ...) with X = (c + c^dag)/sqrt(2),
    so the vacuum has mean 0 and covariance I/2.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import multivariate_normal

from .exceptions import DegenerateCovarianceError, InvalidParameterError

logger = logging.getLogger(__name__)

SYMMETRY_ATOL = 1e-12
UNCERTAINTY_ATOL = 1e-10
METRIC_ATOL = 1e-10
DET_FLOOR = 1e-300

INPUT_KINDS = ('vacuum', 'coherent', 'coherent-squeezed', 'two-coherent')


@dataclass(frozen=True)
class InputSpec:
    """
    Input state injected into modes a (phase-sensing arm) and b.

    Attributes:
        kind: One of 'vacuum', 'coherent', 'coherent-squeezed', 'two-coherent'.
        alpha: Coherent amplitude modulus |alpha0|.
        theta_alpha: Coherent amplitude phase in radians.
        r: Squeezing strength of the mode-b squeezed vacuum.
        theta_s: Squeezing angle in radians.
    """
    kind: str = 'vacuum'
    alpha: float = 0.0
    theta_alpha: float = 0.0
    r: float = 0.0
    theta_s: float = 0.0

    def __post_init__(self):
        if self.kind not in INPUT_KINDS:
            raise InvalidParameterError(
                f"unknown input kind '{self.kind}', expected one of {', '.join(INPUT_KINDS)}")
        for name in ('alpha', 'theta_alpha', 'r', 'theta_s'):
            if not np.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.alpha < 0:
            raise InvalidParameterError(f"alpha is a modulus and must be >= 0, got {self.alpha}")
        if self.r < 0:
            raise InvalidParameterError(f"squeezing r must be >= 0, got {self.r}")
        if self.kind == 'vacuum' and self.alpha != 0:
            raise InvalidParameterError("vacuum input takes no coherent amplitude")
        if self.kind != 'coherent-squeezed' and self.r != 0:
            raise InvalidParameterError(f"input kind '{self.kind}' takes no squeezing")

    @property
    def complex_alpha(self) -> complex:
        return self.alpha * np.exp(1j * self.theta_alpha)

    @property
    def n_alpha(self) -> float:
        """Mean coherent photon number N_alpha."""
        return self.alpha ** 2

    @property
    def n_squeezed(self) -> float:
        """Mean squeezed-vacuum photon number N_s = sinh^2 r."""
        return float(np.sinh(self.r) ** 2)

    @property
    def n_in(self) -> float:
        return self.n_alpha + self.n_squeezed


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for (X1, P1, ...) ordering."""
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), omega)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """
    Gaussian state given by its first and second moments.

    The arrays are copied and frozen on construction.
    """
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.size == 0 or mean.size % 2:
            raise InvalidParameterError(f"mean must have even nonzero length, got {mean.size}")
        if cov.shape != (mean.size, mean.size):
            raise InvalidParameterError(
                f"covariance shape {cov.shape} does not match mean length {mean.size}")
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
            raise InvalidParameterError("moments must be finite")
        asymmetry = np.max(np.abs(cov - cov.T))
        if asymmetry > SYMMETRY_ATOL:
            raise InvalidParameterError(f"covariance is not symmetric (max deviation {asymmetry:.3e})")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def uncertainty_eigenvalue(self) -> float:
        """Smallest eigenvalue of cov + i*Omega/2 (nonnegative for physical states)."""
        hermitian = self.cov + 0.5j * symplectic_form(self.n_modes)
        return float(np.linalg.eigvalsh(hermitian)[0])

    def is_physical(self, atol: float = UNCERTAINTY_ATOL) -> bool:
        return self.uncertainty_eigenvalue() >= -atol

    def check_physical(self, atol: float = UNCERTAINTY_ATOL) -> 'GaussianState':
        """
        Raise if the state violates the uncertainty relation.

        Returns:
            The state itself, for chaining.
        """
        smallest = self.uncertainty_eigenvalue()
        if smallest < -atol:
            raise InvalidParameterError(
                f"covariance violates the uncertainty relation (eigenvalue {smallest:.3e})")
        return self

    def mode_mean(self, mode: int) -> np.ndarray:
        return self.mean[2 * mode:2 * mode + 2]

    def mode_cov(self, mode: int) -> np.ndarray:
        return self.cov[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2]


def vacuum_state(n_modes: int = 1) -> GaussianState:
    if n_modes < 1:
        raise InvalidParameterError(f"n_modes must be positive, got {n_modes}")
    return GaussianState(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))


def coherent_state(alpha: complex) -> GaussianState:
    """Single-mode coherent state |alpha>."""
    return GaussianState(np.sqrt(2.0) * np.array([alpha.real, alpha.imag]), 0.5 * np.eye(2))


def squeezed_vacuum(r: float, theta_s: float = 0.0) -> GaussianState:
    """
    Single-mode squeezed vacuum.

    At theta_s = 0 the X quadrature is anti-squeezed (variance e^{2r}/2) and P
    squeezed (variance e^{-2r}/2), matching the input Wigner function used
    throughout the package.
    """
    if r < 0:
        raise InvalidParameterError(f"squeezing r must be >= 0, got {r}")
    n = np.sinh(r) ** 2
    m = 0.5 * np.sinh(2 * r) * np.exp(1j * theta_s)  # <b^2>
    cov = np.array([[n + 0.5 + m.real, m.imag],
                    [m.imag, n + 0.5 - m.real]])
    return GaussianState(np.zeros(2), cov)


def tensor_product(*states: GaussianState) -> GaussianState:
    """Product state, modes concatenated in argument order."""
    if not states:
        raise InvalidParameterError("tensor_product needs at least one state")
    mean = np.concatenate([s.mean for s in states])
    cov = block_diag(*[s.cov for s in states])
    return GaussianState(mean, cov)


def make_input_state(spec: InputSpec, ancilla_vacua: int = 0) -> GaussianState:
    """
    Build the (2 + ancilla_vacua)-mode input state for an input spec.

    Mode 0 is arm a, mode 1 is arm b, further modes are vacuum ancillas.

    Args:
        spec: Input state description.
        ancilla_vacua: Number of vacuum ancilla modes appended.

    Returns:
        Product Gaussian state.
    """
    if ancilla_vacua < 0:
        raise InvalidParameterError(f"ancilla count must be >= 0, got {ancilla_vacua}")

    alpha = spec.complex_alpha
    if spec.kind == 'two-coherent':
        mode_a = coherent_state(1j * alpha / np.sqrt(2.0))
        mode_b = coherent_state(alpha / np.sqrt(2.0))
    else:
        mode_a = coherent_state(alpha)
        mode_b = squeezed_vacuum(spec.r, spec.theta_s)

    states = [mode_a, mode_b]
    if ancilla_vacua:
        states.append(vacuum_state(ancilla_vacua))
    return tensor_product(*states)


def _alternating_flags(n_modes: int) -> Tuple[int, ...]:
    return tuple(j % 2 for j in range(n_modes))


@dataclass(frozen=True, eq=False)
class BogoliubovMap:
    """
    Linear Bogoliubov map on the mixed amplitude vector (alpha, beta*, ...).

    Row/column j refers to mode j; ``conjugate[j]`` says whether the slot
    holds the amplitude (0) or its conjugate (1). The default alternates,
    which is the (a, b*, v_a, v_b*) layout of the interferometer.

    Attributes:
        matrix: Complex n x n matrix, one row and column per mode.
        conjugate: Slot conjugation flags.
    """
    matrix: np.ndarray
    conjugate: Optional[Tuple[int, ...]] = field(default=None)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise InvalidParameterError(f"map matrix must be square, got shape {matrix.shape}")
        flags = self.conjugate
        if flags is None:
            flags = _alternating_flags(matrix.shape[0])
        flags = tuple(int(bool(c)) for c in flags)
        if len(flags) != matrix.shape[0]:
            raise InvalidParameterError("one conjugation flag per mode is required")
        matrix.flags.writeable = False
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'conjugate', flags)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, n_modes: int) -> 'BogoliubovMap':
        return cls(np.eye(n_modes, dtype=complex))

    @property
    def metric(self) -> np.ndarray:
        return np.diag([-1.0 if c else 1.0 for c in self.conjugate])

    def metric_deviation(self) -> float:
        """Max |M eta M^dag - eta| element; zero for canonical (lossless) maps."""
        eta = self.metric
        return float(np.max(np.abs(self.matrix @ eta @ self.matrix.conj().T - eta)))

    def is_metric_preserving(self, atol: float = METRIC_ATOL) -> bool:
        return self.metric_deviation() <= atol

    def compose(self, first: 'BogoliubovMap') -> 'BogoliubovMap':
        """Map that applies ``first`` and then ``self``."""
        if first.n_modes != self.n_modes or first.conjugate != self.conjugate:
            raise InvalidParameterError(
                f"cannot compose maps on {first.n_modes} and {self.n_modes} modes")
        return BogoliubovMap(self.matrix @ first.matrix, self.conjugate)

    def __matmul__(self, first: 'BogoliubovMap') -> 'BogoliubovMap':
        return self.compose(first)

    def embed(self, n_modes: int) -> 'BogoliubovMap':
        """Extend with identity on extra trailing modes."""
        if n_modes < self.n_modes:
            raise InvalidParameterError(f"cannot embed {self.n_modes} modes into {n_modes}")
        matrix = np.eye(n_modes, dtype=complex)
        matrix[:self.n_modes, :self.n_modes] = self.matrix
        flags = self.conjugate + _alternating_flags(n_modes)[self.n_modes:]
        return BogoliubovMap(matrix, flags)

    def restrict(self, modes: Sequence[int]) -> np.ndarray:
        """Sub-block of the complex matrix on the given modes."""
        idx = np.asarray(modes)
        return self.matrix[np.ix_(idx, idx)]

    @cached_property
    def complex_blocks(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Blocks (A, B) of c' = A c + B c^dag in plain amplitude form.
        """
        flags = np.asarray(self.conjugate, dtype=bool)
        rows = np.where(flags[:, None], self.matrix.conj(), self.matrix)
        same = flags[:, None] == flags[None, :]
        a_block = np.where(same, rows, 0.0)
        b_block = np.where(same, 0.0, rows)
        return a_block, b_block

    @cached_property
    def real_matrix(self) -> np.ndarray:
        """Real quadrature matrix S with mean' = S mean, cov' = S cov S^T."""
        a_block, b_block = self.complex_blocks
        plus = a_block + b_block
        minus = a_block - b_block
        n = self.n_modes
        s = np.empty((2 * n, 2 * n))
        s[0::2, 0::2] = plus.real
        s[0::2, 1::2] = -minus.imag
        s[1::2, 0::2] = plus.imag
        s[1::2, 1::2] = minus.real
        s.flags.writeable = False
        return s


def apply_bogoliubov(state: GaussianState, bmap: BogoliubovMap) -> GaussianState:
    """
    Transform a Gaussian state by a Bogoliubov map.

    Args:
        state: Input state.
        bmap: Map on the same number of modes.

    Returns:
        Transformed state.
    """
    if state.n_modes != bmap.n_modes:
        raise InvalidParameterError(
            f"map acts on {bmap.n_modes} modes but state has {state.n_modes}")
    s = bmap.real_matrix
    cov = s @ state.cov @ s.T
    return GaussianState(s @ state.mean, 0.5 * (cov + cov.T))


def reduce_to_modes(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Marginal state of the given modes, in the given order."""
    modes = list(modes)
    if not modes:
        raise InvalidParameterError("mode set must be nonempty")
    for mode in modes:
        if not 0 <= mode < state.n_modes:
            raise InvalidParameterError(f"mode {mode} out of range for {state.n_modes}-mode state")
    idx = np.array([[2 * m, 2 * m + 1] for m in modes]).reshape(-1)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def reduce_to_mode(state: GaussianState, mode: int) -> GaussianState:
    """Single-mode marginal."""
    return reduce_to_modes(state, [mode])


def wigner_value(state: GaussianState, point: Sequence[float],
                 det_floor: float = DET_FLOOR) -> float:
    """
    Wigner function of a Gaussian state at a phase-space point.

    Args:
        state: Gaussian state.
        point: Quadrature vector of length 2 * n_modes.
        det_floor: Smallest covariance determinant treated as regular.

    Returns:
        Wigner density value.
    """
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.size != state.mean.size:
        raise InvalidParameterError(
            f"point has length {point.size}, expected {state.mean.size}")
    det = np.linalg.det(state.cov)
    if det < det_floor:
        raise DegenerateCovarianceError(f"covariance determinant {det:.3e} below {det_floor:.0e}")
    return float(multivariate_normal(mean=state.mean, cov=state.cov).pdf(point))


def photon_number(state: GaussianState, mode: int) -> float:
    """Mean photon number of one mode: (tr cov - 1)/2 + |mean|^2/2."""
    reduced = reduce_to_mode(state, mode)
    return float((np.trace(reduced.cov) - 1.0) / 2.0 + reduced.mean @ reduced.mean / 2.0)
