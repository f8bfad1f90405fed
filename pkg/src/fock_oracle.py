"""
Fock-space oracle for su11sense.

This module re-derives the output statistics of the interferometer in a
truncated two-mode Fock basis, without any Gaussian machinery: the input
state is built from its number-state amplitudes, the OPAs are operator
exponentials of the two-mode squeezing generator, the phase is a diagonal
unitary and loss is a binomial Kraus channel on each arm. It serves as the
independent reference for the Gaussian pipeline.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.sparse import csr_matrix, dia_matrix, diags, identity, kron
from scipy.sparse.linalg import expm_multiply
from scipy.special import comb, gammaln
from tqdm import tqdm

from .detection import homodyne_stats, intensity_stats, parity_expectation
from .exceptions import InvalidParameterError, TruncationError
from .gaussian import InputSpec
from .interferometer import InterferometerConfig, propagate

logger = logging.getLogger(__name__)

MIN_CUTOFF = 8
DEFAULT_CUTOFF = 40
DEFAULT_TAIL_BOUND = 1e-10
DEFAULT_TOLERANCE = 1e-6
STATISTICS = ('parity', 'mean_n', 'var_n', 'hd_mean', 'hd_var')


@dataclass(frozen=True, eq=False)
class FockStateRep:
    """
    Two-mode density operator in the truncated number basis.

    Attributes:
        cutoff: Largest photon number kept per mode.
        rho: (d^2, d^2) density matrix with d = cutoff + 1, index n_a * d + n_b.
        tail_mass: Largest population found on the truncation boundary
            during propagation.
    """
    cutoff: int
    rho: np.ndarray
    tail_mass: float = 0.0

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    @property
    def leaked(self) -> float:
        """Population lost to truncation: boundary mass or missing trace, whichever is larger."""
        return max(self.tail_mass, 1.0 - self.trace)

    def check_truncation(self, tail_bound: float) -> None:
        """
        Enforce the trace and boundary invariant of the truncated state.

        Raises:
            TruncationError: If more than tail_bound of the population leaked.
        """
        if self.leaked > tail_bound:
            raise TruncationError(self.leaked, tail_bound)

    def reduced(self, mode: int) -> np.ndarray:
        """Single-mode density matrix of mode 0 (arm a) or 1 (arm b)."""
        d = self.dim
        tensor = self.rho.reshape(d, d, d, d)
        if mode == 0:
            return np.einsum('abcb->ac', tensor)
        if mode == 1:
            return np.einsum('abad->bd', tensor)
        raise InvalidParameterError(f"mode index {mode} out of range for 2 modes")

    def populations(self) -> np.ndarray:
        """Joint photon-number distribution p[n_a, n_b]."""
        d = self.dim
        return np.real(np.diag(self.rho)).reshape(d, d)

    def parity(self, mode: int) -> float:
        probs = np.real(np.diag(self.reduced(mode)))
        return float(np.sum(probs * (-1.0) ** np.arange(self.dim)))

    def photon_stats(self, modes: Sequence[int] = (0, 1)) -> Tuple[float, float]:
        """Mean and variance of the total photon number over modes."""
        for mode in modes:
            if mode not in (0, 1):
                raise InvalidParameterError(f"mode index {mode} out of range for 2 modes")
        n = np.arange(self.dim)
        n_a, n_b = np.meshgrid(n, n, indexing='ij')
        total = (n_a if 0 in modes else 0) + (n_b if 1 in modes else 0)
        probs = self.populations()
        mean = float(np.sum(probs * total))
        return mean, float(np.sum(probs * total ** 2) - mean ** 2)

    def homodyne_stats(self, mode: int, theta: float = 0.0) -> Tuple[float, float]:
        """Mean and variance of X(theta) = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)."""
        reduced = self.reduced(mode)
        a = _annihilation(self.dim).toarray()
        quadrature = (a * np.exp(-1j * theta) + a.conj().T * np.exp(1j * theta)) / np.sqrt(2.0)
        mean = np.trace(reduced @ quadrature).real
        second = np.trace(reduced @ quadrature @ quadrature).real
        return float(mean), float(second - mean ** 2)


def _annihilation(dim: int) -> csr_matrix:
    return diags(np.sqrt(np.arange(1, dim)), 1, shape=(dim, dim), format='csr')


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Number-state amplitudes of |alpha> up to dim - 1 photons."""
    n = np.arange(dim)
    if alpha == 0:
        return (n == 0).astype(complex)
    log_mod = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) - 0.5 * abs(alpha) ** 2
    return np.exp(log_mod + 1j * n * np.angle(alpha))


def squeezed_amplitudes(r: float, theta_s: float, dim: int) -> np.ndarray:
    """
    Number-state amplitudes of the squeezed vacuum with <b^2> = sinh(2r) e^{i theta_s} / 2.

    Only even photon numbers are populated.
    """
    amplitudes = np.zeros(dim, dtype=complex)
    if r == 0:
        amplitudes[0] = 1.0
        return amplitudes
    pairs = np.arange((dim + 1) // 2)
    log_mod = (pairs * np.log(np.tanh(r)) + 0.5 * gammaln(2 * pairs + 1)
               - pairs * np.log(2.0) - gammaln(pairs + 1) - 0.5 * np.log(np.cosh(r)))
    amplitudes[0::2] = np.exp(log_mod + 1j * pairs * theta_s)
    return amplitudes


def loss_weights(loss: float, dim: int) -> np.ndarray:
    """
    Kraus amplitudes w[k, n] = sqrt(C(n, k)) (1 - L)^{(n - k)/2} L^{k/2}.

    Row k holds the amplitude for losing k photons from |n>.
    """
    if not 0.0 <= loss <= 1.0:
        raise InvalidParameterError(f"loss must lie in [0, 1], got {loss}")
    k = np.arange(dim)[:, None]
    n = np.arange(dim)[None, :]
    kept = np.clip(n - k, 0, None)
    # comb is zero for k > n
    return np.sqrt(comb(n, k)) * np.power(1.0 - loss, kept / 2) * np.power(loss, k / 2)


def loss_kraus_operators(loss: float, cutoff: int) -> List[dia_matrix]:
    """
    Single-mode loss channel as Kraus operators K_k |n> = w[k, n] |n - k>.

    Args:
        loss: Loss fraction L.
        cutoff: Largest photon number kept.

    Returns:
        List of cutoff + 1 sparse operators.
    """
    dim = cutoff + 1
    weights = loss_weights(loss, dim)
    # offset k maps column j to row j - k
    return [dia_matrix((weights[k][None, :], [k]), shape=(dim, dim)) for k in range(dim)]


class FockSimulator:
    """Two-mode truncated Fock-space propagation of the interferometer."""

    def __init__(self, cutoff: int = DEFAULT_CUTOFF):
        if cutoff < MIN_CUTOFF:
            raise InvalidParameterError(f"cutoff must be >= {MIN_CUTOFF}, got {cutoff}")
        self.cutoff = cutoff
        self.dim = cutoff + 1
        a = _annihilation(self.dim)
        eye = identity(self.dim, format='csr')
        self.a = kron(a, eye, format='csr')
        self.b = kron(eye, a, format='csr')
        self.n_a = np.repeat(np.arange(self.dim), self.dim)

    def input_vector(self, spec: InputSpec) -> np.ndarray:
        """Product-state amplitudes for the two input ports."""
        alpha = spec.complex_alpha
        if spec.kind == 'two-coherent':
            mode_a = coherent_amplitudes(1j * alpha / np.sqrt(2.0), self.dim)
            mode_b = coherent_amplitudes(alpha / np.sqrt(2.0), self.dim)
        else:
            mode_a = coherent_amplitudes(alpha, self.dim)
            mode_b = squeezed_amplitudes(spec.r, spec.theta_s, self.dim)
        return np.kron(mode_a, mode_b)

    def opa_generator(self, g: float, theta: float):
        """g (e^{i theta} a^dag b^dag - e^{-i theta} a b)."""
        pair = self.a @ self.b
        return g * (np.exp(1j * theta) * pair.conj().T - np.exp(-1j * theta) * pair)

    def apply_opa(self, rho: np.ndarray, g: float, theta: float) -> np.ndarray:
        if g == 0:
            return rho
        generator = self.opa_generator(g, theta).tocsc()
        half = expm_multiply(generator, rho)
        return expm_multiply(generator, half.conj().T).conj().T

    def apply_loss(self, rho: np.ndarray, l1: float, l2: float) -> np.ndarray:
        """Binomial loss channel on each arm, applied by index shifts."""
        d = self.dim
        tensor = rho.reshape(d, d, d, d)
        for axes, loss in (((0, 2), l1), ((1, 3), l2)):
            if loss == 0:
                continue
            weights = loss_weights(loss, d)
            out = np.zeros_like(tensor)
            for k in range(d):
                w = weights[k, k:]
                if not np.any(w):
                    continue
                src = [slice(None)] * 4
                dst = [slice(None)] * 4
                for axis in axes:
                    src[axis] = slice(k, d)
                    dst[axis] = slice(0, d - k)
                row_shape, col_shape = [1] * 4, [1] * 4
                row_shape[axes[0]] = d - k
                col_shape[axes[1]] = d - k
                factor = w.reshape(row_shape) * w.reshape(col_shape)
                out[tuple(dst)] += factor * tensor[tuple(src)]
            tensor = out
        return tensor.reshape(d * d, d * d)

    def boundary_mass(self, probs: np.ndarray) -> float:
        """Population with either mode on the last kept level."""
        grid = np.asarray(probs).reshape(self.dim, self.dim)
        return float(grid[-1, :].sum() + grid[:-1, -1].sum())

    def propagate(self, spec: InputSpec, config: InterferometerConfig, phi: float) -> FockStateRep:
        # pure until the loss stage
        psi = self.input_vector(spec)
        tail = self.boundary_mass(np.abs(psi) ** 2)
        if config.g1 != 0:
            psi = expm_multiply(self.opa_generator(config.g1, config.theta1).tocsc(), psi)
        tail = max(tail, self.boundary_mass(np.abs(psi) ** 2))
        psi = np.exp(1j * phi * self.n_a) * psi

        rho = np.outer(psi, psi.conj())
        rho = self.apply_loss(rho, config.l1, config.l2)
        rho = self.apply_opa(rho, config.g2, config.theta2)
        tail = max(tail, self.boundary_mass(np.real(np.diag(rho))))
        return FockStateRep(cutoff=self.cutoff, rho=rho, tail_mass=tail)


def oracle_propagate(spec: InputSpec, config: InterferometerConfig, phi: float,
                     cutoff: int = DEFAULT_CUTOFF, tail_bound: float = DEFAULT_TAIL_BOUND,
                     on_truncation: str = 'raise') -> FockStateRep:
    """
    Propagate an input state through the interferometer in the Fock basis.

    Args:
        spec: Input state.
        config: Interferometer parameters.
        phi: Phase shift.
        cutoff: Largest photon number kept per mode.
        tail_bound: Largest acceptable leaked population (boundary mass or missing trace).
        on_truncation: 'raise' for TruncationError, 'warn' to log and return.

    Returns:
        FockStateRep of the output.
    """
    if on_truncation not in ('raise', 'warn'):
        raise InvalidParameterError(f"on_truncation must be 'raise' or 'warn', got '{on_truncation}'")
    state = FockSimulator(cutoff).propagate(spec, config, phi)
    try:
        state.check_truncation(tail_bound)
    except TruncationError:
        if on_truncation == 'raise':
            raise
        logger.warning(f"Fock truncation at cutoff {cutoff}: leaked population "
                       f"{state.leaked:.3e} exceeds {tail_bound:.1e}")
    return state


@dataclass(frozen=True)
class OraclePoint:
    """One grid point of an oracle comparison."""
    spec: InputSpec
    config: InterferometerConfig
    phi: float
    cutoff: int = DEFAULT_CUTOFF


@dataclass
class CrossCheckReport:
    """
    Oracle-vs-pipeline comparison over a grid.

    Attributes:
        rows: One row per grid point with both values of every statistic.
        tolerance: Absolute tolerance applied.
        truncation_warnings: Descriptions of points whose tail mass
            exceeded the bound.
    """
    rows: pd.DataFrame = field(default_factory=pd.DataFrame)
    tolerance: float = DEFAULT_TOLERANCE
    truncation_warnings: List[str] = field(default_factory=list)

    @property
    def max_deviation(self) -> Dict[str, float]:
        if self.rows.empty:
            return {name: 0.0 for name in STATISTICS}
        return {name: float(self.rows[f'{name}_dev'].max()) for name in STATISTICS}

    @property
    def failures(self) -> pd.DataFrame:
        if self.rows.empty:
            return self.rows
        return self.rows[~self.rows['passed']]

    @property
    def passed(self) -> bool:
        return self.failures.empty


def _compare_point(point: OraclePoint, tail_bound: float, theta: float) -> Dict[str, Any]:
    state = oracle_propagate(point.spec, point.config, point.phi, point.cutoff,
                             tail_bound, on_truncation='warn')
    gaussian = propagate(point.spec, point.config, point.phi)

    oracle_values = dict(zip(STATISTICS, (state.parity(1), *state.photon_stats((0, 1)),
                                          *state.homodyne_stats(1, theta))))
    pipeline_values = dict(zip(STATISTICS, (parity_expectation(gaussian, 1),
                                            *intensity_stats(gaussian, (0, 1)),
                                            *homodyne_stats(gaussian, 1, theta))))
    row = {'kind': point.spec.kind, 'alpha': point.spec.alpha, 'r': point.spec.r,
           'g': point.config.g1, 'l1': point.config.l1, 'l2': point.config.l2,
           'phi': point.phi, 'cutoff': point.cutoff, 'tail_mass': state.leaked,
           'truncated': state.leaked > tail_bound}
    for name in STATISTICS:
        row[f'{name}_oracle'] = oracle_values[name]
        row[f'{name}_pipeline'] = pipeline_values[name]
        row[f'{name}_dev'] = abs(oracle_values[name] - pipeline_values[name])
    return row


def default_grid(cutoff: int = DEFAULT_CUTOFF) -> List[OraclePoint]:
    """Small-parameter grid: g <= 0.5, |alpha| <= 1, r <= 0.5, L <= 0.2."""
    specs = (InputSpec(),
             InputSpec(kind='coherent', alpha=1.0),
             InputSpec(kind='coherent-squeezed', alpha=0.5, r=0.3),
             InputSpec(kind='two-coherent', alpha=1.0))
    configs = (InterferometerConfig.balanced(0.3),
               InterferometerConfig.balanced(0.5, 0.1, 0.1),
               InterferometerConfig.balanced(0.3, 0.2, 0.05))
    return [OraclePoint(spec, config, phi, cutoff)
            for spec in specs for config in configs for phi in (0.0, 0.2, 0.5, 1.0)]


def cross_check(grid: Iterable[OraclePoint], tolerance: float = DEFAULT_TOLERANCE,
                tail_bound: float = DEFAULT_TAIL_BOUND, theta: float = np.pi / 2,
                max_workers: int = 1, progress: bool = False) -> CrossCheckReport:
    """
    Compare oracle and Gaussian pipeline statistics point by point.

    Statistics compared: parity of mode b, mean and variance of the total
    photon number, homodyne mean and variance of mode b at angle theta.

    Args:
        grid: Points to evaluate.
        tolerance: Absolute tolerance on every statistic.
        tail_bound: Leaked population above which a point is flagged.
        theta: Homodyne angle.
        max_workers: Worker processes (1 evaluates serially).
        progress: Show a progress bar.

    Returns:
        CrossCheckReport; failures are report rows, never exceptions.
    """
    points = list(grid)
    if not points:
        return CrossCheckReport(tolerance=tolerance)

    logger.info(f"Fock cross-check over {len(points)} points")
    args = ([tail_bound] * len(points), [theta] * len(points))
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            rows = list(tqdm(executor.map(_compare_point, points, *args),
                             total=len(points), disable=not progress, desc='oracle'))
    else:
        rows = [_compare_point(p, tail_bound, theta)
                for p in tqdm(points, disable=not progress, desc='oracle')]

    frame = pd.DataFrame(rows)
    deviations = frame[[f'{name}_dev' for name in STATISTICS]]
    frame['passed'] = (deviations <= tolerance).all(axis=1)

    warnings = [f"{row.kind} g={row.g} phi={row.phi} cutoff={row.cutoff}: "
                f"tail mass {row.tail_mass:.3e}" for row in frame[frame['truncated']].itertuples()]
    report = CrossCheckReport(rows=frame, tolerance=tolerance, truncation_warnings=warnings)
    logger.info(f"Fock cross-check: {len(report.failures)} failures, "
                f"max parity deviation {report.max_deviation['parity']:.2e}")
    return report


def settings_from_config(config: Optional[Dict[str, Any]]) -> Tuple[int, float]:
    """Cutoff and tail bound from the 'oracle' config section."""
    section = (config or {}).get('oracle', {})
    return int(section.get('cutoff', DEFAULT_CUTOFF)), float(section.get('tail_bound', DEFAULT_TAIL_BOUND))
