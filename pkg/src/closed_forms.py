"""
Closed-form expressions for su11sense.

This module evaluates the analytic parity signals, phase sensitivities and
quantum limits of the balanced SU(1,1) interferometer. Long expressions are
kept term for term as published, split into named sub-terms so each can be
checked against the Gaussian pipeline.

Two published expressions do not match the model:
    - the ideal parity signal: the x1 bracket is wrong and the factor 8 is
      missing from the prefactor (the model gives x1 = e^{-2r} x3);
    - the vacuum-input intensity sensitivity: the trailing +8(1-L)^2 should
      read -8(1-L)^2.
Functions affected take ``printed``; ``printed=True`` evaluates the
published text, the default applies the correction.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .exceptions import InvalidParameterError, SingularFormulaError, UnsupportedInputError
from .gaussian import InputSpec
from .interferometer import InterferometerConfig, photon_budget

logger = logging.getLogger(__name__)

PHASE_SINGULAR_ATOL = 1e-12

PARITY_VARIANTS = ('vacuum-loss', 'ideal-optimal', 'coherent-equal-loss', 'unequal-loss')
HD_VARIANTS = ('coherent-squeezed-loss', 'two-coherent')
ID_VARIANTS = ('one-coherent', 'vacuum', 'two-coherent')


@dataclass(frozen=True)
class FormulaParams:
    """
    Physical parameters consumed by the closed forms.

    Attributes:
        g: OPA gain (both OPAs).
        alpha: Coherent amplitude modulus |alpha0|.
        theta_alpha: Coherent amplitude phase.
        r: Squeezing strength.
        l1: Loss on the phase-sensing arm.
        l2: Loss on the free arm.
    """
    g: float
    alpha: float = 0.0
    theta_alpha: float = 0.0
    r: float = 0.0
    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        if self.g < 0 or self.alpha < 0 or self.r < 0:
            raise InvalidParameterError("g, alpha and r must be >= 0")
        for name in ('l1', 'l2'):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise InvalidParameterError(f"{name} must lie in [0, 1), got {getattr(self, name)}")

    @classmethod
    def from_inputs(cls, spec: InputSpec, config: InterferometerConfig) -> 'FormulaParams':
        if config.g1 != config.g2:
            raise InvalidParameterError("closed forms assume equal OPA gains")
        return cls(g=config.g1, alpha=spec.alpha, theta_alpha=spec.theta_alpha, r=spec.r,
                   l1=config.l1, l2=config.l2)

    @property
    def n_alpha(self) -> float:
        return self.alpha ** 2

    @property
    def loss(self) -> float:
        """Common loss for the equal-loss expressions."""
        if self.l1 != self.l2:
            raise InvalidParameterError(
                f"expression needs equal losses, got l1={self.l1}, l2={self.l2}")
        return self.l1


@dataclass(frozen=True)
class LimitSet:
    """Shot-noise, Heisenberg and quantum Cramer-Rao limits."""
    snl: float
    hl: float
    qcrb: Optional[float]
    n_tot: float


def _guard(value: float, term: str, floor: float = 1e-300) -> float:
    if not np.isfinite(value) or abs(value) <= floor:
        raise SingularFormulaError(term)
    return value


def _check_phase(phi: float, singular: Iterable[float], term: str) -> None:
    wrapped = np.mod(phi, 2 * np.pi)
    for point in singular:
        distance = abs(wrapped - point)
        if min(distance, 2 * np.pi - distance) < PHASE_SINGULAR_ATOL:
            raise SingularFormulaError(term, f"{term} is singular at phi={phi:.6g}")


# Ideal parity signal

def _x1(r: float, g: float, phi: float, printed: bool = False) -> float:
    if not printed:
        return np.exp(-2 * r) * _x3(r, g, phi)
    e2r = np.exp(2 * r)
    bracket = (8 * np.sinh(2 * g) ** 4 * (np.cos(2 * phi) - np.cos(phi))
               + 4 * np.cosh(4 * g) + 3 * np.cosh(8 * g) - 7)
    return np.exp(-2 * r) * (e2r + 1) ** 2 * bracket + 64


def _x2(alpha: float, theta: float, r: float, g: float, phi: float) -> float:
    sin_half4 = np.sin(phi / 2) ** 4
    sh2 = np.sinh(2 * g) ** 2
    braces = (8 * np.cosh(4 * g) * np.cos(2 * theta) * sin_half4
              - 8 * np.cosh(2 * g) * np.sin(2 * theta) * np.sin(phi) * (np.cos(phi) - 1)
              + 8 * np.exp(4 * r) * (np.cos(theta) * np.sin(phi)
                                     - 2 * np.cosh(2 * g) * np.sin(theta) * np.sin(phi / 2) ** 2) ** 2
              + 32 * np.exp(2 * r) * sh2 * sin_half4
              + 8 * np.cosh(4 * g) * sin_half4
              - 8 * np.cos(theta) ** 2 * np.cos(phi)
              + (3 * np.cos(2 * theta) - 1) * np.cos(2 * phi)
              + np.cos(2 * theta) + 5)
    return 4 * alpha ** 2 * sh2 * braces


def _x3(r: float, g: float, phi: float) -> float:
    bracket = (8 * np.cosh(8 * g) * np.sin(phi / 2) ** 4 + 8 * np.cosh(4 * g) * np.sin(phi) ** 2
               + 4 * np.cos(phi) + 3 * np.cos(2 * phi) - 7)
    return (np.exp(2 * r) + 1) ** 2 * bracket + 64 * np.exp(2 * r)


def parity_signal_ideal_cf(alpha: float, theta_alpha: float, r: float, g: float, phi: float,
                           printed: bool = False) -> float:
    """
    Lossless parity signal of output mode b for coherent and squeezed-vacuum input.

    Args:
        alpha: |alpha0|.
        theta_alpha: Coherent phase.
        r: Squeezing strength.
        g: OPA gain.
        phi: Phase shift.
        printed: Evaluate the published expression without the correction.

    Returns:
        <Pi_b>.
    """
    x1 = _x1(r, g, phi, printed)
    x3 = _guard(_x3(r, g, phi), 'x3')
    if x1 <= 0:
        raise SingularFormulaError('x1', f"x1 = {x1:.6g} is not positive")
    exponent = -_x2(alpha, theta_alpha, r, g, phi) / x3
    if printed:
        return float(np.exp(exponent) / np.sqrt(x1))
    logger.debug("ideal parity signal: using x1 = exp(-2r) x3 and prefactor 8")
    return float(8 * np.exp(exponent) / np.sqrt(x1))


# Lossy parity signal, equal losses

def _y1(r: float, g: float, phi: float, loss: float) -> float:
    e2, e4 = np.exp(2 * r), np.exp(4 * r)
    m2, m1 = (loss - 1) ** 2, loss - 1
    cp, c2p = np.cos(phi), np.cos(2 * phi)
    ch2, ch4, ch6, ch8 = np.cosh(2 * g), np.cosh(4 * g), np.cosh(6 * g), np.cosh(8 * g)
    total = (-4 * ch4 * (-2 * (5 * loss ** 2 - 2 * loss + 1) * e2 + m2 * (e2 + 1) ** 2 * c2p
                         + m2 * (-e4) - m2)
             + 16 * m2 * e2 * ch6 * cp
             + 8 * m2 * e4 * ch6 * cp
             - 8 * m2 * e2 * ch8 * cp
             - 4 * m2 * e4 * ch8 * cp
             + 2 * m2 * e2 * ch8 * c2p
             + m2 * e4 * ch8 * c2p
             + 16 * m1 * e2 * ch6 * cp
             + 8 * m1 * e4 * ch6 * cp
             + 8 * (1 - loss) * loss * ch2 * ((e2 + 1) ** 2 * cp - 2 * e2 + 7 * e4 + 7)
             - 16 * m2 * e2 * ch6
             - 8 * m2 * e4 * ch6
             + 6 * m2 * e2 * ch8
             + 3 * m2 * e4 * ch8
             - 16 * m1 * e2 * ch6
             - 8 * m1 * e4 * ch6
             + 8 * m2 * ch6 * cp
             - 4 * m2 * ch8 * cp
             + m2 * ch8 * c2p
             + 8 * m1 * ch6 * cp
             - 8 * m2 * ch6
             + 3 * m2 * ch8
             - 8 * m1 * ch6
             + 8 * m2 * e2 * cp
             + 4 * m2 * e4 * cp
             + 6 * m2 * e2 * c2p
             + 3 * m2 * e4 * c2p
             + 82 * m2 * e2
             - 7 * m2 * e4
             + 64 * m1 * e2
             + 4 * m2 * cp
             + 3 * m2 * c2p
             - 7 * m2
             + 32 * e2)
    return np.exp(-2 * r) * total


def _y2(alpha: float, r: float, g: float, phi: float, loss: float) -> float:
    e2, e4 = np.exp(2 * r), np.exp(4 * r)
    cp = np.cos(phi)
    ch4 = np.cosh(4 * g)
    inner = (2 * (loss - 1) * (e2 * (ch4 - 1) * (cp - 1) + (ch4 + 1) * (cp - 1) - 2 * e4 * (cp + 1))
             + 8 * loss * e2 * np.cosh(2 * g))
    return 16 * alpha ** 2 * (1 - loss) * np.sinh(2 * g) ** 2 * np.sin(phi / 2) ** 2 * inner


def _y3(r: float, g: float, phi: float, loss: float) -> float:
    e2, e4 = np.exp(2 * r), np.exp(4 * r)
    m1 = loss - 1
    cp, c2p = np.cos(phi), np.cos(2 * phi)
    sh2_4 = np.sinh(2 * g) ** 4
    ch4, ch6, ch8 = np.cosh(4 * g), np.cosh(6 * g), np.cosh(8 * g)
    arm = m1 * (8 * sh2_4 * c2p + 3 * ch8 - 7) + 4 * m1 * ch4 - 8 * loss * ch6
    return (-8 * m1 ** 2 * (e2 + 1) ** 2 * np.sinh(4 * g) ** 2 * cp
            + 2 * e2 * (8 * (loss - 2) * loss * sh2_4 * c2p
                        + 4 * (loss * (5 * loss - 2) + 1) * ch4
                        - 8 * m1 * loss * ch6
                        + 3 * m1 ** 2 * ch8
                        + 8 * sh2_4 * c2p
                        + loss * (41 * loss - 50) + 25)
            + m1 * e4 * arm
            + 8 * m1 * loss * np.cosh(2 * g) * (4 * (e2 + 1) ** 2 * np.sinh(2 * g) ** 2 * cp
                                                 + 2 * e2 - 7 * e4 - 7)
            + m1 * arm)


def parity_signal_lossy_cf(alpha: float, r: float, g: float, phi: float, loss: float) -> float:
    """
    Parity signal with equal loss on both arms (real coherent amplitude).

    Returns:
        <Pi_b> = 8 y1^{-1/2} exp(-y2/y3).
    """
    if not 0.0 <= loss < 1.0:
        raise InvalidParameterError(f"loss must lie in [0, 1), got {loss}")
    y1 = _guard(_y1(r, g, phi, loss), 'y1')
    y3 = _guard(_y3(r, g, phi, loss), 'y3')
    return float(8 * np.exp(-_y2(alpha, r, g, phi, loss) / y3) / np.sqrt(y1))


def _vacuum_denominator(g: float, phi: float, loss: float) -> float:
    s2 = np.sinh(2 * g) ** 2
    return (1 - loss) * (s2 * np.cos(phi) - np.cosh(2 * g) ** 2) - loss * np.cosh(2 * g)


def parity_signal_vacuum_loss_cf(g: float, phi: float, loss: float) -> float:
    """Vacuum-input parity signal with equal loss, 1/|D|."""
    return float(1.0 / abs(_guard(_vacuum_denominator(g, phi, loss), 'D')))


# Parity sensitivities

def _sensitivity_vacuum_loss(p: FormulaParams, phi: float) -> float:
    loss = p.loss
    _check_phase(phi, (0.0, np.pi), 'csc(phi)')
    denominator = _vacuum_denominator(p.g, phi, loss)
    noise = np.sqrt(1 - denominator ** -2.0)
    slope = (4 / np.tanh(2 * p.g) * (loss + (1 - loss) * np.cosh(2 * p.g))
             - 4 * (1 - loss) * np.sinh(2 * p.g) * np.cos(phi)) ** 2
    return noise / np.sin(phi) / (16 * (1 - loss)) * slope


def _sensitivity_ideal_optimal(p: FormulaParams) -> float:
    squeezing = np.sinh(2 * p.r) * np.cos(2 * p.theta_alpha) + np.cosh(2 * p.r)
    weight = p.n_alpha * squeezing + np.sinh(p.r) ** 2 + 1
    return 1.0 / (_guard(np.sinh(2 * p.g), 'G_OPA') * np.sqrt(weight))


def _z1(alpha: float, g: float, phi: float, loss: float) -> float:
    s2 = np.sinh(2 * g) ** 2
    spread = -2 * s2 * np.cos(phi) + np.cosh(4 * g) + 1
    exponent = (8 * alpha ** 2 * (loss - 1) * s2 * np.sin(phi / 2) ** 2
                / (2 * loss * np.cosh(2 * g) - (loss - 1) * spread))
    return 1 - 4 * np.exp(exponent) / ((loss - 1) * spread - 2 * loss * np.cosh(2 * g)) ** 2


def _k_base(g: float, phi: float, loss: float) -> float:
    return (4 * (1 - loss) * np.sinh(2 * g) ** 2 * np.cos(phi) - 4 * loss * np.cosh(2 * g)
            - (2 - 2 * loss) * np.cosh(4 * g) - 3 * (1 - loss) - loss + 1)


def _k1(alpha: float, g: float, phi: float, loss: float) -> float:
    n = alpha ** 2
    inner = (-4 * (n + 1) * loss * np.cosh(2 * g) + 2 * (1 - loss) * np.cosh(4 * g) * np.cos(phi)
             - (2 - 2 * loss) * np.cosh(4 * g) - 4 * n * (1 - loss) - 2 * (1 - loss) * np.cos(phi)
             - 3 * (1 - loss) - loss + 1)
    return (1 - loss) ** 2 * np.sinh(2 * g) ** 4 * np.sin(phi) ** 2 * inner ** 2


def _k2(g: float, phi: float, loss: float) -> float:
    return _k_base(g, phi, loss) ** 6


def _k3(alpha: float, g: float, phi: float, loss: float) -> float:
    numerator = 4 * alpha ** 2 * np.sinh(2 * g) ** 2 * (-2 * (1 - loss) * np.cos(phi) - 2 * loss + 2)
    return numerator / _guard(_k_base(g, phi, loss), 'k3')


def _z2(alpha: float, g: float, phi: float, loss: float) -> float:
    return 256 * _k1(alpha, g, phi, loss) / _guard(_k2(g, phi, loss), 'k2') * np.exp(_k3(alpha, g, phi, loss))


def _sensitivity_coherent_equal_loss(p: FormulaParams, phi: float) -> float:
    loss = p.loss
    _check_phase(phi, (0.0, np.pi), 'k1')
    z2 = _guard(_z2(p.alpha, p.g, phi, loss), 'z2')
    return np.sqrt(_z1(p.alpha, p.g, phi, loss) / z2)


def _c_terms(alpha: float, g: float, phi: float, l1: float, l2: float):
    s2 = np.sinh(2 * g) ** 2
    root = np.sqrt(1 - l1) * np.sqrt(1 - l2)
    c1 = (-(2 * alpha ** 2 * s2 * (2 * root * np.cos(phi) + l1 + l2 - 2))
          / (2 * root * s2 * np.cos(phi) + 4 * l1 * np.sinh(g) ** 4 + l2 * s2 - np.cosh(4 * g) - 1))
    c2 = (-2 * root * s2 * np.cos(phi) - 4 * l1 * np.sinh(g) ** 4 - l2 * s2 + np.cosh(4 * g) + 1) ** 2
    return c1, c2


def _d_terms(alpha: float, g: float, phi: float, l1: float, l2: float):
    n = alpha ** 2
    root = np.sqrt(1 - l1) * np.sqrt(1 - l2)
    ch4 = np.cosh(4 * g)
    base = (4 * root * np.sinh(2 * g) ** 2 * np.cos(phi) - 4 * l1 * np.cosh(2 * g)
            - (-l1 - l2 + 2) * ch4 - 3 * (1 - l1) - l2 + 1)
    inner = (-4 * (n + 1) * l1 * np.cosh(2 * g) + 2 * root * ch4 * np.cos(phi) - (-l1 - l2 + 2) * ch4
             - 4 * n * (1 - l1) - 2 * root * np.cos(phi) - 3 * (1 - l1) - l2 + 1)
    d1 = (1 - l1) * (1 - l2) * np.sinh(2 * g) ** 4 * np.sin(phi) ** 2 * inner ** 2
    d2 = base ** 6
    d3 = 4 * n * np.sinh(2 * g) ** 2 * (-2 * root * np.cos(phi) - l1 - l2 + 2) / _guard(base, 'd3')
    return d1, d2, d3


def _sensitivity_unequal_loss(p: FormulaParams, phi: float) -> float:
    _check_phase(phi, (0.0, np.pi), 'd1')
    c1, c2 = _c_terms(p.alpha, p.g, phi, p.l1, p.l2)
    d1, d2, d3 = _d_terms(p.alpha, p.g, phi, p.l1, p.l2)
    f1 = 1 - 4 / _guard(c2, 'c2') * np.exp(c1)
    f2 = _guard(256 * d1 / _guard(d2, 'd2') * np.exp(d3), 'f2')
    return np.sqrt(f1 / f2)


def parity_sensitivity_cf(variant: str, params: FormulaParams, phi: Optional[float] = None) -> float:
    """
    Closed-form parity-detection phase sensitivity.

    Variants:
        'vacuum-loss': vacuum input, equal loss, any phi.
        'ideal-optimal': lossless optimum at phi = 0 for coherent and
            squeezed-vacuum input (phi is ignored).
        'coherent-equal-loss': one coherent input, equal loss.
        'unequal-loss': one coherent input, separate l1 and l2.

    Args:
        variant: Expression to evaluate.
        params: Physical parameters.
        phi: Operating phase (not used by 'ideal-optimal').

    Returns:
        Delta phi.
    """
    if variant == 'ideal-optimal':
        return float(_sensitivity_ideal_optimal(params))
    if variant not in PARITY_VARIANTS:
        raise InvalidParameterError(
            f"unknown parity variant '{variant}', expected one of {', '.join(PARITY_VARIANTS)}")
    if phi is None:
        raise InvalidParameterError(f"variant '{variant}' needs phi")
    if params.r != 0:
        raise InvalidParameterError(f"variant '{variant}' has no squeezing term")
    if variant == 'vacuum-loss':
        if params.alpha != 0:
            raise InvalidParameterError("vacuum-loss variant requires alpha = 0")
        return float(_sensitivity_vacuum_loss(params, phi))
    if variant == 'coherent-equal-loss':
        return float(_sensitivity_coherent_equal_loss(params, phi))
    return float(_sensitivity_unequal_loss(params, phi))


# Homodyne

def hd_sensitivity_cf(variant: str, params: FormulaParams, form: str = 'cosh') -> float:
    """
    Closed-form optimal homodyne sensitivity with equal loss.

    Args:
        variant: 'coherent-squeezed-loss' or 'two-coherent'.
        params: Physical parameters.
        form: For 'two-coherent', 'cosh' or 'nopa' (the photon-number form).

    Returns:
        Delta phi.

    Raises:
        InvalidParameterError: For vacuum input, where homodyne carries no signal.
    """
    if variant not in HD_VARIANTS:
        raise InvalidParameterError(
            f"unknown homodyne variant '{variant}', expected one of {', '.join(HD_VARIANTS)}")
    if params.alpha == 0:
        raise InvalidParameterError(
            "homodyne needs a coherent amplitude: its mean signal vanishes for vacuum input")
    loss = params.loss
    g = params.g

    if variant == 'coherent-squeezed-loss':
        spec = InputSpec(kind='coherent-squeezed', alpha=params.alpha, r=params.r)
        n_tot = photon_budget(spec, InterferometerConfig.balanced(g)).n_tot
        penalty = 1 + loss / (1 - loss) * np.exp(2 * params.r) * n_tot / spec.n_in
        head = np.exp(params.r) * _guard(np.sinh(2 * g), 'G_OPA') * np.sqrt(params.n_alpha)
        return float(np.sqrt(penalty) / head)

    penalty = np.sqrt((loss * np.cosh(2 * g) + 1 - loss) / (1 - loss))
    if form == 'cosh':
        return float(penalty / (np.sqrt(2) * params.alpha * np.cosh(g) ** 2 * (np.tanh(g) + 1)))
    if form == 'nopa':
        n_opa = 2 * np.sinh(g) ** 2
        return float(penalty * np.sqrt(2) / (params.alpha * (np.sqrt(n_opa * (n_opa + 2)) + n_opa + 2)))
    raise InvalidParameterError(f"unknown form '{form}', expected 'cosh' or 'nopa'")


# Intensity

def _id_brackets(n: float, g: float, loss: float):
    m = 1 - loss
    across = (2 * (n + 1) * loss * m * np.cosh(2 * g) + 2 * n * m ** 2 + loss ** 2 * np.cosh(4 * g)
              - (2 - loss) * loss)
    along = ((2 * n + 1) * m ** 2 * np.cosh(8 * g) + 2 * (n + 1) * loss * m * np.cosh(6 * g)
             + loss ** 2 * np.cosh(4 * g) - 1)
    return across, along


def id_sensitivity_cf(variant: str, params: FormulaParams, phi: Optional[float] = None,
                      printed: bool = False) -> float:
    """
    Closed-form intensity-detection sensitivity with equal loss.

    'one-coherent' and 'vacuum' give Delta phi at phi for total photon
    counting on both outputs; 'two-coherent' gives the optimum directly.

    Args:
        variant: 'one-coherent', 'vacuum' or 'two-coherent'.
        params: Physical parameters.
        phi: Operating phase (not used by 'two-coherent').
        printed: For 'vacuum', keep the published sign of the last term.

    Returns:
        Delta phi.
    """
    if variant not in ID_VARIANTS:
        raise InvalidParameterError(
            f"unknown intensity variant '{variant}', expected one of {', '.join(ID_VARIANTS)}")
    loss = params.loss
    g = params.g
    m = 1 - loss

    if variant == 'two-coherent':
        if params.alpha == 0:
            raise InvalidParameterError("two-coherent variant needs alpha > 0")
        s2, c2 = np.sinh(g) ** 2, np.cosh(g) ** 2
        n = params.n_alpha
        value = (1 / (4 * n * s2 * c2) * (1 + loss / m * (1 + 2 * s2))
                 + loss / m ** 2 * (1 + loss * (s2 + c2)) / (4 * n * c2))
        return float(np.sqrt(value))

    if phi is None:
        raise InvalidParameterError(f"variant '{variant}' needs phi")
    _check_phase(phi, (0.0,), 'csc(phi/2)')
    _check_phase(phi, (np.pi,), 'sec(phi/2)')
    csch4 = 1 / _guard(np.sinh(2 * g), 'csch(2g)') ** 4
    csc2 = 1 / np.sin(phi / 2) ** 2
    sec2 = 1 / np.cos(phi / 2) ** 2

    if variant == 'one-coherent':
        n = params.n_alpha
        across, along = _id_brackets(n, g, loss)
        value = csch4 * (csc2 * across + sec2 * along) - 8 * (2 * n + 1) * m ** 2
        return float(np.sqrt(value) / (n + 1) / m / np.sqrt(8))

    if params.alpha != 0:
        raise InvalidParameterError("vacuum variant requires alpha = 0")
    across, along = _id_brackets(0.0, g, loss)
    tail = 8 * m ** 2
    if not printed:
        logger.debug("vacuum intensity sensitivity: using -8(1-L)^2")
        tail = -tail
    value = csch4 * (csc2 * across + sec2 * along) + tail
    return float(np.sqrt(value) / m / np.sqrt(8))


# Limits

def _qcrb(spec: InputSpec, n_opa: float) -> float:
    kappa = n_opa * (n_opa + 2)
    n_alpha = spec.n_alpha
    if spec.kind == 'vacuum':
        information = kappa
    elif spec.kind == 'coherent':
        information = kappa * (2 * n_alpha + 1) + 2 * n_alpha * (n_opa + 2)
    elif spec.kind == 'two-coherent':
        information = 2 * n_alpha * ((n_opa + 1) * np.sqrt(kappa) + kappa + 1) + kappa
    else:
        r = spec.r
        information = (2 * n_alpha * (n_opa + 2) + n_opa ** 2 * np.sinh(2 * r) ** 2 / 2
                       + kappa * (2 * n_alpha * np.cosh(r) * np.exp(r) + np.cosh(r) ** 2))
    return 1.0 / np.sqrt(_guard(information, 'QCRB'))


def quantum_limits(spec: InputSpec, config: InterferometerConfig, strict: bool = False) -> LimitSet:
    """
    Shot-noise limit, Heisenberg limit and quantum Cramer-Rao bound.

    The bound is tabulated for the balanced interferometer with real
    squeezing only; other inputs get qcrb=None (or raise when strict).

    Args:
        spec: Input state.
        config: Interferometer parameters.
        strict: Raise UnsupportedInputError instead of returning qcrb=None.

    Returns:
        LimitSet.
    """
    budget = photon_budget(spec, config)
    snl = 1.0 / np.sqrt(_guard(budget.n_tot, 'N_Tot'))
    hl = 1.0 / budget.n_tot

    qcrb = None
    if spec.theta_s != 0 or config.g1 != config.g2:
        message = "no tabulated quantum Cramer-Rao bound for rotated squeezing or unequal gains"
        if strict:
            raise UnsupportedInputError(message)
        logger.warning(message)
    else:
        qcrb = float(_qcrb(spec, budget.n_opa))
    return LimitSet(snl=float(snl), hl=float(hl), qcrb=qcrb, n_tot=budget.n_tot)
