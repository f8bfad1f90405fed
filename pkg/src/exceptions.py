"""
Error types for su11sense.

The command-line front end maps these onto exit codes: invalid parameters
exit with 2, numerical failures with 3 and verification failures with 4.
"""

from typing import Optional


class Su11Error(Exception):
    """Base class for all su11sense errors."""


class InvalidParameterError(Su11Error, ValueError):
    """A parameter is outside its allowed range or has the wrong shape."""


class UnsupportedInputError(InvalidParameterError):
    """The input state has no entry in the quantum Cramer-Rao table."""


class NumericalError(Su11Error, ArithmeticError):
    """A computation could not produce a finite, trustworthy number."""


class DegenerateCovarianceError(NumericalError):
    """Covariance matrix is singular to working precision."""


class StationaryPointError(NumericalError):
    """
    The detection signal is stationary at the requested phase.

    Attributes:
        phi: Phase at which the derivative vanished.
        derivative: Estimated derivative of the signal.
    """

    def __init__(self, phi: float, derivative: float, message: Optional[str] = None):
        self.phi = phi
        self.derivative = derivative
        if message is None:
            message = (f"signal is stationary at phi={phi:.6g} "
                       f"(|d<S>/dphi| = {abs(derivative):.3e})")
        super().__init__(message)


class SingularFormulaError(NumericalError):
    """
    A closed-form expression hit a vanishing denominator.

    Attributes:
        term: Name of the sub-term that vanished.
    """

    def __init__(self, term: str, message: Optional[str] = None):
        self.term = term
        super().__init__(message or f"closed form is singular: {term} vanishes")


class SearchFailureError(NumericalError):
    """No finite sensitivity was found inside the search window."""


class NoCrossingError(NumericalError):
    """The optimal sensitivity never crosses the shot-noise limit in the bracket."""


class TruncationError(NumericalError):
    """
    Fock-space truncation leaked more population than allowed.

    Attributes:
        tail_mass: Measured population beyond (or at) the cutoff.
    """

    def __init__(self, tail_mass: float, bound: float):
        self.tail_mass = tail_mass
        self.bound = bound
        super().__init__(f"truncation tail mass {tail_mass:.3e} exceeds bound {bound:.1e}")


class VerificationError(Su11Error):
    """One or more verification checks failed."""
