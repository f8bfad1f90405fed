"""
su11sense - phase sensitivity of lossy SU(1,1) interferometers.

This package provides a Gaussian-state model of the interferometer, parity,
homodyne and intensity detection, the published closed-form expressions, a
truncated Fock-space cross-check, and sweeps that reproduce the figure data.
"""

from .utils import PACKAGE_VERSION

__version__ = PACKAGE_VERSION

from .analysis import CriticalLoss, SensitivityAnalyzer, SweepRequest
from .closed_forms import FormulaParams, LimitSet, quantum_limits
from .detection import DetectionKind, optimal_sensitivity, phase_sensitivity
from .fock_oracle import cross_check, oracle_propagate
from .gaussian import GaussianState, InputSpec
from .interferometer import InterferometerConfig, photon_budget, propagate
from .verification import VerificationSuite

__all__ = [
    "CriticalLoss",
    "DetectionKind",
    "FormulaParams",
    "GaussianState",
    "InputSpec",
    "InterferometerConfig",
    "LimitSet",
    "SensitivityAnalyzer",
    "SweepRequest",
    "VerificationSuite",
    "cross_check",
    "optimal_sensitivity",
    "oracle_propagate",
    "phase_sensitivity",
    "photon_budget",
    "propagate",
    "quantum_limits",
]
