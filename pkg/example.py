#!/usr/bin/env python3
"""
Example script demonstrating su11sense usage.

This script builds the balanced interferometer, prints the photon budget
and limits, finds the optimal parity sensitivity for the single-beam
inputs and the critical loss for vacuum input.
"""

import sys

from src.analysis import SensitivityAnalyzer
from src.closed_forms import quantum_limits
from src.detection import DetectionKind, optimal_sensitivity
from src.exceptions import Su11Error
from src.gaussian import InputSpec
from src.interferometer import InterferometerConfig, photon_budget
from src.utils import load_config, setup_logging

logger = setup_logging(__name__)


def main():
    """Main example function."""
    print("su11sense - SU(1,1) Interferometer Example")
    print("=" * 50)

    try:
        config = load_config()
        config['analysis']['progress'] = False
        interferometer = InterferometerConfig.balanced(1.0)
        parity = DetectionKind.from_name('parity', config)

        inputs = {
            'vacuum': InputSpec(),
            'coherent |alpha|=2': InputSpec(kind='coherent', alpha=2.0),
            'coherent |alpha|=2 + squeezed r=1': InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0),
        }

        for name, spec in inputs.items():
            budget = photon_budget(spec, interferometer)
            limits = quantum_limits(spec, interferometer)
            print(f"\n{name}:")
            print(f"  N_OPA = {budget.n_opa:.6f}, N_in = {budget.n_in:.6f}, N_Tot = {budget.n_tot:.6f}")
            print(f"  SNL = {limits.snl:.6f}, HL = {limits.hl:.6f}, QCRB = {limits.qcrb:.6f}")

            for loss in (0.0, 0.05):
                phi_opt, delta = optimal_sensitivity(parity, spec, interferometer.with_loss(loss, loss))
                print(f"  L = {loss:.2f}: optimal parity delta phi = {delta:.6f} at phi = {phi_opt:.4f}")

        print("\nSearching the critical loss for vacuum input...")
        analyzer = SensitivityAnalyzer(config=config)
        result = analyzer.critical_loss(InputSpec(), interferometer)
        print(f"  L_cri = {result.l_cri:.4f} ({result.lost_photons:.4f} photons lost "
              f"of N_Tot = {result.n_tot:.4f})")

        print("\nExample completed successfully!")

    except Su11Error as e:
        logger.error(f"Error in example: {str(e)}")
        print(f"Error: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
