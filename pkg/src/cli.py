"""
Command-line interface for su11sense.

This module provides the su11sense command: single-point signals and
sensitivities, detection comparisons, parameter sweeps, critical-loss
searches, figure data and verification runs.
"""

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

from dotenv import load_dotenv

from .analysis import FIGURES, SWEEP_VARIABLES, SensitivityAnalyzer, SweepRequest
from .closed_forms import quantum_limits
from .detection import (DETECTION_NAMES, DerivativeSettings, DetectionKind, SearchSettings,
                        optimal_sensitivity, phase_sensitivity, signal_curve)
from .exceptions import InvalidParameterError, NumericalError
from .gaussian import INPUT_KINDS, InputSpec
from .interferometer import InterferometerConfig
from .utils import load_config, resolve_output_dir, setup_logging
from .verification import LEVELS, VerificationSuite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4


def _common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; unset flags fall back to the config file."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', choices=INPUT_KINDS, help='Input state')
    common.add_argument('--alpha', type=float, help='Coherent amplitude |alpha0|')
    common.add_argument('--theta-alpha', type=float, help='Coherent phase (rad)')
    common.add_argument('--r', type=float, help='Squeezing strength')
    common.add_argument('--theta-s', type=float, help='Squeezing angle (rad)')
    common.add_argument('--g', type=float, help='OPA gain (both OPAs)')
    common.add_argument('--phi', type=float, help='Phase shift (rad)')
    common.add_argument('--loss', type=float, help='Loss on both arms')
    common.add_argument('--l1', type=float, help='Loss on the phase-sensing arm')
    common.add_argument('--l2', type=float, help='Loss on the free arm')
    common.add_argument('--detection', choices=DETECTION_NAMES, help='Detection scheme')
    common.add_argument('--quadrature', type=str,
                        help="Homodyne quadrature angle (rad), or 'best' per phase")
    common.add_argument('--homodyne-mode', type=int, choices=(0, 1), help='Homodyne output arm')
    common.add_argument('--config', type=str, help='Path to config file')
    common.add_argument('--workers', type=int, help='Worker processes for grid evaluations')
    common.add_argument('--quiet', action='store_true', help='Disable progress bars')
    common.add_argument('--out', type=str, help='Output file (sweep) or directory')
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the su11sense command."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        description="su11sense - phase sensitivity of lossy SU(1,1) interferometers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  su11sense sensitivity --input coherent --alpha 2 --g 1 --optimal
  su11sense sweep --variable loss --start 0 --stop 0.3 --step 0.01 --detections parity homodyne
  su11sense critical-loss --input vacuum --g 1
  su11sense fig 4 --out results
  su11sense verify --level quick
        """
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    subparsers.add_parser('signal', parents=[common], help='Mean signal and variance at phi')

    sensitivity_parser = subparsers.add_parser('sensitivity', parents=[common],
                                               help='Phase sensitivity at phi')
    sensitivity_parser.add_argument('--optimal', action='store_true',
                                    help='Search the optimal phase instead of using --phi')

    subparsers.add_parser('compare', parents=[common], help='Optimal PD, HD and ID side by side')

    sweep_parser = subparsers.add_parser('sweep', parents=[common], help='One-dimensional sweep')
    sweep_parser.add_argument('--variable', choices=SWEEP_VARIABLES, required=True,
                              help='Swept parameter')
    sweep_parser.add_argument('--start', type=float, required=True, help='First grid value')
    sweep_parser.add_argument('--stop', type=float, required=True, help='Last grid value')
    sweep_parser.add_argument('--step', type=float, required=True, help='Grid step')
    sweep_parser.add_argument('--detections', nargs='+', choices=DETECTION_NAMES,
                              help='Detections to evaluate (default: --detection)')

    subparsers.add_parser('critical-loss', parents=[common],
                          help='Loss at which the optimum meets the shot-noise limit')

    fig_parser = subparsers.add_parser('fig', parents=[common], help='Write figure data')
    fig_parser.add_argument('number', type=int, choices=FIGURES, help='Figure number')

    verify_parser = subparsers.add_parser('verify', parents=[common], help='Run self-checks')
    verify_parser.add_argument('--level', choices=LEVELS, default='quick', help='Check depth')

    return parser


def _apply_overrides(args: argparse.Namespace, config: Dict[str, Any]) -> Dict[str, Any]:
    """Fold run-control flags into the configuration."""
    detection = config.setdefault('detection', {})
    if args.quadrature is not None:
        if args.quadrature.strip().lower() == 'best':
            detection['homodyne_angle'] = None
        else:
            try:
                detection['homodyne_angle'] = float(args.quadrature)
            except ValueError:
                raise InvalidParameterError(
                    f"--quadrature expects an angle in radians or 'best', got '{args.quadrature}'")
    if args.homodyne_mode is not None:
        detection['homodyne_modes'] = [args.homodyne_mode]
    if args.workers is not None:
        if args.workers < 1:
            raise InvalidParameterError(f"--workers must be >= 1, got {args.workers}")
        config.setdefault('analysis', {})['max_workers'] = args.workers
    if args.quiet:
        config.setdefault('analysis', {})['progress'] = False
    return config


def build_inputs(args: argparse.Namespace, config: Dict[str, Any]
                 ) -> Tuple[InputSpec, InterferometerConfig]:
    """
    Input state and interferometer from flags over config defaults.

    ``--loss`` sets both arms; ``--l1`` and ``--l2`` override it per arm.
    """
    defaults = config.get('defaults', {})

    def pick(name: str, flag: Optional[float]) -> Any:
        return flag if flag is not None else defaults.get(name, 0.0)

    kind = args.input or defaults.get('input', 'vacuum')
    spec = InputSpec(kind=kind, alpha=float(pick('alpha', args.alpha)),
                     theta_alpha=float(pick('theta_alpha', args.theta_alpha)),
                     r=float(pick('r', args.r)), theta_s=float(pick('theta_s', args.theta_s)))

    l1 = float(defaults.get('l1', 0.0))
    l2 = float(defaults.get('l2', 0.0))
    if args.loss is not None:
        l1 = l2 = args.loss
    if args.l1 is not None:
        l1 = args.l1
    if args.l2 is not None:
        l2 = args.l2
    g = float(pick('g', args.g))
    return spec, InterferometerConfig.balanced(g, l1, l2)


def _detection(args: argparse.Namespace, config: Dict[str, Any]) -> DetectionKind:
    name = args.detection or config.get('defaults', {}).get('detection', 'parity')
    return DetectionKind.from_name(name, config)


def _phi(args: argparse.Namespace, config: Dict[str, Any]) -> float:
    return float(args.phi if args.phi is not None else config.get('defaults', {}).get('phi', 0.1))


def _print_limits(spec: InputSpec, interferometer: InterferometerConfig) -> None:
    limits = quantum_limits(spec, interferometer)
    print(f"N_Tot: {limits.n_tot:.8g}")
    print(f"SNL:   {limits.snl:.8g}")
    print(f"HL:    {limits.hl:.8g}")
    print(f"QCRB:  {'n/a' if limits.qcrb is None else format(limits.qcrb, '.8g')}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    try:
        config = _apply_overrides(args, load_config(args.config))
    except InvalidParameterError as e:
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_INVALID
    logger = setup_logging(__name__, config)

    handlers = {
        'signal': handle_signal_command,
        'sensitivity': handle_sensitivity_command,
        'compare': handle_compare_command,
        'sweep': handle_sweep_command,
        'critical-loss': handle_critical_loss_command,
        'fig': handle_fig_command,
        'verify': handle_verify_command,
    }

    try:
        return handlers[args.command](args, config)
    except InvalidParameterError as e:
        logger.error(f"Invalid parameters: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as e:
        logger.error(f"Numerical failure: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as e:
        logger.error(f"Error executing command: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_ERROR


def handle_signal_command(args, config) -> int:
    """Handle signal command."""
    spec, interferometer = build_inputs(args, config)
    det = _detection(args, config)
    phi = _phi(args, config)
    signal, variance = signal_curve(det, spec, interferometer, [phi])
    print(f"{det.label} signal at phi={phi:.6g}: {signal[0]:.12g}")
    print(f"variance: {variance[0]:.12g}")
    return EXIT_OK


def handle_sensitivity_command(args, config) -> int:
    """Handle sensitivity command."""
    spec, interferometer = build_inputs(args, config)
    det = _detection(args, config)
    settings = DerivativeSettings.from_config(config)
    if args.optimal:
        phi, delta = optimal_sensitivity(det, spec, interferometer,
                                         search=SearchSettings.from_config(config),
                                         settings=settings)
        print(f"{det.label} optimal phase: {phi:.10g}")
    else:
        phi = _phi(args, config)
        delta = phase_sensitivity(det, spec, interferometer, phi, settings).delta_phi
    print(f"{det.label} delta phi at phi={phi:.6g}: {delta:.10g}")
    if det.name == 'homodyne':
        mode, theta = phase_sensitivity(det, spec, interferometer, phi, settings).quadrature
        print(f"quadrature: mode {mode}, theta {theta:.8g}")
    _print_limits(spec, interferometer)
    return EXIT_OK


def handle_compare_command(args, config) -> int:
    """Handle compare command."""
    spec, interferometer = build_inputs(args, config)
    frame = SensitivityAnalyzer(config=config).compare(spec, interferometer)
    print(frame.to_string(index=False, float_format=lambda v: f"{v:.8g}"))
    return EXIT_OK


def handle_sweep_command(args, config) -> int:
    """Handle sweep command."""
    spec, interferometer = build_inputs(args, config)
    analyzer = SensitivityAnalyzer(config=config)
    names = args.detections or [args.detection or config.get('defaults', {}).get('detection', 'parity')]
    output = args.out or os.path.join(resolve_output_dir(config), f'sweep_{args.variable}.csv')
    req = SweepRequest(args.variable, args.start, args.stop, args.step, spec=spec,
                       config=interferometer, detections=analyzer.detections(names), output=output)
    frame = analyzer.sweep(req)
    diverged = int(frame['diverged'].sum())
    print(f"Wrote {len(frame)} rows to {output} ({diverged} diverged)")
    return EXIT_OK


def handle_critical_loss_command(args, config) -> int:
    """Handle critical-loss command."""
    spec, interferometer = build_inputs(args, config)
    analyzer = SensitivityAnalyzer(config=config)
    result = analyzer.critical_loss(spec, interferometer, _detection(args, config))
    print(f"{result.detection} critical loss: {result.l_cri:.6f}")
    print(f"N_Tot: {result.n_tot:.8g}")
    print(f"lost photons: {result.lost_photons:.6g}")
    print(f"SNL: {result.snl:.8g}")
    return EXIT_OK


def handle_fig_command(args, config) -> int:
    """Handle fig command."""
    paths = SensitivityAnalyzer(config=config).figure(args.number, args.out)
    for path in paths:
        print(path)
    return EXIT_OK


def handle_verify_command(args, config) -> int:
    """Handle verify command."""
    report = VerificationSuite(config=config).verify(args.level, args.out)
    print(report.render(), end='')
    return EXIT_OK if report.passed else EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
