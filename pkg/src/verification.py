"""
Verification module for su11sense.

This module runs the self-checks behind ``su11sense verify``: structural
invariants of the Gaussian model, closed forms against the pipeline, the
Fock-space cross-check and the published qualitative claims. A claim
the model does not reproduce fails the run; only the QCRB comparison,
which is undecidable in this model, is reported as tension.
"""

import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from . import closed_forms
from .analysis import SensitivityAnalyzer
from .detection import DetectionKind, optimal_sensitivity, sensitivity_curve, signal_curve
from .exceptions import InvalidParameterError, NumericalError, Su11Error, VerificationError
from .fock_oracle import cross_check, default_grid, settings_from_config
from .gaussian import InputSpec, photon_number, vacuum_state, wigner_value
from .interferometer import (InterferometerConfig, build_transfer, loss_map, opa_map, phase_map,
                             photon_budget, propagate)
from .utils import PACKAGE_VERSION, ensure_directory_exists, load_config, resolve_output_dir, setup_logging

LEVELS = ('quick', 'full')
SUITES = ('structure', 'closed-forms', 'oracle', 'claims')
REPORT_FILE = 'verify_report.txt'

SIGNAL_RTOL = 1e-6
SENSITIVITY_RTOL = 1e-5
REDUCTION_RTOL = 1e-9
OPTIMUM_RTOL = 1e-4
ORACLE_ATOL = 1e-6
QUICK_STRIDE = 10


@dataclass(frozen=True)
class CheckResult:
    """
    Outcome of one check.

    Attributes:
        suite: Suite name.
        name: Check name (for closed forms, the formula or sub-term).
        status: PASS, FAIL, TENSION, NOTE or SKIP.
        detail: Human-readable measurement.
    """
    suite: str
    name: str
    status: str
    detail: str = ''


@dataclass
class VerificationReport:
    """All check results of one run."""
    level: str
    results: List[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if r.status == 'FAIL']

    @property
    def tensions(self) -> List[CheckResult]:
        return [r for r in self.results if r.status == 'TENSION']

    @property
    def passed(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = [f"su11sense {PACKAGE_VERSION} verification report (level: {self.level})", '']
        for suite in SUITES:
            rows = [r for r in self.results if r.suite == suite]
            if not rows:
                continue
            lines.append(f"[{suite}]")
            for r in rows:
                lines.append(f"  {r.status:<8} {r.name}" + (f": {r.detail}" if r.detail else ''))
            lines.append('')
        counts = {status: sum(r.status == status for r in self.results)
                  for status in ('PASS', 'FAIL', 'TENSION', 'NOTE', 'SKIP')}
        lines.append('summary: ' + ', '.join(f"{k.lower()} {v}" for k, v in counts.items()))
        lines.append('result: ' + ('OK' if self.passed else
                                   'FAILED (' + ', '.join(r.name for r in self.failures) + ')'))
        return '\n'.join(lines) + '\n'


def _relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _signal_grid(level: str) -> List[Dict[str, Any]]:
    """Closed-form equivalence grid, one entry per (g, alpha, r, L) with its phase array."""
    phis = np.round(np.arange(-3.0, 3.0 + 1e-9, 0.05), 10)
    phis = phis[np.abs(phis) >= 1e-3]
    if level == 'quick':
        phis = phis[::QUICK_STRIDE]
    return [{'g': g, 'alpha': alpha, 'r': r, 'loss': loss, 'phis': phis}
            for g in (0.5, 1.0) for alpha in (0.0, 1.0, 2.0) for r in (0.0, 0.5, 1.0)
            for loss in (0.0, 0.05, 0.1)]


def _grid_spec(alpha: float, r: float) -> InputSpec:
    if r > 0:
        return InputSpec(kind='coherent-squeezed', alpha=alpha, r=r)
    if alpha > 0:
        return InputSpec(kind='coherent', alpha=alpha)
    return InputSpec()


class VerificationSuite:
    """
    Class for running the verification suites and writing the report.

    The suites can be run one at a time; ``verify`` runs all of them.
    """

    def __init__(self, config_path: Optional[str] = None, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the VerificationSuite.

        Args:
            config_path: Path to configuration file. If None, uses default config.
            config: Already loaded configuration; takes precedence over config_path.
        """
        self.config = config if config is not None else load_config(config_path)
        self.logger = setup_logging(__name__, self.config)
        self.analyzer = SensitivityAnalyzer(config=self.config)

    def _check(self, suite: str, name: str, body: Callable[[], CheckResult]) -> CheckResult:
        try:
            result = body()
        except Su11Error as e:
            result = CheckResult(suite, name, 'FAIL', f"{type(e).__name__}: {str(e)}")
        if result.status == 'FAIL':
            self.logger.error(f"{suite}/{name} failed: {result.detail}")
        elif result.status == 'TENSION':
            self.logger.warning(f"{suite}/{name}: {result.detail}")
        else:
            self.logger.debug(f"{suite}/{name}: {result.status} {result.detail}")
        return result

    # Structure

    def structure(self, level: str = 'quick') -> List[CheckResult]:
        """Bogoliubov metric preservation, physicality and balanced-undo checks."""
        suite = 'structure'

        def metric():
            maps = [opa_map(g, theta) for g in (0.0, 0.5, 1.0, 2.0) for theta in (0.0, 1.3, np.pi)]
            maps += [phase_map(phi) for phi in (0.0, 0.7, -2.1)]
            maps += [loss_map(l1, l2) for l1, l2 in ((0.0, 0.0), (0.1, 0.3), (1.0, 0.5))]
            maps += [build_transfer(InterferometerConfig.balanced(1.0, 0.1, 0.2), 0.4)]
            worst = max(m.metric_deviation() for m in maps)
            return CheckResult(suite, 'bogoliubov metric', 'PASS' if worst <= 1e-10 else 'FAIL',
                               f"max deviation {worst:.2e} over {len(maps)} maps")

        def physical():
            specs = (InputSpec(), InputSpec(kind='coherent', alpha=2.0),
                     InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0, theta_s=0.4),
                     InputSpec(kind='two-coherent', alpha=1.0))
            configs = (InterferometerConfig.balanced(1.0), InterferometerConfig.balanced(2.0, 0.3, 0.1),
                       InterferometerConfig(g1=0.5, g2=1.5, theta1=0.2, theta2=2.0, l1=0.05))
            worst = min(propagate(s, c, phi).uncertainty_eigenvalue()
                        for s in specs for c in configs for phi in (0.0, 0.3, 2.5))
            return CheckResult(suite, 'uncertainty relation', 'PASS' if worst >= -1e-10 else 'FAIL',
                               f"smallest eigenvalue {worst:.2e}")

        def balanced_undo():
            state = propagate(InputSpec(), InterferometerConfig.balanced(1.5), 0.0)
            deviation = float(np.max(np.abs(state.cov - vacuum_state(4).cov)))
            return CheckResult(suite, 'balanced interferometer undoes itself',
                               'PASS' if deviation <= 1e-10 else 'FAIL',
                               f"max covariance deviation {deviation:.2e}")

        def opa_photons():
            state = propagate(InputSpec(), InterferometerConfig(g1=1.0, g2=0.0), 0.0)
            error = abs(photon_number(state, 0) + photon_number(state, 1)
                        - photon_budget(InputSpec(), InterferometerConfig.balanced(1.0)).n_opa)
            return CheckResult(suite, 'OPA photon number', 'PASS' if error <= 1e-10 else 'FAIL',
                               f"|N - 2 sinh^2 g| = {error:.2e}")

        def vacuum_wigner():
            error = abs(wigner_value(vacuum_state(1), [0.0, 0.0]) - 1.0 / np.pi)
            return CheckResult(suite, 'vacuum Wigner peak', 'PASS' if error <= 1e-12 else 'FAIL',
                               f"|W(0) - 1/pi| = {error:.2e}")

        return [self._check(suite, body.__name__, body)
                for body in (metric, physical, balanced_undo, opa_photons, vacuum_wigner)]

    # Closed forms

    def closed_form_checks(self, level: str = 'quick') -> List[CheckResult]:
        """Closed forms against the Gaussian pipeline."""
        suite = 'closed-forms'
        parity = DetectionKind.parity()
        grid = _signal_grid(level)

        def x2_identity():
            worst = max(abs(closed_forms._x2(alpha, theta, r, g, 0.0))
                        for alpha in (0.5, 2.0) for theta in (0.0, 0.4)
                        for r in (0.0, 1.0) for g in (0.5, 1.0))
            return CheckResult(suite, 'x2', 'PASS' if worst <= 1e-12 else 'FAIL',
                               f"x2 at phi=0 (must vanish): max |x2| = {worst:.2e}")

        def ideal_signal():
            worst = 0.0
            for point in grid:
                if point['loss'] != 0:
                    continue
                for theta in (0.0, 0.4):
                    spec = _grid_spec(point['alpha'], point['r'])
                    spec = InputSpec(spec.kind, spec.alpha, theta if spec.alpha else 0.0, spec.r)
                    pipeline, _ = signal_curve(parity, spec, InterferometerConfig.balanced(point['g']),
                                               point['phis'])
                    for phi, reference in zip(point['phis'], pipeline):
                        value = closed_forms.parity_signal_ideal_cf(spec.alpha, spec.theta_alpha,
                                                                    spec.r, point['g'], phi)
                        worst = max(worst, _relative_error(value, reference))
            return CheckResult(suite, 'ideal parity signal (x1, x2, x3)',
                               'PASS' if worst <= SIGNAL_RTOL else 'FAIL',
                               f"max relative error {worst:.2e}")

        def lossy_signal():
            worst = 0.0
            for point in grid:
                spec = _grid_spec(point['alpha'], point['r'])
                config = InterferometerConfig.balanced(point['g'], point['loss'], point['loss'])
                pipeline, _ = signal_curve(parity, spec, config, point['phis'])
                for phi, reference in zip(point['phis'], pipeline):
                    value = closed_forms.parity_signal_lossy_cf(point['alpha'], point['r'],
                                                                point['g'], phi, point['loss'])
                    worst = max(worst, _relative_error(value, reference))
            return CheckResult(suite, 'lossy parity signal (y1, y2, y3)',
                               'PASS' if worst <= SIGNAL_RTOL else 'FAIL',
                               f"max relative error {worst:.2e}")

        def vacuum_signal():
            worst = 0.0
            for point in grid:
                if point['alpha'] or point['r']:
                    continue
                config = InterferometerConfig.balanced(point['g'], point['loss'], point['loss'])
                pipeline, _ = signal_curve(parity, InputSpec(), config, point['phis'])
                for phi, reference in zip(point['phis'], pipeline):
                    value = closed_forms.parity_signal_vacuum_loss_cf(point['g'], phi, point['loss'])
                    worst = max(worst, _relative_error(value, reference))
            return CheckResult(suite, 'vacuum parity signal', 'PASS' if worst <= SIGNAL_RTOL else 'FAIL',
                               f"max relative error {worst:.2e}")

        def parity_sensitivities():
            worst = 0.0
            phis = (0.2, 0.7, 1.5, 2.4)
            cases = [('vacuum-loss', InputSpec(), 1.0, 0.05, 0.05),
                     ('coherent-equal-loss', InputSpec(kind='coherent', alpha=2.0), 1.0, 0.1, 0.1),
                     ('unequal-loss', InputSpec(kind='coherent', alpha=1.0), 0.5, 0.2, 0.05)]
            for variant, spec, g, l1, l2 in cases:
                config = InterferometerConfig.balanced(g, l1, l2)
                params = closed_forms.FormulaParams.from_inputs(spec, config)
                curve = sensitivity_curve(parity, spec, config, phis, self.analyzer.derivative)
                for phi, reference in zip(phis, curve['delta_phi']):
                    value = closed_forms.parity_sensitivity_cf(variant, params, phi)
                    worst = max(worst, _relative_error(value, reference))
            return CheckResult(suite, 'parity sensitivity (vacuum, z, f terms)',
                               'PASS' if worst <= SENSITIVITY_RTOL else 'FAIL',
                               f"max relative error {worst:.2e}")

        def unequal_reduces():
            worst = 0.0
            count = 0
            steps = 10 if level == 'full' else 4
            for phi in np.linspace(0.1, 3.0, steps):
                for loss in np.linspace(0.0, 0.3, steps):
                    for g in (0.5, 1.0, 1.5):
                        for alpha in (0.5, 2.0):
                            params = closed_forms.FormulaParams(g=g, alpha=alpha, l1=loss, l2=loss)
                            equal = closed_forms.parity_sensitivity_cf('coherent-equal-loss', params, phi)
                            unequal = closed_forms.parity_sensitivity_cf('unequal-loss', params, phi)
                            worst = max(worst, _relative_error(unequal, equal))
                            count += 1
            return CheckResult(suite, 'unequal-loss reduces to equal-loss',
                               'PASS' if worst <= REDUCTION_RTOL else 'FAIL',
                               f"max relative error {worst:.2e} over {count} points")

        def ideal_optimum():
            formula = pipeline_error = 0.0
            for g in (0.5, 1.0, 2.0):
                value = closed_forms.parity_sensitivity_cf('ideal-optimal', closed_forms.FormulaParams(g=g))
                _, pipeline = optimal_sensitivity(parity, InputSpec(), InterferometerConfig.balanced(g),
                                                  search=self.analyzer.search,
                                                  settings=self.analyzer.derivative)
                formula = max(formula, _relative_error(value, 1 / np.sinh(2 * g)))
                pipeline_error = max(pipeline_error, _relative_error(pipeline, value))
            holds = formula <= 1e-12 and pipeline_error <= OPTIMUM_RTOL
            return CheckResult(suite, 'ideal optimum 1/sinh(2g)', 'PASS' if holds else 'FAIL',
                               f"formula error {formula:.2e}, search error {pipeline_error:.2e}")

        def intensity():
            worst = 0.0
            det = DetectionKind.intensity()
            phis = (0.3, 1.0, 2.2)
            for variant, spec in (('one-coherent', InputSpec(kind='coherent', alpha=1.5)),
                                  ('vacuum', InputSpec())):
                config = InterferometerConfig.balanced(1.0, 0.1, 0.1)
                params = closed_forms.FormulaParams.from_inputs(spec, config)
                curve = sensitivity_curve(det, spec, config, phis, self.analyzer.derivative)
                for phi, reference in zip(phis, curve['delta_phi']):
                    worst = max(worst, _relative_error(
                        closed_forms.id_sensitivity_cf(variant, params, phi), reference))
            return CheckResult(suite, 'intensity sensitivity', 'PASS' if worst <= SENSITIVITY_RTOL else 'FAIL',
                               f"max relative error {worst:.2e}")

        def two_coherent_homodyne():
            # the closed form holds for in-phase OPA stimulation, theta_alpha = -pi/4 here
            worst = 0.0
            det = DetectionKind.homodyne((0, 1), None)
            spec = InputSpec(kind='two-coherent', alpha=2.0, theta_alpha=-np.pi / 4)
            for loss in (0.0, 0.1, 0.2):
                config = InterferometerConfig.balanced(1.0, loss, loss)
                _, pipeline = optimal_sensitivity(det, spec, config, search=self.analyzer.search,
                                                  settings=self.analyzer.derivative)
                value = closed_forms.hd_sensitivity_cf(
                    'two-coherent', closed_forms.FormulaParams.from_inputs(spec, config))
                worst = max(worst, _relative_error(pipeline, value))
            return CheckResult(suite, 'two-coherent homodyne (in-phase amplitudes)',
                               'PASS' if worst <= OPTIMUM_RTOL else 'FAIL',
                               f"max relative error {worst:.2e}")

        checks = [self._check(suite, body.__name__, body)
                  for body in (x2_identity, ideal_signal, lossy_signal, vacuum_signal,
                               parity_sensitivities, unequal_reduces, ideal_optimum, intensity,
                               two_coherent_homodyne)]
        return checks + self.corrections()

    def corrections(self) -> List[CheckResult]:
        """Printed expressions that differ from the model, with the responsible sub-term."""
        suite = 'closed-forms'
        g, phi = 1.0, 0.0
        printed = closed_forms.parity_signal_ideal_cf(2.0, 0.0, 1.0, g, phi, printed=True)
        corrected = closed_forms.parity_signal_ideal_cf(2.0, 0.0, 1.0, g, phi)
        params = closed_forms.FormulaParams(g=1.0, l1=0.1, l2=0.1)
        try:
            vacuum_printed = closed_forms.id_sensitivity_cf('vacuum', params, 0.5, printed=True)
        except (NumericalError, FloatingPointError) as e:
            vacuum_printed = float('nan')
            self.logger.debug(f"printed vacuum intensity form is singular: {str(e)}")
        vacuum_corrected = closed_forms.id_sensitivity_cf('vacuum', params, 0.5)
        spec = InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0)
        config = InterferometerConfig.balanced(1.0, 0.1, 0.1)
        hd_formula = closed_forms.hd_sensitivity_cf(
            'coherent-squeezed-loss', closed_forms.FormulaParams.from_inputs(spec, config))
        _, hd_pipeline = optimal_sensitivity(DetectionKind.homodyne((0, 1), None), spec, config,
                                             search=self.analyzer.search,
                                             settings=self.analyzer.derivative)
        return [
            CheckResult(suite, 'x1 bracket and prefactor 8', 'NOTE',
                        f"printed ideal signal at phi=0 gives {printed:.6g}, corrected {corrected:.6g}"),
            CheckResult(suite, 'vacuum intensity +8(1-L)^2 term', 'NOTE',
                        f"printed sign gives {vacuum_printed:.6g}, corrected -8(1-L)^2 gives "
                        f"{vacuum_corrected:.6g} at g=1, L=0.1, phi=0.5"),
            CheckResult(suite, 'lossy homodyne loss penalty', 'NOTE',
                        f"formula {hd_formula:.6g} vs pipeline {hd_pipeline:.6g} at alpha=2, r=1, "
                        f"L=0.1; the formula scales the loss term by N_Tot/N_in where the "
                        f"model gives cosh(2g)"),
        ]

    # Oracle

    def oracle(self, level: str = 'quick') -> List[CheckResult]:
        """Fock-space cross-check of the Gaussian statistics."""
        suite = 'oracle'
        cutoff, tail_bound = settings_from_config(self.config)
        grid = default_grid(cutoff)
        if level == 'quick':
            grid = grid[::QUICK_STRIDE]
        workers = self.analyzer.max_workers if level == 'full' else 1
        homodyne = DetectionKind.from_name('homodyne', self.config)
        # the optimized quadrature is checked at P, where real inputs carry the phase signal
        theta = np.pi / 2 if homodyne.best_quadrature else homodyne.theta
        report = cross_check(grid, tolerance=ORACLE_ATOL, tail_bound=tail_bound, theta=theta,
                             max_workers=workers, progress=self.analyzer.progress)
        worst = max(report.max_deviation.values())
        results = [CheckResult(suite, 'fock cross-check', 'PASS' if report.passed else 'FAIL',
                               f"{len(report.rows)} points at cutoff {cutoff}, max oracle "
                               f"deviation {worst:.2e}, {len(report.failures)} failures")]
        for warning in report.truncation_warnings:
            results.append(CheckResult(suite, 'truncation', 'NOTE', warning))
        return results

    # Published claims

    def claims(self, level: str = 'quick') -> List[CheckResult]:
        """Qualitative claims; a claim the model does not reproduce is a failure."""
        suite = 'claims'
        analyzer = self.analyzer
        parity = DetectionKind.from_name('parity', self.config)
        homodyne = DetectionKind.from_name('homodyne', self.config)
        intensity_det = DetectionKind.from_name('intensity', self.config)

        def verdict(name: str, holds: bool, detail: str) -> CheckResult:
            return CheckResult(suite, name, 'PASS' if holds else 'FAIL', detail)

        def optimum(det, spec, config):
            return optimal_sensitivity(det, spec, config, search=analyzer.search,
                                       settings=analyzer.derivative)

        def critical_losses():
            out = []
            targets = (('vacuum', InputSpec(), 0.07),
                       ('coherent', InputSpec(kind='coherent', alpha=2.0), 0.06),
                       ('coherent-squeezed', InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0), 0.05))
            for name, spec, target in targets:
                l_cri = analyzer.critical_loss(spec, InterferometerConfig.balanced(1.0)).l_cri
                out.append(verdict(f'critical loss {name}', abs(l_cri - target) <= 0.01,
                                   f"L_cri = {l_cri:.4f}, expected {target} +- 0.01"))
            return out

        def loss_moves_optimum():
            spec = InputSpec()
            results = [optimum(parity, spec, InterferometerConfig.balanced(1.0, loss, loss))
                       for loss in (0.0, 0.05, 0.1)]
            phis = [abs(r[0]) for r in results]
            deltas = [r[1] for r in results]
            holds = phis[1] > phis[0] and phis[2] > phis[1] and deltas[0] < deltas[1] < deltas[2]
            return verdict('loss moves the optimum away from 0', holds,
                           f"|phi_opt| = {', '.join(f'{p:.4g}' for p in phis)}, "
                           f"delta = {', '.join(f'{d:.4g}' for d in deltas)}")

        def intensity_diverges():
            spec = InputSpec(kind='coherent', alpha=2.0)
            config = InterferometerConfig.balanced(1.0)
            id_curve = sensitivity_curve(intensity_det, spec, config, [0.0], analyzer.derivative)
            pd_curve = sensitivity_curve(parity, spec, config, [1e-3], analyzer.derivative)
            hd_curve = sensitivity_curve(homodyne, spec, config, [0.0], analyzer.derivative)
            holds = (bool(np.isnan(id_curve['delta_phi'][0])) and np.isfinite(pd_curve['delta_phi'][0])
                     and np.isfinite(hd_curve['delta_phi'][0]))
            return verdict('intensity diverges at phi=0 for one coherent input', holds,
                           f"ID {id_curve['delta_phi'][0]:.4g}, PD {pd_curve['delta_phi'][0]:.4g}, "
                           f"HD {hd_curve['delta_phi'][0]:.4g}")

        def two_coherent_ordering():
            spec = InputSpec(kind='two-coherent', alpha=2.0)
            config = InterferometerConfig.balanced(1.0, 0.2, 0.2)
            values = {det.label: optimum(det, spec, config)[1]
                      for det in (parity, homodyne, intensity_det)}
            snl = closed_forms.quantum_limits(spec, config).snl
            id_03 = optimum(intensity_det, spec, InterferometerConfig.balanced(1.0, 0.3, 0.3))[1]
            return [
                verdict('two-coherent HD < ID < PD at L=0.2', values['HD'] < values['ID'] < values['PD'],
                        ', '.join(f"{k} {v:.5g}" for k, v in values.items())),
                verdict('two-coherent ID below SNL at L=0.3', id_03 < snl,
                        f"ID {id_03:.5g}, SNL {snl:.5g}"),
            ]

        def sensing_arm_loss():
            spec = InputSpec(kind='coherent', alpha=2.0)
            sensing = optimum(parity, spec, InterferometerConfig.balanced(1.0, 0.1, 0.0))[1]
            free = optimum(parity, spec, InterferometerConfig.balanced(1.0, 0.0, 0.1))[1]
            return verdict('sensing-arm loss is worse than free-arm loss', sensing > free,
                           f"L1=0.1: {sensing:.5g}, L2=0.1: {free:.5g}")

        def critical_loss_trend():
            if level == 'full':
                vacuum_gains, coherent_gains = (0.5, 1.0, 1.5, 2.0), (1.0, 2.0, 3.0, 4.0)
            else:
                vacuum_gains, coherent_gains = (0.5, 1.0, 1.5), (1.0, 1.5, 2.0)
            vacuum = [analyzer.critical_loss(InputSpec(), InterferometerConfig.balanced(g)).l_cri
                      for g in vacuum_gains]
            coherent = [analyzer.critical_loss(InputSpec(kind='coherent', alpha=2.0),
                                               InterferometerConfig.balanced(g)).l_cri
                        for g in coherent_gains]
            holds = bool(np.all(np.diff(vacuum) < 0) and np.all(np.diff(coherent) < 0))
            return verdict('critical loss decreases with N_Tot', holds,
                           f"vacuum {', '.join(f'{v:.4f}' for v in vacuum)}; "
                           f"coherent {', '.join(f'{v:.4f}' for v in coherent)}")

        def qcrb_comparison():
            spec = InputSpec()
            config = InterferometerConfig.balanced(1.0)
            qcrb = closed_forms.quantum_limits(spec, config).qcrb
            _, delta = optimum(parity, spec, config)
            return CheckResult(suite, 'parity stays above the QCRB for vacuum input', 'TENSION',
                               f"parity optimum {delta:.8g}, QCRB {qcrb:.8g}; both equal "
                               f"1/sinh(2g) analytically, so the claim cannot be decided")

        def printed_constants():
            params = closed_forms.FormulaParams(g=1.0, alpha=2.0, r=1.0)
            eq3 = closed_forms.parity_sensitivity_cf('ideal-optimal', params)
            hd = closed_forms.hd_sensitivity_cf('coherent-squeezed-loss', params)
            n_tot = photon_budget(InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0),
                                  InterferometerConfig.balanced(1.0)).n_tot
            return CheckResult(suite, 'published constants', 'NOTE',
                               f"ideal optimum {eq3:.7f} (quoted 0.048791), HD {hd:.7f} "
                               f"(quoted 0.050713), N_Tot {n_tot:.6f} (quoted 23.006881)")

        results: List[CheckResult] = []
        for body in (critical_losses, loss_moves_optimum, intensity_diverges, two_coherent_ordering,
                     sensing_arm_loss):
            try:
                outcome = body()
            except (NumericalError, InvalidParameterError) as e:
                outcome = CheckResult(suite, body.__name__, 'FAIL', f"{type(e).__name__}: {str(e)}")
            for item in outcome if isinstance(outcome, list) else [outcome]:
                results.append(self._check(suite, item.name, lambda item=item: item))
        results.append(self._check(suite, 'critical loss trend', critical_loss_trend))
        results.append(self._check(suite, 'qcrb comparison', qcrb_comparison))
        results.append(printed_constants())
        return results

    def verify(self, level: str = 'quick', out_dir: Optional[str] = None,
               strict: bool = False) -> VerificationReport:
        """
        Run every suite and write the text report.

        Args:
            level: 'quick' subsamples the grids; 'full' runs them whole.
            out_dir: Report directory; falls back to the environment and config.
            strict: Raise VerificationError when a core check fails.

        Returns:
            VerificationReport.
        """
        if level not in LEVELS:
            raise InvalidParameterError(f"unknown level '{level}', expected one of {', '.join(LEVELS)}")
        self.logger.info(f"Running {level} verification")
        report = VerificationReport(level=level)
        report.results += self.structure(level)
        report.results += self.closed_form_checks(level)
        report.results += self.oracle(level)
        report.results += self.claims(level)

        directory = ensure_directory_exists(resolve_output_dir(self.config, out_dir))
        path = os.path.join(directory, REPORT_FILE)
        with open(path, 'w') as f:
            f.write(report.render())
        self.logger.info(f"Verification report written to {path}: "
                         f"{len(report.failures)} failures, {len(report.tensions)} tensions")
        if strict and not report.passed:
            raise VerificationError(', '.join(r.name for r in report.failures))
        return report
