"""
Sensitivity analysis module for su11sense.

This module drives the pipeline over parameter grids: phase and loss
sweeps, optimal-phase and critical-loss searches, detection comparisons
and the data series behind the published figures. Results are pandas
data frames; files are written as CSV with provenance metadata.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect
from tqdm import tqdm

from .closed_forms import (FormulaParams, LimitSet, hd_sensitivity_cf, id_sensitivity_cf,
                           parity_sensitivity_cf, quantum_limits)
from .detection import (DerivativeSettings, DetectionKind, SearchSettings, optimal_sensitivity,
                        sensitivity_curve)
from .exceptions import (InvalidParameterError, NoCrossingError, SearchFailureError,
                         SingularFormulaError)
from .gaussian import InputSpec
from .interferometer import InterferometerConfig, photon_budget
from .utils import (PACKAGE_VERSION, float_grid, load_config, resolve_output_dir, setup_logging,
                    write_csv)

SWEEP_VARIABLES = ('phi', 'loss', 'g', 'alpha')
FIGURES = (3, 4, 5, 6, 7, 8)

FIGURE_INPUTS = {
    'vacuum': InputSpec(),
    'coherent': InputSpec(kind='coherent', alpha=2.0),
    'coherent-squeezed': InputSpec(kind='coherent-squeezed', alpha=2.0, r=1.0),
}
FIGURE_PHI_RANGE = (-1.0, 1.0, 0.005)
FIGURE_LOSS_RANGE = (0.0, 0.3, 0.01)
FIGURE_LOSSES = (0.0, 0.05, 0.1)


@dataclass(frozen=True)
class SweepRequest:
    """
    One-dimensional parameter sweep.

    Attributes:
        variable: 'phi', 'loss' (l1 = l2), 'g' (g1 = g2) or 'alpha'.
        start, stop, step: Inclusive grid.
        spec: Fixed input state.
        config: Fixed interferometer parameters.
        detections: Detections evaluated at every grid point.
        output: CSV path, or None to skip writing.
    """
    variable: str
    start: float
    stop: float
    step: float
    spec: InputSpec = field(default_factory=InputSpec)
    config: InterferometerConfig = field(default_factory=InterferometerConfig)
    detections: Tuple[DetectionKind, ...] = (DetectionKind.parity(),)
    output: Optional[str] = None

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise InvalidParameterError(
                f"unknown sweep variable '{self.variable}', expected one of {', '.join(SWEEP_VARIABLES)}")
        if not self.step > 0:
            raise InvalidParameterError(f"sweep step must be positive, got {self.step}")
        if self.stop < self.start:
            raise InvalidParameterError(f"empty sweep range [{self.start}, {self.stop}]")
        if self.variable == 'loss' and not (0.0 <= self.start and self.stop < 1.0):
            raise InvalidParameterError(
                f"loss range must lie in [0, 1), got [{self.start}, {self.stop}]")
        if self.variable in ('g', 'alpha') and self.start < 0:
            raise InvalidParameterError(f"{self.variable} range must be >= 0")
        if self.variable == 'alpha' and self.spec.kind == 'vacuum':
            raise InvalidParameterError("vacuum input has no coherent amplitude to sweep")
        if not self.detections:
            raise InvalidParameterError("sweep needs at least one detection")
        object.__setattr__(self, 'detections', tuple(self.detections))

    @property
    def grid(self) -> List[float]:
        return float_grid(self.start, self.stop, self.step)

    def point(self, value: float) -> Tuple[InputSpec, InterferometerConfig]:
        """Input state and interferometer at one grid value."""
        if self.variable == 'loss':
            return self.spec, self.config.with_loss(value, value)
        if self.variable == 'g':
            return self.spec, replace(self.config, g1=value, g2=value)
        if self.variable == 'alpha':
            return replace(self.spec, alpha=value), self.config
        return self.spec, self.config


@dataclass(frozen=True)
class CriticalLoss:
    """
    Loss at which the optimal sensitivity reaches the shot-noise limit.

    Attributes:
        l_cri: Critical loss (equal on both arms).
        n_tot: Photon number inside the interferometer.
        lost_photons: l_cri * n_tot.
        snl: Shot-noise limit 1/sqrt(n_tot).
        detection: Detection label.
    """
    l_cri: float
    n_tot: float
    lost_photons: float
    snl: float
    detection: str


def _optimal_point(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                   search: SearchSettings, settings: DerivativeSettings) -> Tuple[float, float, int]:
    # module level so worker processes can unpickle it
    try:
        phi_opt, delta = optimal_sensitivity(det, spec, config, search=search, settings=settings)
    except SearchFailureError:
        return np.nan, np.nan, 1
    return phi_opt, delta, 0


def _limit_columns(limits: LimitSet) -> Dict[str, float]:
    return {'n_tot': limits.n_tot, 'snl': limits.snl, 'hl': limits.hl,
            'qcrb': np.nan if limits.qcrb is None else limits.qcrb}


def matching_closed_form(det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                         phi: float) -> Tuple[Optional[str], float]:
    """
    Closed-form sensitivity matching a pipeline point, where one exists.

    Args:
        det: Detection.
        spec: Input state.
        config: Interferometer parameters.
        phi: Operating phase (the optimum for optimal-only expressions).

    Returns:
        Tuple (variant, delta_phi); (None, nan) when no expression covers
        the point or the expression is singular there.
    """
    if (config.g1 != config.g2 or config.theta1 != 0 or config.theta2 != np.pi
            or spec.theta_s != 0 or max(config.l1, config.l2) >= 1):
        return None, np.nan
    params = FormulaParams.from_inputs(spec, config)
    equal = config.l1 == config.l2
    real_alpha = spec.theta_alpha == 0
    variant = None
    try:
        if det.name == 'parity' and real_alpha:
            if config.lossless and spec.kind != 'two-coherent':
                variant = 'ideal-optimal'
                return variant, parity_sensitivity_cf(variant, params)
            if spec.kind == 'vacuum' and equal:
                variant = 'vacuum-loss'
            elif spec.kind == 'coherent':
                variant = 'coherent-equal-loss' if equal else 'unequal-loss'
            if variant:
                return variant, parity_sensitivity_cf(variant, params, phi)
        elif det.name == 'homodyne' and equal:
            if spec.kind in ('coherent', 'coherent-squeezed') and real_alpha:
                variant = 'coherent-squeezed-loss'
            elif spec.kind == 'two-coherent':
                variant = 'two-coherent'
            if variant:
                return variant, hd_sensitivity_cf(variant, params)
        elif det.name == 'intensity' and equal and det.modes == (0, 1):
            if spec.kind == 'vacuum':
                variant = 'vacuum'
            elif spec.kind == 'coherent' and real_alpha:
                variant = 'one-coherent'
            elif spec.kind == 'two-coherent':
                variant = 'two-coherent'
            if variant:
                return variant, id_sensitivity_cf(variant, params, phi)
    except (SingularFormulaError, InvalidParameterError):
        return variant, np.nan
    return None, np.nan


class SensitivityAnalyzer:
    """
    Class for sweeping the interferometer over parameter grids.

    This class wraps the pipeline searches with the configured numerical
    settings and writes the resulting tables.
    """

    def __init__(self, config_path: Optional[str] = None, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the SensitivityAnalyzer.

        Args:
            config_path: Path to configuration file. If None, uses default config.
            config: Already loaded configuration; takes precedence over config_path.
        """
        self.config = config if config is not None else load_config(config_path)
        self.logger = setup_logging(__name__, self.config)
        self.derivative = DerivativeSettings.from_config(self.config)
        self.search = SearchSettings.from_config(self.config)

        analysis = self.config.get('analysis', {})
        self.max_workers = max(1, int(analysis.get('max_workers', 1)))
        self.progress = bool(analysis.get('progress', True))

        search = self.config.get('search', {})
        low, high = search.get('loss_bracket', (0.0, 0.5))
        self.loss_bracket = (float(low), float(high))
        self.loss_xtol = float(search.get('loss_xtol', 1e-4))

    def detections(self, names: Sequence[str] = ('parity', 'homodyne', 'intensity')
                   ) -> Tuple[DetectionKind, ...]:
        """Configured detections by name."""
        return tuple(DetectionKind.from_name(name, self.config) for name in names)

    def _limits(self, spec: InputSpec, config: InterferometerConfig) -> LimitSet:
        return quantum_limits(spec, config)

    def _run_optimal(self, tasks: List[Tuple[DetectionKind, InputSpec, InterferometerConfig]],
                     desc: str) -> List[Tuple[float, float, int]]:
        n = len(tasks)
        args = ([t[0] for t in tasks], [t[1] for t in tasks], [t[2] for t in tasks],
                [self.search] * n, [self.derivative] * n)
        if self.max_workers > 1 and n > 1:
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                return list(tqdm(executor.map(_optimal_point, *args), total=n,
                                 disable=not self.progress, desc=desc))
        return [_optimal_point(*task, self.search, self.derivative)
                for task in tqdm(tasks, disable=not self.progress, desc=desc)]

    def phase_rows(self, det: DetectionKind, spec: InputSpec, config: InterferometerConfig,
                   phis: Sequence[float]) -> List[Dict[str, Any]]:
        """Sensitivity rows over a phase grid; stationary points are marked diverged."""
        curve = sensitivity_curve(det, spec, config, phis, self.derivative)
        rows = []
        for phi, delta, stationary in zip(curve['phi'], curve['delta_phi'], curve['stationary']):
            diverged = bool(stationary) or not np.isfinite(delta)
            rows.append({'phi': float(phi), 'detection': det.label,
                         'delta_phi': np.nan if diverged else float(delta),
                         'diverged': int(diverged)})
        return rows

    def sweep(self, req: SweepRequest) -> pd.DataFrame:
        """
        Evaluate every detection at every grid point of a sweep.

        A phase sweep reports Delta phi at each phase; the other variables
        report the optimal phase and optimal Delta phi at each value.

        Args:
            req: Sweep request.

        Returns:
            Long-format data frame, one row per grid point per detection.

        Raises:
            InvalidParameterError: If the output file cannot be written.
        """
        grid = req.grid
        self.logger.info(f"Sweeping {req.variable} over {len(grid)} points for "
                         f"{', '.join(d.label for d in req.detections)}")

        if req.variable == 'phi':
            limits = _limit_columns(self._limits(req.spec, req.config))
            rows = []
            for det in req.detections:
                for row in self.phase_rows(det, req.spec, req.config, grid):
                    rows.append({**row, **limits})
            frame = pd.DataFrame(rows, columns=['phi', 'detection', 'delta_phi', 'diverged',
                                                'n_tot', 'snl', 'hl', 'qcrb'])
        else:
            points = [req.point(value) for value in grid]
            tasks = [(det, spec, config) for spec, config in points for det in req.detections]
            results = self._run_optimal(tasks, desc=f'sweep {req.variable}')
            limits = {}
            rows = []
            for (det, spec, config), (phi_opt, delta, diverged) in zip(tasks, results):
                key = (spec, config.g1, config.g2)
                if key not in limits:
                    limits[key] = _limit_columns(self._limits(spec, config))
                value = {'loss': config.l1, 'g': config.g1, 'alpha': spec.alpha}[req.variable]
                rows.append({req.variable: value, 'detection': det.label, 'phi_opt': phi_opt,
                             'delta_phi': delta, 'diverged': diverged, **limits[key]})
            frame = pd.DataFrame(rows, columns=[req.variable, 'detection', 'phi_opt', 'delta_phi',
                                                'diverged', 'n_tot', 'snl', 'hl', 'qcrb'])

        if req.output:
            write_csv(frame, req.output, self._metadata('sweep', req.spec, req.config,
                                                        variable=req.variable, start=req.start,
                                                        stop=req.stop, step=req.step))
            self.logger.info(f"Sweep written to {req.output}")
        return frame

    def critical_loss(self, spec: InputSpec, config: InterferometerConfig,
                      det: Optional[DetectionKind] = None) -> CriticalLoss:
        """
        Find the equal-arm loss at which the optimal sensitivity meets the SNL.

        Every evaluation runs the full optimal-phase search; bisection stops
        once the bracket is narrower than the configured loss tolerance.

        Args:
            spec: Input state.
            config: Interferometer parameters (its losses are ignored).
            det: Detection, parity by default.

        Returns:
            CriticalLoss.

        Raises:
            NoCrossingError: If the optimum is not below the SNL at the low end
                of the bracket or still below it at the high end.
        """
        det = det or DetectionKind.from_name('parity', self.config)
        budget = photon_budget(spec, config)
        snl = 1.0 / np.sqrt(budget.n_tot)
        low, high = self.loss_bracket

        def excess(loss: float) -> float:
            try:
                _, delta = optimal_sensitivity(det, spec, config.with_loss(loss, loss),
                                               search=self.search, settings=self.derivative)
            except SearchFailureError:
                return np.inf
            self.logger.debug(f"L={loss:.6f}: delta_phi={delta:.8g}, SNL={snl:.8g}")
            return delta - snl

        if not excess(low) < 0:
            raise NoCrossingError(
                f"{det.label} sensitivity already at or above the SNL at L={low:g} "
                f"({spec.kind}, g={config.g1:g})")
        if not excess(high) > 0:
            raise NoCrossingError(
                f"{det.label} sensitivity still below the SNL at L={high:g} "
                f"({spec.kind}, g={config.g1:g})")

        l_cri = float(bisect(excess, low, high, xtol=self.loss_xtol))
        self.logger.info(f"Critical loss {l_cri:.5f} for {spec.kind} input, g={config.g1:g}, "
                         f"N_Tot={budget.n_tot:.6g}")
        return CriticalLoss(l_cri=l_cri, n_tot=budget.n_tot, lost_photons=l_cri * budget.n_tot,
                            snl=float(snl), detection=det.label)

    def compare(self, spec: InputSpec, config: InterferometerConfig) -> pd.DataFrame:
        """
        Optimal sensitivity of PD, HD and ID side by side.

        Returns:
            One row per detection with the optimum, the matching closed form
            (empty where none applies) and the limits.
        """
        limits = _limit_columns(self._limits(spec, config))
        dets = self.detections()
        results = self._run_optimal([(det, spec, config) for det in dets], desc='compare')
        rows = []
        for det, (phi_opt, delta, diverged) in zip(dets, results):
            variant, closed = (None, np.nan) if diverged else matching_closed_form(
                det, spec, config, phi_opt)
            rows.append({'detection': det.label, 'phi_opt': phi_opt, 'delta_phi': delta,
                         'diverged': diverged, 'closed_form': closed,
                         'closed_form_variant': variant or '', **limits})
        return pd.DataFrame(rows)

    def _metadata(self, command: str, spec: Optional[InputSpec] = None,
                  config: Optional[InterferometerConfig] = None, **extra: Any) -> Dict[str, Any]:
        metadata: Dict[str, Any] = {'command': command}
        if spec is not None:
            metadata.update(input=spec.kind, alpha=spec.alpha, theta_alpha=spec.theta_alpha,
                            r=spec.r, theta_s=spec.theta_s)
        if config is not None:
            metadata.update(g1=config.g1, g2=config.g2, theta1=config.theta1,
                            theta2=config.theta2, l1=config.l1, l2=config.l2)
        metadata.update(extra)
        metadata['version'] = PACKAGE_VERSION
        return metadata

    # Figure data

    def figure(self, n: int, out_dir: Optional[str] = None) -> List[str]:
        """
        Write the data series behind a numbered figure.

        Args:
            n: Figure number (3 to 8).
            out_dir: Output directory; falls back to the environment and config.

        Returns:
            Paths of the CSV files written.

        Raises:
            InvalidParameterError: For an unsupported figure number.
        """
        builders = {3: self._figure3, 4: self._figure4, 5: self._figure5,
                    6: self._figure6, 7: self._figure7, 8: self._figure8}
        if n not in builders:
            raise InvalidParameterError(
                f"unsupported figure {n}, expected one of {', '.join(map(str, FIGURES))}")
        directory = resolve_output_dir(self.config, out_dir)
        paths = []
        for series, frame, metadata in builders[n]():
            path = os.path.join(directory, f'fig{n}_{series}.csv')
            write_csv(frame, path, self._metadata(f'fig {n}', series=series, **metadata))
            paths.append(path)
        self.logger.info(f"Figure {n}: wrote {len(paths)} files to {directory}")
        return paths

    def _figure3(self):
        phis = float_grid(*FIGURE_PHI_RANGE)
        det = DetectionKind.from_name('parity', self.config)
        config = InterferometerConfig.balanced(1.0)
        for name, spec in FIGURE_INPUTS.items():
            limits = _limit_columns(self._limits(spec, config))
            rows = []
            for loss in FIGURE_LOSSES:
                for row in self.phase_rows(det, spec, config.with_loss(loss, loss), phis):
                    rows.append({'loss': loss, **row, **limits})
            yield name, pd.DataFrame(rows), {'input': spec.kind, 'alpha': spec.alpha,
                                             'r': spec.r, 'g': 1.0}

    def _critical_loss_rows(self, points: Sequence[Tuple[float, InputSpec, InterferometerConfig]],
                            parameter: str) -> pd.DataFrame:
        rows = []
        for value, spec, config in tqdm(points, disable=not self.progress, desc='critical loss'):
            row = {parameter: value, 'n_tot': photon_budget(spec, config).n_tot}
            try:
                result = self.critical_loss(spec, config)
                row.update(l_cri=result.l_cri, lost_photons=result.lost_photons, diverged=0)
            except (NoCrossingError, SearchFailureError) as e:
                self.logger.warning(f"No critical loss at {parameter}={value:g}: {str(e)}")
                row.update(l_cri=np.nan, lost_photons=np.nan, diverged=1)
            rows.append(row)
        return pd.DataFrame(rows, columns=[parameter, 'n_tot', 'l_cri', 'lost_photons', 'diverged'])

    def _figure4(self):
        vacuum = [(g, InputSpec(), InterferometerConfig.balanced(g))
                  for g in float_grid(0.25, 2.0, 0.25)]
        yield 'vacuum_g', self._critical_loss_rows(vacuum, 'g'), {'input': 'vacuum'}

        coherent = InputSpec(kind='coherent', alpha=2.0)
        by_gain = [(g, coherent, InterferometerConfig.balanced(g)) for g in float_grid(1.0, 4.0, 0.5)]
        yield 'coherent_g', self._critical_loss_rows(by_gain, 'g'), {'input': 'coherent',
                                                                     'alpha': 2.0}

        by_alpha = [(alpha, InputSpec(kind='coherent', alpha=alpha), InterferometerConfig.balanced(1.0))
                    for alpha in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)]
        yield 'coherent_alpha', self._critical_loss_rows(by_alpha, 'alpha'), {'input': 'coherent',
                                                                              'g': 1.0}

    def _figure5(self):
        for name, spec in FIGURE_INPUTS.items():
            req = SweepRequest('loss', *FIGURE_LOSS_RANGE, spec=spec,
                               config=InterferometerConfig.balanced(1.0),
                               detections=self.detections())
            yield name, self.sweep(req), {'input': spec.kind, 'alpha': spec.alpha,
                                          'r': spec.r, 'g': 1.0}

    def _figure6(self):
        for name, spec in FIGURE_INPUTS.items():
            req = SweepRequest('phi', *FIGURE_PHI_RANGE, spec=spec,
                               config=InterferometerConfig.balanced(1.0),
                               detections=self.detections())
            yield name, self.sweep(req), {'input': spec.kind, 'alpha': spec.alpha,
                                          'r': spec.r, 'g': 1.0}

        det = DetectionKind.from_name('intensity', self.config)
        config = InterferometerConfig.balanced(1.0)
        rows = []
        for theta_alpha in (np.pi / 10, np.pi / 4):
            spec = replace(FIGURE_INPUTS['coherent-squeezed'], theta_alpha=theta_alpha)
            for row in self.phase_rows(det, spec, config, float_grid(*FIGURE_PHI_RANGE)):
                rows.append({'theta_alpha': theta_alpha, **row})
        yield 'id_theta_alpha', pd.DataFrame(rows), {'input': 'coherent-squeezed', 'alpha': 2.0,
                                                     'r': 1.0, 'g': 1.0}

    def _figure7(self):
        spec = InputSpec(kind='two-coherent', alpha=2.0)
        req = SweepRequest('loss', *FIGURE_LOSS_RANGE, spec=spec,
                           config=InterferometerConfig.balanced(1.0), detections=self.detections())
        frame = self.sweep(req)
        closed = []
        for row in frame.itertuples():
            params = FormulaParams(g=1.0, alpha=2.0, l1=row.loss, l2=row.loss)
            if row.detection == 'HD':
                closed.append(hd_sensitivity_cf('two-coherent', params))
            elif row.detection == 'ID':
                closed.append(id_sensitivity_cf('two-coherent', params))
            else:
                closed.append(np.nan)
        frame['closed_form'] = closed
        yield 'two_coherent', frame, {'input': 'two-coherent', 'alpha': 2.0, 'g': 1.0}

        # the homodyne closed form assumes amplitudes that stimulate the first OPA in phase
        in_phase = replace(spec, theta_alpha=-np.pi / 4)
        req = SweepRequest('loss', *FIGURE_LOSS_RANGE, spec=in_phase,
                           config=InterferometerConfig.balanced(1.0),
                           detections=self.detections(('homodyne',)))
        frame = self.sweep(req)
        frame['closed_form'] = [hd_sensitivity_cf('two-coherent',
                                                  FormulaParams(g=1.0, alpha=2.0, l1=loss, l2=loss))
                                for loss in frame['loss']]
        yield 'two_coherent_in_phase', frame, {'input': 'two-coherent', 'alpha': 2.0,
                                               'theta_alpha': -np.pi / 4, 'g': 1.0}

    def _figure8(self):
        spec = InputSpec(kind='coherent', alpha=2.0)
        det = DetectionKind.from_name('parity', self.config)
        phis = float_grid(*FIGURE_PHI_RANGE)
        rows = []
        for l1, l2 in ((0.1, 0.0), (0.0, 0.1)):
            config = InterferometerConfig.balanced(1.0, l1, l2)
            params = FormulaParams.from_inputs(spec, config)
            for row in self.phase_rows(det, spec, config, phis):
                try:
                    closed = parity_sensitivity_cf('unequal-loss', params, row['phi'])
                except SingularFormulaError:
                    closed = np.nan
                rows.append({'l1': l1, 'l2': l2, **row, 'closed_form': closed})
        yield 'unequal_loss', pd.DataFrame(rows), {'input': 'coherent', 'alpha': 2.0, 'g': 1.0}
