# verification/runner.py

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from rest_framework.renderers import JSONRenderer

from kernel.domains import positivity_scan
from kernel.identities import DenominatorGuardError, identity_grid, peq_residuals
from kernel.weights import WeightSpec, WeightVariant, measured_reduction_constant, phi_profile, reduction_constant
from params.models import (
    Regime,
    RegimeError,
    central_charge,
    central_charge_window,
    discrete_spin,
    spin_from_a,
)
from params.serializers import params_payload
from qdilog.dilog import CalibrationError, LadderExhaustedError, PoleProximityError, QDilog
from qdilog.zeros import ContourGuardError, level_windings
from representation.functions import GEPFunction, centered_basis, random_gep
from representation.operators import operator_residuals
from representation.quadrature import (
    HERMITICITY_PAIRS,
    QuadratureError,
    continuous_series_check,
    gram_matrix,
    hermiticity_residual,
    region_domain,
)
from weyl.algebra import symbolic_report

from .serializers import ReportSerializer, RunConfigSerializer, parse_grid, resolved_config
from .utils import (
    get_gaussian_sigma,
    get_identity_tolerance,
    get_operator_tolerance,
    get_truncation_tolerance,
    resolve_output_path,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2

# Numerical failures that make a check fail rather than the configuration
CHECK_ERRORS = (
    PoleProximityError,
    LadderExhaustedError,
    ContourGuardError,
    DenominatorGuardError,
    QuadratureError,
    ZeroDivisionError,
)


class ConfigurationError(ValueError):
    """Invalid command, parameter combination or output path"""


@dataclass
class Outcome:
    passed: bool
    report: Optional[dict] = None
    header: Optional[list] = None
    rows: list = field(default_factory=list)


@dataclass
class RunResult:
    exit_code: int
    content: str
    outcome: Optional[Outcome] = None
    path: Optional[str] = None


def plain(value):
    """Recursively turn complex, numpy and non-finite values into JSON-safe ones"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [plain(value.real), plain(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def residual_entry(name, value, tolerance):
    """A tolerance of None marks a reported-only residual"""
    value = float(value)
    if tolerance is None:
        passed = True
    else:
        passed = math.isfinite(value) and value <= tolerance
    return {'name': name, 'residual': value, 'tolerance': tolerance, 'passed': passed}


def make_report(cfg, check, residuals=(), details=None, domain=None, spin=None, converged=True):
    residuals = list(residuals)
    passed = all(r['passed'] for r in residuals) and converged
    report = {
        'check': check,
        'config': resolved_config(cfg),
        'params': params_payload(cfg['params'], spin),
        'domain': domain,
        'residuals': residuals,
        'details': details or {},
        'converged': passed,
    }
    return Outcome(passed=passed, report=report)


def spin_for(cfg):
    params = cfg['params']
    if cfg['n'] is not None:
        return discrete_spin(params, cfg['n'], cfg['convention'])
    return spin_from_a(params, cfg['spin_a'] * params.omega_pp, cfg['convention'])


def weight_for(cfg):
    params = cfg['params']
    if cfg['weight'] == WeightVariant.PRODUCT.value:
        return WeightSpec.discrete(params, cfg['n'], cfg['convention'])
    spin = spin_for(cfg)
    return WeightSpec.generic(
        params, spin.a, cfg['convention'], cfg['weight'], qdilog=QDilog(params, nodes=cfg['nodes'])
    )


def tolerance(cfg, default):
    return cfg['tol'] if cfg['tol'] is not None else default


def grid_points(cfg, default):
    kind, lo, hi, count = parse_grid(cfg['grid'] or default)
    mu = cfg['params'].mu
    values = np.linspace(lo, hi, count) * mu
    if kind == 'imag':
        return [complex(0.0, v) for v in values]
    return [complex(v, 0.0) for v in values]


# Commands

def check_params(cfg):
    params = cfg['params']
    spin = spin_for(cfg)
    residuals = [residual_entry(name, value, 1e-12) for name, value in params.invariant_defects().items()]
    lo, hi = central_charge_window(params.regime)
    details = {
        'central_charge': central_charge(params.tau),
        'central_charge_window': [lo, hi],
    }
    return make_report(cfg, 'params', residuals, details, spin=spin)


def check_symbolic(cfg):
    report = symbolic_report()
    residuals = [residual_entry(c['name'], 0.0 if c['zero'] else 1.0, 0.0) for c in report['checks']]
    details = {'casimir': report['casimir'], 'residuals': {c['name']: c['residual'] for c in report['checks']}}
    if all(c['zero'] for c in report['checks']):
        details['summary'] = 'residuals: exact zero'
    return make_report(cfg, 'symbolic-check', residuals, details)


def eval_gamma(cfg):
    qdilog = QDilog(cfg['params'], nodes=cfg['nodes'])
    rows = []
    passed = True
    for zeta in grid_points(cfg, 'real:-2:2:41'):
        try:
            rows.extend(qdilog.tabulate([zeta]))
        except CHECK_ERRORS as exc:
            logger.warning(f"gamma({zeta}) not evaluated: {exc}")
            rows.append((zeta.real, zeta.imag) + (math.nan,) * 4)
            passed = False
    header = ['re_zeta', 'im_zeta', 're_gamma', 'im_gamma', 'd1_residual', 'd2_residual']
    return Outcome(passed=passed, header=header, rows=rows)


def check_gamma(cfg):
    qdilog = QDilog(cfg['params'], nodes=cfg['nodes'])
    tol = tolerance(cfg, get_identity_tolerance())
    hw = 0.9 * qdilog.half_width
    grid = [complex(x, y) for x in np.linspace(-1, 1, 10) for y in np.linspace(-hw, hw, 10)]
    rng = np.random.default_rng(cfg['seed'])
    probes = rng.uniform(-1, 1, 50) + 1j * rng.uniform(-hw, hw, 50)

    origin = qdilog.gamma(0)
    closed = qdilog.gamma_at_origin()
    residuals = [
        residual_entry('d1', max(qdilog.d1_residual(z) for z in grid), tol),
        residual_entry('d2', max(qdilog.d2_residual(z) for z in grid), tol),
        residual_entry('shift_relation', max(qdilog.shift_relation_residual(z) for z in probes), tol),
        residual_entry('reflection', max(qdilog.reflection_residual(z) for z in grid), tol),
        residual_entry('origin', abs(origin - closed) / abs(closed), tol),
    ]
    c = qdilog.calibration
    details = {
        'gamma_origin': origin,
        'gamma_origin_closed_form': closed,
        'calibration': {'negate': c.negate, 'invert': c.invert},
        'nodes': qdilog.nodes,
    }
    return make_report(cfg, 'gamma-check', residuals, details)


def check_zeros(cfg):
    params = cfg['params']
    qdilog = QDilog(params, nodes=cfg['nodes'])
    level = cfg['level']
    windings = level_windings(qdilog, level)
    count = sum(w for _, w in windings)
    residuals = [residual_entry('count', abs(count - level), 0)]
    # every lattice point carries a simple zero
    residuals += [
        residual_entry(f"winding p={p}", abs(w - 1), 0)
        for p, (_, w) in enumerate(windings)
    ]
    details = {
        'level': level,
        'count': count,
        'windings': [{'center': center, 'winding': w} for center, w in windings],
    }
    return make_report(cfg, 'zeros', residuals, details)


def eval_phi(cfg):
    spec = weight_for(cfg)
    kind, lo, hi, count = parse_grid(cfg['grid'] or 'imag:-3:3:1000')
    if kind == 'y':
        return _phi_profile(cfg, spec, np.linspace(lo, hi, count) * cfg['params'].mu)

    rows = []
    finite = True
    for t in grid_points(cfg, 'imag:-3:3:1000'):
        try:
            value = complex(spec.phi(t))
        except CHECK_ERRORS as exc:
            logger.warning(f"Phi({t}) not evaluated: {exc}")
            value = complex(math.nan, math.nan)
            finite = False
        rows.append((t.real, t.imag, value.real, value.imag))

    passed = finite
    if _real_on_profile(cfg, spec) and kind == 'imag':
        lowest = min(r[2] for r in rows)
        passed = passed and lowest >= -1e-12
        logger.info(f"Phi along the imaginary axis: min {lowest:.3e}")
    return Outcome(passed=passed, header=['re_t', 'im_t', 're_phi', 'im_phi'], rows=rows)


def _real_on_profile(cfg, spec):
    return cfg['params'].regime == Regime.II and spec.variant == WeightVariant.PRODUCT


def _phi_profile(cfg, spec, ys):
    """(y, re Phi, im Phi) along t = -2iy, the argument seen by the measure"""
    rows = []
    finite = True
    for y in ys:
        try:
            rows.extend(phi_profile(spec, [y]))
        except CHECK_ERRORS as exc:
            logger.warning(f"Phi(-2i*{y}) not evaluated: {exc}")
            rows.append((float(y), math.nan, math.nan))
            finite = False
    passed = finite
    if finite and _real_on_profile(cfg, spec):
        lowest = min(r[1] for r in rows)
        passed = lowest >= -1e-12
        logger.info(f"Phi along t = -2iy: min {lowest:.3e}")
    return Outcome(passed=passed, header=['y', 're_phi', 'im_phi'], rows=rows)


def check_kernel(cfg):
    spec = weight_for(cfg)
    tol = tolerance(cfg, get_identity_tolerance())
    rng = np.random.default_rng(cfg['seed'])
    ws = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    zs = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    pairs = [(w, z) for w in ws for z in zs]

    residuals = []
    rows = []
    for kind in ('k', 'e', 'k_dual', 'e_dual'):
        grid = identity_grid(spec, kind, pairs)
        rows += [(kind,) + row for row in grid]
        residuals.append(residual_entry(f"{kind}_identity", np.nanmax([row[4] for row in grid]), tol))
    peq = [peq_residuals(t, spec) for t in rng.uniform(-1, 1, 100) + 1j * rng.uniform(-1, 1, 100)]
    residuals.append(residual_entry('peq1', max(r[0] for r in peq), tol))
    residuals.append(residual_entry('peq2', max(r[1] for r in peq), tol))
    outcome = make_report(cfg, 'kernel-check', residuals, {'weight': str(spec)}, spin=spec.spin)
    outcome.header = ['identity', 're_w', 'im_w', 're_z', 'im_z', 'residual']
    outcome.rows = rows
    return outcome


def _domain(cfg, x_extent=None):
    return region_domain(
        cfg['params'], cfg['n'], cfg['domain'],
        x_extent=x_extent or cfg['X'], y_pad=cfg['ypad'], nx=cfg['nx'], ny=cfg['ny'],
    )


def check_hermiticity(cfg):
    spec = weight_for(cfg)
    dom = _domain(cfg)
    basis = centered_basis(2, dom.y_center, get_gaussian_sigma())
    f, g = basis[0], basis[0] * 0.5j + basis[1]
    tol = tolerance(cfg, get_truncation_tolerance()) if dom.bounded else None

    residuals = []
    for pair in HERMITICITY_PAIRS:
        value = hermiticity_residual(pair, f, g, dom, spec)
        # only the K pair holds on a planar strip; E and F need an independent z-bar shift
        residuals.append(residual_entry(f"{pair[0]}*={pair[1]}", value, tol if pair == ('~K', 'K') else None))

    wide_x = dom.x_extent + 2.0
    wide = hermiticity_residual(('~K', 'K'), f, g, _domain(cfg, wide_x), spec)
    narrow = residuals[0]['residual']
    converged = wide <= narrow / 10 or wide < 1e-9 or tol is None
    details = {'wide_X': wide_x, 'k_pair_wide': wide}
    return make_report(cfg, 'herm-check', residuals, details, dom.describe(), spec.spin, converged)


def check_gram(cfg):
    spec = weight_for(cfg)
    dom = _domain(cfg)
    basis = centered_basis(cfg['basis_size'], dom.y_center, get_gaussian_sigma())
    gram = gram_matrix(basis, dom, spec)
    ratio = max(0.0, -gram.min_eigenvalue / abs(gram.max_eigenvalue)) if gram.max_eigenvalue else math.inf
    residuals = [
        residual_entry('negative_eigenvalue_ratio', ratio, 1e-6),
        residual_entry('hermitian_defect', gram.hermitian_defect, get_operator_tolerance()),
    ]
    details = {
        'matrix': gram.matrix,
        'eigenvalues': gram.eigenvalues,
        'min_eigenvalue': gram.min_eigenvalue,
        'max_eigenvalue': gram.max_eigenvalue,
    }
    return make_report(cfg, 'gram', residuals, details, dom.describe(), spec.spin)


def check_continuous(cfg):
    params = cfg['params']
    tol = tolerance(cfg, get_identity_tolerance())
    sigma = get_gaussian_sigma()
    rng = np.random.default_rng(cfg['seed'])
    gaussian = GEPFunction.gaussian(sigma)
    plain_report = continuous_series_check(params, gaussian, gaussian)
    random_report = continuous_series_check(params, random_gep(rng, sigma), random_gep(rng, sigma))

    residuals = [residual_entry(f"gaussian_{k}", v, tol) for k, v in plain_report.residuals.items()]
    residuals += [residual_entry(f"random_{k}", v, tol) for k, v in random_report.residuals.items()]
    details = {'u_expectation': plain_report.u_expectation, 'u_positive': plain_report.u_positive}
    return make_report(cfg, 'continuous-check', residuals, details, converged=plain_report.u_positive)


def check_operators(cfg):
    params = cfg['params']
    spin = spin_for(cfg)
    rng = np.random.default_rng(cfg['seed'])
    f = random_gep(rng, get_gaussian_sigma())
    points = rng.uniform(-1, 1, 10) + 1j * rng.uniform(-1, 1, 10)
    tol = get_operator_tolerance()
    residuals = [residual_entry(k, v, tol) for k, v in operator_residuals(f, params, spin, points).items()]
    return make_report(cfg, 'operator-check', residuals, spin=spin)


def check_reduction(cfg):
    params = cfg['params']
    n = cfg['n']
    mean, spread = measured_reduction_constant(params, n)
    expected = reduction_constant(n, params)
    residuals = [
        residual_entry('spread', spread, 1e-6),
        residual_entry('closed_form', abs(mean - expected) / abs(expected), 1e-6),
    ]
    return make_report(cfg, 'reduction', residuals, {'measured': mean, 'closed_form': expected})


def check_positivity(cfg):
    params = cfg['params']
    scan = positivity_scan(cfg['n'], params)
    details = {'min_value': scan.min_value, 'max_imag_ratio': scan.max_imag_ratio, 'samples': scan.samples}
    if params.regime == Regime.II:
        residuals = [residual_entry('negative_part', max(0.0, -scan.min_value), 1e-12)]
    else:
        # Regime I must dip below zero
        residuals = [residual_entry('regime_i_dip', max(0.0, scan.min_value + 1e-3), 0.0)]
    return make_report(cfg, 'positivity', residuals, details)


def suite_battery(cfg):
    """(label, sub-config overrides, handler) for every acceptance criterion"""
    battery = [('symbolic', {'command': 'symbolic-check'}, check_symbolic)]
    for angle in (60.0, 90.0, 72.0):
        battery.append((f"gamma tau_angle={angle}", {'command': 'gamma-check', 'tau_angle': angle}, check_gamma))
    for tau in (2.0, 0.5):
        battery.append((f"gamma tau={tau}", {'command': 'gamma-check', 'tau': tau, 'regime': 'I'}, check_gamma))
    for angle in (90.0, 60.0):
        for level in (1, 2, 3, 4):
            battery.append((
                f"zeros tau_angle={angle} level={level}",
                {'command': 'zeros', 'tau_angle': angle, 'level': level},
                check_zeros,
            ))
    for n in (1, 2, 3):
        battery.append((f"reduction n={n}", {'command': 'phi-eval', 'tau_angle': 60.0, 'n': n}, check_reduction))
    for angle in (90.0, 60.0):
        for n in (1, 2, 3):
            battery.append((
                f"kernel tau_angle={angle} n={n}",
                {'command': 'kernel-check', 'tau_angle': angle, 'n': n},
                check_kernel,
            ))
        battery.append((
            f"kernel tau_angle={angle} a=1.5",
            {'command': 'kernel-check', 'tau_angle': angle, 'spin_a': 1.5},
            check_kernel,
        ))
    for n in (2, 3, 4):
        battery.append((f"positivity n={n}", {'command': 'phi-eval', 'tau_angle': 60.0, 'n': n}, check_positivity))
    battery.append(('positivity regime I', {'command': 'phi-eval', 'tau': 2.0, 'regime': 'I', 'n': 2}, check_positivity))
    for angle in (90.0, 60.0):
        for n in (1, 2, 3):
            battery.append((
                f"operators tau_angle={angle} n={n}",
                {'command': 'params', 'tau_angle': angle, 'n': n},
                check_operators,
            ))
    battery.append(('hermiticity', {'command': 'herm-check', 'tau_angle': 60.0, 'n': 3}, check_hermiticity))
    battery.append(('gram', {'command': 'gram', 'tau_angle': 60.0, 'n': 3, 'basis_size': 8}, check_gram))
    battery.append(('continuous', {'command': 'continuous-check', 'tau': 4.0, 'regime': 'I'}, check_continuous))
    return battery


def run_suite(cfg):
    inherited = {key: cfg[key] for key in ('nodes', 'X', 'ypad', 'nx', 'ny', 'seed')}
    summary = []
    passed = True
    for label, overrides, handler in suite_battery(cfg):
        sub = validate({**inherited, **overrides})
        try:
            outcome = handler(sub)
        except CHECK_ERRORS as exc:
            logger.error(f"Suite check {label} raised: {exc}")
            summary.append({'name': label, 'passed': False, 'worst': None, 'error': str(exc)})
            passed = False
            break
        worst = max((r['residual'] for r in outcome.report['residuals']), default=0.0)
        summary.append({'name': label, 'passed': outcome.passed, 'worst': worst})
        logger.info(f"Suite check {label}: {'passed' if outcome.passed else 'FAILED'} (worst residual {worst:.2e})")
        if not outcome.passed:
            passed = False
            break
    report = {
        'check': 'suite',
        'config': resolved_config(cfg),
        'details': {'checks': summary, 'total': len(suite_battery(cfg)), 'run': len(summary)},
        'converged': passed,
    }
    return Outcome(passed=passed, report=report)


HANDLERS = {
    'params': check_params,
    'symbolic-check': check_symbolic,
    'gamma-eval': eval_gamma,
    'gamma-check': check_gamma,
    'zeros': check_zeros,
    'phi-eval': eval_phi,
    'kernel-check': check_kernel,
    'herm-check': check_hermiticity,
    'gram': check_gram,
    'continuous-check': check_continuous,
    'suite': run_suite,
}


def validate(data):
    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigurationError(json.dumps(serializer.errors, default=str))
    return serializer.validated_data


def _cell(value):
    return value if isinstance(value, str) else repr(float(value))


def render(cfg, outcome):
    if cfg['format'] == 'json':
        data = ReportSerializer(plain(outcome.report)).data
        return JSONRenderer().render(plain(data), renderer_context={'indent': 2}).decode() + '\n'
    buffer = io.StringIO()
    buffer.write(f"# config: {json.dumps(plain(resolved_config(cfg)), sort_keys=True)}\n")
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(outcome.header)
    for row in outcome.rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def run(data):
    """
    Validate, execute and render one command. Exit code 0 when every
    residual is within tolerance, 1 on a violation, 2 on a configuration
    error.
    """
    try:
        cfg = validate(data)
        logger.info(f"Running {cfg['command']} for {cfg['params']}")
        outcome = HANDLERS[cfg['command']](cfg)
    except ConfigurationError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return RunResult(EXIT_CONFIG, str(exc))
    except (RegimeError, CalibrationError) as exc:
        logger.error(f"Configuration rejected: {exc}")
        return RunResult(EXIT_CONFIG, str(exc))
    except CHECK_ERRORS as exc:
        logger.error(f"{data.get('command')} failed numerically: {exc}")
        return RunResult(EXIT_TOLERANCE, str(exc))

    content = render(cfg, outcome)
    path = None
    if cfg['out']:
        try:
            target = resolve_output_path(cfg['out'])
            target.write_text(content)
        except OSError as exc:
            logger.error(f"Cannot write {cfg['out']}: {exc}")
            return RunResult(EXIT_CONFIG, str(exc), outcome)
        path = str(target)
        logger.info(f"Wrote {cfg['command']} output to {path}")

    exit_code = EXIT_OK if outcome.passed else EXIT_TOLERANCE
    return RunResult(exit_code, content, outcome, path)
