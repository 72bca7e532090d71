"""Aggregated cross-checks for one parameter set, as a JSON-ready report."""
import datetime
import math
import warnings

import numpy as np

from . import __version__
from .cell_solutions import intertwined_basis, schrodinger_residual
from .dispersion import crosscheck_report, discriminant, monodromy
from .errors import DegenerateBasisRepaired
from .oracle import numeric_discriminant, single_well_bound_states
from .susy import bound_spectrum, shape_invariance_residual

DISCRIMINANT_TOL = 1e-6
SPECTRUM_TOL = 1e-6
SHAPE_TOL = 1e-12
RESIDUAL_TOL = 1e-8
WRONSKIAN_TOL = 1e-9
DET_TOL = 1e-9


def default_energy_grid(params, n=200, e_min=None, e_max=None):
    """Grid from the deepest isolated-well level up to a positive energy.

    Below the deepest level |D| grows like exp(2 a sqrt(2|E|)) and absolute
    comparisons of D stop being meaningful in double precision.
    """
    lo = min(bound_spectrum(params)) if e_min is None else e_min
    hi = max(20.0, params.l ** 2 * params.alpha ** 2) if e_max is None else e_max
    return np.linspace(lo, hi, n)


def _check(passed, value, tolerance, hard=True, **extra):
    out = {"hard": hard, "passed": bool(passed), "value": value, "tolerance": tolerance}
    out.update(extra)
    return out


def run_checks(params, energies=None, steps=100_000):
    if energies is None:
        energies = default_energy_grid(params)
    energies = [float(e) for e in energies]
    checks = {}

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateBasisRepaired)
        exact = [discriminant(params, e).D for e in energies]
        mats = [monodromy(params, e) for e in energies]
    from .oracle import IntegratorConfig
    cfg = IntegratorConfig(steps=steps, x0=-params.a, x1=params.a)
    numeric = [numeric_discriminant(params, e, cfg) for e in energies]
    diffs = [abs(x - y) for x, y in zip(exact, numeric)]
    worst = int(np.argmax(diffs))
    checks["discriminant_vs_oracle"] = _check(
        diffs[worst] <= DISCRIMINANT_TOL, diffs[worst], DISCRIMINANT_TOL,
        worst_energy=energies[worst], points=len(energies), steps=steps)

    analytic = bound_spectrum(params)
    shot = single_well_bound_states(params)
    if len(shot) == len(analytic):
        dev = max(abs(x - y) for x, y in zip(analytic, shot))
        checks["bound_spectrum_vs_shooting"] = _check(dev <= SPECTRUM_TOL, dev, SPECTRUM_TOL,
                                                      analytic=analytic, shooting=shot)
    else:
        checks["bound_spectrum_vs_shooting"] = _check(False, None, SPECTRUM_TOL, analytic=analytic,
                                                      shooting=shot, note="level count differs")

    x = np.linspace(-5.0 / params.alpha, 5.0 / params.alpha, 1000)
    shape = max(shape_invariance_residual(j, params.alpha, x) for j in range(1, params.l + 1))
    checks["shape_invariance"] = _check(shape <= SHAPE_TOL, shape, SHAPE_TOL)

    xs = np.linspace(-params.a, params.a, 101)
    res, wr = 0.0, 0.0
    probe = energies[:: max(1, len(energies) // 25)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateBasisRepaired)
        for e in probe:
            basis = intertwined_basis(params, e)
            if basis.degenerate:
                continue
            res = max(res, schrodinger_residual(params, basis.u, xs), schrodinger_residual(params, basis.v, xs))
            xs = (-params.a, -0.5 * params.a, 0.0, 0.5 * params.a, params.a)
            wr = max(wr, basis.wronskian_drift(xs))
    checks["schrodinger_residual"] = _check(res <= RESIDUAL_TOL, res, RESIDUAL_TOL)
    checks["wronskian_constancy"] = _check(wr <= WRONSKIAN_TOL, wr, WRONSKIAN_TOL,
                                           note="spread relative to max(|W|, |u v'| + |u' v|)")

    # det M is computed from entries of size |M|; its rounding floor is ~eps |M|^2
    det_dev, det_ok = 0.0, True
    for m in mats:
        size = float(np.max(np.abs(m.matrix)))
        dev = abs(m.det - 1.0)
        det_dev = max(det_dev, dev)
        det_ok &= dev <= max(DET_TOL, 16 * np.finfo(float).eps * size ** 2)
    checks["monodromy_determinant"] = _check(det_ok, det_dev, DET_TOL,
                                             note="tolerance widened to 16 eps |M|^2 where that is larger")

    e_fact = -0.5 * params.alpha ** 2
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateBasisRepaired)
        d_fact = discriminant(params, e_fact).D
    d_num = numeric_discriminant(params, e_fact, cfg)
    repaired = any(issubclass(w.category, DegenerateBasisRepaired) for w in caught)
    checks["degenerate_fallback"] = _check(
        math.isfinite(d_fact) and abs(d_fact - d_num) <= DISCRIMINANT_TOL, abs(d_fact - d_num),
        DISCRIMINANT_TOL, energy=e_fact, fallback_used=repaired)

    agreement = None
    if params.l in (1, 2):
        sign = 1.0 if params.l == 1 else -1.0
        e_ref = [e for e in energies if e * sign > 0]
        rep = crosscheck_report(params, e_ref)
        primary = rep["period"]
        agreement = {
            "convention": "period",
            "agree": not primary["mismatches"],
            "fraction": primary["agreement_fraction"],
            "mismatches": primary["mismatches"],
            "by_convention": rep,
        }
        checks["paper_formula_crosscheck"] = _check(
            bool(primary["agreement_fraction"] is not None and primary["agreement_fraction"] >= 0.99),
            primary["max_abs_identity_residual"], None, hard=False)

    failed = sorted(k for k, v in checks.items() if v["hard"] and not v["passed"])
    return {
        "meta": {"tool": "ptbands", "version": __version__,
                 "generated": datetime.datetime.now(datetime.timezone.utc).isoformat()},
        "params": {"l": params.l, "alpha": params.alpha, "a": params.a},
        "checks": checks,
        "summary": {
            "all_hard_passed": not failed,
            "failed": failed,
            "discriminant_max_abs_diff": diffs[worst],
            "paper_formula_band_membership_agreement": agreement,
        },
    }
