"""Command-line front end.

    ptbands bands      --l 1 --alpha 8 --a 1 --emin -40 --emax 0
    ptbands dispersion --l 1 --alpha 2.3 --emin 0.01 --emax 60 --out disp.csv --gnuplot
    ptbands spectrum   --l 2 --alpha 1 --verify
    ptbands verify     --l 1 --alpha 1 --a 1 --out report.json

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 incomplete scan.
"""
import argparse
import math
import os
import sys
import warnings

import numpy as np

from .bands import EDGE_CUT, bands_in_range, negative_scan_floor
from .cell_solutions import ZERO_ENERGY_WINDOW, wavenumber
from .dispersion import PERIOD, discriminant, paper_formula
from .errors import DegenerateBasisRepaired
from .io import ConfigError, csv_text, json_text, parse_config, write_text
from .model import ModelParams
from .oracle import single_well_bound_states
from .susy import bound_spectrum

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3

FLAGS = {
    # name: (type, default)
    "l": (int, 1),
    "alpha": (float, 1.0),
    "a": (float, 1.0),
    "emin": (float, None),
    "emax": (float, None),
    "samples": (int, None),
    "tol": (float, None),
    "format": (str, "csv"),
    "out": (str, None),
    "force": (bool, False),
    "gnuplot": (bool, False),
    "verify": (bool, False),
}


class UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(prog="ptbands", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("bands", "band edges and gaps"),
                        ("dispersion", "discriminant D(E) on an energy grid"),
                        ("spectrum", "bound levels of a single well"),
                        ("verify", "cross-check report (JSON)")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", metavar="PATH", help="key=value file; flags override it")
        p.add_argument("--l", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--a", type=float)
        p.add_argument("--emin", type=float)
        p.add_argument("--emax", type=float)
        p.add_argument("--samples", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--force", action="store_true", default=None,
                       help="write results even when the scan is incomplete")
        p.add_argument("--gnuplot", action="store_true", default=None,
                       help="also write a .gp script next to the CSV output")
        if name == "spectrum":
            p.add_argument("--verify", action="store_true", default=None,
                           help="compare with the shooting oracle")
    return parser


def _coerce(name, raw):
    kind = FLAGS[name][0]
    if kind is bool:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{name}: expected a boolean, got {raw!r}")
    try:
        return kind(raw)
    except ValueError:
        raise UsageError(f"{name}: cannot parse {raw!r}") from None


def resolve_config(args):
    """Merge defaults < config file < command-line flags, then validate."""
    cfg = {k: v[1] for k, v in FLAGS.items()}
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
            file_values = parse_config(text, set(FLAGS))
        except (OSError, ConfigError) as exc:
            raise UsageError(f"config: {exc}") from None
        for k, raw in file_values.items():
            cfg[k] = _coerce(k, raw)
    for k in FLAGS:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    cfg["command"] = args.command
    _validate(cfg)
    return cfg


def _validate(cfg):
    if cfg["l"] is None or cfg["l"] < 1:
        raise UsageError("--l must be a positive integer")
    for key in ("alpha", "a"):
        if not (math.isfinite(cfg[key]) and cfg[key] > 0):
            raise UsageError(f"--{key} must be positive")
    if cfg["samples"] is not None and cfg["samples"] < 2:
        raise UsageError("--samples must be at least 2")
    if cfg["tol"] is not None and not cfg["tol"] > 0:
        raise UsageError("--tol must be positive")
    if cfg["emin"] is not None and cfg["emax"] is not None and not cfg["emin"] < cfg["emax"]:
        raise UsageError("--emin must be below --emax")
    if cfg["format"] not in ("csv", "json"):
        raise UsageError("--format must be csv or json")
    if cfg["gnuplot"] and (cfg["format"] != "csv" or not cfg["out"]):
        raise UsageError("--gnuplot needs --format csv and --out")


def _params(cfg):
    return ModelParams(cfg["l"], cfg["alpha"], cfg["a"])


def _emit(cfg, text, default_stdout=True):
    if cfg["out"]:
        write_text(cfg["out"], text)
    elif default_stdout:
        sys.stdout.write(text)


def _sidecar(path, suffix):
    root, _ = os.path.splitext(path)
    return root + suffix


def _gnuplot_dispersion(csv_path):
    name = os.path.basename(csv_path)
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set xlabel 'E'\n"
        "set ylabel 'D(E)'\n"
        "set yrange [-3:3]\n"
        f"plot '{name}' using 1:4 with lines title 'D', 1 with lines dt 2 notitle, "
        "-1 with lines dt 2 notitle\n")


def _gnuplot_bands(csv_path):
    name = os.path.basename(csv_path)
    return (
        "set datafile separator ','\n"
        "set xlabel 'band index'\n"
        "set ylabel 'E'\n"
        f"plot '{name}' using 1:2:1:3 with yerrorlines title 'bands'\n")


def cmd_bands(cfg):
    params = _params(cfg)
    e_min = cfg["emin"] if cfg["emin"] is not None else negative_scan_floor(params)
    e_max = cfg["emax"] if cfg["emax"] is not None else 20.0
    n = cfg["samples"] or 2000
    tol = cfg["tol"] or 1e-10
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateBasisRepaired)
        neg, pos, problems = bands_in_range(params, e_min, e_max, tol=tol, n=n)
    if problems and not cfg["force"]:
        for msg in problems:
            print(f"incomplete scan: {msg}", file=sys.stderr)
        return EXIT_INCOMPLETE
    bands = neg + pos
    band_rows = [(i, b.e_lo, b.e_hi, b.width, b.edge_types[0], b.edge_types[1], "negative" if b.center < 0 else "positive")
                 for i, b in enumerate(bands)]
    gap_rows = [(i, lo.e_hi, hi.e_lo, hi.e_lo - lo.e_hi)
                for i, (lo, hi) in enumerate(zip(bands[:-1], bands[1:]))]
    if cfg["format"] == "json":
        doc = {
            "params": {"l": params.l, "alpha": params.alpha, "a": params.a},
            "range": [e_min, e_max],
            "bands": [{"index": r[0], "e_lo": r[1], "e_hi": r[2], "width": r[3], "edge_lo": r[4],
                       "edge_hi": r[5], "sign": r[6]} for r in band_rows],
            "gaps": [{"index": r[0], "e_lo": r[1], "e_hi": r[2], "width": r[3]} for r in gap_rows],
        }
        _emit(cfg, json_text(doc))
    else:
        _emit(cfg, csv_text(["index", "e_lo", "e_hi", "width", "edge_lo", "edge_hi", "sign"], band_rows))
        gaps = csv_text(["index", "e_lo", "e_hi", "width"], gap_rows)
        if cfg["out"]:
            write_text(_sidecar(cfg["out"], "_gaps.csv"), gaps)
            if cfg["gnuplot"]:
                write_text(_sidecar(cfg["out"], ".gp"), _gnuplot_bands(cfg["out"]))
        else:
            sys.stdout.write("\n" + gaps)
    stream = sys.stderr if not cfg["out"] else sys.stdout
    print(f"l={params.l} alpha={params.alpha:g} a={params.a:g}: {len(bands)} band(s) "
          f"({len(neg)} negative) and {len(gap_rows)} gap(s) in [{e_min:g}, {e_max:g}]"
          + (" [incomplete scan]" if problems else ""), file=stream)
    return EXIT_OK


def dispersion_rows(params, energies):
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateBasisRepaired)
        for e in energies:
            e = float(e)
            d = discriminant(params, e).D
            if abs(e) < ZERO_ENERGY_WINDOW:
                branch = "zero"
            else:
                branch = "positive" if e > 0 else "negative"
            f = paper_formula(params, e, PERIOD)[2]
            rows.append((e, wavenumber(e), branch, d, f, abs(d) <= 1.0))
    return rows


def cmd_dispersion(cfg):
    params = _params(cfg)
    e_min = cfg["emin"] if cfg["emin"] is not None else negative_scan_floor(params)
    e_max = cfg["emax"] if cfg["emax"] is not None else 20.0
    energies = np.linspace(e_min, e_max, cfg["samples"] or 1000)
    rows = dispersion_rows(params, energies)
    header = ["E", "k", "branch", "D", "f_paper", "in_band"]
    if cfg["format"] == "json":
        _emit(cfg, json_text({"params": {"l": params.l, "alpha": params.alpha, "a": params.a},
                              "columns": header, "rows": [list(r) for r in rows]}))
    else:
        _emit(cfg, csv_text(header, rows))
        if cfg["gnuplot"]:
            write_text(_sidecar(cfg["out"], ".gp"), _gnuplot_dispersion(cfg["out"]))
    return EXIT_OK


def cmd_spectrum(cfg):
    params = _params(cfg)
    levels = bound_spectrum(params)
    tol = cfg["tol"] or 1e-6
    header = ["n", "E_analytic"]
    rows = [(n, e) for n, e in enumerate(levels)]
    status = EXIT_OK
    if cfg["verify"]:
        shot = single_well_bound_states(params)
        header += ["E_oracle", "diff"]
        if len(shot) != len(levels):
            print(f"oracle found {len(shot)} level(s), expected {len(levels)}", file=sys.stderr)
            shot = (shot + [float("nan")] * len(levels))[:len(levels)]
            status = EXIT_VERIFY
        rows = [(n, e, s, s - e) for (n, e), s in zip(rows, shot)]
        if any(not abs(r[3]) <= tol for r in rows):
            status = EXIT_VERIFY
    if cfg["format"] == "json":
        _emit(cfg, json_text({"params": {"l": params.l, "alpha": params.alpha},
                              "columns": header, "rows": [list(r) for r in rows]}))
    else:
        _emit(cfg, csv_text(header, rows))
    return status


def cmd_verify(cfg):
    from .verify import default_energy_grid, run_checks

    params = _params(cfg)
    grid = default_energy_grid(params, n=cfg["samples"] or 200, e_min=cfg["emin"], e_max=cfg["emax"])
    report = run_checks(params, grid)
    _emit(cfg, json_text(report))
    s = report["summary"]
    print(f"verify l={params.l} alpha={params.alpha:g} a={params.a:g}: "
          f"{'PASS' if s['all_hard_passed'] else 'FAIL ' + ','.join(s['failed'])}; "
          f"max |dD| = {s['discriminant_max_abs_diff']:.3e}", file=sys.stderr)
    return EXIT_OK if s["all_hard_passed"] else EXIT_VERIFY


COMMANDS = {"bands": cmd_bands, "dispersion": cmd_dispersion, "spectrum": cmd_spectrum, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        if cfg["command"] != "spectrum" and cfg["verify"]:
            raise UsageError("verify=true is only meaningful for spectrum")
    except UsageError as exc:
        print(f"ptbands: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return COMMANDS[cfg["command"]](cfg)


if __name__ == "__main__":
    sys.exit(main())
