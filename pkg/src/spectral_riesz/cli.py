"""Command-line front end.

    spectral-riesz spectrum   --model box --lengths 1,1 --lambda-max 100
    spectral-riesz audit      --model box --lengths 1,1 --lambda-max 4000
    spectral-riesz figure     --id fig1
    spectral-riesz conjecture --target eq_4_8 --rho 2
    spectral-riesz gamma      --model box --lengths 1,1 --lambda-max 2000 --m 1-10 --rho 2

Exit codes: 0 pass, 1 an inequality failed, 2 configuration error,
3 numerical error (incomplete spectrum, uncertifiable tail, bracketing).
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import audits, figures, spectra
from . import spectral_functions as sf
from .errors import ConfigurationError, DomainError, NumericalError
from .grid import GridSpec
from .transforms import WeylPair

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "model": None,
    "lengths": None,
    "length": None,
    "dim": None,
    "radius": 1.0,
    "lambda_max": None,
    "spectrum_file": None,
    "out": None,
    "format": "json",
    "grid": None,
    "tgrid": None,
    "tolerance": audits.DEFAULT_TOLERANCE,
    "melas_constant": None,
    "families": None,
    "rho": None,
    "id": "fig1",
    "target": "eq_4_8",
    "aspects": "1:5:9",
    "include_disk": True,
    "pair_rate": None,
    "m": "1-10",
}


def fmt(x) -> str:
    return "%.17g" % float(x)


def _write(text: str, out):
    """Write to stdout, or atomically to ``out``."""
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, out)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def _floats(text, what):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"malformed {what}: {text!r}") from None


def _int_range(text):
    out = []
    for part in str(text).split(","):
        part = part.strip()
        try:
            if "-" in part:
                a, b = part.split("-")
                out.extend(range(int(a), int(b) + 1))
            elif part:
                out.append(int(part))
        except ValueError:
            raise DomainError(f"malformed index list {text!r}") from None
    return out


# -- configuration ---------------------------------------------------------------


def build_model(cfg) -> spectra.Spectrum:
    model = cfg["model"]
    if model is None:
        raise DomainError("--model is required")
    if model == "explicit":
        if not cfg["spectrum_file"]:
            raise DomainError("explicit models need --spectrum-file")
        with open(cfg["spectrum_file"]) as fh:
            return spectra.Spectrum.from_json(fh.read())
    lam = cfg["lambda_max"]
    if lam is None:
        raise DomainError("--lambda-max is required")
    lam = float(lam)
    if model == "box":
        if not cfg["lengths"]:
            raise DomainError("box models need --lengths")
        return spectra.box_spectrum(_floats(cfg["lengths"], "lengths"), lam)
    if model == "interval":
        if cfg["length"] is None:
            raise DomainError("interval models need --length")
        return spectra.interval_spectrum(float(cfg["length"]), lam)
    if model in ("ball", "disk"):
        d = 2 if model == "disk" else int(cfg["dim"] or 3)
        return spectra.ball_spectrum(d, float(cfg["radius"]), lam)
    if model == "oscillator":
        return spectra.oscillator_spectrum(int(cfg["dim"] or 1), lam)
    raise DomainError(f"unknown model {model!r}")


def _grid(text):
    return None if text is None else GridSpec.parse(str(text))


def _merge(args) -> dict:
    cfg = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {config_path}: {exc}") from None
        if not isinstance(data, dict):
            raise DomainError("config must be a JSON object")
        for k, v in data.items():
            key = k.replace("-", "_")
            if key not in DEFAULTS:
                raise DomainError(f"unknown config key {k!r}")
            cfg[key] = v
    for k, v in vars(args).items():
        if k in DEFAULTS and v is not None:
            cfg[k] = v
    return cfg


# -- subcommands --------------------------------------------------------------------


def cmd_spectrum(cfg) -> int:
    S = build_model(cfg)
    if cfg["format"] == "csv":
        header = ["value", "multiplicity"] + (["kinetic"] if S.kinetic is not None else [])
        rows = []
        for i, (v, m) in enumerate(S.levels):
            rows.append([v, m] + ([float(S.kinetic[i])] if S.kinetic is not None else []))
        text = _csv(header, rows)
    else:
        text = json.dumps(S.to_dict(), indent=2) + "\n"
    _write(text, cfg["out"])
    return EXIT_OK


def _default_families(S, cfg):
    fams = ["yang", "hs:3", "hs_small:1.5", "ratio_form:2", "riesz_ratio:2", "heat_scaled"]
    if S.kinetic is not None:
        fams += ["schrodinger_yang", "schrodinger_hs:2", "schrodinger_small:1.5", "riesz_ratio_sigma:2",
                 "heat_scaled_sigma"]
    if S.volume is not None:
        fams += ["upper:riesz:berezin_li_yau:1", "upper:counting:berezin_li_yau", "upper:heat:kac"]
        if cfg["melas_constant"] is not None and S.second_moment is not None:
            fams += ["upper:riesz:melas:1", "upper:heat:melas"]
    if S.kind == spectra.DIRICHLET:
        fams += ["lower:riesz:riesz_low:1", "lower:heat:heat_low"]
        if S.ground_ess_sup is not None:
            fams += ["lower:riesz:laptev:1"]
    return fams


def _run_family(S, spec, cfg):
    zgrid, tgrid, tol = _grid(cfg["grid"]), _grid(cfg["tgrid"]), float(cfg["tolerance"])
    parts = spec.split(":")
    name = parts[0]
    if name in ("upper", "lower"):
        if len(parts) < 3:
            raise DomainError(f"bound family must be upper|lower:quantity:method[:rho], got {spec!r}")
        quantity, method = parts[1], parts[2]
        rho = float(parts[3]) if len(parts) > 3 else None
        g = tgrid if quantity == "heat" else zgrid
        return audits.bound_audit(S, quantity, method, name, g, rho, cfg["melas_constant"], tol)
    rho = float(parts[1]) if len(parts) > 1 else cfg["rho"]
    rho = None if rho is None else float(rho)
    if name == "ratio_form":
        return audits.ratio_form_audit(S, rho or 2.0, zgrid, tol)
    if name in ("riesz_ratio", "riesz_ratio_sigma"):
        return audits.monotonicity_audit(S, name, zgrid, rho=rho or 2.0, tolerance=tol)
    if name in ("heat_scaled", "heat_scaled_sigma"):
        return audits.monotonicity_audit(S, name, tgrid, tolerance=tol)
    return audits.universal_audit(S, name, zgrid, rho, tol)


def _threads():
    raw = os.environ.get("SPECTRAL_RIESZ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(f"SPECTRAL_RIESZ_THREADS must be an integer, got {raw!r}") from None


def _sanitize(label):
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in label)


def cmd_audit(cfg) -> int:
    S = build_model(cfg)
    fams = cfg["families"]
    if isinstance(fams, str):
        fams = [f.strip() for f in fams.split(",") if f.strip()]
    if not fams:
        fams = _default_families(S, cfg)
    # Every family is validated before any work starts so config errors surface as exit 2.
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        reports = list(pool.map(lambda f: _run_family(S, f, cfg), fams))
    ext = "csv" if cfg["format"] == "csv" else "json"
    if cfg["out"]:
        for i, r in enumerate(reports):
            body = r.to_csv() if ext == "csv" else r.to_json() + "\n"
            _write(body, os.path.join(cfg["out"], f"{i:02d}_{_sanitize(r.label)}.{ext}"))
    rows = [[r.label, r.verdict, r.worst_margin] for r in reports]
    sys.stdout.write(_csv(["family", "verdict", "worst_margin"], rows))
    failed = any(not r.passed for r in reports if not r.conjecture)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_figure(cfg) -> int:
    fid = cfg["id"]
    grid = _grid(cfg["grid"])
    if fid == "fig1":
        header, table = figures.fig1_table(grid) if grid else figures.fig1_table()
    elif fid == "fig2":
        header, table = figures.fig2_table(grid) if grid else figures.fig2_table()
    else:
        raise DomainError(f"unknown figure {fid!r}")
    _write(_csv(header, table.tolist()), cfg["out"])
    return EXIT_OK


def _family_members(cfg):
    lam = float(cfg["lambda_max"] or 2500.0)
    g = GridSpec.parse(cfg["aspects"]) if ":" in str(cfg["aspects"]) else None
    aspects = g.points() if g else _floats(cfg["aspects"], "aspects")
    members = [(float(a), spectra.box_spectrum([1.0, float(a)], lam)) for a in aspects]
    if cfg["include_disk"]:
        members.append(("disk", spectra.ball_spectrum(2, 1.0, lam)))
    return members


def cmd_conjecture(cfg) -> int:
    target = cfg["target"]
    members = _family_members(cfg)
    kw = {}
    if target == "eq_4_8":
        kw["rho"] = float(cfg["rho"] if cfg["rho"] is not None else 2.0)
    elif target == "eq_4_7":
        kw["pair"] = WeylPair.exponential(float(cfg["pair_rate"] or 0.1), 2)
    elif target == "eq_4_9":
        kw["tgrid"] = _grid(cfg["tgrid"])
    report = audits.conjecture_scan(members, target, tolerance=float(cfg["tolerance"]), **kw)
    if cfg["out"]:
        _write(report.to_csv() if cfg["format"] == "csv" else report.to_json() + "\n", cfg["out"])
    rho0 = audits.crossing_rho0(2)
    lines = [["target", "verdict", "worst_margin", "crossing_rho0_d2"], [target, report.verdict, report.worst_margin, rho0]]
    text = _csv(lines[0], lines[1:])
    if "witness" in report.extras:
        w = report.extras["witness"]
        text += f"# witness parameter={w['parameter']} grid_value={fmt(w['grid_value'])} margin={fmt(w['margin'])}\n"
    sys.stdout.write(text)
    return EXIT_OK


def cmd_gamma(cfg) -> int:
    S = build_model(cfg)
    ms = _int_range(cfg["m"])
    rhos = _floats(cfg["rho"] if cfg["rho"] is not None else "2", "rho list")
    table = audits.gamma_table(S, ms, rhos)
    rows = [[g.m, g.rho, g.gamma, g.next_eigenvalue, g.slack] for g in table]
    _write(_csv(["m", "rho", "gamma", "next_eigenvalue", "slack"], rows), cfg["out"])
    return EXIT_FAIL if any(g.slack < 0 for g in table) else EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "audit": cmd_audit,
    "figure": cmd_figure,
    "conjecture": cmd_conjecture,
    "gamma": cmd_gamma,
}


def _parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file of option values (flags take precedence)")
    common.add_argument("--model", choices=["box", "interval", "ball", "disk", "oscillator", "explicit"])
    common.add_argument("--lengths", help="comma-separated box side lengths")
    common.add_argument("--length", type=float, help="interval length")
    common.add_argument("--dim", type=int, help="dimension for ball and oscillator models")
    common.add_argument("--radius", type=float)
    common.add_argument("--lambda-max", dest="lambda_max", type=float, help="completeness ceiling")
    common.add_argument("--spectrum-file", dest="spectrum_file", help="spectrum JSON for --model explicit")
    common.add_argument("--out", help="output file (directory for audit)")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--grid", help="start:end:count[:log]")
    common.add_argument("--tgrid", help="heat-trace grid start:end:count[:log]")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--melas-constant", dest="melas_constant", type=float, help="M_d; required by Melas bounds")
    common.add_argument("--rho", help="Riesz order (comma list for gamma)")

    p = argparse.ArgumentParser(prog="spectral-riesz", description="Riesz means, heat traces and universal eigenvalue bounds")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="build and serialize a model spectrum")
    a = sub.add_parser("audit", parents=[common], help="run inequality audits")
    a.add_argument("--families", help="comma list, e.g. yang,hs:3,upper:heat:kac")
    f = sub.add_parser("figure", parents=[common], help="emit figure data as CSV")
    f.add_argument("--id", choices=["fig1", "fig2"])
    c = sub.add_parser("conjecture", parents=[common], help="scan conjectured bounds over boxes (1, a) and the disk")
    c.add_argument("--target", choices=["eq_4_7", "eq_4_8", "eq_4_9"])
    c.add_argument("--aspects", help="aspect ratios a, as a list or start:end:count")
    c.add_argument("--no-disk", dest="include_disk", action="store_false", default=None)
    c.add_argument("--pair-rate", dest="pair_rate", type=float, help="a in F(s) = exp(-a s) for eq_4_7")
    g = sub.add_parser("gamma", parents=[common], help="tabulate gamma_m(rho) eigenvalue bounds")
    g.add_argument("--m", help="indices, e.g. 1-10 or 1,3,5")
    return p


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge(args)
        return COMMANDS[args.command](cfg)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
