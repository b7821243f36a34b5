"""Command line interface: ``viropatch <subcommand> ...``.

Every subcommand prints one JSON document on stdout. With ``--out DIR``
the CSV and SVG artifacts of the subcommand are written there as well.
Exit status: 0 on success, 2 on invalid input, 3 when a numerical
stability gate fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .chambers import chamber_count
from .discriminant import (Quality, Window, critical_points, critical_polynomial,
                           domain_intervals, sample_curve)
from .errors import EmptyDomain, InputError, ViroPatchError
from .pentanomial import classify, cusp_family, feasible_y2, region_scan
from .rational import fmt, parse_vector
from .separation import (all_faces_separable, count_nonseparable_sign_vectors,
                         has_nontrivial_separating_hyperplane, has_very_strict_separating_hyperplane)
from .support import gale_dual_of, load_support
from .svg import Canvas, window_of
from .tropical import patchwork_report, regular_subdivision, tropical_curve
from .zeroset import EvalContext, zero_set_2d

SCHEMA_VERSION = 1


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(report: dict, out: Path | None, name: str) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": name, **_jsonable(report)}
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if out is not None:
        (out / f"{name}.json").write_text(text + "\n", encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])


def _floats(text: str) -> list[float]:
    return [float(v) for v in parse_vector(text.split(","))]


def _window(text: str | None) -> Window | None:
    if text is None or text == "auto":
        return None
    vals = _floats(text)
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise InputError("window must be xmin,xmax,ymin,ymax with xmin < xmax and ymin < ymax")
    return Window(*vals)


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------- subcommands


def _separation_report(support) -> dict:
    nontrivial = has_nontrivial_separating_hyperplane(support)
    strict = has_very_strict_separating_hyperplane(support)
    report = {
        "nontrivial": nontrivial.to_json() if nontrivial else None,
        "very_strict": strict.to_json() if strict else None,
    }
    try:
        report["faces"] = all_faces_separable(support).to_json()
    except ViroPatchError as exc:
        report["faces"] = {"skipped": str(exc)}
    try:
        report["zonotope"] = count_nonseparable_sign_vectors(support).to_json()
    except ViroPatchError as exc:
        report["zonotope"] = {"skipped": str(exc)}
    return report


def cmd_separate(args) -> int:
    support = load_support(args.support)
    _emit(_separation_report(support), _outdir(args), "separate")
    return 0


def _curve_svg(curve, path: Path) -> None:
    w = curve.window
    canvas = Canvas(w.xmin, w.xmax, w.ymin, w.ymax, "signed reduced discriminant")
    canvas.axes()
    for pl in curve.polylines:
        canvas.polyline(pl, stroke="#1f4e9c")
    for p in curve.critical_images:
        canvas.circle(p, fill="#c0392b")
    path.write_text(canvas.render(), encoding="utf-8")


def cmd_discriminant(args) -> int:
    support = load_support(args.support)
    out = _outdir(args)
    gale = gale_dual_of(support)
    domain = domain_intervals(gale, support.signs)
    report = {"B": [[fmt(x) for x in row] for row in gale.B], "domain": domain.to_json(),
              "critical_polynomial": critical_polynomial(gale).to_json()}
    if domain.empty:
        report.update(empty=True, critical_points=[])
        _emit(report, out, "discriminant")
        return 0
    curve = sample_curve(gale, support.signs, Quality(step=args.quality_step), _window(args.window))
    report.update(empty=False, critical_points=[c.to_json() for c in curve.critical],
                  window=curve.window.to_json(), samples=int(len(curve.samples())),
                  metadata=curve.metadata)
    if out is not None:
        rows = []
        for k, (pl, mu) in enumerate(zip(curve.polylines, curve.params)):
            rows += [(float(m), float(x), float(y), k) for m, (x, y) in zip(mu, pl)]
        _write_csv(out / "discriminant_samples.csv", ["mu", "x", "y", "interval"], rows)
        _curve_svg(curve, out / "discriminant.svg")
    _emit(report, out, "discriminant")
    return 0


def _chambers(support, resolution: int) -> dict:
    gale = gale_dual_of(support)
    try:
        curve = sample_curve(gale, support.signs)
    except EmptyDomain:
        return {"total": 1, "bounded": 0, "unbounded": 1, "empty_discriminant": True}
    return {**chamber_count(curve, resolution).to_json(), "empty_discriminant": False}


def cmd_chambers(args) -> int:
    support = load_support(args.support)
    _emit(_chambers(support, args.resolution), _outdir(args), "chambers")
    return 0


def _tropical_svg(curve, path: Path) -> None:
    sub = curve.subdivision
    pts = [[float(x) for x in p] for p in sub.support.points]
    verts = [[float(x) for x in v] for v in curve.vertices]
    canvas = Canvas(*window_of([pts] + ([verts] if verts else [])), "tropical curve")
    for cell in sub.cells:
        canvas.polygon([pts[i] for i in cell.ring], fill="#eeeeee", stroke="#999999")
    span = max(canvas.window[1] - canvas.window[0], canvas.window[3] - canvas.window[2])
    for e in curve.edges:
        colour = "#c0392b" if e.signed else "#555555"
        a = np.array([float(x) for x in curve.vertices[e.cells[0]]])
        if e.bounded:
            b = np.array([float(x) for x in curve.vertices[e.cells[1]]])
        else:
            d = np.array([float(x) for x in e.direction])
            b = a + d / np.linalg.norm(d) * 2 * span
        canvas.segment(a, b, stroke=colour, width=2.5 if e.signed else 1.0)
    for p, s in zip(pts, sub.support.signs):
        canvas.circle(p, fill="#c0392b" if s > 0 else "#1f4e9c")
    path.write_text(canvas.render(), encoding="utf-8")


def cmd_tropical(args) -> int:
    support = load_support(args.support)
    out = _outdir(args)
    sub = regular_subdivision(support, parse_vector(args.lift.split(",")))
    report = {"subdivision": sub.to_json(), "triangles": sub.triangles}
    if sub.generic:
        curve = tropical_curve(support, sub)
        report["curve"] = curve.to_json()
        if out is not None:
            _tropical_svg(curve, out / "tropical.svg")
    else:
        report["curve"] = None
    _emit(report, out, "tropical")
    return 0


def cmd_patchwork(args) -> int:
    support = load_support(args.support)
    report = patchwork_report(support, args.sweep, args.seed)
    _emit({"sweep": args.sweep, "seed": args.seed, **report.to_json()}, _outdir(args), "patchwork")
    return 0


def cmd_classify5(args) -> int:
    support = load_support(args.support)
    _emit(classify(support, strict=args.strict).to_json(), _outdir(args), "classify5")
    return 0


def cmd_cusps(args) -> int:
    out = _outdir(args)
    fam = cusp_family(parse_vector(args.mu.split(",")))
    crit = critical_points(fam.gale, fam.eps)
    report = {**fam.to_json(), "critical_points": [c.to_json() for c in crit]}
    if out is not None:
        curve = sample_curve(fam.gale, fam.eps)
        _curve_svg(curve, out / "cusps.svg")
    _emit(report, out, "cusps")
    return 0


def cmd_region(args) -> int:
    out = _outdir(args)
    x1, y1 = parse_vector([args.x1, args.y1])
    scan = region_scan(x1, y1, args.grid, (parse_vector([args.ymin])[0], 0))
    samples = [Fraction(k, 20) for k in range(1, 20)]
    witnesses = {fmt(x2): feasible_y2(x1, y1, x2) for x2 in samples}
    report = {
        "x1": fmt(x1), "y1": fmt(y1), "grid": args.grid, "y_range": [args.ymin, "0"],
        "feasible_cells": scan.feasible, "exact_rechecks": scan.exact_checks,
        "columns_with_feasible_cell": int(scan.columns_with_feasible().sum()),
        "exact_witness_y2": {k: (fmt(v) if v is not None else None) for k, v in witnesses.items()},
        "every_sampled_x2_feasible": all(v is not None for v in witnesses.values()),
    }
    if out is not None:
        J, I = np.meshgrid(np.arange(len(scan.y2)), np.arange(len(scan.x2)), indexing="ij")
        rows = zip(scan.x2[I.ravel()].tolist(), scan.y2[J.ravel()].tolist(),
                   scan.mask.ravel().astype(int).tolist())
        _write_csv(out / "region_mask.csv", ["x2", "y2", "feasible"], rows)
        canvas = Canvas(0.0, 1.0, float(scan.y2[0]) - (scan.y2[1] - scan.y2[0]) / 2, 0.0,
                        "feasible (x2, y2)")
        canvas.cells(scan.mask, scan.x2, scan.y2, "#3b6fd4")
        path = out / "region.svg"
        path.write_text(canvas.render(), encoding="utf-8")
    _emit(report, out, "region")
    return 0


def _zeroset(support, coeffs, window, resolution):
    ctx = EvalContext(support, np.asarray(coeffs, dtype=float))
    return zero_set_2d(ctx, window, resolution)


def cmd_zeroset(args) -> int:
    support = load_support(args.support)
    out = _outdir(args)
    zs = _zeroset(support, _floats(args.coeffs), _window(args.window), args.resolution)
    if out is not None:
        rows = []
        for k, pl in enumerate(zs.polylines):
            rows += [(k, float(x), float(y)) for x, y in pl]
        _write_csv(out / "zeroset_polylines.csv", ["component", "x", "y"], rows)
        w = zs.window
        canvas = Canvas(w.xmin, w.xmax, w.ymin, w.ymax, "zero set")
        canvas.axes()
        for pl, b in zip(zs.polylines, zs.bounded):
            canvas.polyline(pl, stroke="#c0392b" if b else "#1f4e9c")
        (out / "zeroset.svg").write_text(canvas.render(), encoding="utf-8")
    _emit(zs.to_json(), out, "zeroset")
    return 0


def cmd_analyze(args) -> int:
    support = load_support(args.support)
    sep = _separation_report(support)
    report = {"support": support.to_json(), "separable": sep["nontrivial"] is not None,
              "very_strict": sep["very_strict"] is not None, "separation": sep}
    if support.n == 2:
        gale = gale_dual_of(support)
        if gale.k == 2:
            empty = domain_intervals(gale, support.signs).empty
            report["critical_points"] = 0 if empty else len(critical_points(gale, support.signs))
            report["chambers"] = _chambers(support, args.resolution)
        else:
            # separable exactly when the parameter domain is empty, for every k
            empty = report["separable"]
        report["discriminant"] = "empty" if empty else "nonempty"
        pw = patchwork_report(support, args.sweep, args.seed)
        report["patchwork"] = pw.to_json()
        report["patchwork_any_bounded"] = pw.any_bounded
        if support.count == 5:
            report["classifier"] = classify(support).to_json()
    _emit(report, _outdir(args), "analyze")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="viropatch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, support=True):
        p = sub.add_parser(name, help=help_text)
        if support:
            p.add_argument("support", help="support JSON file or inline JSON string")
        p.add_argument("--out", default=None, help="directory for CSV/SVG/JSON artifacts")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
        p.set_defaults(func=func)
        return p

    add("separate", cmd_separate, "separating hyperplanes, faces and sign-vector count")
    p = add("discriminant", cmd_discriminant, "critical points and sampled curve (k = 2)")
    p.add_argument("--quality-step", type=float, default=1e-3, help="relative sampling step")
    p.add_argument("--window", default=None, help="xmin,xmax,ymin,ymax or auto")
    p = add("chambers", cmd_chambers, "chambers of the discriminant complement")
    p.add_argument("--resolution", type=int, default=1024)
    p = add("tropical", cmd_tropical, "regular subdivision and signed tropical curve")
    p.add_argument("--lift", required=True, help="comma separated heights")
    p = add("patchwork", cmd_patchwork, "signatures over random liftings")
    p.add_argument("--sweep", type=int, default=500)
    p = add("classify5", cmd_classify5, "critical point classifier for five points")
    p.add_argument("--strict", action="store_true", help="fail on wall cases instead of resolving")
    p = add("cusps", cmd_cusps, "support whose curve has cusps at given parameters", support=False)
    p.add_argument("--mu", required=True, help="comma separated distinct positive values, not 1")
    p = add("region", cmd_region, "feasible (x2, y2) for two critical points", support=False)
    p.add_argument("--x1", required=True)
    p.add_argument("--y1", required=True)
    p.add_argument("--grid", type=int, default=400)
    p.add_argument("--ymin", default="-1/4", help="lower end of the y2 range")
    p = add("zeroset", cmd_zeroset, "zero set components of f_c in the plane")
    p.add_argument("--coeffs", required=True, help="comma separated coefficients")
    p.add_argument("--window", default="auto", help="xmin,xmax,ymin,ymax or auto")
    p.add_argument("--resolution", type=int, default=512)
    p = add("analyze", cmd_analyze, "full pipeline report")
    p.add_argument("--sweep", type=int, default=500)
    p.add_argument("--resolution", type=int, default=1024)
    return parser


_VALUE_FLAGS = {"--coeffs", "--x1", "--y1", "--ymin", "--lift", "--mu", "--window"}


def _attach_values(argv: list[str]) -> list[str]:
    """Let value flags take arguments that start with a minus sign (``--coeffs -1,1``)."""
    out, k = [], 0
    while k < len(argv):
        if argv[k] in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except ViroPatchError as exc:
        err = {"schema_version": SCHEMA_VERSION, "error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return exc.code
    except OSError as exc:
        err = {"schema_version": SCHEMA_VERSION, "error": "InputError", "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return InputError.code


def main() -> None:
    sys.exit(run())
