"""Batch runner for the chart-model experiments.

Subcommands::

    hetcycle synth     --kind elliptic --seed 1 --out fam.json
    hetcycle check     --family fam.json [--tol 1e-6] [--out report.json]
    hetcycle converge  --family fam.json [--mu0 0] [--m-range 0..20] [--eps 1e-3] --out conv.csv
    hetcycle cascade   --family fam.json --mu0 -0.01 --m-range 10..19 --out cascade.csv [--force]
    hetcycle plotdata  --family fam.json --mu0 -0.01 --m-range 10..14 --out plotdir/

Exit status: 0 success, 1 condition or invariant failure, 2 usage or parse error.

Every CSV header cell reads ``name [symbol; unit]``.  Chart coordinates and
parameters are dimensionless, so "unit" mostly records what a number measures.
Floats are written with ``repr`` so identical runs give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import family_io
from .cascade import (CascadeConfig, EmptyStripError, required_mu_sign, run_cascade, strip)
from .chart_model import (ChartDomain, ChartError, ParamPoint, SaddleSpectrum, TangencyType,
                          check_generic_conditions, classify, synthesize_family)
from .inclination import convergence_table, curvature_threshold, iterate_strand, reparametrize
from .solvers import SolverError
from .unfolding import unfold_cascade

log = logging.getLogger("hetcycle")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CASCADE_COLUMNS = [
    ("m", "m", "iterate index"),
    ("nu_m", "ν_m", "parameter"),
    ("t_m", "t_m", "strand parameter"),
    ("tau_x", "τ_m,x", "chart length"),
    ("tau_y", "τ_m,y", "chart length"),
    ("tau_z", "τ_m,z", "chart length"),
    ("delta", "Δ", "chart length"),
    ("delta_t", "∂Δ/∂t", "chart length"),
    ("delta2", "∂²Δ/∂t²", "chart length"),
    ("curve_kappa", "κ(l_m)", "1/chart length"),
    ("surface_kappa", "κ_n(W)", "1/chart length"),
    ("surface_kappa_x", "κ_n,x(W)", "1/chart length"),
    ("class", "contact", "category"),
    ("accepted", "accepted", "boolean"),
    ("curve_speed", "∂y_m/∂ν", "chart length per parameter"),
    ("graph_speed", "∂g/∂ν", "chart length per parameter"),
    ("margin", "|∂y_m/∂ν - ∂g/∂ν|", "chart length per parameter"),
    ("growth_ratio", "margin(m)/margin(m-1)", "dimensionless"),
]

CONVERGE_COLUMNS = [
    ("n", "n", "iterates past m0"),
    ("m", "m", "iterate index"),
    ("sup_y", "sup|y_m|", "chart length"),
    ("sup_z", "sup|z_m|", "chart length"),
    ("sup_dy", "sup|y_m'|", "dimensionless"),
    ("sup_dz", "sup|z_m'|", "dimensionless"),
    ("sup_d2y", "sup|y_m''|", "1/chart length"),
    ("sup_d2z", "sup|z_m''|", "1/chart length"),
    ("max_curvature", "max κ(l_m)", "1/chart length"),
    ("pred_sup_dy", "sup|y_0'|(β/α)^n", "dimensionless"),
    ("pred_sup_dz", "sup|z_0'|(γ/α)^n", "dimensionless"),
    ("pred_sup_d2y", "sup|y_0''|(β/α²)^n", "1/chart length"),
    ("pred_sup_d2z", "sup|z_0''|(γ/α²)^n", "1/chart length"),
    ("note", "note", "text"),
]


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def header_cell(name: str, symbol: str, unit: str) -> str:
    return f"{name} [{symbol}; {unit}]"


def write_csv(path, columns, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([header_cell(*c) for c in columns])
    for row in rows:
        w.writerow([_fmt(row.get(c[0])) for c in columns])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n",
                          encoding="utf-8")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not serializable: {type(o).__name__}")


def parse_m_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b with integers, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _load(path):
    try:
        return family_io.load_family(path)
    except family_io.FamilyFormatError as exc:
        raise UsageError(f"cannot read family file: {exc}") from exc


def _finite(x: float) -> float:
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {x}")
    return x


def _real(text: str) -> float:
    try:
        return _finite(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_synth(args) -> int:
    spectrum = SaddleSpectrum(args.alpha, args.beta, args.gamma)
    kind = TangencyType(args.kind)
    surf, curve = synthesize_family(kind, spectrum, args.seed, args.b_sign)
    family_io.save_family(args.out, family_io.FamilyBundle(spectrum, ChartDomain(), surf, curve))
    print(f"wrote {kind.value} family (seed {args.seed}) to {args.out}")
    return EXIT_OK


def _report(bundle, tol):
    return check_generic_conditions(bundle.spectrum, bundle.surface, bundle.curve, tol)


def cmd_check(args) -> int:
    bundle = _load(args.family)
    report = _report(bundle, args.tol)
    for e in report.entries:
        status = "pass" if e.passed else "FAIL"
        print(f"{e.condition:3s} {e.quantity:16s} witness={e.witness:+.6e} "
              f"tol={e.tolerance:.1e} {status}")
    if args.out:
        write_json(args.out, report.as_dict())
    ok = report.passed()
    if not ok:
        flagged = sorted({e.condition for e in report.failures()})
        print("failed conditions: " + ", ".join(flagged))
    return EXIT_OK if ok else EXIT_FAIL


def _require_generic(bundle, tol) -> bool:
    report = _report(bundle, tol)
    if report.passed():
        return True
    flagged = sorted({e.condition for e in report.failures()})
    print("family fails the generic conditions: " + ", ".join(flagged), file=sys.stderr)
    return False


def cmd_converge(args) -> int:
    bundle = _load(args.family)
    if not _require_generic(bundle, args.tol):
        return EXIT_FAIL
    curve = bundle.curve
    lo, hi = args.m_range if args.m_range else (curve.m0, curve.m0 + 20)
    if lo < curve.m0:
        raise UsageError(f"m range must start at or after m0 = {curve.m0}")
    p = ParamPoint(args.mu0, 0.0)
    delta = bundle.chart.delta
    rows = convergence_table(bundle.spectrum, curve, p, range(lo - curve.m0, hi - curve.m0 + 1),
                             delta)
    for row in rows:
        row.setdefault("m", curve.m0 + row["n"])
    write_csv(args.out, CONVERGE_COLUMNS, rows)
    m_hat = curvature_threshold(bundle.spectrum, curve, p, args.eps, hi - curve.m0, delta)
    print(f"rows={len(rows)} m_hat0(eps={args.eps:g})={m_hat}")
    if rows and rows[-1].get("note") == "domain_overflow":
        print(f"table truncated at n={rows[-1]['n']}: strand leaves the chart")
    return EXIT_OK


def _sign_rule(kind: TangencyType) -> str:
    if kind is TangencyType.ELLIPTIC:
        return "elliptic: sign(mu0) = -sign(b) * sign(eta0)"
    return "hyperbolic: sign(mu0) = sign(b) * sign(eta0)"


def _cascade_rows(result, diags):
    by_m = {d.m: d for d in diags}
    rows = []
    for r in result.records:
        d = by_m.get(r.m)
        rows.append({
            "m": r.m, "nu_m": r.nu_m, "t_m": r.t_m,
            "tau_x": r.tau_m[0], "tau_y": r.tau_m[1], "tau_z": r.tau_m[2],
            "delta": r.gap.value, "delta_t": r.gap.slope, "delta2": r.gap.bend,
            "curve_kappa": r.curve_kappa, "surface_kappa": r.surface_kappa,
            "surface_kappa_x": r.surface_kappa_x, "class": r.contact.value,
            "accepted": r.accepted,
            "curve_speed": d.curve_speed if d else None,
            "graph_speed": d.graph_speed if d else None,
            "margin": d.margin if d else None,
            "growth_ratio": d.growth_ratio if d else None,
        })
    return rows


def _config(args, bundle) -> CascadeConfig:
    lo, hi = args.m_range
    try:
        return CascadeConfig(mu0=args.mu0, m_min=lo, m_max=hi, h0=args.h0, nu_bar=args.nu_bar,
                             solve_tol=args.tol, delta=bundle.chart.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_cascade(args) -> int:
    bundle = _load(args.family)
    if not _require_generic(bundle, 1e-6):
        return EXIT_FAIL
    surf = bundle.surface
    kind = classify(surf)
    b00 = surf.taylor(ParamPoint())[1]
    req = required_mu_sign(kind, b00, surf.eta0())
    if np.sign(args.mu0) != req and not args.force:
        print(f"mu0 = {args.mu0} has the wrong sign; required sign is {req:+d} "
              f"({_sign_rule(kind)}, b = {b00:+.6g}, eta0 = {surf.eta0():+.6g}); "
              "pass --force to run anyway", file=sys.stderr)
        return EXIT_FAIL
    cfg = _config(args, bundle)
    result = run_cascade(bundle.spectrum, surf, bundle.curve, cfg)
    summary = unfold_cascade(result, bundle.spectrum)
    write_csv(args.out, CASCADE_COLUMNS, _cascade_rows(result, summary.diagnostics))
    invariants = dict(result.invariants)
    invariants["margin_growth_near_beta"] = summary.growth_ok
    doc = {
        "kind": kind.value,
        "mu0": cfg.mu0,
        "required_mu_sign": req,
        "forced": bool(args.force),
        "m_range": [cfg.m_min, cfg.m_max],
        "h0": result.h0,
        "nu_bar": result.nu_bar,
        "kappa0": result.kappa0,
        "accepted": len(result.accepted),
        "records": len(result.records),
        "fitted_log_rate": result.fitted_log_rate,
        "expected_log_rate": -math.log(bundle.spectrum.beta),
        "c0": summary.c0,
        "height_hypothesis": all(r.height_hypothesis for r in result.records),
        "failures": [{"m": f.m, "kind": f.kind, "message": f.message} for f in result.failures],
        "invariants": invariants,
        "all_invariants_pass": all(invariants.values()),
    }
    summary_path = args.summary or str(Path(args.out).with_suffix(".summary.json"))
    write_json(summary_path, doc)
    for name, ok in sorted(invariants.items()):
        print(f"{name:26s} {'pass' if ok else 'FAIL'}")
    print(f"accepted {len(result.accepted)}/{cfg.m_max - cfg.m_min + 1} records; "
          f"summary in {summary_path}")
    return EXIT_OK if doc["all_invariants_pass"] else EXIT_FAIL


def level_curves(surf, p: ParamPoint, level: float, grid: int = 241) -> list[np.ndarray]:
    """Polylines of ``{f = level}`` inside the surface domain."""
    import contourpy

    xlo, xhi, ylo, yhi = surf.domain
    xs = np.linspace(xlo, xhi, grid)
    ys = np.linspace(ylo, yhi, grid)
    X, Y = np.meshgrid(xs, ys)
    F = np.polynomial.polynomial.polyval2d(X, Y, surf.xy_coefficients(p))
    gen = contourpy.contour_generator(X, Y, F)
    return [np.asarray(line) for line in gen.lines(level) if len(line) > 1]


def _write_columns(path, header: str, rows) -> None:
    lines = ["# " + header]
    for row in rows:
        lines.append("" if row is None else " ".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _polyline_rows(lines):
    rows = []
    for k, line in enumerate(lines):
        if k:
            rows.append(None)
        rows.extend((k, float(x), float(y)) for x, y in line)
    return rows


def cmd_plotdata(args) -> int:
    bundle = _load(args.family)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    surf, curve, spectrum = bundle.surface, bundle.curve, bundle.spectrum
    lo, hi = args.m_range
    records = []
    try:
        result = run_cascade(spectrum, surf, curve, _config(args, bundle))
        surf, curve = result.surface, result.curve
        records = result.records
        h0 = result.h0
    except (ChartError, SolverError) as exc:
        log.info("cascade unavailable: %s", exc)
        try:
            rp = reparametrize(curve, surf)
            surf, curve = rp.surface, rp.curve
        except (ChartError, SolverError):
            pass
        h0 = args.h0 if args.h0 is not None else 0.5 * abs(surf.coeff_a(args.mu0, 0.0))
    p = ParamPoint(args.mu0, 0.0)

    for name, level in (("level_z0.dat", 0.0), ("level_h0.dat", h0)):
        _write_columns(out / name, f"branch x y  (f(x, y) = {level!r} at mu0={args.mu0!r}, nu=0)",
                       _polyline_rows(level_curves(surf, p, level)))

    nu_of = {r.m: r.nu_m for r in records}
    rows = []
    ts = np.linspace(*curve.t_range, 201)
    for m in range(lo, hi + 1):
        nu = nu_of.get(m, 0.0)
        s = iterate_strand(spectrum, curve, ParamPoint(args.mu0, nu), m - curve.m0,
                           bundle.chart.delta, check=False)
        if rows:
            rows.append(None)
        rows.extend((m, nu, float(t), float(t), float(s.y_poly(t)), float(s.z_poly(t)))
                    for t in ts)
    _write_columns(out / "strands.dat", "m nu t x y z  (nu = nu_m when a tangency was found)", rows)

    try:
        st = strip(surf, p, h0)
        srows = [(k, st.variant.value, c[0], c[1], st.z_extent[0], st.z_extent[1])
                 for k, c in enumerate(st.components)]
    except (EmptyStripError, ChartError):
        srows = []
    _write_columns(out / "strip.dat", "component variant y_lo y_hi z_lo z_hi", srows)
    _write_columns(out / "tangencies.dat", "m nu_m t_m x y z accepted",
                   [(r.m, r.nu_m, r.t_m, *r.tau_m, r.accepted) for r in records])
    print(f"wrote plot data to {out}/")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hetcycle",
                                 description="Tangency cascades near a heterodimensional cycle.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="write a seeded generic family file")
    s.add_argument("--kind", choices=[k.value for k in TangencyType], required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--alpha", type=_real, default=4.0)
    s.add_argument("--beta", type=_real, default=2.0)
    s.add_argument("--gamma", type=_real, default=0.5)
    s.add_argument("--b-sign", type=int, choices=[-1, 1], default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("check", help="measure the generic conditions")
    c.add_argument("--family", required=True)
    c.add_argument("--tol", type=_real, default=1e-6)
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("converge", help="strand sup norms and curvature per iterate")
    v.add_argument("--family", required=True)
    v.add_argument("--mu0", type=_real, default=0.0)
    v.add_argument("--m-range", type=parse_m_range)
    v.add_argument("--eps", type=_real, default=1e-3)
    v.add_argument("--tol", type=_real, default=1e-6)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_converge)

    for name, func, hlp in (("cascade", cmd_cascade, "find the tangency cascade"),
                            ("plotdata", cmd_plotdata, "dump geometry as whitespace columns")):
        k = sub.add_parser(name, help=hlp)
        k.add_argument("--family", required=True)
        k.add_argument("--mu0", type=_real, required=True)
        k.add_argument("--m-range", type=parse_m_range, required=True)
        k.add_argument("--h0", type=_real)
        k.add_argument("--nu-bar", type=_real)
        k.add_argument("--tol", type=_real, default=1e-10)
        k.add_argument("--out", required=True)
        if name == "cascade":
            k.add_argument("--summary", help="summary path (default: <out>.summary.json)")
            k.add_argument("--force", action="store_true", help="run despite a wrong mu0 sign")
        k.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
