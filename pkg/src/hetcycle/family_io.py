"""Family definition files.

A family file is a JSON document::

    {
      "format": "hetcycle-family",
      "version": 1,
      "spectrum": {"alpha": 4.0, "beta": 2.0, "gamma": 0.5,
                   "dalpha_dnu": 0.0, "dbeta_dnu": 0.0, "dgamma_dnu": 0.0},
      "chart": {"delta": 1.0},
      "surface": {
        "center_u": MONOMIALS2, "center_v": MONOMIALS2,
        "a": MONOMIALS2, "b": MONOMIALS2, "c": MONOMIALS2, "d": MONOMIALS2,
        "higher_order": [[[i, j], coeff], ...],      # in (x - u, y - v), i + j >= 3
        "domain": [x_lo, x_hi, y_lo, y_hi]
      },
      "curve": {
        "x": MONOMIALS3, "y": MONOMIALS3, "z": MONOMIALS3,
        "m0": 0, "t_range": [t_lo, t_hi], "param_radius": 0.1
      }
    }

``MONOMIALS2`` is a list ``[[[e_mu, e_nu], coeff], ...]`` and ``MONOMIALS3`` a
list ``[[[e_mu, e_nu, e_t], coeff], ...]``.  Floats are written with their
shortest round-trip representation, so ``save(load(text))`` reproduces a
saved file byte for byte.  Genericity is *not* enforced on load; run the
condition checker for that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .chart_model import ChartDomain, CurveFamily, SaddleSpectrum, SurfaceFamily
from .poly import MPoly

FORMAT = "hetcycle-family"
VERSION = 1


class FamilyFormatError(ValueError):
    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


@dataclass(frozen=True)
class FamilyBundle:
    spectrum: SaddleSpectrum
    chart: ChartDomain
    surface: SurfaceFamily
    curve: CurveFamily


def _poly(obj, nvars: int, where: str) -> MPoly:
    if not isinstance(obj, list):
        raise FamilyFormatError("expected a list of [exponents, coeff] pairs", where)
    terms = []
    for i, item in enumerate(obj):
        loc = f"{where}[{i}]"
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise FamilyFormatError("expected [exponents, coeff]", loc)
        exps, coeff = item
        if len(exps) != nvars or not all(isinstance(e, int) and e >= 0 for e in exps):
            raise FamilyFormatError(f"expected {nvars} nonnegative integer exponents", loc)
        if not isinstance(coeff, (int, float)) or isinstance(coeff, bool):
            raise FamilyFormatError("coefficient must be a number", loc)
        terms.append((exps, coeff))
    return MPoly.from_terms(nvars, terms)


def _get(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise FamilyFormatError("expected an object", where)
    if key not in d:
        raise FamilyFormatError(f"missing key '{key}'", where)
    return d[key]


def _num(x, where: str) -> float:
    if not isinstance(x, (int, float)) or isinstance(x, bool):
        raise FamilyFormatError("expected a number", where)
    return float(x)


def bundle_from_dict(doc: dict) -> FamilyBundle:
    if not isinstance(doc, dict):
        raise FamilyFormatError("top level must be an object", "$")
    if doc.get("format") != FORMAT:
        raise FamilyFormatError(f"format must be '{FORMAT}'", "$.format")
    if doc.get("version") != VERSION:
        raise FamilyFormatError(f"unsupported version {doc.get('version')!r}", "$.version")
    sp = _get(doc, "spectrum", "$")
    spectrum = SaddleSpectrum.unchecked(
        *(_num(_get(sp, k, "$.spectrum"), f"$.spectrum.{k}") for k in ("alpha", "beta", "gamma")),
        *(_num(sp.get(k, 0.0), f"$.spectrum.{k}") for k in ("dalpha_dnu", "dbeta_dnu", "dgamma_dnu")),
    )
    ch = _get(doc, "chart", "$")
    try:
        chart = ChartDomain(_num(_get(ch, "delta", "$.chart"), "$.chart.delta"))
    except ValueError as exc:
        raise FamilyFormatError(str(exc), "$.chart.delta") from exc

    s = _get(doc, "surface", "$")
    polys = {}
    for key, field in (("center_u", "center_u"), ("center_v", "center_v"), ("a", "coeff_a"),
                       ("b", "coeff_b"), ("c", "coeff_c"), ("d", "coeff_d")):
        polys[field] = _poly(_get(s, key, "$.surface"), 2, f"$.surface.{key}")
    ho = _get(s, "higher_order", "$.surface")
    if not isinstance(ho, list):
        raise FamilyFormatError("expected a list", "$.surface.higher_order")
    higher = []
    for i, item in enumerate(ho):
        loc = f"$.surface.higher_order[{i}]"
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)
                and len(item[0]) == 2):
            raise FamilyFormatError("expected [[i, j], coeff]", loc)
        higher.append(((item[0][0], item[0][1]), _num(item[1], loc)))
    dom = _get(s, "domain", "$.surface")
    try:
        surface = SurfaceFamily.unchecked(
            higher_order=tuple(higher),
            domain=tuple(_num(v, f"$.surface.domain[{i}]") for i, v in enumerate(dom)),
            **polys)
    except (TypeError, ValueError) as exc:
        raise FamilyFormatError(str(exc), "$.surface") from exc

    c = _get(doc, "curve", "$")
    try:
        curve = CurveFamily.unchecked(
            x_of_t=_poly(_get(c, "x", "$.curve"), 3, "$.curve.x"),
            y_of_t=_poly(_get(c, "y", "$.curve"), 3, "$.curve.y"),
            z_of_t=_poly(_get(c, "z", "$.curve"), 3, "$.curve.z"),
            m0=_get(c, "m0", "$.curve"),
            t_range=tuple(_num(v, "$.curve.t_range") for v in _get(c, "t_range", "$.curve")),
            param_radius=_num(_get(c, "param_radius", "$.curve"), "$.curve.param_radius"),
        )
    except FamilyFormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FamilyFormatError(str(exc), "$.curve") from exc
    return FamilyBundle(spectrum, chart, surface, curve)


def bundle_to_dict(bundle: FamilyBundle) -> dict:
    sp, s, c = bundle.spectrum, bundle.surface, bundle.curve
    return {
        "format": FORMAT,
        "version": VERSION,
        "spectrum": {"alpha": sp.alpha, "beta": sp.beta, "gamma": sp.gamma,
                     "dalpha_dnu": sp.dalpha_dnu, "dbeta_dnu": sp.dbeta_dnu,
                     "dgamma_dnu": sp.dgamma_dnu},
        "chart": {"delta": bundle.chart.delta},
        "surface": {
            "center_u": s.center_u.to_list(), "center_v": s.center_v.to_list(),
            "a": s.coeff_a.to_list(), "b": s.coeff_b.to_list(),
            "c": s.coeff_c.to_list(), "d": s.coeff_d.to_list(),
            "higher_order": [[list(ij), h] for ij, h in s.higher_order],
            "domain": list(s.domain),
        },
        "curve": {"x": c.x_of_t.to_list(), "y": c.y_of_t.to_list(), "z": c.z_of_t.to_list(),
                  "m0": c.m0, "t_range": list(c.t_range), "param_radius": c.param_radius},
    }


def dumps(bundle: FamilyBundle) -> str:
    return json.dumps(bundle_to_dict(bundle), indent=2) + "\n"


def loads(text: str) -> FamilyBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return bundle_from_dict(doc)


def save_family(path, bundle: FamilyBundle) -> None:
    Path(path).write_text(dumps(bundle), encoding="utf-8")


def load_family(path) -> FamilyBundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FamilyFormatError(str(exc), str(path)) from exc
    return loads(text)
