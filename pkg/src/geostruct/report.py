"""Classification report assembly, JSON serialization and text rendering."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import List, Optional

from . import classify as cl
from .expr import FracExpr, to_dsl
from .golden import GoldenResult
from .numeric import NumericSummary
from .pipeline import Pipeline
from .products import kulkarni

REPORT_KEYS = ("config", "components", "relations", "einstein_level", "quasi_einstein", "roter",
               "ricci_derivative_flags", "compatibility", "recurrence", "golden_diffs", "numeric_check")


def _frac(f: FracExpr | None) -> Optional[str]:
    return None if f is None else str(f)


def _label(idx) -> str:
    return "".join(str(i + 1) for i in idx) or "_"


def relation_label(kind: str, constant: bool) -> str:
    if kind == "zero":
        return "semisymmetric"
    if kind == "proportional":
        return "pseudosymmetric" if constant else "pseudosymmetric-type"
    return "none"


def components_section(p: Pipeline) -> dict:
    out = {"kappa": {"_": to_dsl(p.curvatures.kappa)}}
    for name, t in p.named_components().items():
        out[name] = {_label(ix): to_dsl(v) for ix, v in t.nonzero()}
    return out


def relations_section(p: Pipeline) -> List[dict]:
    rows = []
    for rel in cl.classify_all_pairs(p.dots, p.tachibanas):
        r = rel.result
        rows.append({
            "E": rel.E, "F": rel.F, "Z": rel.Z,
            "kind": r.kind,
            "coefficient": _frac(r.coefficient),
            "constant": r.is_constant,
            "label": relation_label(r.kind, r.is_constant),
        })
    return rows


def build_report(p: Pipeline, golden: Optional[GoldenResult] = None,
                 numeric: Optional[NumericSummary] = None) -> dict:
    cs = p.curvatures
    level = cl.einstein_level(cs.Ric, p.metric)
    extra = [Fraction(a) for a in p.config.extra_alphas]
    qe = cl.quasi_einstein(cs.Ric, p.metric, extra, level=level)
    roter = cl.roter_decomposition(cs.R, p.g, cs.Ric, p.ric2)
    codazzi, cyclic = cl.codazzi_and_cyclic(p.nablas["Ric"])
    compat = {z: {name: cl.compatibility(p.tensor(name), p.tensor(z), p.metric) for name in cl.CURVATURE_NAMES}
              for z in ("Ric", "g")}
    recurrence = {}
    for name in cl.CURVATURE_NAMES:
        entry = cl.recurrent_2forms(p.tensor(name), p.nablas[name])
        recurrence[name] = {
            "recurrent": entry.recurrent,
            "sigma": None if entry.sigma is None else [str(s) for s in entry.sigma],
            "unique": entry.unique,
        }
    report = {
        "config": p.config.to_dict(),
        "components": components_section(p),
        "relations": relations_section(p),
        "einstein_level": {
            "level": level.level,
            "coefficients": [str(c) for c in level.coefficients],
            "identity": level.polynomial(),
        },
        "quasi_einstein": {
            "candidates": [{"alpha": str(a), "rank": r} for a, r in qe.candidates],
            "minimal_rank": qe.minimal_rank,
            "ricci_rank": qe.ricci_rank,
            "ricci_simple": qe.ricci_simple,
            "alpha": _frac(qe.alpha),
            "eta": None if qe.eta is None else [str(e) for e in qe.eta],
            "nonconstant_roots": qe.nonconstant_roots,
        },
        "roter": {
            "reduced": roter.reduced,
            "generalized": roter.generalized,
            "coefficients": {k: str(v) for k, v in roter.coefficients.items()},
        },
        "ricci_derivative_flags": {"codazzi": codazzi, "cyclic_parallel": cyclic},
        "compatibility": compat,
        "recurrence": recurrence,
        "golden_diffs": None if golden is None else golden.to_dict(),
        "numeric_check": None if numeric is None else {
            "points": numeric.points,
            "compared": numeric.compared,
            "max_relative_error": numeric.max_relative_error,
            "worst_component": numeric.worst_component,
            "tolerance": numeric.tolerance,
            "passed": numeric.passed,
        },
    }
    assert tuple(report) == REPORT_KEYS
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    cfg = report["config"]
    eps = "+1" if cfg["epsilon"] > 0 else "-1"
    lines = [f"preset {cfg['preset']}  epsilon {eps}", ""]
    comp = report["components"]
    lines.append(f"scalar curvature: {comp['kappa']['_']}")
    lines.append("Ricci tensor: " + (", ".join(f"Ric{k} = {v}" for k, v in comp["Ric"].items()) or "0"))
    lines.append("")
    lines.append("relations (E.F against Q(Z,F)):")
    for r in report["relations"]:
        if r["kind"] == "zero" and r["Z"] == "g":
            continue  # already listed with Z = Ric
        if r["kind"] == "zero":
            lines.append(f"  {r['E']}.{r['F']} = 0")
        elif r["kind"] == "proportional":
            lines.append(f"  {r['E']}.{r['F']} = ({r['coefficient']}) Q({r['Z']},{r['F']})  [{r['label']}]")
    el = report["einstein_level"]
    lines += ["", f"Einstein level: {el['level']}   {el['identity']}"]
    qe = report["quasi_einstein"]
    cands = ", ".join(f"rank(Ric - ({c['alpha']})g) = {c['rank']}" for c in qe["candidates"])
    lines.append(f"quasi-Einstein: {cands}; minimal rank {qe['minimal_rank']}")
    if qe["ricci_simple"]:
        lines.append(f"  Ricci simple: Ric = ({qe['alpha']}) eta (x) eta, eta = ({', '.join(qe['eta'])})")
    ro = report["roter"]
    kind = "reduced Roter" if ro["reduced"] else ("generalized Roter" if ro["generalized"] else "no decomposition")
    coeffs = ", ".join(f"{k}: {v}" for k, v in ro["coefficients"].items())
    lines.append(f"Roter: {kind}" + (f" ({coeffs})" if coeffs else ""))
    fl = report["ricci_derivative_flags"]
    lines.append(f"Ricci Codazzi: {fl['codazzi']}   cyclic parallel: {fl['cyclic_parallel']}")
    compat = report["compatibility"]["Ric"]
    lines.append("Ric-compatible with: " + (", ".join(k for k, v in compat.items() if v) or "none"))
    lines.append("recurrence:")
    for name, r in report["recurrence"].items():
        if r["recurrent"]:
            lines.append(f"  {name}: recurrent, sigma = ({', '.join(r['sigma'])})")
        else:
            lines.append(f"  {name}: not recurrent")
    gd = report["golden_diffs"]
    if gd is not None:
        lines += ["", f"golden: {gd['matched']}/{gd['entries']} matched, "
                      f"{gd['hard_mismatches']} mismatches, {gd['suspect_mismatches']} suspect"]
        for d in gd["diffs"]:
            tag = " (suspect)" if d["suspect"] else ""
            lines.append(f"  {d['entry']}: expected {d['expected']}, computed {d['computed']}{tag}")
    nc = report["numeric_check"]
    if nc is not None:
        lines += ["", f"numeric check: max relative error {nc['max_relative_error']:.3e} over "
                      f"{nc['compared']} values ({'pass' if nc['passed'] else 'FAIL'})"]
    return "\n".join(lines) + "\n"


def check_invariants(p: Pipeline) -> List[str]:
    """Internal consistency checks; returns human-readable violations."""
    problems = []
    R = p.curvatures.R
    for ix in R.indices():
        h, k, i, j = ix
        if R[ix] != -R[h, k, j, i]:
            problems.append(f"R not antisymmetric in its last pair at {_label(ix)}")
            break
    cs = p.curvatures
    n = p.metric.dim
    gg = kulkarni(p.g, p.g).scale(cs.kappa * Fraction(1, 2 * (n - 1) * (n - 2)))
    if cs.C != cs.K + gg:
        problems.append("C differs from K + kappa/(2(n-1)(n-2)) g^g")
    four = cs.four_tensors()
    checked = [(f"Q({z},{f})", t) for (z, f), t in p.tachibanas.items()]
    # E.F inherits last-pair antisymmetry only from E's first-pair antisymmetry
    checked += [(f"{e}.{f}", t) for (e, f), t in p.dots.items() if first_pair_antisymmetric(four[e])]
    for name, t in checked:
        for ix, v in t.nonzero():
            if v != -t[ix[:-2] + (ix[-1], ix[-2])]:
                problems.append(f"{name} not antisymmetric in its last pair")
                break
    return problems


def first_pair_antisymmetric(t) -> bool:
    return all(v == -t[(ix[1], ix[0]) + ix[2:]] for ix, v in t.items())
