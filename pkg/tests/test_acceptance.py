"""End-to-end acceptance checks.

Each test carries a ``criterion`` marker; the session summary folds them into
one PASS/FAIL line per criterion.  Tolerances: symbolic checks are exact,
golden tables need every unannotated entry to match and at least 95% overall,
and the numeric cross-check allows a relative error of 1e-5.
"""
import itertools
from fractions import Fraction

import pytest

from geostruct import classify as cl
from geostruct.config import preset_config
from geostruct.curvature import levi_civita, metric_nonmetricity, ssnm
from geostruct.expr import ZERO
from geostruct.golden import parse_golden, shipped_golden_text, verify_golden
from geostruct.numeric import numeric_crosscheck
from geostruct.pipeline import Pipeline
from geostruct.products import dot, kulkarni, tachibana
from geostruct.report import build_report, dumps

from conftest import PRESET_RUNS, run_id
from oracles import naive_dot, naive_kulkarni, naive_tachibana

EPS = [1, -1]
NAMES = cl.CURVATURE_NAMES
MATCH_TARGET = 0.95
NUMERIC_TOLERANCE = 1e-5

golden = pytest.mark.criterion("golden component tables")
relations = pytest.mark.criterion("pseudosymmetry relations, SSNM along X3")
structure_a = pytest.mark.criterion("Ricci structure, SSNM along X3")
structure_b = pytest.mark.criterion("Ricci structure, SSNM along X1")
levi = pytest.mark.criterion("relations and Ricci structure, Levi-Civita")
properties = pytest.mark.criterion("algebraic properties")
oracle = pytest.mark.criterion("naive-loop oracles agree with optimized products")
numeric = pytest.mark.criterion("finite-difference cross-check")
determinism = pytest.mark.criterion("deterministic reports")

# E.F against Q(Z,F): zero entries, then constant multiples (as functions of epsilon)
ZERO_PRODUCTS = [("C", "R"), ("R", "C"), ("C", "C"), ("K", "C"), ("W", "C"), ("P", "C"),
                 ("R", "K"), ("C", "K"), ("K", "K"), ("W", "K")]
RIC_MULTIPLES = {
    ("K", "R"): lambda e: -1, ("W", "R"): lambda e: Fraction(2, 3), ("P", "R"): lambda e: Fraction(1, 2),
    ("P", "K"): lambda e: Fraction(-1, 2), ("R", "W"): lambda e: Fraction(3, 4),
    ("K", "W"): lambda e: Fraction(-3, 4), ("W", "W"): lambda e: Fraction(1, 2),
    ("P", "W"): lambda e: Fraction(1, 4),
}
METRIC_MULTIPLES = {
    ("K", "R"): lambda e: -e, ("W", "R"): lambda e: Fraction(2, 3) * e, ("P", "R"): lambda e: Fraction(e, 2),
    ("R", "W"): lambda e: e, ("K", "W"): lambda e: -e, ("W", "W"): lambda e: Fraction(2, 3) * e,
    ("P", "W"): lambda e: Fraction(e, 3), ("R", "P"): lambda e: e, ("K", "P"): lambda e: -e,
    ("W", "P"): lambda e: Fraction(2, 3) * e,
}
RELATION_ITEMS = ([("zero", ef) for ef in ZERO_PRODUCTS] + [("Ric", ef) for ef in RIC_MULTIPLES]
                  + [("g", ef) for ef in METRIC_MULTIPLES])


def relation_id(item):
    z, (e, f) = item
    return f"{e}.{f}=0" if z == "zero" else f"{e}.{f}~Q({z},{f})"


def check_relation(p, eps, item):
    z, (e, f) = item
    if z == "zero":
        assert p.dots[(e, f)].is_zero()
        return
    table = RIC_MULTIPLES if z == "Ric" else METRIC_MULTIPLES
    result = cl.detect_relation(p.dots[(e, f)], p.tachibanas[(z, f)])
    assert result.kind == "proportional"
    assert result.constant == table[(e, f)](eps)


# -- golden tables -------------------------------------------------------------

@golden
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_golden_table(pipelines, run):
    result = verify_golden(pipelines(*run), parse_golden(shipped_golden_text(*run)))
    assert not result.hard_diffs, [d.to_dict() for d in result.hard_diffs]
    assert result.match_fraction >= MATCH_TARGET


# -- SSNM along X3 ---------------------------------------------------------------

@relations
@pytest.mark.parametrize("eps", EPS)
@pytest.mark.parametrize("item", RELATION_ITEMS, ids=relation_id)
def test_relation_case_a(pipelines, eps, item):
    check_relation(pipelines("sol3-a", eps), eps, item)


@structure_a
@pytest.mark.parametrize("eps", EPS)
def test_ricci_simple_case_a(pipelines, eps):
    p = pipelines("sol3-a", eps)
    qe = cl.quasi_einstein(p.curvatures.Ric, p.metric)
    assert qe.ricci_simple and qe.alpha == 2 and qe.eta == [0, 0, 1]
    assert dict(qe.candidates)[Fraction(2)] == (2 if eps == 1 else 3)


@structure_a
@pytest.mark.parametrize("eps", EPS)
def test_roter_case_a(pipelines, eps):
    p = pipelines("sol3-a", eps)
    rep = cl.roter_decomposition(p.curvatures.R, p.g, p.curvatures.Ric, p.ric2)
    assert rep.reduced
    assert [rep.coefficients[k] for k in cl.REDUCED_BASIS] == [0, 1, Fraction(-eps, 2)]


@structure_a
@pytest.mark.parametrize("eps", EPS)
def test_einstein_level_case_a(pipelines, eps):
    p = pipelines("sol3-a", eps)
    rep = cl.einstein_level(p.curvatures.Ric, p.metric)
    assert rep.level == 2 and rep.coefficients == [-2 * eps, 0]


@structure_a
@pytest.mark.parametrize("eps", EPS)
def test_ricci_derivative_case_a(pipelines, eps):
    assert cl.codazzi_and_cyclic(pipelines("sol3-a", eps).nablas["Ric"]) == (False, False)


@structure_a
@pytest.mark.parametrize("eps", EPS)
@pytest.mark.parametrize("name", ["R", "C", "K", "W"])
def test_ricci_compatibility_case_a(pipelines, eps, name):
    p = pipelines("sol3-a", eps)
    assert cl.compatibility(p.tensor(name), p.curvatures.Ric, p.metric)


@structure_a
@pytest.mark.parametrize("eps", EPS)
@pytest.mark.parametrize("name", ["R", "K", "W"])
def test_recurrence_case_a(pipelines, eps, name):
    p = pipelines("sol3-a", eps)
    entry = cl.recurrent_2forms(p.tensor(name), p.nablas[name])
    a = p.p_vector[2]
    assert entry.recurrent and entry.sigma == [0, 0, a * (2 * eps)]


# -- SSNM along X1 -----------------------------------------------------------------

@structure_b
@pytest.mark.parametrize("eps", EPS)
def test_r_k_semisymmetry_case_b(pipelines, eps):
    assert pipelines("sol3-b", eps).dots[("R", "K")].is_zero()


@structure_b
@pytest.mark.parametrize("eps", EPS)
def test_einstein_level_case_b(pipelines, eps):
    p = pipelines("sol3-b", eps)
    rep = cl.einstein_level(p.curvatures.Ric, p.metric)
    assert rep.level == 3 and rep.coefficients[0] == -2 * eps


@structure_b
@pytest.mark.parametrize("eps", EPS)
def test_einstein_identity_case_b(pipelines, eps):
    p = pipelines("sol3-b", eps)
    rep = cl.einstein_level(p.curvatures.Ric, p.metric)
    assert rep.coefficients == [-2 * eps, 0, 0], rep.polynomial()


@structure_b
@pytest.mark.parametrize("eps", EPS)
def test_ricci_derivative_case_b(pipelines, eps):
    assert cl.codazzi_and_cyclic(pipelines("sol3-b", eps).nablas["Ric"]) == (False, False)


@structure_b
@pytest.mark.parametrize("eps", EPS)
@pytest.mark.parametrize("name", NAMES)
def test_nothing_recurrent_case_b(pipelines, eps, name):
    p = pipelines("sol3-b", eps)
    assert not cl.recurrent_2forms(p.tensor(name), p.nablas[name]).recurrent


# -- Levi-Civita ------------------------------------------------------------------

@levi
@pytest.mark.parametrize("eps", EPS)
@pytest.mark.parametrize("item", RELATION_ITEMS, ids=relation_id)
def test_relation_levi_civita(pipelines, eps, item):
    check_relation(pipelines("sol3-lc", eps), eps, item)


@levi
@pytest.mark.parametrize("eps", EPS)
def test_structure_levi_civita(pipelines, eps):
    p = pipelines("sol3-lc", eps)
    cs = p.curvatures
    qe = cl.quasi_einstein(cs.Ric, p.metric)
    assert qe.ricci_simple and qe.alpha == 2 and qe.eta == [0, 0, 1]
    assert dict(qe.candidates)[Fraction(2)] == (2 if eps == 1 else 3)
    rep = cl.roter_decomposition(cs.R, p.g, cs.Ric, p.ric2)
    assert rep.reduced and [rep.coefficients[k] for k in cl.REDUCED_BASIS] == [0, 1, Fraction(-eps, 2)]
    level = cl.einstein_level(cs.Ric, p.metric)
    assert level.level == 2 and level.coefficients == [-2 * eps, 0]
    assert cl.codazzi_and_cyclic(p.nablas["Ric"]) == (False, False)
    assert all(cl.compatibility(p.tensor(n), cs.Ric, p.metric) for n in ("R", "C", "K", "W"))


# -- algebraic properties ------------------------------------------------------------

def last_pair_antisymmetric(t) -> bool:
    return all(v == -t[ix[:-2] + (ix[-1], ix[-2])] for ix, v in t.items())


@properties
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_q_of_metric_vanishes(pipelines, run):
    p = pipelines(*run)
    assert tachibana(p.g, p.g, p.metric).is_zero()


@properties
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_products_antisymmetric_in_last_pair(pipelines, run):
    p = pipelines(*run)
    bad = [f"{e}.{f}" for (e, f), t in p.dots.items() if not last_pair_antisymmetric(t)]
    assert not bad


@properties
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_tachibana_antisymmetric_in_last_pair(pipelines, run):
    p = pipelines(*run)
    assert all(last_pair_antisymmetric(t) for t in p.tachibanas.values())


@properties
@pytest.mark.parametrize("eps", EPS)
def test_zero_field_gives_levi_civita(pipelines, eps):
    m = pipelines("sol3-lc", eps).metric
    assert ssnm(m, [ZERO] * 3) == levi_civita(m)


@properties
@pytest.mark.parametrize("eps", EPS)
def test_levi_civita_riemann_symmetries(pipelines, eps):
    R = pipelines("sol3-lc", eps).curvatures.R
    for h, k, i, j in itertools.product(range(3), repeat=4):
        assert R[h, k, i, j] == R[i, j, h, k]
        assert (R[h, k, i, j] + R[h, i, j, k] + R[h, j, k, i]).is_zero()


@properties
@pytest.mark.parametrize("eps", EPS)
def test_levi_civita_is_metric(pipelines, eps):
    p = pipelines("sol3-lc", eps)
    assert metric_nonmetricity(p.connection, p.metric).is_zero()


# -- oracles -----------------------------------------------------------------------

@oracle
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_products_match_naive_loops(pipelines, run):
    p = pipelines(*run)
    g, ric = p.g, p.curvatures.Ric
    assert kulkarni(g, ric) == naive_kulkarni(g, ric)
    assert kulkarni(ric, ric) == naive_kulkarni(ric, ric)
    for e, f in itertools.product(NAMES, repeat=2):
        assert p.dots[(e, f)] == naive_dot(p.tensor(e), p.tensor(f), p.metric.inverse), (e, f)
    for z, f in itertools.product(("Ric", "g"), NAMES):
        assert p.tachibanas[(z, f)] == naive_tachibana(p.tensor(z), p.tensor(f)), (z, f)
    assert dot(p.curvatures.R, ric, p.metric) == naive_dot(p.curvatures.R, ric, p.metric.inverse)


# -- numerics and determinism --------------------------------------------------------

@numeric
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_numeric_crosscheck(pipelines, run):
    summary = numeric_crosscheck(pipelines(*run), samples=10, seed=0, tolerance=NUMERIC_TOLERANCE)
    assert summary.compared > 0
    assert summary.max_relative_error <= NUMERIC_TOLERANCE, summary.worst_component


@determinism
@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_reports_are_byte_identical(run):
    first = dumps(build_report(Pipeline(preset_config(*run))))
    second = dumps(build_report(Pipeline(preset_config(*run))))
    assert first == second
