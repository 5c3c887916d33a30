import itertools
from fractions import Fraction

import pytest
import sympy as sp

from geostruct.curvature import (covariant_derivative, curvature_set, derived_curvatures, levi_civita,
                                 metric_nonmetricity, ricci_and_scalar, riemann04, ssnm)
from geostruct.expr import ONE, ZERO, Expr
from geostruct.parser import parse_expr
from geostruct.products import kulkarni
from geostruct.tensor import MetricData, Tensor, ValenceError

from conftest import PRESET_RUNS, run_id
from oracles import FUNCS, X3, sympy_equal

E2, Em2, E4 = Expr.exp(2), Expr.exp(-2), Expr.exp(4)
a, b, b1 = Expr.func("a"), Expr.func("b"), Expr.func("b", 1)
BETA = 2 * b + b1


def sol3(eps):
    return MetricData([E2, Em2, Expr.const(eps)])


def G(c, upper, i, j):
    """1-based accessor for connection coefficients."""
    return c(upper - 1, i - 1, j - 1)


def at(t, *ix):
    return t[tuple(i - 1 for i in ix)]


# -- connections -----------------------------------------------------------------

@pytest.mark.parametrize("eps", [1, -1])
def test_levi_civita_sol3(eps):
    c = levi_civita(sol3(eps))
    assert G(c, 1, 1, 3) == G(c, 1, 3, 1) == 1
    assert G(c, 2, 2, 3) == G(c, 2, 3, 2) == -1
    assert G(c, 3, 1, 1) == -eps * E2
    assert G(c, 3, 2, 2) == eps * Em2
    assert c.is_symmetric()
    nonzero = [(x, i, j) for x, i, j in itertools.product(range(3), repeat=3) if c(x, i, j)]
    assert len(nonzero) == 6


def test_levi_civita_flat():
    c = levi_civita(MetricData([1, 1, 1]))
    assert all(not c(x, i, j) for x, i, j in itertools.product(range(3), repeat=3))


def test_levi_civita_toy_metric():
    # hand computation for diag(e^{2x3}, e^{2x3}, 1)
    c = levi_civita(MetricData([E2, E2, ONE]))
    expected = {(1, 1, 3): ONE, (1, 3, 1): ONE, (2, 2, 3): ONE, (2, 3, 2): ONE,
                (3, 1, 1): -E2, (3, 2, 2): -E2}
    for x, i, j in itertools.product(range(1, 4), repeat=3):
        assert G(c, x, i, j) == expected.get((x, i, j), ZERO)


@pytest.mark.parametrize("eps", [1, -1])
def test_ssnm_case_a(eps):
    c = ssnm(sol3(eps), [ZERO, ZERO, a])
    assert G(c, 1, 1, 3) == 1 + eps * a
    assert G(c, 3, 3, 3) == eps * a
    assert G(c, 1, 3, 1) == 1
    assert not c.is_symmetric()


@pytest.mark.parametrize("eps", [1, -1])
def test_ssnm_case_b(eps):
    c = ssnm(sol3(eps), [b, ZERO, ZERO])
    assert G(c, 1, 1, 1) == G(c, 2, 2, 1) == G(c, 3, 3, 1) == E2 * b


@pytest.mark.parametrize("eps", [1, -1])
def test_ssnm_with_zero_field_is_levi_civita(eps):
    m = sol3(eps)
    assert ssnm(m, [ZERO] * 3) == levi_civita(m)


def test_ssnm_wrong_length():
    with pytest.raises(ValueError):
        ssnm(sol3(1), [ZERO, ZERO])


# -- curvature -----------------------------------------------------------------

@pytest.mark.parametrize("eps", [1, -1])
def test_riemann_case_a(pipelines, eps):
    R = pipelines("sol3-a", eps).curvatures.R
    assert at(R, 1, 2, 1, 2) == eps
    assert at(R, 1, 3, 1, 3) == -E2
    assert at(R, 2, 3, 2, 3) == -Em2


@pytest.mark.parametrize("eps", [1, -1])
def test_riemann_case_b(pipelines, eps):
    R = pipelines("sol3-b", eps).curvatures.R
    assert at(R, 1, 1, 1, 3) == -E4 * BETA


def test_flat_riemann():
    m = MetricData([1, 1, 1])
    assert riemann04(levi_civita(m), m).is_zero()
    ric, kappa = ricci_and_scalar(levi_civita(m), m)
    assert ric.is_zero() and kappa == ZERO


@pytest.mark.parametrize("eps", [1, -1])
def test_ricci_and_scalar(eps):
    m = sol3(eps)
    ric, kappa = ricci_and_scalar(ssnm(m, [ZERO, ZERO, a]), m)
    assert at(ric, 3, 3) == 2 and len(ric.nonzero()) == 1 and kappa == 2 * eps
    ric, kappa = ricci_and_scalar(ssnm(m, [b, ZERO, ZERO]), m)
    assert at(ric, 1, 3) == E2 * BETA and at(ric, 3, 1) == -E2 * BETA
    assert at(ric, 3, 3) == 2 and kappa == 2 * eps


@pytest.mark.parametrize("eps", [1, -1])
def test_derived_case_a(pipelines, eps):
    cs = pipelines("sol3-a", eps).curvatures
    assert at(cs.K, 1, 3, 1, 3) == E2
    assert at(cs.W, 1, 2, 1, 2) == Fraction(4, 3) * eps
    assert at(cs.P, 1, 2, 1, 2) == eps and at(cs.P, 1, 2, 2, 1) == -eps


@pytest.mark.parametrize("eps", [1, -1])
def test_derived_case_b(pipelines, eps):
    cs = pipelines("sol3-b", eps).curvatures
    assert at(cs.C, 1, 1, 1, 3) == -E4 * BETA
    assert at(cs.P, 1, 3, 1, 1) == E4 * BETA * Fraction(1, 2)


def test_derived_of_zero():
    m = sol3(1)
    zero4, zero2 = Tensor((0, 4), 3), Tensor((0, 2), 3)
    for t in derived_curvatures(zero4, zero2, ZERO, m):
        assert t.is_zero()


@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_derived_reconstruction(pipelines, run):
    p = pipelines(*run)
    cs, g, n = p.curvatures, p.g, 3
    assert cs.K == cs.R - kulkarni(g, cs.Ric).scale(Fraction(1, n - 2))
    assert cs.C == cs.K + kulkarni(g, g).scale(cs.kappa * Fraction(1, 2 * (n - 1) * (n - 2)))
    assert cs.W == cs.R - kulkarni(g, g).scale(cs.kappa * Fraction(1, 2 * n * (n - 1)))


@pytest.mark.parametrize("run", PRESET_RUNS, ids=run_id)
def test_riemann_last_pair_antisymmetric(pipelines, run):
    R = pipelines(*run).curvatures.R
    for (h, k, i, j), v in R.items():
        assert v == -R[h, k, j, i]


@pytest.mark.parametrize("eps", [1, -1])
def test_case_b_loses_first_pair_antisymmetry(pipelines, eps):
    R = pipelines("sol3-b", eps).curvatures.R
    assert at(R, 1, 1, 1, 3) != ZERO


# -- covariant derivative -----------------------------------------------------------

@pytest.mark.parametrize("eps", [1, -1])
def test_covariant_derivative_case_a(pipelines, eps):
    p = pipelines("sol3-a", eps)
    assert at(p.nablas["R"], 2, 1, 2, 1, 3) == 2 * eps - a
    assert at(p.nablas["Ric"], 1, 1, 3) == 2 * eps * E2


@pytest.mark.parametrize("eps", [1, -1])
def test_levi_civita_is_metric(eps):
    m = sol3(eps)
    assert metric_nonmetricity(levi_civita(m), m).is_zero()
    assert not metric_nonmetricity(ssnm(m, [ZERO, ZERO, a]), m).is_zero()


def test_covariant_derivative_rejects_contravariant():
    with pytest.raises(ValenceError):
        covariant_derivative(levi_civita(sol3(1)), Tensor((1, 3), 3))


# -- independent symbolic oracle -------------------------------------------------------

def sympy_curvature(eps, p_field):
    """Connection, Riemann and Ricci from first principles with sympy."""
    xs = sp.symbols("x1 x2") + (X3,)
    g = sp.diag(sp.exp(2 * X3), sp.exp(-2 * X3), eps)
    ginv = g.inv()
    n = 3
    lc = [[[sum(ginv[x, l] * (sp.diff(g[l, j], xs[i]) + sp.diff(g[l, i], xs[j]) - sp.diff(g[i, j], xs[l]))
                for l in range(n)) / 2 for j in range(n)] for i in range(n)] for x in range(n)]
    omega = [sum(g[j, l] * p_field[l] for l in range(n)) for j in range(n)]
    gam = [[[lc[x][i][j] + (omega[j] if x == i else 0) for j in range(n)] for i in range(n)] for x in range(n)]
    R = {}
    for h, k, i, j in itertools.product(range(n), repeat=4):
        R[h, k, i, j] = sum(g[h, x] * (sp.diff(gam[x][k][j], xs[i]) - sp.diff(gam[x][k][i], xs[j])
                                       + sum(gam[y][k][j] * gam[x][y][i] - gam[y][k][i] * gam[x][y][j]
                                             for y in range(n)))
                            for x in range(n))
    ric = {(k, j): sum(ginv[x, y] * R[x, k, j, y] for x in range(n) for y in range(n))
           for k, j in itertools.product(range(n), repeat=2)}
    return gam, R, ric


@pytest.mark.parametrize("preset", ["sol3-a", "sol3-b"])
@pytest.mark.parametrize("eps", [1, -1])
def test_curvature_matches_sympy(pipelines, preset, eps):
    field = [0, 0, FUNCS["a"](X3)] if preset == "sol3-a" else [FUNCS["b"](X3), 0, 0]
    gam, R, ric = sympy_curvature(eps, field)
    p = pipelines(preset, eps)
    c = p.connection
    for x, i, j in itertools.product(range(3), repeat=3):
        assert sympy_equal(c(x, i, j), gam[x][i][j]), (x, i, j)
    for ix in itertools.product(range(3), repeat=4):
        assert sympy_equal(p.curvatures.R[ix], R[ix]), ix
    for ix in itertools.product(range(3), repeat=2):
        assert sympy_equal(p.curvatures.Ric[ix], ric[ix]), ix


def test_toy_metric_riemann_is_first_pair_antisymmetric():
    m = MetricData([parse_expr("exp(2*x3)"), parse_expr("exp(2*x3)"), ONE])
    cs = curvature_set(levi_civita(m), m)
    for (h, k, i, j), v in cs.R.items():
        assert v == -cs.R[k, h, i, j]
