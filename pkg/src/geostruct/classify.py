"""Geometric-structure detection on top of the curvature pipeline."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .expr import ZERO, Expr, FracExpr
from .linalg import frac_rank, identity, matmul, rational_roots, solve_linear
from .products import kulkarni
from .tensor import MetricData, Tensor, ValenceError

CURVATURE_NAMES = ("R", "C", "K", "W", "P")


# -- pseudosymmetry -----------------------------------------------------------

@dataclass
class ProportionalityResult:
    kind: str  # "zero" | "proportional" | "independent"
    coefficient: Optional[FracExpr] = None
    is_constant: bool = False

    @property
    def constant(self) -> Optional[Fraction]:
        if self.kind == "proportional" and self.is_constant:
            return self.coefficient.constant_value()
        return None


def detect_relation(edotf: Tensor, qzf: Tensor) -> ProportionalityResult:
    """Classify ``E.F`` against ``Q(Z,F)``: zero, globally proportional or independent."""
    if edotf.valence != qzf.valence or edotf.dim != qzf.dim:
        raise ValenceError("E.F and Q(Z,F) must have the same shape")
    if edotf.is_zero():
        return ProportionalityResult("zero")
    ref = next((ix for ix, v in qzf.items() if v), None)
    if ref is None:
        return ProportionalityResult("independent")
    d_ref, q_ref = edotf[ref], qzf[ref]
    for d, q in zip(edotf.data, qzf.data):
        if d * q_ref != d_ref * q:
            return ProportionalityResult("independent")
    coeff = FracExpr(d_ref, q_ref).simplify()
    return ProportionalityResult("proportional", coeff, coeff.is_constant())


@dataclass
class Relation:
    E: str
    F: str
    Z: str
    result: ProportionalityResult


def classify_all_pairs(dots: Dict[Tuple[str, str], Tensor],
                       tachibanas: Dict[Tuple[str, str], Tensor]) -> List[Relation]:
    """Relation table over E, F in {R, C, K, W, P} and Z in {g, Ric}.

    ``dots[(E, F)]`` holds E.F and ``tachibanas[(Z, F)]`` holds Q(Z, F).
    """
    out = []
    for f in CURVATURE_NAMES:
        for e in CURVATURE_NAMES:
            for z in ("Ric", "g"):
                out.append(Relation(e, f, z, detect_relation(dots[(e, f)], tachibanas[(z, f)])))
    return out


# -- Ricci operator -------------------------------------------------------------

def ricci_operator(ric: Tensor, m: MetricData) -> List[List[Expr]]:
    """``J[a][b] = g^{ac} Ric_{cb}``, so that ``Ric = g J``."""
    if ric.valence != (0, 2):
        raise ValenceError("Ricci tensor must be (0,2)")
    n = m.dim
    return [[m.inverse[a] * ric[a, b] for b in range(n)] for a in range(n)]


def ricci_powers(ric: Tensor, m: MetricData, top: int) -> List[Tensor]:
    """``[Ric^0 = g, Ric^1 = Ric, ..., Ric^top]`` with ``Ric^k = g J^k``."""
    n = m.dim
    J = ricci_operator(ric, m)
    powers = []
    Jk = identity(n)
    for _ in range(top + 1):
        cur = Jk
        powers.append(Tensor.from_function((0, 2), n, lambda a, b: m.diagonal[a] * cur[a][b]))
        Jk = matmul(Jk, J)
    return powers


@dataclass
class EinsteinLevelReport:
    level: Optional[int]
    coefficients: List[FracExpr] = field(default_factory=list)

    def polynomial(self) -> str:
        """Human-readable identity, highest power first."""
        if self.level is None:
            return "none"
        parts = [f"Ric^{self.level}"]
        for k, c in zip(range(self.level - 1, -1, -1), self.coefficients):
            if c.is_zero():
                continue
            name = "g" if k == 0 else ("Ric" if k == 1 else f"Ric^{k}")
            parts.append(f"({c})*{name}")
        return " + ".join(parts) + " = 0"


def einstein_level(ric: Tensor, m: MetricData, max_level: int = 4) -> EinsteinLevelReport:
    """Smallest l with ``Ric^l + c_1 Ric^(l-1) + ... + c_l g = 0``.

    Coefficients are listed in that order (so level 2 gives lambda_1, lambda_2).
    """
    powers = ricci_powers(ric, m, max_level)
    n = m.dim
    comps = list(itertools.product(range(n), repeat=2))
    for level in range(1, max_level + 1):
        lower = [powers[k] for k in range(level - 1, -1, -1)]
        coeffs = [[t[ix] for t in lower] for ix in comps]
        rhs = [-powers[level][ix] for ix in comps]
        sol = solve_linear(coeffs, rhs)
        if sol.consistent:
            return EinsteinLevelReport(level, sol.values)
    return EinsteinLevelReport(None)


# -- quasi-Einstein -------------------------------------------------------------

@dataclass
class QuasiEinsteinReport:
    candidates: List[Tuple[Fraction, int]]
    minimal_rank: int
    ricci_rank: int
    ricci_simple: bool
    alpha: Optional[FracExpr] = None
    eta: Optional[List[FracExpr]] = None
    nonconstant_roots: List[str] = field(default_factory=list)


def _split_by_term(coeffs: Sequence[FracExpr]) -> List[List[Fraction]]:
    """Rational polynomials, one per term key, whose common roots are the constant roots."""
    dens = [c.den for c in coeffs]
    cleared = []
    for j, c in enumerate(coeffs):
        v = c.num
        for k, d in enumerate(dens):
            if k != j:
                v = v * d
        cleared.append(v)
    keys = sorted({k for e in cleared for k, _ in e.items()}, key=repr)
    return [[e.terms.get(key, Fraction(0)) for e in cleared] for key in keys]


def constant_roots(monic_desc: Sequence[FracExpr]) -> List[Fraction]:
    """Constant roots of ``t^l + c_1 t^(l-1) + ... + c_l`` over the fraction field."""
    coeffs_asc = [FracExpr(c) if not isinstance(c, FracExpr) else c for c in reversed(monic_desc)]
    coeffs_asc.append(FracExpr(1))
    polys = [p for p in _split_by_term(coeffs_asc) if any(p)]
    if not polys:
        return []
    roots = set(rational_roots(polys[0]))
    for p in polys[1:]:
        roots = {r for r in roots if sum(c * r ** i for i, c in enumerate(p)) == 0}
    return sorted(roots)


def rank_one_factor(ric: Tensor) -> Optional[Tuple[FracExpr, List[FracExpr]]]:
    """Write ``Ric = alpha * eta (x) eta`` with eta normalised to 1 at its first nonzero slot."""
    n = ric.dim
    pivot = next((i for i in range(n) if ric[i, i]), None)
    if pivot is None:
        return None
    alpha = FracExpr(ric[pivot, pivot])
    eta = [FracExpr(ric[pivot, j], ric[pivot, pivot]).simplify() for j in range(n)]
    for j, k in itertools.product(range(n), repeat=2):
        if not FracExpr(ric[j, k]) == alpha * eta[j] * eta[k]:
            return None
    return alpha.simplify(), eta


def quasi_einstein(ric: Tensor, m: MetricData, extra_alphas: Sequence[Fraction] = (),
                   level: Optional[EinsteinLevelReport] = None) -> QuasiEinsteinReport:
    n = m.dim
    if level is None:
        level = einstein_level(ric, m)
    alphas = {Fraction(0)}
    nonconstant = []
    if level.level is not None:
        roots = constant_roots(level.coefficients)
        alphas.update(roots)
        if not all(c.is_constant() for c in level.coefficients):
            nonconstant.append(level.polynomial())
    factor = None
    ric_rank = frac_rank([[ric[i, j] for j in range(n)] for i in range(n)])
    if ric_rank == 1:
        factor = rank_one_factor(ric)
        if factor is not None and factor[0].is_constant():
            alphas.add(factor[0].constant_value())
    alphas.update(Fraction(a) for a in extra_alphas)
    candidates = []
    for a in sorted(alphas):
        mat = [[ric[i, j] - m.g(i, j) * a for j in range(n)] for i in range(n)]
        candidates.append((a, frac_rank(mat)))
    return QuasiEinsteinReport(
        candidates=candidates,
        minimal_rank=min(r for _, r in candidates),
        ricci_rank=ric_rank,
        ricci_simple=factor is not None,
        alpha=factor[0] if factor else None,
        eta=factor[1] if factor else None,
        nonconstant_roots=nonconstant,
    )


# -- Roter decomposition --------------------------------------------------------

REDUCED_BASIS = ("Ric^Ric", "g^Ric", "g^g")
GENERALIZED_BASIS = ("Ric2^Ric2", "Ric^Ric2", "g^Ric2", "Ric^Ric", "g^Ric", "g^g")
GENERALIZED_NAMES = ("mu11", "mu12", "mu13", "mu22", "mu23", "mu33")


@dataclass
class RoterReport:
    reduced: bool
    generalized: bool
    coefficients: Dict[str, FracExpr]


def _fit(R: Tensor, basis: Sequence[Tensor]):
    comps = list(R.indices())
    coeffs = [[b[ix] for b in basis] for ix in comps]
    rhs = [R[ix] for ix in comps]
    return solve_linear(coeffs, rhs)


def roter_decomposition(R: Tensor, g: Tensor, ric: Tensor, ric2: Tensor) -> RoterReport:
    reduced = [kulkarni(ric, ric), kulkarni(g, ric), kulkarni(g, g)]
    sol = _fit(R, reduced)
    if sol.consistent:
        return RoterReport(True, True, dict(zip(REDUCED_BASIS, sol.values)))
    general = [kulkarni(ric2, ric2), kulkarni(ric, ric2), kulkarni(g, ric2),
               kulkarni(ric, ric), kulkarni(g, ric), kulkarni(g, g)]
    sol = _fit(R, general)
    if sol.consistent:
        return RoterReport(False, True, dict(zip(GENERALIZED_NAMES, sol.values)))
    return RoterReport(False, False, {})


def roter_residual(R: Tensor, g: Tensor, ric: Tensor, ric2: Tensor, report: RoterReport) -> List[FracExpr]:
    """Componentwise ``R - decomposition`` for a reported decomposition."""
    if report.reduced:
        basis = [kulkarni(ric, ric), kulkarni(g, ric), kulkarni(g, g)]
        mus = [report.coefficients[k] for k in REDUCED_BASIS]
    else:
        basis = [kulkarni(ric2, ric2), kulkarni(ric, ric2), kulkarni(g, ric2),
                 kulkarni(ric, ric), kulkarni(g, ric), kulkarni(g, g)]
        mus = [report.coefficients[k] for k in GENERALIZED_NAMES]
    out = []
    for ix in R.indices():
        acc = FracExpr(R[ix])
        for mu, b in zip(mus, basis):
            if b[ix]:
                acc = acc - mu * b[ix]
        out.append(acc)
    return out


# -- Ricci derivative, compatibility, recurrence --------------------------------

def codazzi_and_cyclic(nabla_ric: Tensor) -> Tuple[bool, bool]:
    if nabla_ric.valence != (0, 3):
        raise ValenceError("expected a (0,3) tensor with the derivative index first")
    n = nabla_ric.dim
    idx = list(itertools.product(range(n), repeat=3))
    codazzi = all(nabla_ric[a, b, c] == nabla_ric[b, a, c] for a, b, c in idx)
    cyclic = all((nabla_ric[a, b, c] + nabla_ric[b, c, a] + nabla_ric[c, a, b]).is_zero()
                 for a, b, c in idx)
    return codazzi, cyclic


def compatibility(T: Tensor, Z: Tensor, m: MetricData) -> bool:
    """Cyclic sum over (y1, y2, y3) of ``T(Zop y1, u, y2, y3)`` vanishes for every u."""
    if T.valence != (0, 4) or Z.valence != (0, 2):
        raise ValenceError("need a (0,4) T and a (0,2) Z")
    n = m.dim
    # Zop d_b = zop[a][b] d_a with g(Zop X, Y) = Z(X, Y)
    zop = [[m.inverse[a] * Z[b, a] for b in range(n)] for a in range(n)]

    def term(y1, u, y2, y3):
        acc = ZERO
        for a in range(n):
            if zop[a][y1]:
                acc = acc + zop[a][y1] * T[a, u, y2, y3]
        return acc

    for y1, y2, y3, u in itertools.product(range(n), repeat=4):
        if (term(y1, u, y2, y3) + term(y2, u, y3, y1) + term(y3, u, y1, y2)):
            return False
    return True


@dataclass
class RecurrenceEntry:
    recurrent: bool
    sigma: Optional[List[FracExpr]]
    unique: bool = False


def recurrent_2forms(E: Tensor, nabla_e: Tensor) -> RecurrenceEntry:
    """Solve ``S (nabla_{y1} E)(y2,y3,u,y) = S sigma(y1) E(y2,y3,u,y)`` for sigma."""
    if E.valence != (0, 4) or nabla_e.valence != (0, 5):
        raise ValenceError("need E (0,4) and its covariant derivative (0,5)")
    n = E.dim
    coeffs, rhs = [], []
    for y1, y2, y3, u, y in itertools.product(range(n), repeat=5):
        lhs = nabla_e[y1, y2, y3, u, y] + nabla_e[y2, y3, y1, u, y] + nabla_e[y3, y1, y2, u, y]
        row = [ZERO] * n
        for a, b, c in ((y1, y2, y3), (y2, y3, y1), (y3, y1, y2)):
            row[a] = row[a] + E[b, c, u, y]
        coeffs.append(row)
        rhs.append(lhs)
    sol = solve_linear(coeffs, rhs)
    if not sol.consistent:
        return RecurrenceEntry(False, None)
    return RecurrenceEntry(True, sol.values, sol.unique)

