"""Exact linear algebra over the fraction field of the expression ring.

Rows are cleared of denominators first, so elimination runs in the ring
itself with fraction-free row operations; fractions only reappear during
back substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

from .expr import ONE, ZERO, Expr, FracExpr, exact_divide


def _as_frac(x) -> FracExpr:
    return x if isinstance(x, FracExpr) else FracExpr(x)


def clear_row(row: Sequence) -> List[Expr]:
    """Multiply a row of fractions by the product of its denominators."""
    fr = [_as_frac(x) for x in row]
    with_den = [i for i, f in enumerate(fr) if f.num and f.den != ONE]
    out = []
    for j, f in enumerate(fr):
        v = f.num
        if v:
            for k in with_den:
                if k != j:
                    v = v * fr[k].den
        out.append(v)
    return out


def _eliminate(rows: List[List[Expr]], ncols: int):
    """Fraction-free (Bareiss) row echelon form on the first ``ncols`` columns.

    Every update is divided exactly by the previous pivot, so entries stay
    minors of the input instead of growing exponentially.  Returns
    (rows, pivots) where ``pivots`` lists (row, column) pairs.
    """
    rows = [list(r) for r in rows]
    pivots = []
    prev = ONE
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            rows[i] = [_divide(piv * x - a * y if a else piv * x, prev)
                       for x, y in zip(rows[i], rows[r])]
        prev = piv
        pivots.append((r, c))
        r += 1
    return rows, pivots


def _divide(num: Expr, den: Expr) -> Expr:
    if den == ONE or not num:
        return num
    q = exact_divide(num, den)
    if q is None:
        raise ArithmeticError("inexact division during elimination")
    return q


def frac_rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    rows = [clear_row(r) for r in matrix]
    _, pivots = _eliminate(rows, len(rows[0]))
    return len(pivots)


@dataclass
class LinearSolution:
    consistent: bool
    values: Optional[List[FracExpr]]
    rank: int
    free: List[int]

    @property
    def unique(self) -> bool:
        return self.consistent and not self.free


def solve_linear(coeffs: Sequence[Sequence], rhs: Sequence) -> LinearSolution:
    """Solve ``coeffs @ x = rhs`` exactly; free variables are set to zero.

    A reported solution is re-checked against every equation.
    """
    if len(coeffs) != len(rhs):
        raise ValueError("row count mismatch")
    if not coeffs:
        return LinearSolution(True, [], 0, [])
    ncols = len(coeffs[0])
    aug = [clear_row(list(r) + [b]) for r, b in zip(coeffs, rhs)]
    rows, pivots = _eliminate(aug, ncols)
    rank = len(pivots)
    for row in rows[rank:]:
        if row[ncols]:
            return LinearSolution(False, None, rank, [])
    pivot_cols = {c for _, c in pivots}
    free = [c for c in range(ncols) if c not in pivot_cols]
    values: List[FracExpr] = [FracExpr(0)] * ncols
    for r, c in reversed(pivots):
        acc = FracExpr(rows[r][ncols])
        for j in range(c + 1, ncols):
            if rows[r][j] and values[j]:
                acc = acc - values[j] * rows[r][j]
        values[c] = (acc / rows[r][c]).simplify()
    if not verify_solution(coeffs, rhs, values):
        raise ArithmeticError("solution failed re-verification")
    return LinearSolution(True, values, rank, free)


def verify_solution(coeffs, rhs, values) -> bool:
    for row, b in zip(coeffs, rhs):
        acc = FracExpr(0)
        for a, x in zip(row, values):
            if a and x:
                acc = acc + _as_frac(a) * x
        if not acc == _as_frac(b):
            return False
    return True


def matmul(A: Sequence[Sequence[Expr]], B: Sequence[Sequence[Expr]]) -> List[List[Expr]]:
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), ZERO) for j in range(m)] for i in range(n)]


def identity(n: int) -> List[List[Expr]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    """Rational roots of ``sum coeffs[i] * t**i`` (ascending powers), sorted."""
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    roots = set()
    shift = 0
    while c[shift] == 0:
        shift += 1
    if shift:
        roots.add(Fraction(0))
    c = c[shift:]
    if len(c) == 1:
        return sorted(roots)
    lcm = 1
    for x in c:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in c]
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(a * cand ** i for i, a in enumerate(ints)) == 0:
                    roots.add(cand)
    return sorted(roots)


def _divisors(n: int) -> List[int]:
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))
