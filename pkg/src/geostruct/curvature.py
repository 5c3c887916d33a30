"""Connections, curvature tensors and covariant derivatives.

Conventions: ``nabla_{d_i} d_j = Gamma[a][i][j] d_a`` (``i`` is the direction),
and every field depends on the last coordinate only, so ``d_l`` vanishes for
all other ``l``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expr import ZERO, Expr
from .products import kulkarni
from .tensor import (
    MetricData,
    Tensor,
    ValenceError,
    contract_with_inverse,
    raise_last,
    trace_ricci_from_endo,
)

HALF = Fraction(1, 2)


def partial(e: Expr, direction: int, dim: int) -> Expr:
    return e.diff() if direction == dim - 1 else ZERO


@dataclass(frozen=True)
class ConnectionCoeffs:
    gamma: tuple  # gamma[a][i][j]

    @property
    def dim(self) -> int:
        return len(self.gamma)

    def __call__(self, a: int, i: int, j: int) -> Expr:
        return self.gamma[a][i][j]

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.gamma[a][i][j] == self.gamma[a][j][i]
                   for a in range(n) for i in range(n) for j in range(n))

    def as_tensor(self) -> Tensor:
        """Components as a (1,2) array ``[a, i, j]`` (not a tensor under coordinate change)."""
        return Tensor.from_function((1, 2), self.dim, self)


def _freeze(rows) -> tuple:
    return tuple(tuple(tuple(r) for r in plane) for plane in rows)


def levi_civita(m: MetricData) -> ConnectionCoeffs:
    n = m.dim
    g, inv = m.diagonal, m.inverse
    dg = [g[i].diff() for i in range(n)]

    def d(k: int, i: int, j: int) -> Expr:
        # partial_k of g_{ij}; diagonal and depending on the last coordinate
        return dg[i] if (i == j and k == n - 1) else ZERO

    gamma = [[[inv[a] * (d(i, a, j) + d(j, a, i) - d(a, i, j)) * HALF
               for j in range(n)] for i in range(n)] for a in range(n)]
    return ConnectionCoeffs(_freeze(gamma))


def ssnm(m: MetricData, p_vector: Sequence[Expr]) -> ConnectionCoeffs:
    """Semi-symmetric non-metric connection nabla_X Y + g(P, Y) X."""
    n = m.dim
    if len(p_vector) != n:
        raise ValueError(f"P has {len(p_vector)} components, expected {n}")
    p_vector = [Expr.coerce(p) for p in p_vector]
    base = levi_civita(m)
    omega = [m.diagonal[j] * p_vector[j] for j in range(n)]
    gamma = [[[base(a, i, j) + (omega[j] if a == i else ZERO)
               for j in range(n)] for i in range(n)] for a in range(n)]
    return ConnectionCoeffs(_freeze(gamma))


def riemann04(c: ConnectionCoeffs, m: MetricData) -> Tensor:
    """``R[h,k,i,j] = g_{ha} (d_i G^a_{kj} - d_j G^a_{ki} + G^b_{kj} G^a_{bi} - G^b_{ki} G^a_{bj})``."""
    n = m.dim
    if c.dim != n:
        raise ValueError("connection and metric dimensions differ")
    G = c.gamma
    g = m.diagonal
    data = {}
    for h, k, i, j in itertools.product(range(n), repeat=4):
        if i == j:
            continue
        a = h  # diagonal metric: only a = h survives
        v = partial(G[a][k][j], i, n) - partial(G[a][k][i], j, n)
        for b in range(n):
            v = v + G[b][k][j] * G[a][b][i] - G[b][k][i] * G[a][b][j]
        if v:
            data[(h, k, i, j)] = g[h] * v
    return Tensor.from_entries((0, 4), n, data)


def ricci_and_scalar(c: ConnectionCoeffs, m: MetricData):
    R = riemann04(c, m)
    ric = trace_ricci_from_endo(raise_last(R, m))
    return ric, contract_with_inverse(ric, m)


def derived_curvatures(R: Tensor, ric: Tensor, kappa: Expr, m: MetricData):
    """Weyl conformal C, conharmonic K, concircular W and projective P."""
    n = m.dim
    if n < 3:
        raise ValueError("dimension must be at least 3")
    g = m.tensor()
    g_ric = kulkarni(g, ric)
    g_g = kulkarni(g, g)
    K = R - g_ric.scale(Fraction(1, n - 2))
    C = K + g_g.scale(kappa * Fraction(1, 2 * (n - 1) * (n - 2)))
    W = R - g_g.scale(kappa * Fraction(1, 2 * n * (n - 1)))
    P = projective(R, ric, m)
    return C, K, W, P


def projective(R: Tensor, ric: Tensor, m: MetricData) -> Tensor:
    """``P[h,k,i,j] = R[h,k,i,j] - (g_{hj} Ric_{ki} - g_{kj} Ric_{hi}) / (n-1)``."""
    n = m.dim
    g = m.g
    f = Fraction(1, n - 1)
    return Tensor.from_function(
        (0, 4), n,
        lambda h, k, i, j: R[h, k, i, j] - (g(h, j) * ric[k, i] - g(k, j) * ric[h, i]) * f)


def covariant_derivative(c: ConnectionCoeffs, t: Tensor) -> Tensor:
    """``(nabla T)[l, i1..iq] = d_l T[i1..iq] - sum_m G^b_{l i_m} T[..b..]``; derivative index first."""
    if t.valence[0] != 0:
        raise ValenceError("covariant derivative is implemented for covariant tensors only")
    n, q = t.dim, t.rank
    G = c.gamma
    out = [ZERO] * n ** (q + 1)
    pos = 0
    for l in range(n):
        for ix in itertools.product(range(n), repeat=q):
            v = partial(t[ix], l, n)
            for slot in range(q):
                im = ix[slot]
                for b in range(n):
                    coeff = G[b][l][im]
                    if coeff:
                        other = t[ix[:slot] + (b,) + ix[slot + 1:]]
                        if other:
                            v = v - coeff * other
            out[pos] = v
            pos += 1
    return Tensor((0, q + 1), n, out)


@dataclass(frozen=True)
class CurvatureSet:
    connection: ConnectionCoeffs
    R: Tensor
    Ric: Tensor
    kappa: Expr
    C: Tensor
    K: Tensor
    W: Tensor
    P: Tensor

    def four_tensors(self) -> dict:
        return {"R": self.R, "C": self.C, "K": self.K, "W": self.W, "P": self.P}


def curvature_set(c: ConnectionCoeffs, m: MetricData) -> CurvatureSet:
    R = riemann04(c, m)
    ric = trace_ricci_from_endo(raise_last(R, m))
    kappa = contract_with_inverse(ric, m)
    C, K, W, P = derived_curvatures(R, ric, kappa, m)
    return CurvatureSet(c, R, ric, kappa, C, K, W, P)


def metric_nonmetricity(c: ConnectionCoeffs, m: MetricData) -> Tensor:
    return covariant_derivative(c, m.tensor())
