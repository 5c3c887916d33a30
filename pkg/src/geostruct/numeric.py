"""Floating-point oracle: an independent numpy pipeline built on finite differences.

Only the metric and the vector field are shared with the symbolic side, and
only as numeric functions of x3.  Christoffel symbols come from central
differences of the metric, the curvature from central differences of the
connection, and every product from plain ``einsum`` contractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .expr import Expr

STEP = 1e-4
NAMES = ("R", "C", "K", "W", "P")


def function_table(test_functions: Mapping[str, Sequence[float]], x3: float, max_order: int = 4):
    """Values of every derivative of the polynomial test functions at x3."""
    out = {}
    for base, coeffs in test_functions.items():
        p = Polynomial(coeffs)
        for k in range(max_order + 1):
            out[(base, k)] = float(p.deriv(k)(x3)) if k else float(p(x3))
    return out


def _numeric_field(exprs: Sequence[Expr], test_functions) -> Callable[[float], np.ndarray]:
    def field(x3: float) -> np.ndarray:
        table = function_table(test_functions, x3)
        return np.array([e.evaluate(x3, table) for e in exprs], dtype=float)
    return field


def _central(f: Callable[[float], np.ndarray], x: float, h: float = STEP) -> np.ndarray:
    return (f(x + h) - f(x - h)) / (2 * h)


def _connection(metric: Callable, pvec: Callable, n: int) -> Callable[[float], np.ndarray]:
    """G[a, i, j] with nabla_{d_i} d_j = G[a, i, j] d_a."""

    def gamma(x3: float) -> np.ndarray:
        gdiag = metric(x3)
        g = np.diag(gdiag)
        ginv = np.diag(1.0 / gdiag)
        dg = np.zeros((n, n, n))  # dg[k, i, j] = d_k g_ij
        dg[n - 1] = np.diag(_central(metric, x3))
        # lower[l, i, j] = (d_i g_lj + d_j g_li - d_l g_ij) / 2
        lower = 0.5 * (np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg)
        G = np.einsum("al,lij->aij", ginv, lower)
        omega = g @ pvec(x3)
        G = G + np.einsum("ai,j->aij", np.eye(n), omega)
        return G

    return gamma


def _kn(A: np.ndarray, E: np.ndarray) -> np.ndarray:
    return (np.einsum("ad,bc->abcd", A, E) - np.einsum("ac,bd->abcd", A, E)
            + np.einsum("bc,ad->abcd", A, E) - np.einsum("bd,ac->abcd", A, E))


def _dot(E4: np.ndarray, F: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    # operator[u1, u2, y, h] = [E(d_u1, d_u2) d_y]^h
    op = np.einsum("hm,uvym->uvyh", ginv, E4)
    k = F.ndim
    letters = "abcd"[:k]
    out = np.zeros(F.shape + (F.shape[0], F.shape[0]))
    for slot in range(k):
        src = letters[:slot] + "h" + letters[slot + 1:]
        subs = f"uv{letters[slot]}h,{src}->{letters}uv"
        out -= np.einsum(subs, op, F)
    return out


def _tachibana(Z: np.ndarray, F: np.ndarray) -> np.ndarray:
    k = F.ndim
    letters = "abcd"[:k]
    out = np.zeros(F.shape + (F.shape[0], F.shape[0]))
    for slot in range(k):
        y = letters[slot]
        with_v = letters[:slot] + "v" + letters[slot + 1:]
        with_u = letters[:slot] + "u" + letters[slot + 1:]
        out += np.einsum(f"u{y},{with_v}->{letters}uv", Z, F)
        out -= np.einsum(f"v{y},{with_u}->{letters}uv", Z, F)
    return out


def numeric_tensors(metric_exprs: Sequence[Expr], p_exprs: Sequence[Expr],
                    test_functions, x3: float) -> Dict[str, np.ndarray]:
    n = len(metric_exprs)
    metric = _numeric_field(metric_exprs, test_functions)
    pvec = _numeric_field(p_exprs, test_functions)
    gamma = _connection(metric, pvec, n)
    G = gamma(x3)
    dG = np.zeros((n,) + G.shape)  # dG[l, a, i, j] = d_l G[a, i, j]
    dG[n - 1] = _central(gamma, x3)
    gdiag = metric(x3)
    g = np.diag(gdiag)
    ginv = np.diag(1.0 / gdiag)
    # R[h,k,i,j] = g_ha (d_i G^a_kj - d_j G^a_ki + G^b_kj G^a_bi - G^b_ki G^a_bj)
    inner = (np.einsum("iakj->akij", dG) - np.einsum("jaki->akij", dG)
             + np.einsum("bkj,abi->akij", G, G) - np.einsum("bki,abj->akij", G, G))
    R = np.einsum("ha,akij->hkij", g, inner)
    ric = np.einsum("ab,akjb->kj", ginv, R)
    kappa = float(np.einsum("kj,kj->", ginv, ric))
    gg, gric = _kn(g, g), _kn(g, ric)
    K = R - gric / (n - 2)
    C = K + kappa / (2 * (n - 1) * (n - 2)) * gg
    W = R - kappa / (2 * n * (n - 1)) * gg
    P = R - (np.einsum("hj,ki->hkij", g, ric) - np.einsum("kj,hi->hkij", g, ric)) / (n - 1)
    out = {"Gamma": G, "R": R, "Ric": ric, "kappa": np.array(kappa), "C": C, "K": K, "W": W, "P": P}
    four = {"R": R, "C": C, "K": K, "W": W, "P": P}
    for e in NAMES:
        for f in NAMES:
            out[f"{e}.{f}"] = _dot(four[e], four[f], ginv)
    for zname, Z in (("Ric", ric), ("g", g)):
        for f in NAMES:
            out[f"Q({zname},{f})"] = _tachibana(Z, four[f])
    return out


@dataclass
class NumericSummary:
    points: List[float]
    max_relative_error: float
    worst_component: str
    compared: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance


def relative_error(symbolic: float, numeric: float) -> float:
    return abs(symbolic - numeric) / max(abs(symbolic), 1.0)


def numeric_crosscheck(pipeline, samples: int = 10, seed: int = 0,
                       tolerance: float = 1e-5) -> NumericSummary:
    """Compare symbolic components against the finite-difference pipeline."""
    cfg = pipeline.config
    tf = cfg.test_functions
    rng = np.random.default_rng(seed)
    points = [float(x) for x in rng.uniform(-1.0, 1.0, samples)]
    symbolic = pipeline.named_components()
    symbolic_kappa = pipeline.curvatures.kappa
    worst, where, count = 0.0, "", 0
    for x3 in points:
        table = function_table(tf, x3)
        num = numeric_tensors(pipeline.metric.diagonal, pipeline.p_vector, tf, x3)
        for name, arr in num.items():
            if name == "kappa":
                pairs: List[Tuple[tuple, Expr]] = [((), symbolic_kappa)]
            else:
                pairs = list(symbolic[name].items())
            for ix, expr in pairs:
                s = expr.evaluate(x3, table) if expr else 0.0
                err = relative_error(s, float(arr[ix]))
                count += 1
                if err > worst:
                    worst = err
                    where = f"{name}{''.join(str(i + 1) for i in ix)} at x3={x3:.6f}"
    return NumericSummary(points, worst, where, count, tolerance)
