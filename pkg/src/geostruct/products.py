"""Kulkarni-Nomizu product, derivation product E.F and the Tachibana tensor.

``dot`` and ``tachibana`` scatter contributions from the nonzero components
of their inputs instead of looping over every output index; the results are
identical to the dense sums, which the test suite checks against naive loops.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Tuple

from .expr import ZERO, Expr
from .tensor import MetricData, Tensor, ValenceError, raise_last

SUPPORTED_RANKS = (2, 4)


def kulkarni(A: Tensor, E: Tensor) -> Tensor:
    """``(A^E)[y1,y2,u1,u2] = A[y1,u2]E[y2,u1] - A[y1,u1]E[y2,u2] + A[y2,u1]E[y1,u2] - A[y2,u2]E[y1,u1]``."""
    if A.valence != (0, 2) or E.valence != (0, 2):
        raise ValenceError("Kulkarni-Nomizu product needs two (0,2) tensors")
    if A.dim != E.dim:
        raise ValenceError("dimension mismatch")
    return Tensor.from_function(
        (0, 4), A.dim,
        lambda y1, y2, u1, u2: (A[y1, u2] * E[y2, u1] - A[y1, u1] * E[y2, u2]
                                + A[y2, u1] * E[y1, u2] - A[y2, u2] * E[y1, u1]))


def _check_target(F: Tensor):
    if F.valence[0] != 0 or F.rank not in SUPPORTED_RANKS:
        raise ValenceError(f"unsupported tensor valence {F.valence}; expected (0,2) or (0,4)")


def _assemble(dim: int, rank: int, acc: Dict[Tuple[int, ...], List[Expr]]) -> Tensor:
    entries = {}
    for ix, parts in acc.items():
        total = ZERO
        for p in parts:
            total = total + p
        if total:
            entries[ix] = total
    return Tensor.from_entries((0, rank), dim, entries)


def dot(E4: Tensor, F: Tensor, m: MetricData) -> Tensor:
    """``(E.F)[y.., u1, u2] = -sum_m F[.., E(u1,u2) y_m, ..]`` with the curvature operator of E4."""
    if E4.valence != (0, 4):
        raise ValenceError("E must be a (0,4) tensor")
    _check_target(F)
    n, k = F.dim, F.rank
    endo = raise_last(E4, m)
    # by_image[h] lists (u1, u2, y, value) with [E(d_u1, d_u2) d_y]^h = value
    by_image: Dict[int, list] = defaultdict(list)
    for (h, u1, u2, y), v in endo.nonzero():
        by_image[h].append((u1, u2, y, v))
    acc: Dict[Tuple[int, ...], List[Expr]] = defaultdict(list)
    for f_ix, fv in F.nonzero():
        for slot in range(k):
            for u1, u2, y, ev in by_image.get(f_ix[slot], ()):
                out = f_ix[:slot] + (y,) + f_ix[slot + 1:] + (u1, u2)
                acc[out].append(-(ev * fv))
    return _assemble(n, k + 2, acc)


def tachibana(Z: Tensor, F: Tensor, m: MetricData | None = None) -> Tensor:
    """``Q(Z,F)[y.., u1, u2] = sum_m Z[u1,y_m] F[..u2..] - Z[u2,y_m] F[..u1..]``.

    Z need not be symmetric.  The metric argument is accepted for a uniform
    signature and is not used.
    """
    if Z.valence != (0, 2):
        raise ValenceError("Z must be a (0,2) tensor")
    _check_target(F)
    n, k = F.dim, F.rank
    z_nonzero = Z.nonzero()
    acc: Dict[Tuple[int, ...], List[Expr]] = defaultdict(list)
    for f_ix, fv in F.nonzero():
        for slot in range(k):
            w = f_ix[slot]
            for (u, y), zv in z_nonzero:
                base = f_ix[:slot] + (y,) + f_ix[slot + 1:]
                prod = zv * fv
                # w plays u2 with u1 = u, then u1 with u2 = u
                acc[base + (u, w)].append(prod)
                acc[base + (w, u)].append(-prod)
    return _assemble(n, k + 2, acc)

