"""Dense tensors over :class:`Expr` and diagonal metric bookkeeping."""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .expr import ONE, ZERO, Expr, FracExpr

Index = Tuple[int, ...]


class ValenceError(ValueError):
    pass


class DegenerateMetricError(ValueError):
    pass


class Tensor:
    """Immutable dense array of Expr; the first written index varies slowest.

    ``valence = (p, q)`` records how many leading indices are contravariant.
    """

    __slots__ = ("valence", "dim", "_data")

    def __init__(self, valence: Tuple[int, int], dim: int, data: Sequence[Expr] | None = None):
        p, q = valence
        if p < 0 or q < 0 or dim < 1:
            raise ValueError("bad tensor shape")
        size = dim ** (p + q)
        if data is None:
            data = [ZERO] * size
        elif len(data) != size:
            raise ValueError(f"expected {size} components, got {len(data)}")
        self.valence = (p, q)
        self.dim = dim
        self._data = tuple(data)

    # construction ----------------------------------------------------------
    @classmethod
    def from_function(cls, valence, dim, fn) -> "Tensor":
        rank = sum(valence)
        return cls(valence, dim, [fn(*ix) for ix in itertools.product(range(dim), repeat=rank)])

    @classmethod
    def from_entries(cls, valence, dim, entries: Dict[Index, Expr]) -> "Tensor":
        data = [ZERO] * dim ** sum(valence)
        for ix, v in entries.items():
            data[_flat(ix, dim, sum(valence))] = v
        return cls(valence, dim, data)

    # access ----------------------------------------------------------------
    @property
    def rank(self) -> int:
        return sum(self.valence)

    def indices(self) -> Iterator[Index]:
        return itertools.product(range(self.dim), repeat=self.rank)

    def __getitem__(self, ix: Index) -> Expr:
        if isinstance(ix, int):
            ix = (ix,)
        return self._data[_flat(ix, self.dim, self.rank)]

    def get(self, ix: Index) -> Expr:
        return self[ix]

    def set(self, ix: Index, value: Expr) -> "Tensor":
        """Return a copy with one component replaced."""
        data = list(self._data)
        data[_flat(ix, self.dim, self.rank)] = Expr.coerce(value)
        return Tensor(self.valence, self.dim, data)

    def items(self) -> Iterator[Tuple[Index, Expr]]:
        return zip(self.indices(), self._data)

    def nonzero(self) -> List[Tuple[Index, Expr]]:
        return [(ix, v) for ix, v in self.items() if v]

    def is_zero(self) -> bool:
        return not any(self._data)

    @property
    def data(self) -> Tuple[Expr, ...]:
        return self._data

    # arithmetic ------------------------------------------------------------
    def _check_same(self, other: "Tensor"):
        if self.valence != other.valence or self.dim != other.dim:
            raise ValenceError(f"shape mismatch: {self.valence}/{self.dim} vs {other.valence}/{other.dim}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self.valence, self.dim, [x + y for x, y in zip(self._data, other._data)])

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self.valence, self.dim, [x - y for x, y in zip(self._data, other._data)])

    def __neg__(self) -> "Tensor":
        return Tensor(self.valence, self.dim, [-x for x in self._data])

    def scale(self, s) -> "Tensor":
        s = Expr.coerce(s)
        return Tensor(self.valence, self.dim, [x * s for x in self._data])

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.valence == other.valence and self.dim == other.dim and self._data == other._data

    __hash__ = None

    def __repr__(self):
        return f"Tensor(valence={self.valence}, dim={self.dim}, nonzero={len(self.nonzero())})"


def _flat(ix: Index, dim: int, rank: int) -> int:
    if len(ix) != rank:
        raise IndexError(f"expected {rank} indices, got {len(ix)}")
    f = 0
    for i in ix:
        if not 0 <= i < dim:
            raise IndexError(f"index {i} out of range for dimension {dim}")
        f = f * dim + i
    return f


def tensor_add(x: Tensor, y: Tensor) -> Tensor:
    return x + y


def tensor_scale(t: Tensor, s) -> Tensor:
    return t.scale(s)


def tensor_get(t: Tensor, ix: Index) -> Expr:
    return t[ix]


def tensor_set(t: Tensor, ix: Index, value) -> Tensor:
    return t.set(ix, value)


class MetricData:
    """Diagonal metric whose entries depend on the last coordinate only.

    Every diagonal entry must be a unit of the expression ring, a single term
    ``c*exp(k*x3)``, so the inverse stays inside the ring.
    """

    def __init__(self, diagonal: Sequence[Expr]):
        diagonal = [Expr.coerce(d) for d in diagonal]
        if len(diagonal) < 3:
            raise ValueError("dimension must be at least 3")
        for i, d in enumerate(diagonal):
            if d.is_zero():
                raise DegenerateMetricError(f"diagonal entry {i + 1} is zero")
        self.dim = len(diagonal)
        self.diagonal = tuple(diagonal)
        self.inverse_diagonal = tuple(FracExpr(1, d) for d in diagonal)
        inv = []
        for i, f in enumerate(self.inverse_diagonal):
            q = f.as_expr()
            if q is None:
                raise DegenerateMetricError(
                    f"diagonal entry {i + 1} ({diagonal[i]}) has no inverse of the form c*exp(k*x3)")
            inv.append(q)
        self.inverse = tuple(inv)

    def g(self, i: int, j: int) -> Expr:
        return self.diagonal[i] if i == j else ZERO

    def ginv(self, i: int, j: int) -> Expr:
        return self.inverse[i] if i == j else ZERO

    def tensor(self) -> Tensor:
        return Tensor.from_function((0, 2), self.dim, self.g)

    def inverse_tensor(self) -> Tensor:
        return Tensor.from_function((2, 0), self.dim, self.ginv)

    def __eq__(self, other):
        return isinstance(other, MetricData) and self.diagonal == other.diagonal

    __hash__ = None


def metric_inverse(m: MetricData) -> List[FracExpr]:
    return list(m.inverse_diagonal)


def _require(t: Tensor, valence):
    if t.valence != valence:
        raise ValenceError(f"expected valence {valence}, got {t.valence}")


def raise_last(t04: Tensor, m: MetricData) -> Tensor:
    """Curvature operator of a (0,4) tensor read as E(a,b,c,d) = g(E(a,b)c, d).

    Returns the (1,3) tensor ``endo[h, i, j, k] = [E(d_i, d_j) d_k]^h``.
    """
    _require(t04, (0, 4))
    inv = m.inverse
    return Tensor.from_function((1, 3), m.dim, lambda h, i, j, k: inv[h] * t04[i, j, k, h])


def lower_last(endo: Tensor, m: MetricData) -> Tensor:
    _require(endo, (1, 3))
    g = m.diagonal
    return Tensor.from_function((0, 4), m.dim, lambda i, j, k, h: g[h] * endo[h, i, j, k])


def raise_first(t04: Tensor, m: MetricData) -> Tensor:
    """Operator read with the value in the first slot: ``endo[h,i,j,k] = g^{hh} E_{hkij}``."""
    _require(t04, (0, 4))
    inv = m.inverse
    return Tensor.from_function((1, 3), m.dim, lambda h, i, j, k: inv[h] * t04[h, k, i, j])


def lower_first(endo: Tensor, m: MetricData) -> Tensor:
    _require(endo, (1, 3))
    g = m.diagonal
    return Tensor.from_function((0, 4), m.dim, lambda h, k, i, j: g[h] * endo[h, i, j, k])


def trace_ricci_from_endo(endo: Tensor) -> Tensor:
    """``Ric[k, j] = sum_a endo[a, a, k, j]``, the trace of X -> E(X, d_k) d_j."""
    _require(endo, (1, 3))
    n = endo.dim
    return Tensor.from_function((0, 2), n, lambda k, j: sum((endo[a, a, k, j] for a in range(n)), ZERO))


def contract_with_inverse(t02: Tensor, m: MetricData) -> Expr:
    """Full trace ``sum g^{kj} T_{kj}`` (diagonal metric)."""
    _require(t02, (0, 2))
    return sum((m.inverse[k] * t02[k, k] for k in range(m.dim)), ZERO)


def mixed_operator(t02: Tensor, m: MetricData) -> List[List[Expr]]:
    """Matrix ``J[a][b] = g^{ac} T_{cb}`` of the endomorphism metrically dual to T."""
    _require(t02, (0, 2))
    n = m.dim
    return [[m.inverse[a] * t02[a, b] for b in range(n)] for a in range(n)]


def identity_check(m: MetricData) -> bool:
    """g * g^{-1} is the identity as fraction-field elements."""
    return all(m.diagonal[i] * m.inverse_diagonal[i] == ONE for i in range(m.dim))
