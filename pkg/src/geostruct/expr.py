"""Exact exponential-polynomial expressions in the single coordinate x3.

An :class:`Expr` is a finite sum of terms ``c * exp(k*x3) * m`` where ``c`` is
a :class:`fractions.Fraction`, ``k`` an integer weight and ``m`` a monomial in
abstract function atoms (``a``, ``a'``, ``b``, ``b''`` ...), each standing for a
derivative of an unknown function of x3.  Terms are stored in a canonical map,
so structural equality is mathematical equality and the zero test is exact.

:class:`FracExpr` is the field of fractions over that ring.  Fractions are not
reduced by a gcd; equality and zero tests use cross multiplication.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Tuple, Union


class FuncAtom(NamedTuple):
    """The ``order``-th derivative of the function symbol ``base``."""

    base: str
    order: int = 0

    def derivative(self) -> "FuncAtom":
        return FuncAtom(self.base, self.order + 1)

    def __str__(self) -> str:
        return self.base + "'" * self.order


# A monomial is a sorted tuple of (atom, power) pairs with power >= 1.
Monomial = Tuple[Tuple[FuncAtom, int], ...]
TermKey = Tuple[int, Monomial]
Number = Union[int, Fraction]

ONE_MONO: Monomial = ()


@lru_cache(maxsize=65536)
def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers: Dict[FuncAtom, int] = dict(m1)
    for atom, p in m2:
        powers[atom] = powers.get(atom, 0) + p
    return tuple(sorted(powers.items()))


def mono_divides(d: Monomial, m: Monomial) -> bool:
    have = dict(m)
    return all(have.get(atom, 0) >= p for atom, p in d)


def mono_div(m: Monomial, d: Monomial) -> Monomial:
    powers = dict(m)
    for atom, p in d:
        powers[atom] -= p
    return tuple(sorted((a, p) for a, p in powers.items() if p))


def mono_degree(m: Monomial) -> int:
    return sum(p for _, p in m)


class Expr:
    """Immutable canonical sum of ``coeff * exp(weight*x3) * monomial`` terms."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[TermKey, Number] | None = None):
        clean: Dict[TermKey, Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c:
                    clean[key] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[TermKey, Fraction]) -> "Expr":
        # caller guarantees no zero coefficients
        e = cls.__new__(cls)
        e._terms = terms
        e._hash = None
        return e

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "Expr":
        return cls({(0, ONE_MONO): c})

    @classmethod
    def exp(cls, weight: int, coeff: Number = 1) -> "Expr":
        return cls({(int(weight), ONE_MONO): coeff})

    @classmethod
    def func(cls, base: str, order: int = 0) -> "Expr":
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        return cls({(0, ((FuncAtom(base, order), 1),)): 1})

    @classmethod
    def coerce(cls, value: "Expr | Number") -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Expr")

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Dict[TermKey, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[TermKey, Fraction]]:
        return iter(self._terms.items())

    def sorted_terms(self):
        """Terms ordered by exponential weight, then monomial."""
        return sorted(self._terms.items(), key=_term_sort_key)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(k == (0, ONE_MONO) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get((0, ONE_MONO), Fraction(0))

    def atoms(self) -> set:
        out = set()
        for (_, mono) in self._terms:
            out.update(a for a, _ in mono)
        return out

    def weights(self) -> set:
        return {w for (w, _) in self._terms}

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                other = Expr.const(other)
            else:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for key, c in other._terms.items():
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Expr._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Expr._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                other = Expr.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ZERO
                return Expr._raw({k: c * other for k, c in self._terms.items()})
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[TermKey, Fraction] = {}
        for (w1, m1), c1 in self._terms.items():
            for (w2, m2), c2 in other._terms.items():
                key = (w1 + w2, mono_mul(m1, m2))
                s = out.get(key, 0) + c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
        return Expr._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Expr.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus ---------------------------------------------------------
    def diff(self) -> "Expr":
        return differentiate(self)

    def evaluate(self, x3: float, funcs: Mapping[Tuple[str, int], float] | None = None) -> float:
        return evaluate(self, x3, funcs or {})

    def subs_zero(self, bases: Iterable[str]) -> "Expr":
        """Set every derivative of the named function symbols to zero."""
        bases = set(bases)
        return Expr._raw({k: c for k, c in self._terms.items()
                          if not any(a.base in bases for a, _ in k[1])})

    # -- printing ---------------------------------------------------------
    def __str__(self) -> str:
        return to_dsl(self)

    def __repr__(self) -> str:
        return f"Expr({to_dsl(self)!r})"


ZERO = Expr()
ONE = Expr.const(1)


def _term_sort_key(item):
    (w, mono), _ = item
    return (w, mono_degree(mono), mono)


def add(x: Expr, y: Expr) -> Expr:
    return x + y


def mul(x: Expr, y: Expr) -> Expr:
    return x * y


def neg(x: Expr) -> Expr:
    return -x


def power(x: Expr, n: int) -> Expr:
    return x ** n


def differentiate(x: Expr) -> Expr:
    """d/dx3 with d(exp(k x3)) = k exp(k x3) and f^(m) -> f^(m+1)."""
    out: Dict[TermKey, Fraction] = {}

    def put(key, c):
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    for (w, mono), c in x._terms.items():
        if w:
            put((w, mono), c * w)
        for i, (atom, p) in enumerate(mono):
            rest = mono[:i] + (((atom, p - 1),) if p > 1 else ()) + mono[i + 1:]
            new_mono = mono_mul(tuple(sorted(rest)), ((atom.derivative(), 1),))
            put((w, new_mono), c * p)
    return Expr._raw(out)


class MissingValueError(KeyError):
    pass


def evaluate(x: Expr, x3: float, funcs: Mapping[Tuple[str, int], float]) -> float:
    total = 0.0
    for (w, mono), c in x._terms.items():
        v = float(c) * math.exp(w * x3)
        for atom, p in mono:
            key = (atom.base, atom.order)
            if key not in funcs:
                raise MissingValueError(f"no value supplied for {atom}")
            v *= funcs[key] ** p
        total += v
    return total


# -- DSL printing -------------------------------------------------------------

def _factor_strings(w: int, mono: Monomial):
    parts = []
    if w:
        parts.append(f"exp({w}*x3)")
    for atom, p in mono:
        parts.append(str(atom) if p == 1 else f"{atom}^{p}")
    return parts


def to_dsl(x: Expr, compact: bool = False) -> str:
    """Canonical DSL text; terms sorted by exponential weight then monomial."""
    if not x._terms:
        return "0"
    pieces = []
    for (w, mono), c in x.sorted_terms():
        factors = _factor_strings(w, mono)
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))
    sep = "{}" if compact else " {} "
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += sep.format(sign) + body
    return out


# -- fraction field -----------------------------------------------------------

class ZeroDivision(ZeroDivisionError):
    pass


class FracExpr:
    """Quotient ``num / den`` of two expressions; ``den`` is never zero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Expr | Number, den: Expr | Number = 1):
        num = Expr.coerce(num)
        den = Expr.coerce(den)
        if den.is_zero():
            raise ZeroDivision("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, value) -> "FracExpr":
        if isinstance(value, FracExpr):
            return value
        return cls(value)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __add__(self, other):
        other = FracExpr.coerce(other)
        if self.den == other.den:
            return FracExpr(self.num + other.num, self.den)
        return FracExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FracExpr(-self.num, self.den)

    def __sub__(self, other):
        return self + (-FracExpr.coerce(other))

    def __rsub__(self, other):
        return FracExpr.coerce(other) - self

    def __mul__(self, other):
        other = FracExpr.coerce(other)
        return FracExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = FracExpr.coerce(other)
        if other.is_zero():
            raise ZeroDivision("division by a zero fraction")
        return FracExpr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return FracExpr.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (Expr, int, Fraction)):
            other = FracExpr(other)
        if not isinstance(other, FracExpr):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def is_constant(self) -> bool:
        """True when the quotient is a rational number."""
        if self.num.is_zero():
            return True
        (key, c), = [next(iter(self.den.items()))]
        q = self.num.terms.get(key)
        if q is None:
            return False
        return self.num == self.den * (q / c)

    def constant_value(self) -> Fraction:
        if self.num.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("fraction is not constant")
        key, c = next(iter(self.den.items()))
        return self.num.terms[key] / c

    def as_expr(self) -> Expr | None:
        """The exact quotient as an Expr, or None when it is not in the ring."""
        return exact_divide(self.num, self.den)

    def simplify(self) -> "FracExpr":
        q = self.as_expr()
        if q is not None:
            return FracExpr(q)
        # normalise the leading denominator coefficient to 1
        _, c = _TermOrder(self.den).lead(self.den)
        return FracExpr(self.num * (1 / c), self.den * (1 / c))

    def evaluate(self, x3: float, funcs) -> float:
        return evaluate(self.num, x3, funcs) / evaluate(self.den, x3, funcs)

    def __str__(self) -> str:
        return frac_to_dsl(self)

    def __repr__(self) -> str:
        return f"FracExpr({frac_to_dsl(self)!r})"


def frac_to_dsl(f: FracExpr) -> str:
    s = f.simplify()
    if s.den == ONE:
        return to_dsl(s.num)
    num = to_dsl(s.num)
    den = to_dsl(s.den)
    if len(s.num) > 1:
        num = f"({num})"
    return f"{num}/({den})"


def frac_add(x: FracExpr, y: FracExpr) -> FracExpr:
    return x + y


def frac_mul(x: FracExpr, y: FracExpr) -> FracExpr:
    return x * y


def frac_div(x: FracExpr, y: FracExpr) -> FracExpr:
    return x / y


def frac_is_zero(x: FracExpr) -> bool:
    return x.is_zero()


def frac_equals(x: FracExpr, y: FracExpr) -> bool:
    return x == y


class _TermOrder:
    """Graded lex order on atom exponents, ties broken by exponential weight.

    The order is compatible with multiplication, which makes leading-term
    division well defined.
    """

    def __init__(self, *exprs: Expr):
        atoms = set()
        for e in exprs:
            atoms |= e.atoms()
        self.atoms = sorted(atoms)

    def key(self, key: TermKey):
        w, mono = key
        powers = dict(mono)
        vec = tuple(powers.get(a, 0) for a in self.atoms)
        return (sum(vec), vec, w)

    def lead(self, x: Expr):
        return max(x.items(), key=lambda kv: self.key(kv[0]))


def exact_divide(num: Expr, den: Expr) -> Expr | None:
    """Return q with num == q*den, or None if no such Expr exists."""
    if den.is_zero():
        raise ZeroDivision("division by zero")
    if num.is_zero():
        return ZERO
    if len(den) == 1:
        ((dw, dm), dc), = den.items()
        out = {}
        for (w, m), c in num.items():
            if not mono_divides(dm, m):
                return None
            out[(w - dw, mono_div(m, dm))] = c / dc
        return Expr._raw(out)
    # leading-term division; weights of quotient terms are bounded
    lo = min(num.weights()) - min(den.weights())
    hi = max(num.weights()) - max(den.weights())
    order = _TermOrder(num, den)
    (dw, dm), dc = order.lead(den)
    rem = num
    quot: Dict[TermKey, Fraction] = {}
    # the order is compatible with multiplication and quotient weights are
    # bounded, so the leading terms strictly decrease through a finite set
    while True:
        if rem.is_zero():
            return Expr._raw(quot)
        (rw, rm), rc = order.lead(rem)
        if not mono_divides(dm, rm):
            return None
        qw = rw - dw
        if qw < lo or qw > hi:
            return None
        qkey = (qw, mono_div(rm, dm))
        t = Expr._raw({qkey: rc / dc})
        quot[qkey] = quot.get(qkey, 0) + rc / dc
        rem = rem - t * den
