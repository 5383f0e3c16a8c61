"""Sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero :class:`Fraction`
coefficients, tied to a :class:`PolyRing` that fixes the variable names and
their order.  Values are immutable; every operation returns a new object.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import ArityError


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


class PolyRing:
    """The ring Q[x_1, ..., x_n] with named variables."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not name.isidentifier():
                raise ValueError(f"invalid variable name {name!r}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r} in ring {self}") from None

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(("PolyRing", self.names))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def __str__(self):
        return "Q[" + ", ".join(self.names) + "]"

    @property
    def zero(self) -> "Polynomial":
        return Polynomial._raw(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = as_fraction(c)
        return Polynomial._raw(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Sequence[int], c=1) -> "Polynomial":
        exp = tuple(exp)
        if len(exp) != self.nvars:
            raise ArityError(f"exponent {exp} has wrong arity for {self}")
        c = as_fraction(c)
        return Polynomial._raw(self, {exp: c} if c else {})

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial._raw(self, {tuple(exp): Fraction(1)})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def parse(self, text: str) -> "Polynomial":
        from .parsing import parse_polynomial

        return parse_polynomial(text, self)

    def subring(self, names: Iterable[str]) -> "PolyRing":
        keep = set(names)
        return PolyRing(n for n in self.names if n in keep)

    def extend(self, names: Iterable[str]) -> "PolyRing":
        return PolyRing(self.names + tuple(names))

    def coerce(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise ArityError(f"polynomial over {value.ring} used in {self}")
            return value
        return self.constant(value)

    def fresh_name(self, stem: str) -> str:
        name, i = stem, 0
        while name in self._index:
            i += 1
            name = f"{stem}{i}"
        return name


class Polynomial:
    """An immutable sparse polynomial in ``ring``."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Sequence[int], object] | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != ring.nvars or any(e < 0 for e in exp):
                raise ArityError(f"bad exponent {exp} for {ring}")
            c = as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- basic queries -------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for the zero polynomial."""
        return min((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i) -> int:
        if isinstance(i, str):
            i = self.ring.index(i)
        return max((e[i] for e in self._terms), default=-1)

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        used = set()
        for exp in self._terms:
            used.update(i for i, e in enumerate(exp) if e)
        return used

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) == d})

    def leading_term(self, order) -> tuple[tuple[int, ...], Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=order.key)
        return exp, self._terms[exp]

    def leading_monomial(self, order) -> tuple[int, ...]:
        return self.leading_term(order)[0]

    def monic(self, order) -> "Polynomial":
        if not self._terms:
            return self
        _, lc = self.leading_term(order)
        return self * (1 / lc)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ArityError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, Polynomial):
            c = as_fraction(other)
            if not c:
                return self.ring.zero
            return Polynomial._raw(self.ring, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) < len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(exp, 0) + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            raise TypeError("polynomial division is not supported; use normal_form")
        return self * (1 / as_fraction(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_term(self, exp: Sequence[int], c) -> "Polynomial":
        c = as_fraction(c)
        if not c:
            return self.ring.zero
        return Polynomial._raw(
            self.ring,
            {tuple(x + y for x, y in zip(e, exp)): v * c for e, v in self._terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution -----------------------------------------

    def diff(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.ring.index(i)
        out = {}
        for exp, c in self._terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                out[tuple(e)] = c * exp[i]
        return Polynomial._raw(self.ring, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ArityError(f"point of length {len(point)} for {self.ring}")
        point = [as_fraction(v) for v in point]
        total = Fraction(0)
        for exp, c in self._terms.items():
            term = c
            for v, e in zip(point, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def compose(self, subs: Sequence["Polynomial"], ring: PolyRing | None = None) -> "Polynomial":
        """Substitute ``subs[i]`` for the i-th variable."""
        if len(subs) != self.nvars:
            raise ArityError(f"{len(subs)} substitutions for {self.nvars} variables")
        if ring is None:
            if not subs:
                raise ValueError("target ring needed for a nullary substitution")
            ring = subs[0].ring
        subs = [ring.coerce(s) for s in subs]
        powers = [{0: ring.one, 1: s} for s in subs]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e // 2) * power(i, e - e // 2)
            return cache[e]

        total = ring.zero
        for exp, c in self._terms.items():
            term = ring.constant(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def partial_evaluate(self, values: Mapping[int, object]) -> "Polynomial":
        """Fix some variables to rational values, keeping the ring."""
        values = {i: as_fraction(v) for i, v in values.items()}
        out = {}
        for exp, c in self._terms.items():
            e = list(exp)
            for i, v in values.items():
                if e[i]:
                    c = c * v ** e[i]
                    e[i] = 0
            if c:
                key = tuple(e)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    del out[key]
        return Polynomial._raw(self.ring, out)

    def translate(self, point: Sequence) -> "Polynomial":
        """Return ``p(x + point)``."""
        gens = self.ring.gens()
        return self.compose([g + as_fraction(v) for g, v in zip(gens, point)], self.ring)

    def to_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-embed into a ring that contains every variable in use, matched by name."""
        mapping = []
        for i, name in enumerate(self.ring.names):
            mapping.append(ring.index(name) if name in ring else None)
        out = {}
        for exp, c in self._terms.items():
            e = [0] * ring.nvars
            for i, k in enumerate(exp):
                if k:
                    if mapping[i] is None:
                        raise ArityError(f"variable {self.ring.names[i]} missing from {ring}")
                    e[mapping[i]] = k
            out[tuple(e)] = c
        return Polynomial._raw(ring, out)

    # -- printing ------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for k, (exp, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.names, exp)
                if e
            )
            mag = abs(c)
            if not mono:
                body = format_fraction(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_fraction(mag)}*{mono}"
            if k == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({self}, ring={self.ring!r})"
