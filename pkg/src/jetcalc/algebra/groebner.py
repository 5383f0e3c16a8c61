"""Ideals, Buchberger's algorithm, elimination and Krull dimension."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import ArityError, ResourceLimitError
from .orders import MonomialOrder, block, grevlex, order_from_tag
from .polynomial import Polynomial, PolyRing


@dataclass(frozen=True)
class Limits:
    """Hard caps on a Groebner computation; exceeding one raises
    :class:`ResourceLimitError` instead of truncating."""

    max_basis: int = 1500
    max_degree: int = 120
    max_pairs: int = 200_000


DEFAULT_LIMITS = Limits()


class Ideal:
    """Finitely generated ideal; zero generators are dropped."""

    __slots__ = ("ring", "gens")

    def __init__(self, ring: PolyRing, gens: Iterable = ()):
        cleaned = []
        for g in gens:
            g = ring.parse(g) if isinstance(g, str) else ring.coerce(g)
            if g and g not in cleaned:
                cleaned.append(g)
        self.ring = ring
        self.gens = tuple(cleaned)

    @property
    def nvars(self):
        return self.ring.nvars

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise ArityError("ideals over different rings")
        return Ideal(self.ring, self.gens + other.gens)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gens == other.gens

    def __hash__(self):
        return hash((self.ring, self.gens))

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.gens) + ")"

    def groebner(self, order="grevlex", limits: Limits | None = None) -> "GroebnerBasis":
        return groebner_basis(self, order, limits)

    def contains(self, p, limits: Limits | None = None) -> bool:
        return self.groebner(limits=limits).contains(p)

    def dimension(self, limits: Limits | None = None) -> int:
        return ideal_dimension(self, limits)


class GroebnerBasis:
    """A reduced Groebner basis: monic, sorted by decreasing leading monomial."""

    __slots__ = ("ring", "order", "basis", "_reducers")

    def __init__(self, ring: PolyRing, order: MonomialOrder, basis: Sequence[Polynomial]):
        self.ring = ring
        self.order = order
        self.basis = tuple(basis)
        self._reducers = [_as_reducer(dict(g.items()), order.key) for g in self.basis]

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.order == other.order
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"GroebnerBasis[{self.order.name}](" + ", ".join(map(str, self.basis)) + ")"

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [r[0] for r in self._reducers]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def reduce(self, p: Polynomial) -> Polynomial:
        p = self.ring.coerce(p)
        rem = _full_reduce(dict(p.items()), self._reducers, self.order.key)
        return Polynomial._raw(self.ring, rem)

    def contains(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero()

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.basis)


# -- core routines on raw term dicts ------------------------------------------


def _neg(key):
    return tuple(-k for k in key)


def _as_reducer(terms, key):
    lm = max(terms, key=key)
    lc = terms[lm]
    tail = [(e, c / lc) for e, c in terms.items() if e != lm]
    return lm, tail


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _full_reduce(terms: dict, reducers, key) -> dict:
    """Remainder of ``terms`` on division by monic ``reducers``."""
    p = dict(terms)
    heap = [(_neg(key(e)), e) for e in p]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, exp = heapq.heappop(heap)
        c = p.pop(exp, None)
        if c is None:
            continue
        for lm, tail in reducers:
            if _divides(lm, exp):
                q = tuple(x - y for x, y in zip(exp, lm))
                for e2, c2 in tail:
                    e = tuple(x + y for x, y in zip(e2, q))
                    if e in p:
                        s = p[e] - c * c2
                        if s:
                            p[e] = s
                        else:
                            del p[e]
                    else:
                        p[e] = -c * c2
                        heapq.heappush(heap, (_neg(key(e)), e))
                break
        else:
            rem[exp] = c
    return rem


def _monic(terms, key):
    lm = max(terms, key=key)
    lc = terms[lm]
    if lc == 1:
        return terms
    inv = 1 / lc
    return {e: c * inv for e, c in terms.items()}


def _spoly(f, g, lmf, lmg):
    lcm = tuple(max(a, b) for a, b in zip(lmf, lmg))
    qf = tuple(x - y for x, y in zip(lcm, lmf))
    qg = tuple(x - y for x, y in zip(lcm, lmg))
    out = {}
    for e, c in f.items():
        out[tuple(x + y for x, y in zip(e, qf))] = c
    for e, c in g.items():
        k = tuple(x + y for x, y in zip(e, qg))
        s = out.get(k, 0) - c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def buchberger(polys: Sequence[dict], key, limits: Limits = DEFAULT_LIMITS) -> list[dict]:
    """Reduced Groebner basis of raw term dicts (sugar selection, Buchberger's
    product and chain criteria, full reduction of every S-polynomial)."""
    G: list[dict] = []
    lms: list[tuple] = []
    sugar: list[int] = []
    heap: list = []
    pending: set[tuple[int, int]] = set()

    def degree(terms):
        return max(sum(e) for e in terms)

    def add(h, s):
        if len(G) >= limits.max_basis:
            raise ResourceLimitError(f"Groebner basis exceeded {limits.max_basis} elements")
        if degree(h) > limits.max_degree:
            raise ResourceLimitError(f"Groebner basis element exceeded degree {limits.max_degree}")
        lm = max(h, key=key)
        idx = len(G)
        G.append(h)
        lms.append(lm)
        sugar.append(s)
        for i in range(idx):
            lcm = tuple(max(a, b) for a, b in zip(lms[i], lm))
            ps = max(sugar[i] - sum(lms[i]), s - sum(lm)) + sum(lcm)
            heapq.heappush(heap, (ps, key(lcm), idx, i))
            pending.add((i, idx))

    def reducers():
        return [_as_reducer(g, key) for g in G]

    for f in polys:
        if not f:
            continue
        if all(not any(e) for e in f):
            return [{tuple(0 for _ in next(iter(f))): Fraction(1)}]
        r = _full_reduce(f, reducers(), key) if G else f
        if r:
            add(_monic(r, key), degree(f))

    processed = 0
    red = reducers()
    while heap:
        ps, _, j, i = heapq.heappop(heap)
        pending.discard((i, j))
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitError(f"Groebner computation exceeded {limits.max_pairs} pairs")
        lmi, lmj = lms[i], lms[j]
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        lcm = tuple(max(a, b) for a, b in zip(lmi, lmj))
        if any(
            k != i
            and k != j
            and _divides(lms[k], lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(G))
        ):
            continue
        s = _spoly(G[i], G[j], lmi, lmj)
        if not s:
            continue
        r = _full_reduce(s, red, key)
        if r:
            if all(not any(e) for e in r):
                return [{tuple(0 for _ in lmi): Fraction(1)}]
            add(_monic(r, key), ps)
            red.append(_as_reducer(G[-1], key))

    # minimalize, then interreduce
    order_idx = sorted(range(len(G)), key=lambda k: key(lms[k]))
    keep = []
    for k in order_idx:
        if not any(_divides(lms[m], lms[k]) for m in keep):
            keep.append(k)
    minimal = [G[k] for k in keep]
    reduced = []
    for idx, g in enumerate(minimal):
        others = [_as_reducer(h, key) for m, h in enumerate(minimal) if m != idx]
        lm = max(g, key=key)
        tail = {e: c for e, c in g.items() if e != lm}
        r = _full_reduce(tail, others, key)
        r[lm] = g[lm]
        reduced.append(_monic(r, key))
    reduced.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return reduced


# -- public operations ---------------------------------------------------------


def groebner_basis(ideal: Ideal, order="grevlex", limits: Limits | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order``.

    The result depends only on the ideal and the order, not on how the
    generators were listed.
    """
    order = order_from_tag(order)
    limits = limits or DEFAULT_LIMITS
    raw = buchberger([dict(g.items()) for g in ideal.gens], order.key, limits)
    basis = [Polynomial._raw(ideal.ring, t) for t in raw]
    return GroebnerBasis(ideal.ring, order, basis)


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if p.ring != gb.ring:
        raise ArityError(f"polynomial over {p.ring} reduced by a basis over {gb.ring}")
    return gb.reduce(p)


def eliminate(ideal: Ideal, drop: Iterable, limits: Limits | None = None) -> Ideal:
    """Elimination ideal ``ideal ∩ Q[remaining variables]``.

    ``drop`` holds variable names or indices.  The result lives in the
    subring of the remaining variables (original order kept), so its
    dimension is that of the closure of the coordinate projection.
    """
    ring = ideal.ring
    names = {ring.names[d] if isinstance(d, int) else d for d in drop}
    for n in names:
        ring.index(n)
    if not names:
        return ideal
    keep = [n for n in ring.names if n not in names]
    dropped = [n for n in ring.names if n in names]
    work = PolyRing(dropped + keep)
    gens = [g.to_ring(work) for g in ideal.gens]
    gb = groebner_basis(Ideal(work, gens), block(len(dropped)), limits)
    sub = PolyRing(keep)
    nd = len(dropped)
    out = [g.to_ring(sub) for g in gb.basis if not (g.support() & set(range(nd)))]
    return Ideal(sub, out)


def _max_independent(n: int, supports: list[frozenset]) -> int:
    best = 0

    def dfs(i, chosen):
        nonlocal best
        if len(chosen) + (n - i) <= best:
            return
        if i == n:
            best = len(chosen)
            return
        grown = chosen | {i}
        if not any(s <= grown for s in supports):
            dfs(i + 1, grown)
        dfs(i + 1, chosen)

    dfs(0, frozenset())
    return best


def ideal_dimension(ideal: Ideal, limits: Limits | None = None) -> int:
    """Krull dimension of V(ideal); -1 when the ideal is the unit ideal.

    Uses the largest set of variables containing the support of no
    grevlex leading monomial.
    """
    if ideal.is_zero():
        return ideal.nvars
    gb = groebner_basis(ideal, grevlex, limits)
    if gb.is_unit():
        return -1
    supports = []
    for lm in gb.leading_monomials():
        supports.append(frozenset(i for i, e in enumerate(lm) if e))
    return _max_independent(ideal.nvars, supports)


def initial_form(p: Polynomial) -> Polynomial:
    """Lowest-degree homogeneous component of ``p``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no initial form")
    return p.homogeneous_component(p.order())
