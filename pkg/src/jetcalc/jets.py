"""Truncated jets, prolongations of polynomial maps and generic image rank."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Ideal, PolyMap, PolyRing, Polynomial, as_fraction, format_fraction
from .algebra import linalg
from .errors import ArityError, DomainError, SamplingError

DEFAULT_BOUND = 1000
DEFAULT_TRIALS = 5


# -- series arithmetic over an arbitrary coefficient ring -----------------------


def series_mul(a: Sequence, b: Sequence, k: int, zero):
    """Product of two coefficient lists, truncated to degree ``k``."""
    out = [zero] * (k + 1)
    for i, ai in enumerate(a[: k + 1]):
        if not ai:
            continue
        for j in range(min(len(b), k + 1 - i)):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def compose_series(p: Polynomial, series: Sequence[Sequence], k: int, one, zero):
    """Coefficient list of ``p(series_1, ..., series_n)`` modulo ``t^(k+1)``."""
    powers = [{0: [one] + [zero] * k, 1: list(s[: k + 1]) + [zero] * (k + 1 - len(s[: k + 1]))} for s in series]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            half = e // 2
            cache[e] = series_mul(power(i, half), power(i, e - half), k, zero)
        return cache[e]

    total = [zero] * (k + 1)
    for exp, c in p.items():
        term = [one * c] + [zero] * k
        for i, e in enumerate(exp):
            if e:
                term = series_mul(term, power(i, e), k, zero)
        total = [x + y for x, y in zip(total, term)]
    return total


def series_inverse(a: Sequence[Fraction], k: int) -> list[Fraction]:
    """Inverse of a unit power series modulo ``t^(k+1)``."""
    if not a or not a[0]:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv = [Fraction(0)] * (k + 1)
    inv[0] = 1 / Fraction(a[0])
    for d in range(1, k + 1):
        s = sum((Fraction(a[i]) * inv[d - i] for i in range(1, min(d, len(a) - 1) + 1)), Fraction(0))
        inv[d] = -s * inv[0]
    return inv


def valuation(coeffs: Sequence) -> int | None:
    return next((d for d, c in enumerate(coeffs) if c), None)


# -- value types -----------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Polynomial in ``t`` of degree at most ``order``, stored at full length."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series has at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((Fraction(0),) * (order + 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d):
        return self.coeffs[d]

    def valuation(self) -> int | None:
        return valuation(self.coeffs)

    def truncate(self, l: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: l + 1])

    def __add__(self, other):
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            k = min(self.order, other.order)
            return TruncatedSeries(tuple(series_mul(self.coeffs, other.coeffs, k, Fraction(0))))
        c = as_fraction(other)
        return TruncatedSeries(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __str__(self):
        return _series_str(self.coeffs)


def _series_str(coeffs):
    parts = []
    for d, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
        mag = abs(c)
        if not mono:
            body = format_fraction(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_fraction(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class Jet:
    """An order-``k`` jet: ``n`` truncated series sharing one order."""

    coords: tuple[TruncatedSeries, ...]

    def __post_init__(self):
        coords = tuple(c if isinstance(c, TruncatedSeries) else TruncatedSeries(tuple(c)) for c in self.coords)
        if not coords:
            raise ValueError("a jet has at least one coordinate")
        if len({c.order for c in coords}) != 1:
            raise ValueError("all jet coordinates must share one order")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence]) -> "Jet":
        return cls(tuple(TruncatedSeries(tuple(as_fraction(c) for c in row)) for row in lists))

    @classmethod
    def zero(cls, n: int, k: int, base: Sequence | None = None) -> "Jet":
        base = base or [0] * n
        return cls.from_lists([[b] + [0] * k for b in base])

    @property
    def arity(self) -> int:
        return len(self.coords)

    @property
    def order(self) -> int:
        return self.coords[0].order

    @property
    def base_point(self) -> tuple[Fraction, ...]:
        return tuple(c[0] for c in self.coords)

    def coefficient(self, i: int, d: int) -> Fraction:
        return self.coords[i][d]

    def degree_vector(self, d: int) -> tuple[Fraction, ...]:
        return tuple(c[d] for c in self.coords)

    def is_zero(self) -> bool:
        return all(not any(c.coeffs) for c in self.coords)

    def as_lists(self) -> list[list[Fraction]]:
        return [list(c.coeffs) for c in self.coords]

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(v) for v in c.coeffs] for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "Jet":
        return cls.from_lists([[Fraction(v) for v in row] for row in data])

    def shifted(self, base: Sequence) -> "Jet":
        """Same jet with constant terms replaced by ``base``."""
        return Jet.from_lists([[b] + list(c.coeffs[1:]) for b, c in zip(base, self.coords)])

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


# -- operations on jets -------------------------------------------------------------


def truncate(j: Jet, l: int) -> Jet:
    """Projection from order-``k`` jets to order-``l`` jets."""
    if not 0 <= l <= j.order:
        raise DomainError(f"truncation order {l} outside 0..{j.order}", "jets")
    return Jet(tuple(c.truncate(l) for c in j.coords))


def prolong(phi: PolyMap, j: Jet) -> Jet:
    """Image of ``j`` under the prolongation of ``phi``: ``phi ∘ j mod t^(k+1)``."""
    if phi.source_dim != j.arity:
        raise ArityError(f"map on {phi.source_dim} variables applied to a jet of arity {j.arity}")
    k = j.order
    series = [c.coeffs for c in j.coords]
    one, zero = Fraction(1), Fraction(0)
    return Jet(tuple(TruncatedSeries(tuple(compose_series(p, series, k, one, zero))) for p in phi.components))


def multiplicity(j: Jet) -> int | None:
    """Least ``d`` with a nonzero degree-``d`` coefficient; ``None`` for the zero jet."""
    if any(j.base_point):
        raise DomainError("multiplicity is defined for jets based at the origin", "jets")
    orders = [v for v in (c.valuation() for c in j.coords) if v is not None]
    return min(orders) if orders else None


def scale_jet(j: Jet, lam) -> Jet:
    """The C*-action ``j(t) -> j(lam * t)``."""
    lam = as_fraction(lam)
    if not lam:
        raise DomainError("the scaling factor must be nonzero", "jets")
    return Jet.from_lists([[c * lam**d for d, c in enumerate(s.coeffs)] for s in j.coords])


# -- coefficient maps --------------------------------------------------------------


def _coefficient_names(names: Sequence[str], k: int) -> list[str]:
    taken = set(names)
    out = []
    for name in names:
        for d in range(1, k + 1):
            cand = f"{name}_{d}"
            while cand in taken:
                cand += "_"
            taken.add(cand)
            out.append(cand)
    return out


@dataclass(frozen=True)
class CoefficientMap:
    """The prolongation of ``phi`` at a fixed base point, written as a
    polynomial map on the non-constant jet coefficients.

    Variables are ordered coordinate-major: ``x_1..x_k, y_1..y_k, ...``; the
    components follow the same layout on the target side.
    """

    phi: PolyMap
    order: int
    base: tuple[Fraction, ...]
    ring: PolyRing
    components: tuple[Polynomial, ...]
    target_names: tuple[str, ...]

    @property
    def source_dim(self) -> int:
        return self.ring.nvars

    @property
    def target_dim(self) -> int:
        return len(self.components)

    @property
    def image_base(self) -> tuple[Fraction, ...]:
        return self.phi(self.base)

    def var_index(self, i: int, d: int) -> int:
        """Index of the degree-``d`` coefficient of source coordinate ``i``."""
        return i * self.order + (d - 1)

    def var_degree(self, index: int) -> int:
        return index % self.order + 1

    def as_polymap(self) -> PolyMap:
        return PolyMap(self.ring, self.components, PolyRing(self.target_names))

    def __call__(self, coefficients: Sequence) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(coefficients) for c in self.components)

    def jet_of(self, coefficients: Sequence) -> Jet:
        """The source jet at ``base`` with the given non-constant coefficients."""
        k = self.order
        rows = []
        for i, b in enumerate(self.base):
            rows.append([b] + [coefficients[self.var_index(i, d)] for d in range(1, k + 1)])
        return Jet.from_lists(rows)


def generic_jet(source: PolyRing, k: int, base: Sequence) -> tuple[PolyRing, list[list[Polynomial]]]:
    """Coefficient ring of order-``k`` jets at ``base`` and the generic jet
    over it, as one coefficient list per coordinate."""
    n = source.nvars
    ring = PolyRing(_coefficient_names(source.names, k))
    gens = ring.gens()
    series = [[ring.constant(base[i])] + [gens[i * k + d - 1] for d in range(1, k + 1)] for i in range(n)]
    return ring, series


def coefficient_map(phi: PolyMap, k: int, base: Sequence | None = None) -> CoefficientMap:
    if k < 1:
        raise DomainError("coefficient maps need order k >= 1", "jets")
    n = phi.source_dim
    base = tuple(as_fraction(b) for b in (base if base is not None else [0] * n))
    if len(base) != n:
        raise ArityError(f"base point of length {len(base)} for a map on {n} variables")
    ring, series = generic_jet(phi.source, k, base)
    comps = []
    for p in phi.components:
        coeffs = compose_series(p, series, k, ring.one, ring.zero)
        comps.extend(coeffs[1:])
    targets = tuple(_coefficient_names(phi.target.names, k))
    return CoefficientMap(phi, k, base, ring, tuple(comps), targets)


def _sub_rng(seed, trial: int) -> random.Random:
    return random.Random(f"jetcalc:{seed}:{trial}")


def _sample_graded(cm: CoefficientMap, constraint: Ideal, rng, bound):
    """Random point on V(constraint), solving degree by degree.

    Each constraint generator must become affine-linear in the top-degree
    coefficients it involves once the lower degrees are fixed; this is the
    shape of jet-scheme equations at a smooth base point.  Returns the point
    and the number of free parameters used, or ``None``.
    """
    k = cm.order
    n = cm.phi.source_dim
    gens = list(constraint.gens)
    for g in gens:
        if g.is_constant():
            return None
    top = []
    for g in gens:
        top.append(max(cm.var_degree(i) for i in g.support()))
    values: dict[int, Fraction] = {}
    free_total = 0
    for d in range(1, k + 1):
        block = [cm.var_index(i, d) for i in range(n)]
        rows, rhs = [], []
        for g, t in zip(gens, top):
            if t != d:
                continue
            h = g.partial_evaluate(values)
            if h.degree() > 1:
                return None
            row = []
            for idx in block:
                exp = [0] * cm.source_dim
                exp[idx] = 1
                row.append(h.coefficient(exp))
            rows.append(row)
            rhs.append(-h.constant_term())
        if rows:
            free = n - linalg.rank(rows)
            sol = linalg.solve_affine(rows, rhs, [rng.randint(-bound, bound) for _ in range(n)])
            if sol is None:
                return None
        else:
            free = n
            sol = [Fraction(rng.randint(-bound, bound)) for _ in range(n)]
        free_total += free
        for idx, v in zip(block, sol):
            values[idx] = v
    point = [values[i] for i in range(cm.source_dim)]
    if any(g.evaluate(point) for g in gens):
        return None
    return point, free_total


def image_dimension(
    cm: CoefficientMap,
    constraint: Ideal | None = None,
    *,
    seed,
    bound: int = DEFAULT_BOUND,
    trials: int = DEFAULT_TRIALS,
) -> int:
    """Generic rank of the differential of ``cm``, i.e. the dimension of the
    closure of its image (of the constraint locus, when one is given).

    Trial ``i`` draws integer coordinates in ``[-bound, bound]`` from a
    generator seeded by ``(seed, i)``; the maximum rank over trials is
    returned.  With a constraint, the sampled point must be a smooth point of
    the locus (tangent space of the expected dimension); otherwise the trial
    is discarded, and :class:`SamplingError` is raised if all trials are.
    """
    if seed is None:
        raise ValueError("a seed is required for randomized rank computations")
    if constraint is not None and constraint.ring != cm.ring:
        raise ArityError("constraint ideal must live on the coefficient ring of the map")
    if constraint is not None and constraint.is_zero():
        constraint = None
    jac = [[c.diff(i) for i in range(cm.source_dim)] for c in cm.components]
    cjac = None
    if constraint is not None:
        cjac = [[g.diff(i) for i in range(cm.source_dim)] for g in constraint.gens]
    cap = min(cm.source_dim, cm.target_dim)
    best = None
    for trial in range(trials):
        rng = _sub_rng(seed, trial)
        if constraint is None:
            point = [rng.randint(-bound, bound) for _ in range(cm.source_dim)]
            tangent = None
        else:
            sampled = _sample_graded(cm, constraint, rng, bound)
            if sampled is None:
                continue
            point, free = sampled
            cmat = [[d.evaluate(point) for d in row] for row in cjac]
            tangent = linalg.kernel(cmat, cm.source_dim)
            if len(tangent) != free:
                continue
        if not jac:
            r = 0
        else:
            mat = [[d.evaluate(point) for d in row] for row in jac]
            if tangent is not None:
                mat = linalg.matmul(mat, [list(col) for col in zip(*tangent)]) if tangent else []
            r = linalg.rank(mat) if mat and mat[0] else 0
        best = r if best is None else max(best, r)
        if constraint is None and best == cap:
            break
    if best is None:
        raise SamplingError(f"no smooth point of the constraint locus found in {trials} trials")
    return best
