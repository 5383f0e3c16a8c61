"""Jets on singular affine varieties: jet schemes, bounded arc lifting,
tangent cones and multiplicity strata."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Ideal,
    Limits,
    PolyMap,
    PolyRing,
    Polynomial,
    as_fraction,
    eliminate,
    grevlex,
    groebner_basis,
    ideal_dimension,
    initial_form,
)
from .algebra import linalg
from .algebra.orders import low_degree_homogenizing
from .errors import ArityError, DomainError, ResourceLimitError
from .jets import CoefficientMap, Jet, compose_series

DEFAULT_LIFT_BUDGET = 200


class AffineVariety:
    """``V(ideal)`` in affine space with a marked point (default the origin)."""

    def __init__(self, ring: PolyRing, gens: Sequence = (), base_point: Sequence | None = None, *, check: bool = True):
        self.ring = ring
        self.ideal = gens if isinstance(gens, Ideal) else Ideal(ring, gens)
        if self.ideal.ring != ring:
            raise ArityError("ideal and variety live over different rings")
        base = tuple(as_fraction(v) for v in (base_point if base_point is not None else [0] * ring.nvars))
        if len(base) != ring.nvars:
            raise ArityError(f"base point of length {len(base)} in {ring.nvars}-space")
        self.base_point = base
        if check:
            for g in self.ideal.gens:
                if g.evaluate(base):
                    raise DomainError(f"generator {g} does not vanish at the base point", "varieties")

    @classmethod
    def ambient(cls, ring: PolyRing, base_point: Sequence | None = None) -> "AffineVariety":
        return cls(ring, (), base_point)

    @property
    def gens(self) -> tuple[Polynomial, ...]:
        return self.ideal.gens

    @property
    def ambient_dim(self) -> int:
        return self.ring.nvars

    def is_ambient(self) -> bool:
        return self.ideal.is_zero()

    def dimension(self, limits: Limits | None = None) -> int:
        return ideal_dimension(self.ideal, limits)

    def at(self, point: Sequence) -> "AffineVariety":
        return AffineVariety(self.ring, self.ideal, point)

    def centered_gens(self) -> list[Polynomial]:
        """Generators in coordinates where the base point is the origin."""
        if not any(self.base_point):
            return list(self.gens)
        return [g.translate(self.base_point) for g in self.gens]

    def tangent_rank(self) -> int:
        """Rank of the Jacobian of the generators at the base point."""
        if not self.gens:
            return 0
        mat = [[g.diff(i).evaluate(self.base_point) for i in range(self.ambient_dim)] for g in self.gens]
        return linalg.rank(mat)

    def is_smooth_at_base(self, limits: Limits | None = None) -> bool:
        return self.tangent_rank() == self.ambient_dim - self.dimension(limits)

    def __repr__(self):
        gens = ", ".join(map(str, self.gens)) or "0"
        return f"AffineVariety(V({gens}) in {self.ring}, base={[str(v) for v in self.base_point]})"


@dataclass(frozen=True)
class ConeIdeal:
    """Ideal of the tangent cone at the base point, in centred coordinates.
    Not radicalized."""

    ideal: Ideal
    note: str = "possibly non-radical"

    def contains_direction(self, v: Sequence) -> bool:
        return all(not g.evaluate(v) for g in self.ideal.gens)


@dataclass(frozen=True)
class LiftResult:
    status: str  # "lifted" | "obstructed" | "inconclusive"
    witness: Jet | None = None
    obstruction_order: int | None = None
    note: str = ""

    @property
    def lifted(self) -> bool:
        return self.status == "lifted"


def _check_base(Y: AffineVariety, j: Jet):
    if j.arity != Y.ambient_dim:
        raise ArityError(f"jet of arity {j.arity} on a variety in {Y.ambient_dim}-space")
    if j.base_point != Y.base_point:
        raise DomainError("jet is not based at the variety's base point", "varieties")


def jet_scheme_member(Y: AffineVariety, j: Jet) -> bool:
    """True iff ``h ∘ j ≡ 0 mod t^(k+1)`` for every generator ``h``."""
    _check_base(Y, j)
    series = [c.coeffs for c in j.coords]
    for h in Y.gens:
        if any(compose_series(h, series, j.order, Fraction(1), Fraction(0))):
            return False
    return True


def jet_constraint(Y: AffineVariety, cm: CoefficientMap) -> Ideal:
    """Equations on the coefficient ring of ``cm`` cutting out the order-k
    jet scheme of ``Y`` at ``cm.base``."""
    if cm.phi.source != Y.ring:
        raise ArityError("coefficient map and variety use different ambient rings")
    ring = cm.ring
    gens = ring.gens()
    k = cm.order
    series = [[ring.constant(b)] + [gens[cm.var_index(i, d)] for d in range(1, k + 1)] for i, b in enumerate(cm.base)]
    eqs = []
    for h in Y.gens:
        eqs.extend(compose_series(h, series, k, ring.one, ring.zero)[1:])
    return Ideal(ring, eqs)


# -- bounded lifting ----------------------------------------------------------------


class _BudgetExhausted(Exception):
    pass


def _rational_point(ring: PolyRing, polys: list[Polynomial], budget: list[int], limits) -> list[Fraction] | None:
    """Depth-first search for a rational zero; ``None`` if none exists on the
    branches explored.  Each Groebner computation spends one budget unit.

    Small values are tried first; elimination is only used to find the
    admissible values of a coordinate when none of them fits.
    """

    def spend():
        budget[0] -= 1
        if budget[0] < 0:
            raise _BudgetExhausted

    def consistent(polys):
        if any(p.is_constant() for p in polys):
            return False
        if not polys:
            return True
        spend()
        return not groebner_basis(Ideal(ring, polys), limits=limits).is_unit()

    def substitute(polys, idx, c):
        return [q for q in (p.partial_evaluate({idx: c}) for p in polys) if q]

    def search(polys, idx, assigned):
        # invariant: ``polys`` has a common zero over C
        if idx == ring.nvars:
            return assigned
        if not any(idx in p.support() for p in polys):
            return search(polys, idx + 1, assigned + [Fraction(0)])
        tried = [Fraction(v) for v in (0, 1, -1)]
        for c in tried:
            sub = substitute(polys, idx, c)
            if consistent(sub):
                found = search(sub, idx + 1, assigned + [c])
                if found is not None:
                    return found
        others = [ring.names[i] for i in range(ring.nvars) if i != idx]
        spend()
        elim = eliminate(Ideal(ring, polys), others, limits)
        if elim.gens:
            g = elim.gens[0]
            coeffs = [Fraction(0)] * (g.degree() + 1)
            for exp, c in g.items():
                coeffs[exp[0]] = c
            candidates = linalg.rational_roots(coeffs)
        else:
            candidates = [Fraction(v) for v in (2, -2, 3, -3)]
        for c in candidates:
            if c in tried:
                continue
            sub = substitute(polys, idx, c)
            if consistent(sub):
                found = search(sub, idx + 1, assigned + [c])
                if found is not None:
                    return found
        return None

    polys = [p for p in polys if p]
    if not consistent(polys):
        return None
    return search(polys, 0, [])


def lift_jet(
    Y: AffineVariety,
    j: Jet,
    K: int,
    *,
    budget: int = DEFAULT_LIFT_BUDGET,
    limits: Limits | None = None,
) -> LiftResult:
    """Try to extend ``j`` to an order-``K`` member of the jet scheme.

    The coefficient equations are gathered order by order; the first order
    whose accumulated system has no complex solution is reported as the
    obstruction.  A consistent system is then searched for a rational
    witness.  Running out of budget, or finding no rational witness, gives
    ``inconclusive``.
    """
    if not jet_scheme_member(Y, j):
        raise DomainError("lift_jet needs a jet-scheme member", "varieties")
    k = j.order
    if K <= k:
        raise DomainError(f"target order {K} must exceed the jet order {k}", "varieties")
    n = Y.ambient_dim
    padded = Jet.from_lists([list(c.coeffs) + [0] * (K - k) for c in j.coords])
    if jet_scheme_member(Y, padded):
        return LiftResult("lifted", witness=padded)
    names = [f"u{i}_{d}" for i in range(n) for d in range(k + 1, K + 1)]
    ring = PolyRing(names)
    gens = ring.gens()
    width = K - k
    series = []
    for i in range(n):
        known = [ring.constant(c) for c in j.coords[i].coeffs]
        series.append(known + [gens[i * width + d] for d in range(width)])
    per_order: dict[int, list[Polynomial]] = {d: [] for d in range(k + 1, K + 1)}
    for h in Y.gens:
        coeffs = compose_series(h, series, K, ring.one, ring.zero)
        for d in range(k + 1, K + 1):
            if coeffs[d]:
                per_order[d].append(coeffs[d])
    remaining = [budget]
    system: list[Polynomial] = []
    try:
        for d in range(k + 1, K + 1):
            if not per_order[d]:
                continue
            system.extend(per_order[d])
            if any(p.is_constant() for p in system):
                return LiftResult("obstructed", obstruction_order=d)
            remaining[0] -= 1
            if remaining[0] < 0:
                raise _BudgetExhausted
            if groebner_basis(Ideal(ring, system), limits=limits).is_unit():
                return LiftResult("obstructed", obstruction_order=d)
        point = _rational_point(ring, system, remaining, limits)
    except (_BudgetExhausted, ResourceLimitError) as exc:
        return LiftResult("inconclusive", note=f"search budget exhausted ({type(exc).__name__})")
    if point is None:
        return LiftResult("inconclusive", note="consistent over C but no rational witness found")
    rows = []
    for i in range(n):
        rows.append(list(j.coords[i].coeffs) + point[i * width : (i + 1) * width])
    return LiftResult("lifted", witness=Jet.from_lists(rows))


# -- tangent cones -------------------------------------------------------------------


def _homogenize(p: Polynomial, ring_h: PolyRing) -> Polynomial:
    d = p.degree()
    return Polynomial._raw(ring_h, {exp + (d - sum(exp),): c for exp, c in p.items()})


def tangent_cone(Y: AffineVariety, limits: Limits | None = None) -> ConeIdeal:
    """Ideal generated by the lowest-degree forms of every element of I(Y)
    at the base point.

    Homogenizes the centred generators with an extra variable, computes a
    Groebner basis in a degree order where higher powers of that variable
    win, dehomogenizes and keeps lowest-degree forms.  A principal ideal
    takes the direct route.
    """
    gens = [g for g in Y.centered_gens() if g]
    ring = Y.ring
    if not gens:
        return ConeIdeal(Ideal(ring, []))
    if len(gens) == 1:
        return ConeIdeal(Ideal(ring, [initial_form(gens[0]).monic(grevlex)]))
    ring_h = ring.extend([ring.fresh_name("t")])
    hom = Ideal(ring_h, [_homogenize(g, ring_h) for g in gens])
    gb = groebner_basis(hom, low_degree_homogenizing(), limits)
    forms = []
    n = ring.nvars
    for g in gb.basis:
        deh: dict = {}
        for exp, c in g.items():
            key = exp[:n]
            deh[key] = deh.get(key, 0) + c
        p = Polynomial(ring, deh)
        if p:
            forms.append(initial_form(p).monic(grevlex))
    cone = groebner_basis(Ideal(ring, forms), limits=limits)
    return ConeIdeal(Ideal(ring, cone.basis))


def cone_kernel_dimension(h: PolyMap, Y: AffineVariety, limits: Limits | None = None) -> int:
    """Dimension of the part of the tangent cone killed by ``dh`` at the base
    point.  A positive value means the induced cone map is not an embedding."""
    if h.source != Y.ring:
        raise ArityError("map and variety use different ambient rings")
    cone = tangent_cone(Y, limits)
    jac = h.jacobian_at(Y.base_point)
    gens = Y.ring.gens()
    linear = []
    for row in jac:
        form = Y.ring.zero
        for a, g in zip(row, gens):
            if a:
                form = form + g * a
        linear.append(form)
    return ideal_dimension(cone.ideal + Ideal(Y.ring, linear), limits)


# -- multiplicity strata -------------------------------------------------------------


def default_buffer(k: int) -> int:
    return k + 4


def _solvable_variable(g: Polynomial, allowed) -> int | None:
    """A variable ``v`` with ``g = c*v + r``, ``c`` constant and ``v`` absent
    from ``r``, chosen among indices accepted by ``allowed(v, r_support)``."""
    linear = {}
    for e, c in g.items():
        if sum(e) == 1:
            linear[e.index(1)] = c
    for v in sorted(linear, reverse=True):
        r_support = set()
        clean = True
        for e in g.terms:
            if sum(e) == 1 and e[v] == 1:
                continue
            if e[v]:
                clean = False
                break
            r_support.update(i for i, x in enumerate(e) if x)
        if clean and allowed(v, r_support):
            return v
    return None


def _eliminate_linear(gens: list[Polynomial], high: set[int]) -> tuple[list[Polynomial], set[int]]:
    """Substitute away variables that some generator determines linearly.

    A dropped (``high``) variable may be solved in terms of anything; a kept
    variable only in terms of other kept variables, so that the projection
    onto the kept coordinates is a graph over the projection without it.
    Returns the new generators and the set of substituted variables.
    """
    gens = [g for g in gens if not g.is_zero()]
    solved: set[int] = set()
    progress = True
    while progress:
        progress = False
        for idx, g in enumerate(gens):
            v = _solvable_variable(g, lambda v, supp: v in high or not (supp & high))
            if v is None:
                continue
            ring = g.ring
            exp = tuple(int(i == v) for i in range(ring.nvars))
            c = g.coefficient(exp)
            value = (ring.gen(v) * c - g) * (1 / c)
            subs = list(ring.gens())
            subs[v] = value
            rest = gens[:idx] + gens[idx + 1:]
            gens = [h for h in (q.compose(subs, ring) if q.degree_in(v) else q for q in rest) if not h.is_zero()]
            solved.add(v)
            progress = True
            break
    return gens, solved


def stratum_dimension(Y: AffineVariety, k: int, m: int, K: int | None = None, limits: Limits | None = None) -> int:
    """Dimension of the closure of the image in order-``k`` jets of the
    multiplicity-``m`` order-``K`` jet-scheme members (``-1`` if empty).

    Coefficients of degree below ``m`` are zero.  The jet-scheme equations
    are homogeneous for the ``t -> λt`` action, which scales a degree-``m``
    coefficient by ``λ^m``; so the part of the stratum where coordinate ``i``
    has order exactly ``m`` is a one-dimensional family over the slice where
    that coefficient equals 1.  Each slice is projected by elimination, after
    substituting away linearly determined coefficients.
    """
    if K is None:
        K = default_buffer(k)
    if not 1 <= m <= k <= K:
        raise DomainError(f"need 1 <= m <= k <= K, got m={m}, k={k}, K={K}", "varieties")
    n = Y.ambient_dim
    base_names = Y.ring.names
    names = [f"{base_names[i]}_{d}" for i in range(n) for d in range(m, K + 1)]
    ring = PolyRing(names)
    high = {ring.index(f"{base_names[i]}_{d}") for i in range(n) for d in range(k + 1, K + 1)}
    best = -1
    for i in range(n):
        lead = ring.index(f"{base_names[i]}_{m}")
        series = []
        for r in range(n):
            row = [ring.zero] * m
            for d in range(m, K + 1):
                idx = ring.index(f"{base_names[r]}_{d}")
                row.append(ring.one if idx == lead else ring.gen(idx))
            series.append(row)
        eqs = []
        for h in Y.centered_gens():
            eqs.extend(c for c in compose_series(h, series, K, ring.one, ring.zero)[1:] if c)
        eqs, solved = _eliminate_linear(eqs, high)
        ideal = Ideal(ring, eqs)
        if groebner_basis(ideal, limits=limits).is_unit():
            continue
        drop = sorted(high | solved | {lead})
        projected = eliminate(ideal, drop, limits)
        best = max(best, ideal_dimension(projected, limits) + 1)
    return best
