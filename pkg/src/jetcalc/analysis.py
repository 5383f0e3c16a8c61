"""Analysis of polynomial endomorphisms on a commutative square
``ρ ∘ f = g ∘ ρ``: Jacobian multiplicity, exceptional divisors of ``g``,
invariance and preimage checks, and the jet-image dimension table."""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Ideal,
    Limits,
    PolyMap,
    PolyRing,
    Polynomial,
    eliminate,
    groebner_basis,
    ideal_dimension,
    jacobian_det,
)
from .algebra import linalg
from .errors import ArityError, DomainError, JetcalcError
from .jets import DEFAULT_BOUND, DEFAULT_TRIALS, coefficient_map, image_dimension
from .varieties import AffineVariety, jet_constraint

INFINITY = math.inf
REPORT_FORMAT = "jetcalc-report/1"


def jd(h: PolyMap, v: Sequence | None = None) -> int | float:
    """Order of vanishing of the Jacobian determinant of ``h`` at ``v``;
    :data:`INFINITY` when the determinant is identically zero."""
    det = jacobian_det(h)
    if det.is_zero():
        return INFINITY
    v = v if v is not None else [0] * h.source_dim
    return det.translate(v).order()


# -- divisors ----------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorCandidate:
    ideal: Ideal
    provenance: str = "user"  # "auto" | "user"

    @classmethod
    def from_polys(cls, ring: PolyRing, polys: Sequence, provenance: str = "user") -> "DivisorCandidate":
        return cls(Ideal(ring, polys), provenance)

    def __str__(self):
        return "V(" + ", ".join(map(str, self.ideal.gens)) + ")"


def _strip_monomial(p: Polynomial) -> tuple[Polynomial, tuple[int, ...]]:
    content = tuple(min(col) for col in zip(*p.terms))
    stripped = Polynomial._raw(p.ring, {tuple(a - b for a, b in zip(e, content)): c for e, c in p.items()})
    return stripped, content


def _normalize_linear(p: Polynomial) -> Polynomial:
    for i in range(p.nvars):
        c = p.coefficient(tuple(int(j == i) for j in range(p.nvars)))
        if c:
            return p * (1 / c)
    return p


def _restriction(p: Polynomial, i: int, base: Sequence) -> list[Fraction]:
    """Coefficients (lowest first) of ``p`` on the line through ``base``
    parallel to the ``i``-th axis."""
    fixed = {r: v for r, v in enumerate(base) if r != i}
    q = p.partial_evaluate(fixed)
    out = [Fraction(0)] * (q.degree_in(i) + 1)
    for e, c in q.items():
        out[e[i]] += c
    return out


def linear_factors(p: Polynomial, max_combinations: int = 4096) -> list[Polynomial]:
    """Rational linear factors of ``p`` that involve more than a constant,
    normalized to leading coefficient 1 in the first variable present."""
    ring = p.ring
    n = ring.nvars
    found: list[Polynomial] = []
    if p.is_constant():
        return found
    gens = ring.gens()
    for i in range(n):
        deg = p.degree_in(i)
        if deg == 0:
            continue
        base = None
        for b in itertools.product(range(3), repeat=n - 1):
            cand = list(b[:i]) + [0] + list(b[i:])
            if len(_restriction(p, i, cand)) - 1 == deg:
                base = cand
                break
        if base is None:
            continue
        roots0 = linalg.rational_roots(_restriction(p, i, base))
        # roots on a parallel line shifted by ``delta`` in direction j give
        # the candidate slopes; a line where p degenerates is skipped
        slopes, deltas = [], []
        for j in range(n):
            if j == i:
                slopes.append([Fraction(0)])
                deltas.append(1)
                continue
            for delta in (1, 2, -1, 3, -2, 4):
                shifted = list(base)
                shifted[j] += delta
                coeffs = _restriction(p, i, shifted)
                if len(coeffs) - 1 == deg:
                    slopes.append(linalg.rational_roots(coeffs))
                    deltas.append(delta)
                    break
            else:
                slopes.append(None)
                deltas.append(None)
        if any(s is None for s in slopes):
            continue
        count = 0
        for r0 in roots0:
            for picks in itertools.product(*slopes):
                count += 1
                if count > max_combinations:
                    break
                a = [(picks[j] - r0) / deltas[j] if j != i else Fraction(0) for j in range(n)]
                c = r0 - sum(a[j] * base[j] for j in range(n))
                # candidate factor x_i - (c + sum a_j x_j)
                subs = [gens[j] if j != i else sum((a[r] * gens[r] for r in range(n) if r != i), ring.constant(c)) for j in range(n)]
                if p.compose(subs, ring).is_zero():
                    lin = gens[i] - subs[i]
                    lin = _normalize_linear(lin)
                    if lin not in found and not (len(lin.terms) == 1):
                        found.append(lin)
    return found


def auto_candidates(g: PolyMap) -> list[DivisorCandidate]:
    """Monomial and linear factors of the Jacobian determinant of ``g``."""
    det = jacobian_det(g)
    if det.is_zero() or det.is_constant():
        return []
    ring = g.source
    stripped, content = _strip_monomial(det)
    polys = [ring.gen(i) for i, e in enumerate(content) if e]
    polys += linear_factors(stripped)
    return [DivisorCandidate(Ideal(ring, [p]), "auto") for p in polys]


def _pull(phi: PolyMap, p: Polynomial) -> Polynomial:
    """``p ∘ phi`` with target coordinates matched by position."""
    if p.nvars != phi.target_dim:
        raise ArityError(f"polynomial in {p.nvars} variables pulled back along a map to {phi.target_dim}-space")
    return p.compose(phi.components, phi.source)


def image_closure(g: PolyMap, D: Ideal, limits: Limits | None = None, target: PolyRing | None = None) -> Ideal:
    """Ideal of the closure of ``g(V(D))``, over ``target`` (default the
    target ring of ``g``)."""
    target = target or g.target
    if target.nvars != g.target_dim:
        raise ArityError("target ring has the wrong dimension")
    src = g.source
    img_names: list[str] = []
    for name in g.target.names:
        fresh = src.extend(img_names).fresh_name(f"{name}_img")
        img_names.append(fresh)
    graph_ring = src.extend(img_names)
    gens = [p.to_ring(graph_ring) for p in D.gens]
    for name, comp in zip(img_names, g.components):
        gens.append(graph_ring.gen(name) - comp.to_ring(graph_ring))
    elim = eliminate(Ideal(graph_ring, gens), src.names, limits)
    # the elimination ring is the image variables in target order
    return Ideal(target, [Polynomial._raw(target, dict(p.items())) for p in elim.gens])


@dataclass(frozen=True)
class CandidateReport:
    candidate: DivisorCandidate
    accepted: bool
    note: str = ""
    image: Ideal | None = None
    image_dimension: int | None = None
    exceptional: bool | None = None
    invariant: bool | None = None
    preimage_empty: bool | None = None

    def to_dict(self) -> dict:
        out = {
            "divisor": str(self.candidate),
            "provenance": self.candidate.provenance,
            "accepted": self.accepted,
        }
        if self.note:
            out["note"] = self.note
        if self.image is not None:
            out["image"] = [str(p) for p in self.image.gens]
            out["image_dimension"] = self.image_dimension
            out["exceptional"] = self.exceptional
        if self.invariant is not None:
            out["invariant"] = self.invariant
        if self.preimage_empty is not None:
            out["preimage_empty"] = self.preimage_empty
        return out


def exceptional_locus(
    g: PolyMap,
    candidates: Sequence[DivisorCandidate] = (),
    *,
    auto: bool = True,
    limits: Limits | None = None,
) -> list[CandidateReport]:
    """Decide, per candidate divisor ``D``, whether ``dim g(D) <= n - 2``."""
    if not g.is_equidimensional():
        raise ArityError("exceptional-locus detection needs an equidimensional map")
    n = g.source_dim
    pool = list(auto_candidates(g)) if auto else []
    seen = {tuple(c.ideal.gens) for c in pool}
    for c in candidates:
        if tuple(c.ideal.gens) not in seen:
            pool.append(c)
            seen.add(tuple(c.ideal.gens))
    reports = []
    for cand in pool:
        if cand.ideal.ring != g.source:
            reports.append(CandidateReport(cand, False, "candidate lives over a different ring"))
            continue
        dim = ideal_dimension(cand.ideal, limits)
        if dim != n - 1:
            reports.append(CandidateReport(cand, False, f"rejected: not a hypersurface (dimension {dim})"))
            continue
        image = image_closure(g, cand.ideal, limits, g.source)
        idim = ideal_dimension(image, limits)
        reports.append(CandidateReport(cand, True, image=image, image_dimension=idim, exceptional=idim <= n - 2))
    return reports


def invariance_check(g: PolyMap, D: DivisorCandidate, limits: Limits | None = None) -> bool:
    """True iff ``g(V(D)) ⊆ V(D)``, i.e. ``p ∘ g ∈ D`` for each generator."""
    gb = groebner_basis(D.ideal, limits=limits)
    return all(gb.contains(_pull(g, p)) for p in D.ideal.gens)


def preimage_empty(rho: PolyMap, X: AffineVariety, D: DivisorCandidate, limits: Limits | None = None) -> bool:
    """True iff ``1 ∈ I(X) + ρ*(D)``."""
    if rho.source != X.ring:
        raise ArityError("rho must be defined on the ambient space of X")
    total = X.ideal + Ideal(X.ring, [_pull(rho, p) for p in D.ideal.gens])
    return groebner_basis(total, limits=limits).is_unit()


# -- the commutative square ----------------------------------------------------------


def _maps_into(phi: PolyMap, source: AffineVariety, target: AffineVariety, limits) -> bool:
    if not target.gens:
        return True
    gb = groebner_basis(source.ideal, limits=limits)
    return all(gb.contains(_pull(phi, h)) for h in target.gens)


@dataclass
class EndoInstance:
    """``ρ: X -> Y`` with endomorphisms ``f`` of ``X`` and ``g`` of ``Y``."""

    X: AffineVariety
    Y: AffineVariety
    rho: PolyMap
    f: PolyMap
    g: PolyMap
    s_max: int = 2
    k: int = 2
    candidates: list[DivisorCandidate] = field(default_factory=list)
    check: bool = True
    limits: Limits | None = None

    def __post_init__(self):
        if self.rho.source != self.X.ring or self.rho.target_dim != self.Y.ambient_dim:
            raise ArityError("rho must map the ambient space of X to that of Y")
        if self.f.source != self.X.ring or self.f.target_dim != self.X.ambient_dim:
            raise ArityError("f must be an endomorphism of the ambient space of X")
        if self.g.source != self.Y.ring or self.g.target_dim != self.Y.ambient_dim:
            raise ArityError("g must be an endomorphism of the ambient space of Y")
        if self.s_max < 1 or self.k < 1:
            raise ValueError("s_max and k must be positive")
        if self.check:
            for name, phi, src, dst in (("rho", self.rho, self.X, self.Y), ("f", self.f, self.X, self.X), ("g", self.g, self.Y, self.Y)):
                if not _maps_into(phi, src, dst, self.limits):
                    raise DomainError(f"{name} does not map its source variety into its target", "analysis")


def commutativity_check(inst: EndoInstance) -> bool:
    """True iff every coordinate of ``ρ ∘ f − g ∘ ρ`` lies in ``I(X)``."""
    left = inst.rho.compose(inst.f)
    right = inst.g.compose(inst.rho)
    gb = groebner_basis(inst.X.ideal, limits=inst.limits)
    return all(gb.contains(a - b) for a, b in zip(left.components, right.components))


def verify_inverse(phi: PolyMap, inverse: PolyMap, V: AffineVariety, limits: Limits | None = None) -> bool:
    """True iff the polynomial map ``inverse`` is a two-sided inverse of
    ``phi`` on ``V`` (compositions equal the identity modulo ``I(V)``)."""
    gb = groebner_basis(V.ideal, limits=limits)
    gens = V.ring.gens()
    for comp in (phi.compose(inverse), inverse.compose(phi)):
        if not all(gb.contains(c - x) for c, x in zip(comp.components, gens)):
            return False
    return True


def generic_projection(Y: AffineVariety, dim: int, seed, bound: int = 9) -> PolyMap:
    """A seeded random linear map from the ambient space of ``Y`` to ``dim``-space."""
    rng = random.Random(f"jetcalc:projection:{seed}")
    gens = Y.ring.gens()
    comps = []
    for _ in range(dim):
        comps.append(sum((rng.randint(-bound, bound) * x for x in gens), Y.ring.zero))
    return PolyMap(Y.ring, comps)


def obstruction_compare(
    inst: EndoInstance,
    x: Sequence | None = None,
    s: int = 1,
    k: int | None = None,
    psi: PolyMap | None = None,
    *,
    seed,
    bound: int = DEFAULT_BOUND,
    trials: int = DEFAULT_TRIALS,
) -> tuple[int, int]:
    """Jet-image dimensions of ``ψ∘ρ∘f^s`` and ``ψ∘g^s∘ρ`` on k-jets of ``X`` at ``x``."""
    k = inst.k if k is None else k
    X = inst.X.at(x) if x is not None else inst.X
    if not X.is_smooth_at_base(inst.limits):
        raise DomainError("X is singular at the chosen point", "analysis")
    if psi is None:
        if inst.Y.is_ambient():
            psi = PolyMap.identity(inst.Y.ring)
        else:
            psi = generic_projection(inst.Y, inst.Y.dimension(inst.limits), seed)
    if psi.source_dim != inst.Y.ambient_dim:
        raise ArityError("psi must be defined on the ambient space of Y")
    fs = psi.compose(inst.rho.compose(inst.f.iterate(s)))
    gs = psi.compose(inst.g.iterate(s).compose(inst.rho))
    dims = []
    for phi in (fs, gs):
        cm = coefficient_map(phi, k, X.base_point)
        constraint = None if X.is_ambient() else jet_constraint(X, cm)
        dims.append(image_dimension(cm, constraint, seed=seed, bound=bound, trials=trials))
    return dims[0], dims[1]


# -- report ------------------------------------------------------------------------


@dataclass
class AnalysisReport:
    seed: object
    parameters: dict
    commutativity: bool | None
    candidates: list[CandidateReport]
    obstruction: list[dict]
    n: int | None
    notes: list[str] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "seed": self.seed,
            "parameters": self.parameters,
            "commutativity": self.commutativity,
            "candidates": [c.to_dict() for c in self.candidates],
            "obstruction": {"n": self.n, "rows": self.obstruction},
            "notes": self.notes,
            "errors": self.errors,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def exceptional_divisors(self) -> list[CandidateReport]:
        return [c for c in self.candidates if c.exceptional]


def _attempt(errors: list, step: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except JetcalcError as exc:
        errors.append({"step": step, "module": exc.module, "message": str(exc)})
    except ValueError as exc:
        errors.append({"step": step, "module": "analysis", "message": str(exc)})
    return None


def analyze(
    inst: EndoInstance,
    *,
    seed,
    bound: int = DEFAULT_BOUND,
    trials: int = DEFAULT_TRIALS,
    auto: bool = True,
) -> AnalysisReport:
    """Run every check on ``inst`` and collect the results.

    The report records certified facts only; it draws no conclusion about
    whether ``f`` or ``g`` is an automorphism.
    """
    if seed is None:
        raise ValueError("a seed is required for analysis reports")
    errors: list[dict] = []
    notes: list[str] = []
    limits = inst.limits
    commutes = _attempt(errors, "commutativity", commutativity_check, inst)

    reports: list[CandidateReport] = []
    if inst.Y.is_ambient():
        found = _attempt(errors, "exceptional-locus", exceptional_locus, inst.g, inst.candidates, auto=auto, limits=limits)
        for rep in found or []:
            if rep.accepted:
                inv = _attempt(errors, "invariance", invariance_check, inst.g, rep.candidate, limits)
                empty = _attempt(errors, "preimage", preimage_empty, inst.rho, inst.X, rep.candidate, limits)
                rep = CandidateReport(
                    rep.candidate, True, rep.note, rep.image, rep.image_dimension, rep.exceptional, inv, empty
                )
            reports.append(rep)
    else:
        notes.append("exceptional-divisor detection skipped: Y is not an affine space")

    n = _attempt(errors, "dimension", inst.Y.dimension, limits)
    rows = []
    for s in range(1, inst.s_max + 1):
        for k in range(1, inst.k + 1):
            dims = _attempt(errors, f"obstruction s={s} k={k}", obstruction_compare, inst, None, s, k, seed=seed, bound=bound, trials=trials)
            if dims is None:
                continue
            row = {"s": s, "k": k, "d_f": dims[0], "d_g": dims[1]}
            if n is not None:
                row.update({"kn": k * n, "k(n-1)": k * (n - 1), "gap": k * n - dims[0]})
            rows.append(row)

    for rep in reports:
        if rep.exceptional and rep.invariant:
            if rep.preimage_empty:
                notes.append(f"{rep.candidate}: exceptional for g, g-invariant, and its preimage under rho is empty")
            elif rep.preimage_empty is False:
                notes.append(f"{rep.candidate}: exceptional for g, g-invariant, and its preimage under rho is nonempty")
    if rows and n is not None:
        low = [(r["s"], r["k"]) for r in rows if r["d_f"] <= r["k(n-1)"]]
        if low:
            notes.append("jet-image dimension is at most k(n-1) at (s, k) in " + ", ".join(f"({s}, {k})" for s, k in low))
        elif all(r["gap"] == 0 for r in rows):
            notes.append("jet-image dimension equals k*n throughout the table")
    notes.append("no automorphism conclusion is drawn")

    params = {"k": inst.k, "s_max": inst.s_max, "bound": bound, "trials": trials, "auto_candidates": auto}
    return AnalysisReport(seed, params, commutes, reports, rows, n, notes, errors)


__all__ = [
    "INFINITY",
    "AnalysisReport",
    "CandidateReport",
    "DivisorCandidate",
    "EndoInstance",
    "analyze",
    "auto_candidates",
    "commutativity_check",
    "exceptional_locus",
    "generic_projection",
    "image_closure",
    "invariance_check",
    "jd",
    "linear_factors",
    "obstruction_compare",
    "preimage_empty",
    "verify_inverse",
]
