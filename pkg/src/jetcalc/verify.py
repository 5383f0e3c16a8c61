"""Seeded property suites, runnable from the command line."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import Ideal, PolyRing, groebner_basis, linalg, parse_polynomial
from .analysis import jd
from .blowup import BlowupChart, strict_transform, theta_compatibility
from .jets import prolong, scale_jet, truncate
from .randgen import random_jet, random_linear_automorphism, random_map, random_polynomial

_RINGS = {n: PolyRing(["x", "y", "z"][:n]) for n in (1, 2, 3)}


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    samples: int
    failures: int
    first_failure: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        out = {"suite": self.suite, "name": self.name, "samples": self.samples, "failures": self.failures}
        if self.first_failure:
            out["first_failure"] = self.first_failure
        return out


def _run(suite, name, samples, rng, body: Callable[[random.Random], str | None]) -> CheckResult:
    failures = 0
    first = ""
    for _ in range(samples):
        msg = body(rng)
        if msg:
            failures += 1
            first = first or msg
    return CheckResult(suite, name, samples, failures, first)


# -- algebra -----------------------------------------------------------------------


def _roundtrip(rng):
    ring = _RINGS[rng.randint(1, 3)]
    p = random_polynomial(ring, rng, degree=4, terms=5, rational=True)
    if parse_polynomial(str(p), ring) != p:
        return f"round-trip failed for {p}"
    return None


def _order_independence(rng):
    ring = _RINGS[2]
    gens = [random_polynomial(ring, rng, degree=2, terms=3) for _ in range(2)]
    shuffled = list(reversed(gens)) + [gens[0] + gens[1]]
    a = groebner_basis(Ideal(ring, gens)).basis
    b = groebner_basis(Ideal(ring, shuffled)).basis
    return None if a == b else f"bases differ for {list(map(str, gens))}"


def _membership(rng):
    ring = _RINGS[2]
    gens = [random_polynomial(ring, rng, degree=2, terms=3) for _ in range(2)]
    gb = groebner_basis(Ideal(ring, gens))
    combo = sum((random_polynomial(ring, rng, degree=2, terms=2) * g for g in gens), ring.zero)
    return None if gb.contains(combo) else f"combination not recognized as a member of {list(map(str, gens))}"


# -- jets --------------------------------------------------------------------------


def _triple(rng):
    n = rng.randint(1, 3)
    ring = _RINGS[n]
    k = rng.randint(1, 4)
    phi = random_map(ring, rng, degree=3, terms=3)
    psi = random_map(ring, rng, degree=3, terms=3)
    j = random_jet(n, k, rng)
    return phi, psi, j, k


def _functoriality(rng):
    phi, psi, j, _ = _triple(rng)
    if prolong(psi.compose(phi), j) != prolong(psi, prolong(phi, j)):
        return f"functoriality fails for {phi}, {psi}"
    return None


def _truncation(rng):
    phi, _, j, k = _triple(rng)
    l = rng.randint(0, k)
    if truncate(prolong(phi, j), l) != prolong(phi, truncate(j, l)):
        return f"truncation compatibility fails for {phi}"
    return None


def _equivariance(rng):
    phi, _, j, _ = _triple(rng)
    lam = Fraction(rng.choice([-3, -2, -1, 2, 3]), rng.randint(1, 3))
    if prolong(phi, scale_jet(j, lam)) != scale_jet(prolong(phi, j), lam):
        return f"equivariance fails for {phi}"
    return None


# -- blow-ups ----------------------------------------------------------------------


def _factorization(rng):
    ring = _RINGS[2]
    h = random_polynomial(ring, rng, degree=4, terms=4, min_degree=1)
    if h.is_zero():
        return None
    chart = BlowupChart(rng.randint(1, 2), 2)
    res = strict_transform(h, chart)
    e = ring.gen(chart.pos)
    pulled = chart.substitution(ring).pullback(h)
    if e**res.power * res.transform != pulled:
        return f"factorization fails for {h}"
    if all(exp[chart.pos] for exp in res.transform.terms):
        return f"transform of {h} still divisible by the exceptional coordinate"
    return None


def _compatibility(rng):
    ring = _RINGS[2]
    phi = random_linear_automorphism(ring, rng)
    j = random_jet(2, 4, rng, base=[0, 0])
    if j.is_zero():
        return None
    m = min(v for v in (c.valuation() for c in j.coords) if v is not None)
    l = rng.randint(0, 4 - m)
    comp = theta_compatibility(phi, j, l)
    return None if comp.holds else f"compatibility fails for {phi} on {j}"


# -- Jacobian multiplicity ---------------------------------------------------------


def _superadditivity(rng):
    n = rng.randint(2, 3)
    ring = _RINGS[n]
    h = random_map(ring, rng, degree=3, terms=3)
    e = random_map(ring, rng, degree=3, terms=3)
    v = [rng.randint(-2, 2) for _ in range(n)]
    lhs = jd(e.compose(h), v)
    rhs = jd(h, v) + jd(e, h(v))
    return None if lhs >= rhs else f"superadditivity fails for e={e}, h={h} at {v}"


def _local_embedding(rng):
    n = rng.randint(2, 3)
    ring = _RINGS[n]
    h = random_map(ring, rng, degree=2, terms=2)
    v = [rng.randint(-2, 2) for _ in range(n)]
    singular = linalg.rank(h.jacobian_at(v)) < n
    return None if (jd(h, v) > 0) == singular else f"jd positivity disagrees with the differential for {h}"


SUITES: dict[str, list[tuple[str, Callable]]] = {
    "algebra": [("parse-roundtrip", _roundtrip), ("order-independence", _order_independence), ("membership", _membership)],
    "jets": [("functoriality", _functoriality), ("truncation", _truncation), ("equivariance", _equivariance)],
    "blowup": [("factorization", _factorization), ("theta-compatibility", _compatibility)],
    "analysis": [("jd-superadditivity", _superadditivity), ("jd-local-embedding", _local_embedding)],
}


def run_suites(names=None, *, seed, samples: int = 20) -> list[CheckResult]:
    if seed is None:
        raise ValueError("a seed is required for property suites")
    names = list(SUITES) if names in (None, "all") else ([names] if isinstance(names, str) else list(names))
    results = []
    for suite in names:
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        for name, body in SUITES[suite]:
            rng = random.Random(f"jetcalc:verify:{seed}:{suite}:{name}")
            results.append(_run(suite, name, samples, rng, body))
    return results


__all__ = ["CheckResult", "SUITES", "run_suites"]
