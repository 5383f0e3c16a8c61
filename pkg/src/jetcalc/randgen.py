"""Seeded random generators for polynomials, maps and jets."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .algebra import PolyMap, PolyRing, Polynomial
from .jets import Jet


def _monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def random_polynomial(
    ring: PolyRing,
    rng: random.Random,
    degree: int = 3,
    terms: int = 4,
    coeff: int = 5,
    *,
    min_degree: int = 0,
    homogeneous: int | None = None,
    rational: bool = False,
) -> Polynomial:
    """Sum of ``terms`` random monomials with nonzero coefficients in ``[-coeff, coeff]``."""
    if homogeneous is not None:
        pool = _monomials(ring.nvars, homogeneous)
    else:
        pool = [e for d in range(min_degree, degree + 1) for e in _monomials(ring.nvars, d)]
    out = {}
    for _ in range(terms):
        e = rng.choice(pool)
        c = Fraction(rng.choice([v for v in range(-coeff, coeff + 1) if v]))
        if rational and rng.random() < 0.3:
            c /= rng.randint(2, 4)
        out[e] = out.get(e, 0) + c
    return Polynomial(ring, out)


def random_map(
    source: PolyRing,
    rng: random.Random,
    target_dim: int | None = None,
    degree: int = 3,
    terms: int = 3,
    *,
    fix_origin: bool = False,
    homogeneous: int | None = None,
    target: PolyRing | None = None,
) -> PolyMap:
    target_dim = target.nvars if target is not None else (target_dim or source.nvars)
    comps = [
        random_polynomial(source, rng, degree, terms, min_degree=1 if fix_origin else 0, homogeneous=homogeneous)
        for _ in range(target_dim)
    ]
    return PolyMap(source, comps, target)


def random_jet(n: int, k: int, rng: random.Random, base: Sequence | None = None, coeff: int = 5) -> Jet:
    base = base if base is not None else [rng.randint(-coeff, coeff) for _ in range(n)]
    rows = [[base[i]] + [rng.randint(-coeff, coeff) for _ in range(k)] for i in range(n)]
    return Jet.from_lists(rows)


def random_linear_automorphism(ring: PolyRing, rng: random.Random, coeff: int = 4) -> PolyMap:
    """A random invertible linear map (rejection sampling on the determinant)."""
    from .algebra import linalg

    n = ring.nvars
    while True:
        mat = [[rng.randint(-coeff, coeff) for _ in range(n)] for _ in range(n)]
        if linalg.rank(mat) == n:
            break
    gens = ring.gens()
    comps = [sum((c * x for c, x in zip(row, gens)), ring.zero) for row in mat]
    return PolyMap(ring, comps, ring)
