from fractions import Fraction

import pytest
import sympy

from conftest import to_sympy
from jetcalc.algebra import PolyMap, PolyRing
from jetcalc.errors import ArityError, DomainError
from jetcalc.jets import (
    Jet,
    coefficient_map,
    image_dimension,
    multiplicity,
    prolong,
    scale_jet,
    truncate,
)
from jetcalc.randgen import random_jet, random_map

SEED = 11


def J(*rows):
    return Jet.from_lists(rows)


def sympy_prolong(phi: PolyMap, j: Jet) -> Jet:
    t = sympy.Symbol("t")
    syms = sympy.symbols(phi.source.names)
    arcs = {s: sum(sympy.Rational(c.numerator, c.denominator) * t**d for d, c in enumerate(row)) for s, row in zip(syms, j.as_lists())}
    rows = []
    for comp in phi:
        expr = sympy.expand(to_sympy(comp).as_expr().subs(arcs, simultaneous=True))
        poly = sympy.Poly(expr, t) if expr != 0 else sympy.Poly(0, t)
        rows.append([Fraction(str(poly.coeff_monomial(t**d))) for d in range(j.order + 1)])
    return Jet.from_lists(rows)


# -- truncation, prolongation, multiplicity -------------------------------------------


def test_truncate_examples():
    assert truncate(J([0, 1, 0, 1], [0, 0, 1, 0]), 1) == J([0, 1], [0, 0])
    j = J([1, 2, 3], [4, 5, 6])
    assert truncate(j, j.order) == j
    assert truncate(J([1, 0, 1], [0, 2, 0]), 0) == J([1], [0])
    with pytest.raises(DomainError):
        truncate(j, 3)


def test_prolong_examples(R2):
    x, y = R2.gens()
    assert prolong(PolyMap(R2, [x, x * y]), J([0, 1, 0], [0, 1, 1])) == J([0, 1, 0], [0, 0, 1])
    assert prolong(PolyMap(R2, [x**2, x * y]), J([0, 1, 0, 0], [0, 0, 1, 0])) == J([0, 0, 1, 0], [0, 0, 0, 1])


def test_prolong_arity_mismatch(R2):
    with pytest.raises(ArityError):
        prolong(PolyMap.identity(R2), J([0, 1]))


def test_prolong_matches_sympy(rng):
    for n in (1, 2, 3):
        ring = PolyRing(["x", "y", "z"][:n])
        for _ in range(10):
            phi = random_map(ring, rng, degree=3)
            j = random_jet(n, rng.randint(1, 4), rng)
            assert prolong(phi, j) == sympy_prolong(phi, j)


def test_multiplicity_examples():
    assert multiplicity(J([0, 0, 1, 0], [0, 0, 0, 1])) == 2
    assert multiplicity(J([0, 1, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1])) == 1
    assert multiplicity(Jet.zero(2, 3)) is None
    with pytest.raises(DomainError):
        multiplicity(J([1, 1], [0, 0]))


def test_scale_examples():
    j = J([0, 1, 0], [0, 0, 1])
    assert scale_jet(j, 2) == J([0, 2, 0], [0, 0, 4])
    assert scale_jet(scale_jet(j, 3), Fraction(1, 2)) == scale_jet(j, Fraction(3, 2))


def test_jet_json_roundtrip():
    j = J([Fraction(1, 2), 0, -3], [0, 1, Fraction(7, 5)])
    assert j.to_json() == [["1/2", "0", "-3"], ["0", "1", "7/5"]]
    assert Jet.from_json(j.to_json()) == j


# -- structural identities ---------------------------------------------------------


def _triples(rng, count):
    for _ in range(count):
        n = rng.randint(1, 3)
        ring = PolyRing(["x", "y", "z"][:n])
        yield ring, random_map(ring, rng, degree=3), random_map(ring, rng, degree=3), random_jet(n, rng.randint(1, 4), rng)


def test_functoriality(rng):
    for _, phi, psi, j in _triples(rng, 100):
        assert prolong(phi.compose(psi), j) == prolong(phi, prolong(psi, j))


def test_truncation_compatibility(rng):
    for _, phi, _, j in _triples(rng, 100):
        for l in range(j.order + 1):
            assert truncate(prolong(phi, j), l) == prolong(phi, truncate(j, l))


def test_equivariance(rng):
    for _, phi, _, j in _triples(rng, 100):
        lam = Fraction(rng.choice([-3, -2, 2, 3]), rng.choice([1, 2, 5]))
        base = j.base_point
        # the C*-action on jets fixes the base point; phi is re-centred so the
        # image stays comparable
        phi0 = phi.translate(base)
        j0 = j.shifted([-b for b in base])
        assert prolong(phi0, scale_jet(j0, lam)) == scale_jet(prolong(phi0, j0), lam)


def test_homogeneous_maps_factor_through_lower_order(rng):
    for _ in range(25):
        n = rng.randint(1, 3)
        ring = PolyRing(["x", "y", "z"][:n])
        s = rng.randint(1, 3)
        phi = random_map(ring, rng, homogeneous=s)
        k = rng.randint(s, 4)
        j1 = random_jet(n, k - 1, rng)
        j = Jet.from_lists([[0] + row for row in j1.as_lists()])
        lhs = prolong(phi, j)
        low = prolong(phi, truncate(j1, k - s))
        expected = Jet.from_lists([[0] * s + row for row in low.as_lists()])
        assert lhs == expected
        m = multiplicity(lhs)
        assert m is None or m >= s


# -- coefficient maps and generic rank ----------------------------------------------


def test_coefficient_map_examples(R2):
    x, y = R2.gens()
    cm = coefficient_map(PolyMap(R2, [x, x * y]), 1, (0, 0))
    assert [str(c) for c in cm.components] == ["x_1", "0"]
    cm = coefficient_map(PolyMap(R2, [x, x * y]), 2, (0, 0))
    assert [str(c) for c in cm.components] == ["x_1", "x_2", "0", "x_1*y_1"]
    cm = coefficient_map(PolyMap.identity(R2), 3, (0, 0))
    assert list(cm.components) == list(cm.ring.gens())


def test_coefficient_map_evaluates_as_prolongation(rng):
    ring = PolyRing(["x", "y"])
    for _ in range(10):
        phi = random_map(ring, rng, degree=2)
        base = (rng.randint(-2, 2), rng.randint(-2, 2))
        cm = coefficient_map(phi, 3, base)
        coeffs = [rng.randint(-4, 4) for _ in range(cm.source_dim)]
        image = prolong(phi, cm.jet_of(coeffs))
        assert list(cm(coeffs)) == [c for row in image.as_lists() for c in row[1:]]
        assert image.base_point == cm.image_base


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_identity_image_dimension(n, k):
    ring = PolyRing(["x", "y", "z"][:n])
    assert image_dimension(coefficient_map(PolyMap.identity(ring), k, [0] * n), seed=SEED) == k * n


def test_image_dimension_examples(R2):
    x, y = R2.gens()
    phi = PolyMap(R2, [x, x * y])
    assert image_dimension(coefficient_map(phi, 1, (0, 0)), seed=SEED) == 1
    assert image_dimension(coefficient_map(phi, 1, (1, 1)), seed=SEED) == 2
    assert image_dimension(coefficient_map(phi, 2, (0, 0)), seed=SEED) == 3


def test_image_dimension_requires_seed(R2):
    with pytest.raises(ValueError):
        image_dimension(coefficient_map(PolyMap.identity(R2), 1, (0, 0)), seed=None)


def test_image_dimension_is_deterministic(R2, rng):
    phi = random_map(R2, rng, degree=3, fix_origin=True)
    cm = coefficient_map(phi, 3, (0, 0))
    assert len({image_dimension(cm, seed="abc") for _ in range(3)}) == 1


def test_image_dimension_is_monotone_under_composition(rng):
    ring = PolyRing(["x", "y"])
    for _ in range(15):
        psi = random_map(ring, rng, degree=2, fix_origin=True)
        phi = random_map(ring, rng, degree=2, fix_origin=True)
        k = rng.randint(1, 3)
        inner = image_dimension(coefficient_map(psi, k, (0, 0)), seed=SEED)
        outer = image_dimension(coefficient_map(phi.compose(psi), k, (0, 0)), seed=SEED)
        assert outer <= inner
