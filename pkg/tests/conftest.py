import random

import pytest
import sympy

from jetcalc.algebra import PolyRing, Polynomial


@pytest.fixture
def R2():
    return PolyRing(["x", "y"])


@pytest.fixture
def R3():
    return PolyRing(["x", "y", "z"])


@pytest.fixture
def rng():
    return random.Random(20261014)


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.ring.names)
    expr = sympy.Integer(0)
    for exp, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exp):
            term *= s**e
        expr += term
    return sympy.Poly(expr, *syms, domain="QQ")


def from_sympy(poly, ring: PolyRing) -> Polynomial:
    from fractions import Fraction

    terms = {}
    for monom, coeff in poly.terms():
        terms[tuple(monom)] = Fraction(int(coeff.p), int(coeff.q))
    return Polynomial(ring, terms)


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
