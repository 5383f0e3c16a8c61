"""Exact polynomial algebra: rings, Groebner bases, elimination, dimension."""

from .groebner import (
    DEFAULT_LIMITS,
    GroebnerBasis,
    Ideal,
    Limits,
    eliminate,
    groebner_basis,
    ideal_dimension,
    initial_form,
    normal_form,
)
from .maps import PolyMap, jacobian_det
from .orders import MonomialOrder, block, grevlex, lex, order_from_tag
from .parsing import parse_polynomial
from .polynomial import Polynomial, PolyRing, as_fraction, format_fraction

__all__ = [
    "DEFAULT_LIMITS",
    "GroebnerBasis",
    "Ideal",
    "Limits",
    "MonomialOrder",
    "PolyMap",
    "PolyRing",
    "Polynomial",
    "as_fraction",
    "block",
    "eliminate",
    "format_fraction",
    "grevlex",
    "groebner_basis",
    "ideal_dimension",
    "initial_form",
    "jacobian_det",
    "lex",
    "normal_form",
    "order_from_tag",
    "parse_polynomial",
]
