"""Monomial orders, represented by sort keys on exponent tuples.

A larger key means a larger monomial.  Keys are tuples of ints so they can
be compared and negated cheaply.
"""

from __future__ import annotations


class MonomialOrder:
    """A named monomial order with a key function."""

    __slots__ = ("name", "key")

    def __init__(self, name, key):
        self.name = name
        self.key = key

    def __repr__(self):
        return f"MonomialOrder({self.name})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


def _grevlex(exp):
    return (sum(exp),) + tuple(-e for e in reversed(exp))


def _lex(exp):
    return tuple(exp)


grevlex = MonomialOrder("grevlex", _grevlex)
lex = MonomialOrder("lex", _lex)


def block(k: int) -> MonomialOrder:
    """Elimination order: grevlex on the first ``k`` variables, ties broken by
    grevlex on the rest.  Any monomial involving the first block beats every
    monomial free of it, which is what elimination needs."""

    def key(exp):
        return _grevlex(exp[:k]) + _grevlex(exp[k:])

    return MonomialOrder(f"block{k}", key)


def low_degree_homogenizing() -> MonomialOrder:
    """Order on Q[x_1..x_n, t] (t last) used for tangent cones.

    Total degree first, then a *higher* power of ``t`` wins, then grevlex on
    the x-part.  On homogenized polynomials this ranks the terms coming from
    the lowest-degree form highest, i.e. it is the homogenization of the local
    degree order.
    """

    def key(exp):
        return (sum(exp), exp[-1]) + _grevlex(exp[:-1])

    return MonomialOrder("lowdeg-homogenizing", key)


ORDER_TAGS = {"grevlex": grevlex, "degrevlex": grevlex, "lex": lex}


def order_from_tag(tag) -> MonomialOrder:
    """Resolve ``"grevlex"``, ``"lex"`` or ``"block:<k>"``."""
    if isinstance(tag, MonomialOrder):
        return tag
    tag = str(tag).strip().lower()
    if tag in ORDER_TAGS:
        return ORDER_TAGS[tag]
    if tag.startswith("block:") or tag.startswith("elim:"):
        return block(int(tag.split(":", 1)[1]))
    raise ValueError(f"unknown monomial order {tag!r}")
