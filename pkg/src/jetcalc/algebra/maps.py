"""Polynomial maps between affine spaces."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import ArityError
from .polynomial import Polynomial, PolyRing, as_fraction


class PolyMap:
    """A morphism ``source -> target`` given by coordinate polynomials.

    ``components[i]`` is the pull-back of the i-th target coordinate, a
    polynomial in the source ring.
    """

    __slots__ = ("source", "target", "components")

    def __init__(self, source: PolyRing, components: Sequence, target: PolyRing | None = None):
        comps = tuple(source.parse(c) if isinstance(c, str) else source.coerce(c) for c in components)
        if target is None:
            target = PolyRing(f"y{i + 1}" for i in range(len(comps)))
        if target.nvars != len(comps):
            raise ArityError(f"{len(comps)} components for a target of dimension {target.nvars}")
        self.source = source
        self.target = target
        self.components = comps

    @classmethod
    def identity(cls, ring: PolyRing, target: PolyRing | None = None) -> "PolyMap":
        return cls(ring, ring.gens(), target or ring)

    @property
    def source_dim(self) -> int:
        return self.source.nvars

    @property
    def target_dim(self) -> int:
        return self.target.nvars

    def is_equidimensional(self) -> bool:
        return self.source_dim == self.target_dim

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMap)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.source, self.target, self.components))

    def __repr__(self):
        return "PolyMap(" + ", ".join(map(str, self.components)) + ")"

    def __call__(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(point) for c in self.components)

    def pullback(self, p: Polynomial) -> Polynomial:
        """``p ∘ self`` for ``p`` a polynomial on the target."""
        if p.ring != self.target:
            p = p.to_ring(self.target)
        return p.compose(self.components, self.source)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """``self ∘ inner``."""
        if inner.target_dim != self.source_dim:
            raise ArityError(f"cannot compose: inner lands in dim {inner.target_dim}, outer starts in {self.source_dim}")
        comps = [c.compose(inner.components, inner.source) for c in self.components]
        return PolyMap(inner.source, comps, self.target)

    def iterate(self, s: int) -> "PolyMap":
        if s < 0:
            raise ValueError("iterate count must be nonnegative")
        if s == 0:
            return PolyMap.identity(self.source, self.target)
        out = self
        for _ in range(s - 1):
            out = self.compose(out)
        return out

    def translate(self, source_point: Sequence, target_point: Sequence | None = None) -> "PolyMap":
        """Conjugate by translations so both points become origins:
        ``v -> self(v + source_point) - target_point``."""
        if target_point is None:
            target_point = self(source_point)
        comps = [c.translate(source_point) - as_fraction(b) for c, b in zip(self.components, target_point)]
        return PolyMap(self.source, comps, self.target)

    def jacobian(self) -> list[list[Polynomial]]:
        return [[c.diff(i) for i in range(self.source_dim)] for c in self.components]

    def jacobian_at(self, point: Sequence) -> list[list[Fraction]]:
        return [[d.evaluate(point) for d in row] for row in self.jacobian()]


def polynomial_determinant(matrix: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    """Determinant by cofactor expansion with memoised minors."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ArityError("determinant of a non-square matrix")
    if n == 0:
        return ring.one
    cache: dict[tuple[int, frozenset], Polynomial] = {}

    def minor(row, cols):
        if row == n:
            return ring.one
        key = (row, cols)
        if key in cache:
            return cache[key]
        total = ring.zero
        ordered = sorted(cols)
        for pos, col in enumerate(ordered):
            entry = matrix[row][col]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols - {col})
            if sub.is_zero():
                continue
            term = entry * sub
            total = total - term if pos % 2 else total + term
        cache[key] = total
        return total

    return minor(0, frozenset(range(n)))


def jacobian_det(phi: PolyMap) -> Polynomial:
    """Exact symbolic determinant of the Jacobi matrix of an equidimensional map."""
    if not phi.is_equidimensional():
        raise ArityError(
            f"Jacobian determinant needs an equidimensional map, got {phi.source_dim} -> {phi.target_dim}"
        )
    return polynomial_determinant(phi.jacobian(), phi.source)
