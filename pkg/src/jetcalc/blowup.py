"""Blow-up of affine space at a point in standard charts: strict transforms,
the jet transfer map to the exceptional divisor, and induced chart maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import PolyMap, PolyRing, Polynomial, as_fraction, format_fraction
from .errors import ArityError, DomainError
from .jets import Jet, compose_series, multiplicity, prolong, series_inverse, series_mul


@dataclass(frozen=True)
class BlowupChart:
    """Standard chart ``index`` (1-based) of the blow-up of ``n``-space at
    ``translation``: ``x_index = u_index`` and ``x_j = u_index * u_j`` otherwise,
    after moving the centre to the origin.  Chart coordinates reuse the
    names of the source ring."""

    index: int
    n: int
    translation: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if not 1 <= self.index <= self.n:
            raise DomainError(f"chart index {self.index} outside 1..{self.n}", "blowup")
        tr = tuple(as_fraction(v) for v in self.translation) or (Fraction(0),) * self.n
        if len(tr) != self.n:
            raise ArityError("translation vector has the wrong length")
        object.__setattr__(self, "translation", tr)

    @property
    def pos(self) -> int:
        return self.index - 1

    def substitution(self, ring: PolyRing) -> PolyMap:
        if ring.nvars != self.n:
            raise ArityError(f"chart of {self.n}-space used on {ring}")
        gens = ring.gens()
        e = gens[self.pos]
        comps = [e if j == self.pos else e * g for j, g in enumerate(gens)]
        comps = [c + t for c, t in zip(comps, self.translation)]
        return PolyMap(ring, comps, ring)

    def exceptional_divisor(self, ring: PolyRing) -> Polynomial:
        return ring.gen(self.pos)

    def to_json(self) -> dict:
        return {"index": self.index, "translation": [format_fraction(v) for v in self.translation]}


@dataclass(frozen=True)
class StrictTransformResult:
    power: int
    transform: Polynomial


def _monomial_content(polys: Sequence[Polynomial]) -> tuple[int, ...]:
    exps = [e for p in polys for e in p.terms]
    if not exps:
        return ()
    return tuple(min(col) for col in zip(*exps))


def _divide_monomial(p: Polynomial, exp: Sequence[int]) -> Polynomial:
    return Polynomial._raw(p.ring, {tuple(a - b for a, b in zip(e, exp)): c for e, c in p.items()})


def strict_transform(h: Polynomial, chart: BlowupChart) -> StrictTransformResult:
    """Write ``h ∘ σ = u_i^s · h~`` with ``s`` maximal."""
    if h.is_zero():
        raise DomainError("strict transform of the zero polynomial", "blowup")
    if h.evaluate(chart.translation):
        raise DomainError(f"{h} does not vanish at the centre of the blow-up", "blowup")
    pulled = chart.substitution(h.ring).pullback(h)
    s = min(e[chart.pos] for e in pulled.terms)
    exp = [0] * h.nvars
    exp[chart.pos] = s
    return StrictTransformResult(s, _divide_monomial(pulled, exp))


# -- jet transfer to the blow-up ---------------------------------------------------


@dataclass(frozen=True)
class ThetaResult:
    chart: BlowupChart
    point: tuple[Fraction, ...]
    image: Jet
    multiplicity: int


def theta(j: Jet, l: int) -> ThetaResult:
    """Transfer a multiplicity-``m`` jet at the origin to an order-``l`` jet on
    the blow-up, ``([j_i]_l, [j_r / j_i]_l ...)``, where ``i`` is the first
    coordinate of t-order ``m`` and ``[a]_l`` keeps degrees ``<= l``."""
    m = multiplicity(j)
    if m is None:
        raise DomainError("the zero jet has no image on the blow-up", "blowup")
    k = j.order
    if not 0 <= l <= k - m:
        raise DomainError(f"order l={l} outside 0..{k - m} for multiplicity {m}", "blowup")
    i = next(r for r, c in enumerate(j.coords) if c.valuation() == m)
    unit = list(j.coords[i].coeffs[m:])
    inv = series_inverse(unit, l)
    rows = []
    for r, c in enumerate(j.coords):
        if r == i:
            rows.append(list(c.coeffs[: l + 1]))
        else:
            rows.append(series_mul(list(c.coeffs[m:]), inv, l, Fraction(0)))
    image = Jet.from_lists(rows)
    chart = BlowupChart(i + 1, j.arity)
    return ThetaResult(chart, image.base_point, image, m)


# -- induced maps between charts ---------------------------------------------------


@dataclass(frozen=True)
class ChartMap:
    """A rational map on a chart, one numerator/denominator pair per component."""

    ring: PolyRing
    numerators: tuple[Polynomial, ...]
    denominators: tuple[Polynomial, ...]
    source_chart: BlowupChart
    target_chart: BlowupChart

    def __len__(self):
        return len(self.numerators)

    def is_regular_at(self, point: Sequence) -> bool:
        return all(d.evaluate(point) for d in self.denominators)

    def __call__(self, point: Sequence) -> tuple[Fraction, ...]:
        if not self.is_regular_at(point):
            raise DomainError("chart map is not regular at this point", "blowup")
        return tuple(n.evaluate(point) / d.evaluate(point) for n, d in zip(self.numerators, self.denominators))

    def as_polymap(self) -> PolyMap:
        if not all(d.is_constant() for d in self.denominators):
            raise DomainError("chart map has non-constant denominators", "blowup")
        comps = [n * (1 / d.constant_term()) for n, d in zip(self.numerators, self.denominators)]
        return PolyMap(self.ring, comps)

    def prolong(self, j: Jet) -> Jet:
        """Apply the map to a jet at a point where it is regular."""
        if not self.is_regular_at(j.base_point):
            raise DomainError("chart map is not regular at the jet's base point", "blowup")
        k = j.order
        series = [c.coeffs for c in j.coords]
        zero, one = Fraction(0), Fraction(1)
        rows = []
        for n, d in zip(self.numerators, self.denominators):
            num = compose_series(n, series, k, one, zero)
            den = compose_series(d, series, k, one, zero)
            rows.append(series_mul(num, series_inverse(den, k), k, zero))
        return Jet.from_lists(rows)

    def to_json(self) -> list[dict]:
        return [{"numerator": str(n), "denominator": str(d)} for n, d in zip(self.numerators, self.denominators)]

    def __str__(self):
        parts = []
        for n, d in zip(self.numerators, self.denominators):
            parts.append(str(n) if d == 1 else f"({n})/({d})")
        return "(" + ", ".join(parts) + ")"


def induced_chart_map(phi: PolyMap, source_chart: BlowupChart, target_chart: BlowupChart) -> ChartMap:
    """The map ``ψ`` of blow-ups induced by ``phi``: in the given charts its
    components are ``Φ_i0`` and ``Φ_r / Φ_i0`` with ``Φ = φ ∘ σ``, common
    monomial factors cancelled."""
    if any(phi(source_chart.translation)):
        raise DomainError("the map must send the centre to the origin", "blowup")
    if target_chart.n != phi.target_dim or source_chart.n != phi.source_dim:
        raise ArityError("chart dimensions do not match the map")
    sigma = source_chart.substitution(phi.source)
    big = [c.compose(sigma.components, phi.source) for c in phi.components]
    i0 = target_chart.pos
    lead = big[i0]
    if lead.is_zero():
        raise DomainError("leading coordinate of the map vanishes identically on the chart", "blowup")
    one = phi.source.one
    nums, dens = [], []
    for r, p in enumerate(big):
        if r == i0:
            nums.append(lead)
            dens.append(one)
            continue
        if p.is_zero():
            nums.append(p)
            dens.append(one)
            continue
        common = _monomial_content([p, lead])
        num, den = _divide_monomial(p, common), _divide_monomial(lead, common)
        if den.is_constant():
            num, den = num * (1 / den.constant_term()), one
        nums.append(num)
        dens.append(den)
    return ChartMap(phi.source, tuple(nums), tuple(dens), source_chart, target_chart)


@dataclass(frozen=True)
class Compatibility:
    lhs: Jet
    rhs: Jet
    chart_map: ChartMap

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def theta_compatibility(phi: PolyMap, j: Jet, l: int, allow_jump: bool = False) -> Compatibility:
    """Both sides of ``θ(φ^(k)(j)) = ψ^(l)(θ(j))``.

    When the multiplicity of ``φ^(k)(j)`` differs from that of ``j`` this
    declines with :class:`DomainError`, unless ``allow_jump`` is set, in which
    case the target side uses its own multiplicity (``l`` must then also fit
    the target's range).
    """
    image = prolong(phi, j)
    m = multiplicity(j)
    if multiplicity(image) != m and not allow_jump:
        raise DomainError("multiplicity jump: the map changes the multiplicity of the jet", "blowup")
    src = theta(j, l)
    tgt = theta(image, l)
    psi = induced_chart_map(phi, src.chart, tgt.chart)
    return Compatibility(tgt.image, psi.prolong(src.image), psi)


@dataclass
class BlowupSequence:
    """Iterated blow-ups at infinitely near points, as a list of chart records
    (each chart carries the translation that re-roots its centre)."""

    ring: PolyRing
    charts: list[BlowupChart] = field(default_factory=list)

    def blow_up(self, index: int, centre: Sequence | None = None) -> "BlowupSequence":
        centre = centre if centre is not None else [0] * self.ring.nvars
        return BlowupSequence(self.ring, self.charts + [BlowupChart(index, self.ring.nvars, tuple(centre))])

    def substitution(self) -> PolyMap:
        """Composite map from the last chart back to the original space."""
        out = PolyMap.identity(self.ring)
        for chart in self.charts:
            out = out.compose(chart.substitution(self.ring))
        return out

    def strict_transform(self, h: Polynomial) -> StrictTransformResult:
        power = 0
        for chart in self.charts:
            res = strict_transform(h, chart)
            power += res.power
            h = res.transform
        return StrictTransformResult(power, h)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.charts]
