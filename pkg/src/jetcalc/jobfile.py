"""Reader for ``jetcalc/1`` job files.

A job file is line oriented.  The first meaningful line is the header
``jetcalc/1``; ``#`` starts a comment.  Statements::

    space R = x, y
    variety C in R = y^2 - x^3 @ 0, 0
    poly h in R = y^2 - x^3
    ideal I in R = x*y, y^2
    map g: R -> R = x, x*y
    jet j in R = [0, 0, 1], [0, 0, 0, 1]
    divisor D in R = x
    set seed = 7
    command tangent-cone variety=C

Each coordinate of a jet lists its coefficients from degree 0 upwards.
Exactly one ``command`` line is required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Ideal, PolyMap, PolyRing, Polynomial, parse_polynomial
from .analysis import DivisorCandidate
from .errors import JetcalcError, ParseError
from .jets import Jet
from .varieties import AffineVariety

HEADER = "jetcalc/1"

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_DECL = re.compile(rf"^(space|variety|poly|ideal|jet|divisor)\s+({_NAME})(?:\s+in\s+({_NAME}))?\s*=")
_MAP = re.compile(rf"^map\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*=")
_SET = re.compile(r"^set\s+([A-Za-z_][A-Za-z_0-9-]*)\s*=\s*(\S.*?)\s*$")
_COMMAND = re.compile(r"^command\s+([a-z][a-z-]*)")
_PARAM = re.compile(r"([A-Za-z_][A-Za-z_0-9-]*)=(\S+)")


@dataclass
class Job:
    objects: dict[str, tuple[str, object]] = field(default_factory=dict)
    settings: dict[str, str] = field(default_factory=dict)
    command: str | None = None
    params: dict[str, str] = field(default_factory=dict)
    command_line: int | None = None

    def get(self, name: str, kind: str | tuple[str, ...]):
        kinds = (kind,) if isinstance(kind, str) else kind
        if name not in self.objects:
            raise ParseError(f"undeclared name {name!r}", line=self.command_line)
        found, obj = self.objects[name]
        if found not in kinds:
            raise ParseError(f"{name!r} is a {found}, expected {' or '.join(kinds)}", line=self.command_line)
        return obj


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _split(text: str, offset: int, sep: str = ","):
    """Split ``text`` on ``sep``, yielding stripped pieces with their columns."""
    pos = 0
    for piece in text.split(sep):
        lead = len(piece) - len(piece.lstrip())
        yield piece.strip(), offset + pos + lead
        pos += len(piece) + 1


def _poly(text: str, ring: PolyRing, col: int, lineno: int) -> Polynomial:
    try:
        return parse_polynomial(text, ring)
    except ParseError as exc:
        raise ParseError(exc.reason, (exc.position or 0) + col, lineno) from None


def _polys(text: str, ring: PolyRing, col: int, lineno: int) -> list[Polynomial]:
    out = []
    for piece, c in _split(text, col):
        if not piece:
            raise ParseError("empty entry in list", c, lineno)
        out.append(_poly(piece, ring, c, lineno))
    return [p for p in out if not p.is_zero()]


def parse_rational(text: str, col: int = 0, lineno: int | None = None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text.strip()!r}", col, lineno) from None


def parse_point(text: str, col: int = 0, lineno: int | None = None) -> list[Fraction]:
    return [parse_rational(piece, c, lineno) for piece, c in _split(text, col)]


def _jet(text: str, n: int, col: int, lineno: int) -> Jet:
    rows = []
    for m in re.finditer(r"\[([^\]]*)\]", text):
        rows.append(parse_point(m.group(1), col + m.start(1), lineno))
    rest = re.sub(r"\[[^\]]*\]", "", text).replace(",", "").strip()
    if rest or not rows:
        raise ParseError("jet must be a comma-separated list of [coefficients]", col, lineno)
    if len(rows) != n:
        raise ParseError(f"jet has {len(rows)} coordinates, its space has {n}", col, lineno)
    if len({len(r) for r in rows}) != 1:
        raise ParseError("jet coordinates must have equal length", col, lineno)
    return Jet.from_lists(rows)


def parse_job(text: str) -> Job:
    job = Job()
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if not seen_header:
            if body != HEADER:
                raise ParseError(f"expected header {HEADER!r}", indent, lineno)
            seen_header = True
            continue
        try:
            _statement(job, body, indent, lineno)
        except ParseError:
            raise
        except JetcalcError as exc:
            exc.args = (f"line {lineno}: {exc}",)
            raise
    if not seen_header:
        raise ParseError(f"missing header {HEADER!r}", 0, 1)
    if job.command is None:
        raise ParseError("no command given")
    return job


def _declare(job: Job, name: str, kind: str, obj, col: int, lineno: int):
    if name in job.objects:
        raise ParseError(f"name {name!r} already declared", col, lineno)
    job.objects[name] = (kind, obj)


def _space(job: Job, name: str, col: int, lineno: int) -> PolyRing:
    if name not in job.objects or job.objects[name][0] != "space":
        raise ParseError(f"undeclared space {name!r}", col, lineno)
    return job.objects[name][1]


def _statement(job: Job, body: str, indent: int, lineno: int):
    m = _MAP.match(body)
    if m:
        name, src, dst = m.groups()
        source = _space(job, src, indent + m.start(2), lineno)
        target = _space(job, dst, indent + m.start(3), lineno)
        pieces = list(_split(body[m.end():], indent + m.end()))
        comps = [_poly(p, source, c, lineno) for p, c in pieces]
        if len(comps) != target.nvars:
            raise ParseError(f"map {name} has {len(comps)} components, {dst} has dimension {target.nvars}", indent, lineno)
        _declare(job, name, "map", PolyMap(source, comps, target), indent, lineno)
        return
    m = _DECL.match(body)
    if m:
        kind, name, space = m.groups()
        rhs = body[m.end():]
        col = indent + m.end()
        if kind == "space":
            if space is not None:
                raise ParseError("a space is not declared in another space", indent, lineno)
            names = [p for p, _ in _split(rhs, col)]
            for p, c in _split(rhs, col):
                if not re.fullmatch(_NAME, p):
                    raise ParseError(f"invalid variable name {p!r}", c, lineno)
            if len(set(names)) != len(names):
                raise ParseError("repeated variable name", col, lineno)
            _declare(job, name, "space", PolyRing(names), indent, lineno)
            return
        if space is None:
            raise ParseError(f"{kind} declarations need 'in SPACE'", indent, lineno)
        ring = _space(job, space, indent + m.start(3), lineno)
        if kind == "variety":
            point = None
            if "@" in rhs:
                at = rhs.index("@")
                point = parse_point(rhs[at + 1:], col + at + 1, lineno)
                if len(point) != ring.nvars:
                    raise ParseError(f"base point has {len(point)} entries, {space} has {ring.nvars}", col + at + 1, lineno)
                rhs = rhs[:at]
            gens = _polys(rhs, ring, col, lineno) if rhs.strip() else []
            _declare(job, name, "variety", AffineVariety(ring, gens, point), indent, lineno)
        elif kind == "poly":
            _declare(job, name, "poly", _poly(rhs, ring, col, lineno), indent, lineno)
        elif kind == "ideal":
            _declare(job, name, "ideal", Ideal(ring, _polys(rhs, ring, col, lineno)), indent, lineno)
        elif kind == "divisor":
            _declare(job, name, "divisor", DivisorCandidate(Ideal(ring, _polys(rhs, ring, col, lineno))), indent, lineno)
        elif kind == "jet":
            _declare(job, name, "jet", (_jet(rhs, ring.nvars, col, lineno), ring), indent, lineno)
        return
    m = _SET.match(body)
    if m:
        job.settings[m.group(1)] = m.group(2)
        return
    m = _COMMAND.match(body)
    if m:
        if job.command is not None:
            raise ParseError("only one command per job", indent, lineno)
        job.command = m.group(1)
        job.command_line = lineno
        rest = body[m.end():]
        pos = 0
        for pm in _PARAM.finditer(rest):
            gap = rest[pos:pm.start()]
            if gap.strip():
                raise ParseError(f"expected key=value, found {gap.strip()!r}", indent + m.end() + pos, lineno)
            job.params[pm.group(1)] = pm.group(2)
            pos = pm.end()
        if rest[pos:].strip():
            raise ParseError(f"expected key=value, found {rest[pos:].strip()!r}", indent + m.end() + pos, lineno)
        return
    raise ParseError(f"unrecognized statement {body.split()[0]!r}", indent, lineno)
