"""Command-line front end: ``jetcalc JOBFILE [options]``.

Exit status is 0 on success, 1 when ``--fail-fast`` is given and the
command produced findings (failed property checks, a non-commuting square,
or an exceptional divisor), and 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import __version__
from .algebra import Limits, eliminate, format_fraction, groebner_basis, ideal_dimension, initial_form, jacobian_det, normal_form, order_from_tag
from .analysis import EndoInstance, analyze, jd
from .blowup import BlowupChart, induced_chart_map, strict_transform, theta
from .errors import JetcalcError, ParseError
from .jets import DEFAULT_BOUND, DEFAULT_TRIALS, coefficient_map, image_dimension, multiplicity, prolong
from .jobfile import Job, parse_job, parse_point
from .varieties import jet_constraint, lift_jet, stratum_dimension, tangent_cone
from .verify import run_suites

REPORT_FORMAT = "jetcalc-report/1"

DEFAULTS = {
    "order": "grevlex",
    "max-degree": 120,
    "max-basis": 1500,
    "trials": DEFAULT_TRIALS,
    "bound": DEFAULT_BOUND,
    "buffer": None,  # k + 4 when unset
    "seed": None,
}
_INT_KEYS = ("max-degree", "max-basis", "trials", "bound", "buffer")


@dataclass
class Config:
    order: str
    limits: Limits
    trials: int
    bound: int
    buffer: int | None
    seed: object

    def require_seed(self):
        if self.seed is None:
            raise ParseError("this command is randomized: pass --seed or 'set seed = N'")
        return self.seed

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "max-degree": self.limits.max_degree,
            "max-basis": self.limits.max_basis,
            "trials": self.trials,
            "bound": self.bound,
            "buffer": self.buffer if self.buffer is not None else "k+4",
            "seed": self.seed,
        }


def _seed_value(text):
    if text is None:
        return None
    text = str(text).strip()
    try:
        return int(text)
    except ValueError:
        return text


def build_config(job: Job, args: argparse.Namespace) -> Config:
    values = dict(DEFAULTS)
    for key, value in job.settings.items():
        if key not in values:
            raise ParseError(f"unknown setting {key!r}")
        values[key] = value
    for key in values:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            values[key] = flag
    for key in _INT_KEYS:
        if values[key] is not None:
            try:
                values[key] = int(values[key])
            except ValueError:
                raise ParseError(f"setting {key} must be an integer") from None
    order_from_tag(values["order"])
    limits = Limits(max_basis=values["max-basis"], max_degree=values["max-degree"])
    return Config(values["order"], limits, values["trials"], values["bound"], values["buffer"], _seed_value(values["seed"]))


# -- parameter helpers -------------------------------------------------------------


def _param(job: Job, key: str, default=None, required=True):
    if key in job.params:
        return job.params[key]
    if default is not None or not required:
        return default
    raise ParseError(f"command {job.command} needs parameter {key}=...", line=job.command_line)


def _int(job: Job, key: str, default=None) -> int:
    raw = _param(job, key, default)
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ParseError(f"parameter {key} must be an integer", line=job.command_line) from None


def _point(job: Job, key: str, n: int):
    raw = job.params.get(key)
    if raw is None:
        return None
    pt = parse_point(raw, 0, job.command_line)
    if len(pt) != n:
        raise ParseError(f"parameter {key} has {len(pt)} entries, expected {n}", line=job.command_line)
    return pt


def _frac_list(values) -> list[str]:
    return [format_fraction(Fraction(v)) for v in values]


def _strs(polys) -> list[str]:
    return [str(p) for p in polys]


# -- commands ----------------------------------------------------------------------


def cmd_gb(job, cfg):
    ideal = job.get(_param(job, "ideal"), "ideal")
    order = _param(job, "order", cfg.order)
    gb = groebner_basis(ideal, order, cfg.limits)
    return {"order": gb.order.name, "basis": _strs(gb.basis)}, False


def cmd_nf(job, cfg):
    p = job.get(_param(job, "poly"), "poly")
    ideal = job.get(_param(job, "ideal"), "ideal")
    gb = groebner_basis(ideal, _param(job, "order", cfg.order), cfg.limits)
    r = normal_form(p, gb)
    return {"normal_form": str(r), "member": r.is_zero()}, False


def cmd_eliminate(job, cfg):
    ideal = job.get(_param(job, "ideal"), "ideal")
    drop = [v.strip() for v in _param(job, "drop").split(",") if v.strip()]
    for v in drop:
        if v not in ideal.ring:
            raise ParseError(f"unknown variable {v!r} in drop", line=job.command_line)
    out = eliminate(ideal, drop, cfg.limits)
    return {"ring": list(out.ring.names), "ideal": _strs(out.gens)}, False


def _ideal_of(job):
    if "variety" in job.params:
        return job.get(job.params["variety"], "variety").ideal
    return job.get(_param(job, "ideal"), "ideal")


def cmd_dim(job, cfg):
    return {"dimension": ideal_dimension(_ideal_of(job), cfg.limits)}, False


def cmd_initial_form(job, cfg):
    p = job.get(_param(job, "poly"), "poly")
    return {"initial_form": str(initial_form(p))}, False


def cmd_jacobian(job, cfg):
    phi = job.get(_param(job, "map"), "map")
    out = {"matrix": [_strs(row) for row in phi.jacobian()]}
    if phi.is_equidimensional():
        out["determinant"] = str(jacobian_det(phi))
    at = _point(job, "at", phi.source_dim)
    if at is not None:
        out["at"] = [_frac_list(row) for row in phi.jacobian_at(at)]
    return out, False


def cmd_jet_prolong(job, cfg):
    phi = job.get(_param(job, "map"), "map")
    j, _ = job.get(_param(job, "jet"), "jet")
    image = prolong(phi, j)
    return {"jet": image.to_json(), "text": str(image)}, False


def cmd_jet_dim(job, cfg):
    phi = job.get(_param(job, "map"), "map")
    k = _int(job, "k")
    variety = job.get(job.params["variety"], "variety") if "variety" in job.params else None
    base = _point(job, "at", phi.source_dim)
    if variety is not None:
        if base is not None:
            variety = variety.at(base)
        base = variety.base_point
    cm = coefficient_map(phi, k, base)
    constraint = jet_constraint(variety, cm) if variety is not None and not variety.is_ambient() else None
    d = image_dimension(cm, constraint, seed=cfg.require_seed(), bound=cfg.bound, trials=cfg.trials)
    return {"dimension": d, "k": k, "base": _frac_list(cm.base), "constrained": constraint is not None}, False


def cmd_multiplicity(job, cfg):
    j, _ = job.get(_param(job, "jet"), "jet")
    return {"multiplicity": multiplicity(j)}, False


def cmd_tangent_cone(job, cfg):
    Y = job.get(_param(job, "variety"), "variety")
    cone = tangent_cone(Y, cfg.limits)
    return {"ideal": _strs(cone.ideal.gens), "note": cone.note}, False


def cmd_lift(job, cfg):
    Y = job.get(_param(job, "variety"), "variety")
    j, _ = job.get(_param(job, "jet"), "jet")
    K = _int(job, "K")
    budget = _int(job, "budget", 200)
    res = lift_jet(Y, j, K, budget=budget, limits=cfg.limits)
    out = {"status": res.status, "obstruction_order": res.obstruction_order, "note": res.note}
    out["witness"] = res.witness.to_json() if res.witness is not None else None
    return out, False


def cmd_stratum_dim(job, cfg):
    Y = job.get(_param(job, "variety"), "variety")
    k, m = _int(job, "k"), _int(job, "m")
    K = _int(job, "K", cfg.buffer if cfg.buffer is not None else k + 4)
    return {"dimension": stratum_dimension(Y, k, m, K, cfg.limits), "k": k, "m": m, "K": K}, False


def cmd_strict_transform(job, cfg):
    h = job.get(_param(job, "poly"), "poly")
    centre = _point(job, "centre", h.nvars)
    chart = BlowupChart(_int(job, "chart"), h.nvars, tuple(centre or ()))
    res = strict_transform(h, chart)
    return {"chart": chart.to_json(), "power": res.power, "transform": str(res.transform)}, False


def cmd_theta(job, cfg):
    j, _ = job.get(_param(job, "jet"), "jet")
    res = theta(j, _int(job, "l"))
    return {
        "chart": res.chart.to_json(),
        "multiplicity": res.multiplicity,
        "point": _frac_list(res.point),
        "image": res.image.to_json(),
        "text": str(res.image),
    }, False


def cmd_chart_map(job, cfg):
    phi = job.get(_param(job, "map"), "map")
    src = BlowupChart(_int(job, "source"), phi.source_dim)
    tgt = BlowupChart(_int(job, "target"), phi.target_dim)
    psi = induced_chart_map(phi, src, tgt)
    out = {"components": psi.to_json(), "text": str(psi)}
    at = _point(job, "at", phi.source_dim)
    if at is not None:
        out["regular_at"] = psi.is_regular_at(at)
    return out, False


def cmd_jd(job, cfg):
    phi = job.get(_param(job, "map"), "map")
    at = _point(job, "at", phi.source_dim)
    value = jd(phi, at)
    return {"jd": "inf" if value == float("inf") else value}, False


def cmd_analyze(job, cfg):
    X = job.get(_param(job, "X"), "variety")
    Y = job.get(_param(job, "Y"), "variety")
    names = [c for c in _param(job, "candidates", "", required=False).split(",") if c]
    candidates = [job.get(c, "divisor") for c in names]
    auto = _param(job, "auto", "true").lower() not in ("false", "no", "0")
    inst = EndoInstance(
        X,
        Y,
        job.get(_param(job, "rho"), "map"),
        job.get(_param(job, "f"), "map"),
        job.get(_param(job, "g"), "map"),
        s_max=_int(job, "s_max", 2),
        k=_int(job, "k", 2),
        candidates=candidates,
        limits=cfg.limits,
    )
    report = analyze(inst, seed=cfg.require_seed(), bound=cfg.bound, trials=cfg.trials, auto=auto)
    findings = report.commutativity is False or bool(report.exceptional_divisors()) or bool(report.errors)
    return report.to_dict(), findings


def cmd_verify(job, cfg):
    suite = _param(job, "suite", "all")
    results = run_suites(suite, seed=cfg.require_seed(), samples=_int(job, "samples", 20))
    passed = all(r.passed for r in results)
    return {"checks": [r.to_dict() for r in results], "passed": passed}, not passed


COMMANDS: dict[str, Callable] = {
    "gb": cmd_gb,
    "nf": cmd_nf,
    "eliminate": cmd_eliminate,
    "dim": cmd_dim,
    "initial-form": cmd_initial_form,
    "jacobian": cmd_jacobian,
    "jet-prolong": cmd_jet_prolong,
    "jet-dim": cmd_jet_dim,
    "multiplicity": cmd_multiplicity,
    "tangent-cone": cmd_tangent_cone,
    "lift": cmd_lift,
    "stratum-dim": cmd_stratum_dim,
    "strict-transform": cmd_strict_transform,
    "theta": cmd_theta,
    "chart-map": cmd_chart_map,
    "jd": cmd_jd,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
}


def run_job(job: Job, cfg: Config) -> tuple[str, bool]:
    """Execute ``job``; return the report text and whether it has findings."""
    if job.command not in COMMANDS:
        raise ParseError(f"unknown command {job.command!r}", line=job.command_line)
    result, findings = COMMANDS[job.command](job, cfg)
    report = {
        "format": REPORT_FORMAT,
        "command": job.command,
        "parameters": {**cfg.as_dict(), "command": dict(job.params)},
        "result": result,
    }
    return json.dumps(report, indent=2, sort_keys=True) + "\n", findings


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jetcalc", description="Exact jet, blow-up and endomorphism computations.")
    p.add_argument("job", help="job file, or - for standard input")
    p.add_argument("--seed", help="seed for randomized rank computations")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--order", help="monomial order: grevlex, lex or block:K (default grevlex)")
    p.add_argument("--max-degree", type=int, help="degree cap for Groebner computations (default 120)")
    p.add_argument("--max-basis", type=int, help="basis-size cap for Groebner computations (default 1500)")
    p.add_argument("--trials", type=int, help=f"random trials for generic ranks (default {DEFAULT_TRIALS})")
    p.add_argument("--bound", type=int, help=f"sample coordinates from [-B, B] (default {DEFAULT_BOUND})")
    p.add_argument("--buffer", type=int, help="arc-space buffer order K for stratum dimensions (default k+4)")
    p.add_argument("--fail-fast", action="store_true", help="exit 1 when the command reports findings")
    p.add_argument("--version", action="version", version=f"jetcalc {__version__}")
    return p


def _error(exc: Exception) -> int:
    module = getattr(exc, "module", "cli")
    print(f"jetcalc: error [{module}]: {exc}", file=sys.stderr)
    return 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.job == "-":
            text = sys.stdin.read()
        else:
            with open(args.job, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        return _error(exc)
    try:
        job = parse_job(text)
        cfg = build_config(job, args)
        report, findings = run_job(job, cfg)
    except JetcalcError as exc:
        return _error(exc)
    except (ValueError, ZeroDivisionError) as exc:
        return _error(exc)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(report)
        except OSError as exc:
            return _error(exc)
    else:
        sys.stdout.write(report)
    return 1 if findings and args.fail_fast else 0


if __name__ == "__main__":
    sys.exit(main())
