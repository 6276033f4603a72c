"""Command-line entry point: ``orlicz-domain <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 inconclusive numeric verdict,
64 usage error (the config schema is printed to stderr).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import jsonschema
import numpy as np

from . import scenarios as sc
from .asymptotics import as_fraction, parse_term
from .norms import (
    LebesgueSpace, LorentzEndpointSpace, LorentzSpace, MarcinkiewiczSpace, OrliczSpace, amemiya_norm, norm,
    orlicz_dual_lower, power_phi,
)
from .operators import HardyParams, boundedness_probe, make_operator
from .optimality import PreconditionError, decide, g_statistics_probe, witness_construct
from .rearrangement import EmptyFunction, StepFunction, decade_grid
from .young import (
    ExplicitYoung, SymbolicYoung, YoungFunction, conjugate_pair_defect, power_cutoff_norm, power_young,
    young_from_dict,
)

EXIT_OK, EXIT_DOMAIN, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class DomainError(Exception):
    pass


class Inconclusive(Exception):
    def __init__(self, payload: dict):
        super().__init__("inconclusive")
        self.payload = payload


# -- configuration ------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    grid_points: int = 2 ** 14
    t_max: float = 1e8
    tolerance: float = 1e-10
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        g = self.grid_points
        if g < 2 ** 8 or g & (g - 1):
            raise ValueError(f"grid_points must be a power of two >= 256, got {g}")
        if not 0 < self.tolerance <= 1e-4:
            raise ValueError(f"tolerance must lie in (0, 1e-4], got {self.tolerance}")
        if self.format not in ("json", "csv", "markdown", "latex"):
            raise ValueError(f"unknown format {self.format!r}")


def load_schema(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text())


def validate(payload: dict, name: str) -> dict:
    jsonschema.validate(payload, load_schema(name))
    return payload


def fixtures_dir() -> Path:
    env = os.environ.get("ORLICZ_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files(__package__).joinpath("fixtures")))


def dumps(payload) -> str:
    return json.dumps(payload, indent=1, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


# -- argument helpers ----------------------------------------------------------

def parse_young(text: str) -> YoungFunction:
    """``power:p``, ``exp_power:gamma``, ``term:<PLL term>``, a JSON object, or a path to one."""
    if text.startswith("power:"):
        return power_young(text.split(":", 1)[1])
    if text.startswith("exp_power:"):
        return ExplicitYoung("exp_power", gamma=float(text.split(":", 1)[1]))
    if text.startswith("term:"):
        return SymbolicYoung(parse_term(text.split(":", 1)[1]))
    if text.lstrip().startswith("{"):
        return young_from_dict(json.loads(text))
    path = Path(text)
    if path.exists():
        return young_from_dict(json.loads(path.read_text()))
    raise DomainError(f"cannot read Young function {text!r}")


def scenario_from_args(a) -> Optional[sc.Scenario]:
    if a.scenario is None:
        return None
    need = lambda name: getattr(a, name) if getattr(a, name) is not None else _missing(name)
    if a.scenario == "john":
        return sc.John(need("n"), need("m"))
    if a.scenario == "mazya":
        return sc.Mazya(need("n"), need("m"), as_fraction(need("alpha_m")))
    return sc.Trace(need("n"), need("m"), need("d"))


def _missing(name: str):
    raise DomainError(f"missing --{name.replace('_', '-')}")


def params_from_args(a) -> HardyParams:
    s = scenario_from_args(a)
    if s is not None:
        return sc.reduce(s)
    if a.alpha is None:
        raise DomainError("give --scenario or --alpha/--beta")
    return HardyParams(as_fraction(a.alpha), as_fraction(a.beta or "1"))


def target_from_args(a, s: Optional[sc.Scenario]) -> sc.TargetSpec:
    if a.sobolev is not None:
        if s is None:
            raise DomainError("--sobolev needs a --scenario")
        return sc.sobolev_target(s, a.sobolev, a.p, a.q or "0")
    t = a.target
    if t in ("zygmund", "zygmund-loglog"):
        if a.p is None:
            raise DomainError("missing --p")
        cls = sc.ZygmundLog if t == "zygmund" else sc.ZygmundLogLog
        return cls(as_fraction(a.p), as_fraction(a.q or "0"))
    if t in ("exp", "expexp"):
        if a.gamma is None:
            raise DomainError("missing --gamma")
        return (sc.ExpPower if t == "exp" else sc.ExpExpPower)(as_fraction(a.gamma))
    if t == "explog":
        if a.gamma is None or a.sigma is None:
            raise DomainError("missing --gamma/--sigma")
        return sc.ExpLogPower(as_fraction(a.gamma), as_fraction(a.sigma))
    if t == "linfinity":
        return sc.LInfinity()
    raise DomainError("give --target or --sobolev")


def space_from_args(kind: str, a) -> tuple:
    if kind == "orlicz":
        if not a.young:
            raise DomainError("missing --young")
        return OrliczSpace(parse_young(a.young)), f"L^A, A = {a.young}"
    if kind == "marcinkiewicz":
        r = as_fraction(a.r)
        return MarcinkiewiczSpace(power_phi(r)), f"M(t^{{1/{r}}})"
    if kind == "lorentz-endpoint":
        r = as_fraction(a.r)
        return LorentzEndpointSpace(power_phi(r)), f"Lambda(t^{{1/{r}}})"
    if kind == "lorentz":
        q = math.inf if a.lq in ("inf", "oo") else float(a.lq)
        return LorentzSpace(float(as_fraction(a.r)), q, a.maximal), f"L^{{{a.r},{a.lq}}}"
    if kind == "lebesgue":
        r = math.inf if a.r in ("inf", "oo") else float(as_fraction(a.r))
        return LebesgueSpace(r), f"L^{{{a.r}}}"
    raise DomainError(f"unknown space {kind!r}")


# -- subcommands ----------------------------------------------------------------

def cmd_decide(a, cfg: RunConfig, out) -> int:
    s = scenario_from_args(a)
    p = params_from_args(a)
    target = target_from_args(a, s)
    v = decide(p, sc.target_phi(target), cross_check=a.cross_check)
    payload = v.as_dict()
    payload.update(schema="orlicz_domain/verdict/v1", scenario=s.label() if s else None,
                   target=sc.render_target(target))
    out.write(dumps(validate(json.loads(dumps(payload)), "verdict")))
    return EXIT_OK


def cmd_witness(a, cfg: RunConfig, out) -> int:
    alpha = as_fraction(a.alpha)
    At, Bt = parse_young(a.atilde), parse_young(a.btilde)
    w = witness_construct(At, Bt, alpha, C=a.C, j_max=a.j_max, t_cap=a.t_cap)
    payload = w.as_dict()
    payload.update(
        schema="orlicz_domain/witness/v1",
        invariants=w.invariants(),
        domination={str(k): v for k, v in w.domination_ratios().items()},
        condition_v_slack=w.condition_v_slack(),
    )
    payload = validate(json.loads(dumps(payload)), "witness")
    if a.csv:
        w.to_csv(a.csv)
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write("j,t,tau\n")
        for row in payload["sequence"]:
            buf.write(f"{row['j']},{row['t']!r},{row['tau']!r}\n")
        out.write(buf.getvalue())
    else:
        out.write(dumps(payload))
    if not w.complete:
        raise Inconclusive(payload)
    return EXIT_OK


def cmd_table(a, cfg: RunConfig, out) -> int:
    nm = sc.NM_SAMPLES
    if a.params:
        extra = json.loads(a.params)
        nm = [tuple(x) for x in extra.get("nm", nm)]
    fmt = a.format or (cfg.format if cfg.format != "json" else "markdown")
    if fmt not in ("markdown", "latex", "json"):
        raise DomainError(f"table format must be markdown, latex or json, got {fmt!r}")
    t = sc.build_table(a.table, nm)
    text = sc.render_table(t, fmt)
    if fmt == "json":
        validate(json.loads(text), "table")
    if a.check:
        ext = {"markdown": "md", "latex": "tex", "json": "json"}[fmt]
        golden = fixtures_dir() / f"table{a.table}.{ext}"
        if not golden.exists() or golden.read_text() != text:
            raise DomainError(f"output differs from golden file {golden}")
    out.write(text)
    return EXIT_OK


def cmd_norm(a, cfg: RunConfig, out) -> int:
    f = StepFunction.from_csv(a.csv)
    spec, label = space_from_args(a.space, a)
    payload = {"schema": "orlicz_domain/norm/v1", "space": label, "value": norm(spec, f), "cells": int(f.values.size)}
    if isinstance(spec, OrliczSpace) and a.orlicz_bounds:
        rng = np.random.default_rng(cfg.seed)
        payload["bounds"] = {"lower": orlicz_dual_lower(spec.A, f, rng=rng), "upper": amemiya_norm(spec.A, f)}
    out.write(dumps(validate(json.loads(dumps(payload)), "norm")))
    return EXIT_OK


def cmd_apply_op(a, cfg: RunConfig, out) -> int:
    p = params_from_args(a)
    op = make_operator(a.op, p.alpha, p.beta)
    if a.probe:
        dom, dlabel = space_from_args(a.domain, _Sub(a, "domain"))
        tgt, tlabel = space_from_args(a.target_space, _Sub(a, "target"))
        rep = boundedness_probe(op, dom, tgt, seed=cfg.seed)
        payload = rep.as_dict()
        payload.update(schema="orlicz_domain/probe/v1", operator=a.op, alpha=str(p.alpha), beta=str(p.beta),
                       domain=dlabel, target=tlabel)
        payload = validate(json.loads(dumps(payload)), "probe")
        out.write(dumps(payload))
        if rep.verdict == "inconclusive":
            raise Inconclusive(payload)
        return EXIT_OK
    if not a.csv:
        raise DomainError("apply-op needs --csv (or --probe)")
    f = StepFunction.from_csv(a.csv)
    edges = decade_grid(max(1.0 / cfg.grid_points, 1e-12), 16)
    Tf = op.sample(f, edges)
    buf = io.StringIO()
    buf.write("left,value\n")
    for left, v in zip(Tf.edges[:-1], Tf.values):
        buf.write(f"{float(left)!r},{float(v)!r}\n")
    out.write(buf.getvalue())
    return EXIT_OK


class _Sub:
    """View of the parsed args with ``--domain-r`` etc. exposed as ``r``."""

    def __init__(self, a, prefix: str):
        self._a, self._p = a, prefix

    def __getattr__(self, name):
        return getattr(self._a, f"{self._p}_{name}")


def selftest_checks() -> list[dict]:
    checks = []

    def add(name, ok, detail):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    val = power_cutoff_norm(power_young(2), 1.0, 0.5)
    exact = 0.5 ** 1.5 / math.sqrt(3)
    add("cutoff norm vs closed form", abs(val - exact) < 1e-6, f"{val:.10f} vs {exact:.10f}")
    d = conjugate_pair_defect(power_young(3), np.geomspace(1e-2, 1e3, 64))
    add("conjugate pair defect (t^3)", d <= 1e-3, f"defect {d:.2e}")
    v = decide(sc.reduce(sc.John(3, 1)), sc.target_phi(sc.sobolev_target(sc.John(3, 1), "log", 2, 0)))
    add("John(3,1), p=2 subcritical", v.exists, v.outcome)
    v = decide(sc.reduce(sc.John(2, 1)), sc.target_phi(sc.sobolev_target(sc.John(2, 1), "log", 2, 0)))
    add("John(2,1), p=2 critical", v.outcome == "NoOptimal" and v.reason == "CriterionVi", f"{v.outcome}/{v.reason}")
    rep = g_statistics_probe(parse_term("1 * t^{0} * log^{1} * loglog^{0} @ inf"), ts=(1e3, math.exp(20)))
    add("(ii) statistic for G = log t", abs(rep.stat_ii[-1] - 10) < 1e-6, f"{rep.stat_ii[-1]:.9f}")
    return checks


def cmd_selftest(a, cfg: RunConfig, out) -> int:
    checks = selftest_checks()
    payload = {"schema": "orlicz_domain/selftest/v1", "passed": all(c["ok"] for c in checks), "checks": checks}
    out.write(dumps(validate(payload, "selftest")))
    return EXIT_OK if payload["passed"] else EXIT_DOMAIN


# -- parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\nconfig schema:\n")
        sys.stderr.write(json.dumps(load_schema("config"), indent=1) + "\n")
        raise SystemExit(EXIT_USAGE)


def _add_scenario(p):
    p.add_argument("--scenario", choices=["john", "mazya", "trace"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--alpha-m", dest="alpha_m")
    p.add_argument("--alpha", help="operator alpha when no scenario is given")
    p.add_argument("--beta", help="operator beta (default 1)")


def _add_space(p, prefix: str = ""):
    dash = f"{prefix}-" if prefix else ""
    under = f"{prefix}_" if prefix else ""
    p.add_argument(f"--{dash}young", dest=f"{under}young")
    p.add_argument(f"--{dash}r", dest=f"{under}r", default="2")
    p.add_argument(f"--{dash}lq", dest=f"{under}lq", default="2")
    p.add_argument(f"--{dash}maximal", dest=f"{under}maximal", action="store_true")


SPACES = ["orlicz", "marcinkiewicz", "lorentz-endpoint", "lorentz", "lebesgue"]


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orlicz-domain", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file with RunConfig fields")
    ap.add_argument("--grid-points", type=int)
    ap.add_argument("--t-max", type=float)
    ap.add_argument("--tolerance", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--output-format", dest="output_format", choices=["json", "csv", "markdown", "latex"])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="existence of an optimal Orlicz domain")
    _add_scenario(p)
    p.add_argument("--target", choices=["zygmund", "zygmund-loglog", "exp", "expexp", "explog", "linfinity"])
    p.add_argument("--sobolev", choices=["log", "loglog"], help="derive the target from W^m L^p log^q [log] L")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--gamma")
    p.add_argument("--sigma")
    p.add_argument("--cross-check", action="store_true", help="also run the numeric condition (v) check")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("witness", help="Young function strictly above Atilde keeping condition (v)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--atilde", required=True)
    p.add_argument("--btilde", required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--j-max", type=int, default=5)
    p.add_argument("--t-cap", type=float, default=1e15)
    p.add_argument("--csv", help="write the patched function samples here")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("table", help="application tables 1-3")
    p.add_argument("--table", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--params", help='JSON, e.g. {"nm": [[2, 1], [3, 1]]}')
    p.add_argument("--format", choices=["markdown", "latex", "json"])
    p.add_argument("--check", action="store_true", help="compare with the golden fixture")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("norm", help="norm of a step function given as CSV rows (left, value)")
    p.add_argument("--csv", required=True)
    p.add_argument("--space", choices=SPACES, required=True)
    _add_space(p)
    p.add_argument("--orlicz-bounds", action="store_true")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("apply-op", help="apply or probe H, its associate, or S_alpha")
    p.add_argument("--op", choices=["hardy", "dual_hardy", "sup"], default="hardy")
    _add_scenario(p)
    p.add_argument("--csv")
    p.add_argument("--probe", action="store_true")
    p.add_argument("--domain", choices=SPACES, default="lebesgue")
    p.add_argument("--target-space", choices=SPACES, default="marcinkiewicz")
    _add_space(p, "domain")
    _add_space(p, "target")
    p.set_defaults(func=cmd_apply_op)

    p = sub.add_parser("selftest", help="quick oracle checks")
    p.set_defaults(func=cmd_selftest)
    return ap


def load_config(a) -> RunConfig:
    fields = {}
    if a.config:
        fields = json.loads(Path(a.config).read_text())
        jsonschema.validate(fields, load_schema("config"))
    for key, attr in (("grid_points", "grid_points"), ("t_max", "t_max"), ("tolerance", "tolerance"),
                      ("seed", "seed"), ("format", "output_format")):
        if getattr(a, attr) is not None:
            fields[key] = getattr(a, attr)
    return RunConfig(**fields)


def dispatch(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    a = build_parser().parse_args(argv)
    try:
        cfg = load_config(a)
        return a.func(a, cfg, out)
    except Inconclusive:
        return EXIT_INCONCLUSIVE
    except (DomainError, EmptyFunction, PreconditionError, ValueError, jsonschema.ValidationError,
            FileNotFoundError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        sys.stderr.write(f"error: {msg}\n")
        return EXIT_DOMAIN


def main() -> None:
    raise SystemExit(dispatch())
