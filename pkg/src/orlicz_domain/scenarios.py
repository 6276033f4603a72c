"""Sobolev-type applications: scenario reductions, target families, result tables.

Each geometric setting reduces to a Hardy operator H_alpha^beta:

* John domains in R^n, order m:      (alpha, beta) = (m/n, 1)
* Maz'ya class with exponent a_M:    (alpha, beta) = (m (1 - a_M), 1)
* traces on d-dimensional sections:  (alpha, beta) = (m/n, n/d)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .asymptotics import PLLTerm, as_fraction, constant, pll_mul, pll_reciprocal_substitute
from .norms import FundamentalFunction, inverse_term
from .operators import HardyParams
from .optimality import PreconditionError, Verdict, condition_vi, decide
from .young import SymbolicYoung, _conjugate_term

F = Fraction


# -- scenarios -------------------------------------------------------------------

@dataclass(frozen=True)
class John:
    n: int
    m: int

    def __post_init__(self):
        if not (self.n >= 2 and 1 <= self.m < self.n):
            raise ValueError(f"John scenario needs n >= 2 and 1 <= m < n, got n={self.n}, m={self.m}")

    def label(self) -> str:
        return f"John(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Mazya:
    n: int
    m: int
    alphaM: Fraction

    def __post_init__(self):
        a = as_fraction(self.alphaM)
        object.__setattr__(self, "alphaM", a)
        if self.n < 2 or self.m < 1:
            raise ValueError(f"Maz'ya scenario needs n >= 2 and m >= 1, got n={self.n}, m={self.m}")
        lo = 1 - F(1, self.n)
        if not lo <= a < 1:
            raise ValueError(f"Maz'ya exponent must lie in [1/n', 1) = [{lo}, 1), got {a}")
        if not self.m * (1 - a) < 1:
            raise ValueError(f"Maz'ya scenario needs m(1 - alphaM) < 1, got {self.m * (1 - a)}")

    def label(self) -> str:
        return f"Mazya(n={self.n}, m={self.m}, alphaM={self.alphaM})"


@dataclass(frozen=True)
class Trace:
    n: int
    m: int
    d: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.m < self.n:
            raise ValueError(f"trace scenario needs n >= 2 and 1 <= m < n, got n={self.n}, m={self.m}")
        if not 1 <= self.d <= self.n:
            raise ValueError(f"trace dimension must satisfy 1 <= d <= n, got d={self.d}")
        if self.d < self.n - self.m:
            raise ValueError(f"trace dimension must satisfy d >= n - m, got d={self.d} < {self.n - self.m}")

    def label(self) -> str:
        return f"Trace(n={self.n}, m={self.m}, d={self.d})"


Scenario = Union[John, Mazya, Trace]


def reduce(s: Scenario) -> HardyParams:
    if isinstance(s, John):
        return HardyParams(F(s.m, s.n), 1)
    if isinstance(s, Mazya):
        return HardyParams(s.m * (1 - s.alphaM), 1)
    if isinstance(s, Trace):
        return HardyParams(F(s.m, s.n), F(s.n, s.d))
    raise TypeError(f"unknown scenario {s!r}")


# -- targets -----------------------------------------------------------------------

@dataclass(frozen=True)
class ZygmundLog:
    """L^p log^q L."""
    p: Fraction
    q: Fraction = F(0)

    def __post_init__(self):
        p, q = as_fraction(self.p), as_fraction(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if not (p > 1 or (p == 1 and q >= 0)):
            raise ValueError(f"need p > 1, or p = 1 with q >= 0; got p={p}, q={q}")


@dataclass(frozen=True)
class ZygmundLogLog(ZygmundLog):
    """L^p log^q log L."""


@dataclass(frozen=True)
class ExpPower:
    """exp L^gamma."""
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class ExpExpPower(ExpPower):
    """exp exp L^gamma."""


@dataclass(frozen=True)
class ExpLogPower:
    """exp(L^gamma log^sigma L)."""
    gamma: Fraction
    sigma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        object.__setattr__(self, "sigma", as_fraction(self.sigma))
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class LInfinity:
    pass


@dataclass(frozen=True)
class CustomPhi:
    phi: FundamentalFunction


TargetSpec = Union[ZygmundLog, ZygmundLogLog, ExpPower, ExpExpPower, ExpLogPower, LInfinity, CustomPhi]


def target_phi(t: TargetSpec) -> FundamentalFunction:
    if isinstance(t, CustomPhi):
        return t.phi
    if isinstance(t, LInfinity):
        return FundamentalFunction(constant(1.0))
    if isinstance(t, ZygmundLogLog):
        return FundamentalFunction(PLLTerm.at_zero(1 / t.p, 0, t.q / t.p))
    if isinstance(t, ZygmundLog):
        return FundamentalFunction(PLLTerm.at_zero(1 / t.p, t.q / t.p))
    if isinstance(t, ExpExpPower):
        return FundamentalFunction(PLLTerm.at_zero(0, 0, -1 / t.gamma))
    if isinstance(t, ExpPower):
        return FundamentalFunction(PLLTerm.at_zero(0, -1 / t.gamma))
    if isinstance(t, ExpLogPower):
        return FundamentalFunction(PLLTerm.at_zero(0, -1 / t.gamma, t.sigma / t.gamma))
    raise TypeError(f"unknown target {t!r}")


def sobolev_target(s: Scenario, family: str, p, q) -> TargetSpec:
    """Optimal Orlicz target of W^m L^p log^q L ("log") or W^m L^p log^q log L ("loglog")."""
    hp = reduce(s)
    a, b = hp.alpha, hp.beta
    p, q = as_fraction(p), as_fraction(q)
    if not (p > 1 or (p == 1 and q >= 0)):
        raise ValueError(f"need p > 1, or p = 1 with q >= 0; got p={p}, q={q}")
    crit = 1 / a
    if family == "log":
        if p < crit:
            den = b * (1 - a * p)
            return ZygmundLog(p / den, q / den)
        if p == crit and q < p - 1:
            return ExpPower(1 / (1 - a * (1 + q)))
        if p == crit and q == p - 1:
            return ExpExpPower(1 / (1 - a))
        return LInfinity()
    if family == "loglog":
        if p < crit:
            den = b * (1 - a * p)
            return ZygmundLogLog(p / den, q / den)
        if p == crit:
            return ExpLogPower(1 / (1 - a), a * q / (1 - a))
        return LInfinity()
    raise ValueError(f"unknown family {family!r}; use 'log' or 'loglog'")


# -- table rows -------------------------------------------------------------------

def _r(x: Fraction) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_space(B: PLLTerm) -> str:
    """Orlicz space L^p log^a L log^b log L of a Young term."""
    parts = [f"L^{{{_r(B.pow)}}}"]
    if B.logexp != 0:
        parts.append(f"log^{{{_r(B.logexp)}}} L")
    if B.loglogexp != 0:
        parts.append(f"log^{{{_r(B.loglogexp)}}} log L")
    return " ".join(parts)


def render_g(G: PLLTerm) -> str:
    parts = []
    if G.pow != 0:
        parts.append(f"t^{{{_r(G.pow)}}}")
    if G.logexp != 0:
        parts.append(f"log^{{{_r(G.logexp)}}}(t)" if G.logexp != 1 else "log(t)")
    if G.loglogexp != 0:
        parts.append(f"log^{{{_r(G.loglogexp)}}} log(t)" if G.loglogexp != 1 else "log log(t)")
    return " ".join(parts) if parts else "1"


def render_target(t: TargetSpec) -> str:
    if isinstance(t, LInfinity):
        return "L^{oo}"
    if isinstance(t, ZygmundLogLog):
        return f"L^{{{_r(t.p)}}}" + (f" log^{{{_r(t.q)}}} log L" if t.q else "")
    if isinstance(t, ZygmundLog):
        return f"L^{{{_r(t.p)}}}" + (f" log^{{{_r(t.q)}}} L" if t.q else "")
    if isinstance(t, ExpExpPower):
        return f"exp exp L^{{{_r(t.gamma)}}}"
    if isinstance(t, ExpPower):
        return f"exp L^{{{_r(t.gamma)}}}"
    if isinstance(t, ExpLogPower):
        inner = f"L^{{{_r(t.gamma)}}}" + (f" log^{{{_r(t.sigma)}}} L" if t.sigma else "")
        return f"exp({inner})"
    return "custom"


@dataclass
class TableRow:
    scenario: Scenario
    family: str
    p: Fraction
    q: Fraction
    target: TargetSpec
    verdict: Verdict

    @property
    def B(self) -> Optional[PLLTerm]:
        return self.verdict.candidate.term if self.verdict.candidate is not None else None

    @property
    def G(self) -> Optional[PLLTerm]:
        from .asymptotics import parse_term
        g = self.verdict.report.get("G")
        return parse_term(g) if g and "@" in g else None

    @property
    def verdict_label(self) -> str:
        v = self.verdict
        return v.outcome if v.reason is None else f"{v.outcome}/{v.reason}"

    def cells(self) -> dict:
        return {
            "scenario": self.scenario.label(),
            "domain": "W " + render_target(ZygmundLogLog(self.p, self.q) if self.family == "loglog" else ZygmundLog(self.p, self.q)),
            "Y": render_target(self.target),
            "L^B": render_space(self.B) if self.B is not None else "-",
            "G(t)": render_g(self.G) if self.G is not None else "-",
            "verdict": self.verdict_label,
        }


def table_row(s: Scenario, family: str, p, q) -> TableRow:
    target = sobolev_target(s, family, p, q)
    verdict = decide(reduce(s), target_phi(target))
    return TableRow(s, family, as_fraction(p), as_fraction(q), target, verdict)


# -- sample sets and full tables ----------------------------------------------------

NM_SAMPLES = ((2, 1), (3, 1), (3, 2), (5, 2))


def row_samples(alpha: Fraction) -> list[tuple[str, Fraction, Fraction, int]]:
    """(family, p, q, reference row number) per sample; subcritical p = 2 - alpha keeps G ~ t log^r."""
    crit = 1 / alpha
    ps = 2 - alpha
    return [
        ("log", ps, F(0), 1), ("log", ps, F(1), 1),
        ("loglog", ps, F(1), 2), ("loglog", ps, F(-1), 2),
        ("log", crit, F(0), 3), ("log", crit, (crit - 1) / 2, 3),
        ("log", crit, crit - 1, 4),
        ("loglog", crit, F(1), 5), ("loglog", crit, F(-1), 5),
        ("log", crit + 1, F(0), 6),
    ]


def table_scenarios(table: int, nm: Sequence[tuple[int, int]] = NM_SAMPLES) -> list[Scenario]:
    out: list[Scenario] = []
    for n, m in nm:
        if table == 1:
            out.append(John(n, m))
        elif table == 2:
            a0 = 1 - F(1, n)
            for aM in (a0, (1 + a0) / 2):
                if m * (1 - aM) < 1:
                    out.append(Mazya(n, m, aM))
        elif table == 3:
            for d in sorted({n - m, n - 1, n}):
                if d >= 1:
                    out.append(Trace(n, m, d))
        else:
            raise ValueError("table must be 1, 2 or 3")
    return out


@dataclass
class Table:
    number: int
    rows: list

    def as_records(self) -> list[dict]:
        out = []
        for r, ref_row in self.rows:
            rec = r.cells()
            rec["row"] = ref_row
            rec["B_term"] = r.verdict.report.get("B")
            rec["G_term"] = r.verdict.report.get("G")
            out.append(rec)
        return out


def build_table(number: int, nm: Sequence[tuple[int, int]] = NM_SAMPLES) -> Table:
    rows = []
    for s in table_scenarios(number, nm):
        alpha = reduce(s).alpha
        for family, p, q, ref_row in row_samples(alpha):
            rows.append((table_row(s, family, p, q), ref_row))
    return Table(number, rows)


COLUMNS = ("row", "scenario", "domain", "Y", "L^B", "G(t)", "verdict")
TITLES = {1: "John domains, H^1_{m/n}", 2: "Maz'ya classes, H^1_{m(1-a_M)}", 3: "Traces, H^{n/d}_{m/n}"}


def render_markdown(t: Table) -> str:
    lines = [f"### Table {t.number}: {TITLES[t.number]}", "",
             "| " + " | ".join(COLUMNS) + " |", "|" + "|".join("---" for _ in COLUMNS) + "|"]
    for rec in t.as_records():
        lines.append("| " + " | ".join(str(rec[c]) for c in COLUMNS) + " |")
    return "\n".join(lines) + "\n"


def _tex(s: str) -> str:
    s = s.replace("oo", "\\infty").replace("log", "\\log").replace("exp", "\\exp")
    return s.replace("_", "\\_")


def render_latex(t: Table) -> str:
    lines = ["\\begin{tabular}{" + "l" * len(COLUMNS) + "}",
             " & ".join(_tex(c) for c in COLUMNS) + " \\\\", "\\hline"]
    for rec in t.as_records():
        cells = [str(rec["row"]), _tex(rec["scenario"]), f"${_tex(rec['domain'])}$", f"${_tex(rec['Y'])}$",
                 f"${_tex(rec['L^B'])}$", f"${_tex(rec['G(t)'])}$", rec["verdict"]]
        lines.append(" & ".join(cells) + " \\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"


def render_json(t: Table) -> str:
    return json.dumps({"table": t.number, "rows": t.as_records()}, indent=1, sort_keys=True) + "\n"


def render_table(t: Table, fmt: str = "markdown") -> str:
    renderers = {"markdown": render_markdown, "latex": render_latex, "json": render_json}
    if fmt not in renderers:
        raise ValueError(f"unknown table format {fmt!r}; use one of {sorted(renderers)}")
    return renderers[fmt](t)


# -- optimal range --------------------------------------------------------------------

def optimal_range_fundamental(p: HardyParams, A) -> FundamentalFunction:
    """phi(t) ~ t^{beta(1-alpha)} Atilde^{-1}(t^{-beta}), constant K fixed to 1.

    Requires S_alpha bounded on L^{Atilde}, which for PLL terms means
    pow(Atilde) > 1/(1 - alpha).
    """
    term = A if isinstance(A, PLLTerm) else getattr(A, "term", None)
    if term is None or term.pow <= 1:
        raise PreconditionError("optimal range needs a PLL Young function with power > 1")
    At = _conjugate_term(term)
    if not condition_vi(At, p.alpha):
        raise PreconditionError("S_alpha is not bounded on the associate space; no r.i. range is optimal")
    inv = inverse_term(SymbolicYoung(At))
    return FundamentalFunction(pll_mul(PLLTerm.at_zero(p.beta * (1 - p.alpha)), pll_reciprocal_substitute(inv, p.beta)))
