"""Existence of a largest Orlicz domain for H_alpha^beta into a Marcinkiewicz space.

Pipeline for a target with fundamental function phi:

1. admissibility: x(s) = phi(s^{1/beta}) s^{alpha-1} must blow up at 0;
2. fundamental function of the optimal r.i. domain, u(t) = t sup_{t<s<1} x(s);
3. the Young function B with fundamental function u;
4. G(t) = Btilde(t) t^{-1/(1-alpha)}; an optimal Orlicz domain exists iff
   limsup Btilde(t)/Btilde(Kt) < K^{-1/(1-alpha)} for some K, which for PLL
   terms is pow(Btilde) > 1/(1-alpha).

When no optimal domain exists and G is unbounded, :func:`witness_construct`
builds a Young function strictly above a given admissible one that keeps the
boundedness condition (v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from ._numerics import cumulative_log, integrate_log, invert_increasing
from .asymptotics import (
    Chart, PLLTerm, as_fraction, diverges, format_term, pll_mul,
    pll_substitute_power, pll_sup_tail,
)
from .norms import FundamentalFunction, OrliczSpace
from .operators import HardyParams, ProbeReport, boundedness_probe, make_operator
from .young import (
    ExplicitYoung, PatchedYoung, ScalarFunction, Segment, SymbolicYoung, TabulatedYoung, YoungFunction,
    _conjugate_term, young_inverse,
)

CALIBRATION = (4.0, 1e3)
TEST = (1e3, 1e8)
SLACK = 1.05


class PreconditionError(ValueError):
    pass


def _P(alpha) -> Fraction:
    return 1 / (1 - as_fraction(alpha))


def _need_term(phi: FundamentalFunction) -> PLLTerm:
    if not isinstance(phi, FundamentalFunction) or phi.term is None:
        raise PreconditionError("the exact decision path needs a symbolic fundamental function")
    return phi.term


def substituted_profile(p: HardyParams, phi: FundamentalFunction) -> PLLTerm:
    """x(s) = phi(s^{1/beta}) s^{alpha-1} as a term at zero."""
    term = _need_term(phi)
    return pll_mul(pll_substitute_power(term, 1 / p.beta), PLLTerm.at_zero(p.alpha - 1))


def admissible_target(p: HardyParams, phi: FundamentalFunction) -> bool:
    return diverges(substituted_profile(p, phi))


def optimal_domain_fundamental(p: HardyParams, phi: FundamentalFunction) -> FundamentalFunction:
    """u(t) = t sup_{t<s<1} phi(s^{1/beta}) s^{alpha-1}."""
    x = substituted_profile(p, phi)
    if not diverges(x):
        raise PreconditionError("target is not admissible: sup of phi(t^{1/beta}) t^{alpha-1} is finite")
    return FundamentalFunction(pll_mul(PLLTerm.at_zero(1), pll_sup_tail(x)))


def optimal_domain_fundamental_numeric(p: HardyParams, phi: Callable, t) -> np.ndarray:
    """Running supremum from the right on a geometric grid, evaluated at ``t``."""
    t = np.asarray(t, dtype=float)
    lo = min(float(np.min(t)), 1e-8)
    s = np.geomspace(lo, 1.0, int(np.ceil(-np.log10(lo) * 64)) + 1)
    x = np.asarray(phi(s ** (1 / p.b)), dtype=float) * s ** (p.a - 1)
    sup = np.maximum.accumulate(x[::-1])[::-1]
    idx = np.clip(np.searchsorted(s, t, side="left"), 0, s.size - 1)
    return t * sup[idx]


# -- candidate Young function ---------------------------------------------------

def candidate_term(u: PLLTerm) -> PLLTerm:
    """B ~ a k^{1/a} a^{-b/a} t^{1/a} log^{b/a} loglog^{c/a} for u = k t^a log^b(2/t) loglog^c(4/t)."""
    if u.chart is not Chart.ZERO:
        raise PreconditionError("u must be a term at zero")
    a, b, c = u.exponents
    if not 0 < a <= 1:
        raise PreconditionError(f"u must behave like t^a with 0 < a <= 1, got a = {a}")
    ratio = pll_mul(u, PLLTerm.at_zero(-1))
    if not diverges(ratio):
        raise PreconditionError("u(t)/t stays bounded: L^1 is the optimal domain")
    af = float(a)
    coeff = af * u.coeff ** (1 / af) * af ** (-float(b) / af)
    return PLLTerm.at_inf(1 / a, b / a, c / a, coeff=coeff)


def candidate_young(u: FundamentalFunction) -> YoungFunction:
    if u.term is None:
        return candidate_young_numeric(u)
    return SymbolicYoung(candidate_term(u.term))


def candidate_young_numeric(u, t_max: float = 1e12, points: int = 1601) -> TabulatedYoung:
    """b(s) = s on [0, 1], b(s) = 1/(s u^{-1}(1/s)) for s > 1, B = int_0^t b, with u(1) = 1.

    ``u`` is any callable on (0, 1]; it is rescaled so that u(1) = 1.
    """
    u1 = float(u(1.0))
    un = lambda t: np.asarray(u(t), dtype=float) / u1
    s = np.geomspace(1.0, t_max, points)
    y = 1.0 / s
    uinv = invert_increasing(lambda t: un(np.minimum(t, 1.0)) + np.maximum(t - 1.0, 0.0), y, rtol=1e-12)
    b = 1.0 / (s * uinv)
    # trapezoid in log s on b(s) s is enough; the table is only ever compared up to factor 2
    logs = np.log(s)
    inc = 0.5 * (b[1:] * s[1:] + b[:-1] * s[:-1]) * np.diff(logs)
    B = 0.5 + np.concatenate([[0.0], np.cumsum(inc)])
    t_lo = np.geomspace(1e-4, 1.0, 81)[:-1]
    x = np.concatenate([t_lo, s])
    vals = np.concatenate([0.5 * t_lo ** 2, B])
    return TabulatedYoung(x, vals, label="candidate(numeric)", check=False)


# -- G and the two conditions ---------------------------------------------------

def conjugate_candidate_term(B: PLLTerm) -> Optional[PLLTerm]:
    """Btilde as a PLL term; None when pow(B) = 1 (exponential-type conjugate)."""
    if B.pow == 1:
        return None
    return _conjugate_term(B)


def g_function(Btilde, alpha):
    """G(t) = Btilde(t) t^{-1/(1-alpha)}; a PLL term when Btilde is one."""
    P = _P(alpha)
    if isinstance(Btilde, PLLTerm):
        return pll_mul(Btilde, PLLTerm.at_inf(-P))
    term = getattr(Btilde, "term", None)
    if term is not None:
        return pll_mul(term, PLLTerm.at_inf(-P))
    Pf = float(P)
    return ScalarFunction(lambda t: Btilde(t) * t ** -Pf, label=f"G({Btilde.label})")


def condition_vi(Btilde, alpha) -> bool:
    term = Btilde if isinstance(Btilde, PLLTerm) else getattr(Btilde, "term", None)
    if term is None:
        raise PreconditionError("condition (vi) is decided symbolically only for PLL terms")
    return term.pow > _P(alpha)


def g_bounded(G: PLLTerm) -> bool:
    return not diverges(G)


@dataclass
class ConditionVReport:
    holds: bool
    C: float
    C_prime: float
    test_max: float
    calibration: tuple
    test: tuple

    def as_dict(self):
        return {"holds": self.holds, "C": self.C, "C_prime": self.C_prime, "test_max": self.test_max,
                "calibration": list(self.calibration), "test": list(self.test)}


def _young(x) -> YoungFunction:
    if isinstance(x, PLLTerm):
        return SymbolicYoung(x)
    return x


def condition_v_lhs(Atilde: YoungFunction, alpha, grid: np.ndarray) -> np.ndarray:
    """int_1^t Atilde(s) s^{-P-1} ds on an increasing grid starting at 1."""
    P = float(_P(alpha))
    grid = np.asarray(grid, dtype=float)
    breaks = getattr(Atilde, "_lo", np.array([]))
    full = np.union1d(grid, np.concatenate([breaks, getattr(Atilde, "_hi", np.array([]))]))
    full = full[(full >= grid[0]) & (full <= grid[-1])]
    with np.errstate(over="ignore"):
        cum = cumulative_log(lambda s: Atilde(s) * s ** (-P - 1), full, per_panel=4)
    return np.interp(grid, full, cum)


def condition_v(Atilde, Btilde, alpha, calibration=CALIBRATION, test=TEST,
                C_grid: Optional[Sequence[float]] = None, per_decade: int = 16) -> ConditionVReport:
    """Numeric check of int_1^t Atilde(s)/s^{P+1} ds <~ Btilde(Ct)/t^P, P = 1/(1-alpha).

    C is chosen from a 2^{k/4} grid to make the ratio flattest on the
    calibration range; C' is the largest ratio there. The condition holds
    when the ratio stays below 1.05 C' on the (deeper, disjoint) test range.
    """
    A, B = _young(Atilde), _young(Btilde)
    P = float(_P(alpha))
    t_lo, t_hi = calibration[0], test[1]
    n = int(np.ceil(np.log10(t_hi) * per_decade))
    grid = np.concatenate([[1.0], np.geomspace(t_lo, t_hi, n)])
    lhs = condition_v_lhs(A, alpha, grid)[1:]
    t = grid[1:]
    cal = (t >= calibration[0]) & (t <= calibration[1])
    tst = (t >= test[0]) & (t <= test[1])
    C_grid = 2.0 ** (np.arange(0, 81) / 4) if C_grid is None else np.asarray(C_grid)
    best = None
    for C in C_grid:
        with np.errstate(over="ignore"):
            r = lhs / (B(C * t) / t ** P)
        flat = r[cal].max() / r[cal].min()
        if best is None or flat < best[0] * (1 - 1e-12):
            best = (flat, C, r)
    _, C, r = best
    Cp = float(r[cal].max())
    tm = float(r[tst].max())
    return ConditionVReport(bool(tm <= SLACK * Cp), float(C), Cp, tm, tuple(calibration), tuple(test))


# -- the G-statistics ------------------------------------------------------------

@dataclass
class GStatisticsReport:
    t: list
    stat_ii: list
    stat_iii: dict
    ii_limit: float
    iii_limit: dict
    ii_diverges: bool
    iii_all_one: bool
    consistent: bool

    def as_dict(self):
        return {
            "t": self.t, "stat_ii": self.stat_ii,
            "stat_iii": {str(k): v for k, v in self.stat_iii.items()},
            "ii_limit": self.ii_limit, "iii_limit": {str(k): v for k, v in self.iii_limit.items()},
            "ii_diverges": self.ii_diverges, "iii_all_one": self.iii_all_one, "consistent": self.consistent,
        }


def _extrapolate(t: np.ndarray, y: np.ndarray) -> float:
    """Limit of y along the trend a + b / log t fitted through the last two samples."""
    if t.size < 2:
        return float(y[-1])
    x = 1 / np.log(t[-2:])
    b = (y[-1] - y[-2]) / (x[-1] - x[-2])
    return float(y[-1] - b * x[-1])


def g_statistics_probe(G, Ks: Sequence[float] = (2.0, 4.0, 16.0),
                    ts: Sequence[float] = (1e3, 1e6, 1e9, 1e12)) -> GStatisticsReport:
    """(ii) (1/G(t)) int_1^t G(s)/s ds and (iii) G(Kt)/G(t) at a few depths.

    (ii) is declared divergent when it keeps growing by at least 25% per
    three decades; (iii) limits are extrapolated in 1/log t.
    """
    g = G.eval if isinstance(G, PLLTerm) else G
    lower = math.e if isinstance(G, PLLTerm) and G.loglogexp != 0 else 1.0
    ts = np.asarray(ts, dtype=float)
    ii = []
    for t in ts:
        val = integrate_log(lambda s: np.nan_to_num(np.asarray(g(s), dtype=float) / s), lower, t, per_decade=8)
        ii.append(val / float(g(t)))
    ii = np.asarray(ii)
    iii = {K: [float(g(K * t) / g(t)) for t in ts] for K in Ks}
    growth = ii[1:] / ii[:-1]
    ii_div = bool(np.all(growth >= 1.25))
    iii_lim = {K: _extrapolate(ts, np.asarray(v)) for K, v in iii.items()}
    all_one = all(abs(v - 1) <= 0.01 for v in iii_lim.values())
    ii_lim = _extrapolate(ts, ii) if not ii_div else math.inf
    return GStatisticsReport(
        t=[float(x) for x in ts], stat_ii=[float(x) for x in ii],
        stat_iii={K: v for K, v in iii.items()}, ii_limit=ii_lim, iii_limit=iii_lim,
        ii_diverges=ii_div, iii_all_one=all_one, consistent=(ii_div == all_one),
    )


# -- verdicts ----------------------------------------------------------------------

EXISTS = "ExistsOptimal"
NO_OPTIMAL = "NoOptimal"
L1_OPTIMAL = "L1Optimal"
CRITERION_VI = "CriterionVi"
BOUNDED_G = "BoundedG_LInfinityCase"


@dataclass
class WitnessConstruction:
    gamma: float
    C: float
    alpha: Fraction
    t_seq: list
    tau_seq: list
    patched: PatchedYoung
    base: YoungFunction
    Btilde: YoungFunction
    complete: bool
    j_start: int = 2
    notes: list = field(default_factory=list)

    def segments_table(self) -> list:
        return [{"j": self.j_start + i, "t": t, "tau": tau} for i, (t, tau) in enumerate(zip(self.t_seq, self.tau_seq))]

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "C": self.C, "alpha": str(self.alpha), "complete": self.complete,
                "sequence": self.segments_table(), "notes": self.notes}

    def to_csv(self, path, points: int = 2001) -> None:
        hi = 10 * max(self.tau_seq) if self.tau_seq else 1e6
        t = np.unique(np.concatenate([np.geomspace(1e-2, hi, points), self.t_seq, self.tau_seq]))
        np.savetxt(path, np.column_stack([t, self.patched(t)]), delimiter=",", fmt="%.17g")

    # -- post-condition checks
    def invariants(self) -> dict:
        t, tau = np.asarray(self.t_seq), np.asarray(self.tau_seq)
        grid = np.geomspace(1e-2, 10 * tau.max(), 4000) if tau.size else np.geomspace(1e-2, 1e6, 100)
        grid = np.union1d(grid, np.concatenate([t, tau, 0.5 * (t + tau)]))
        above = bool(np.all(self.patched(grid) >= self.base(grid) * (1 - 1e-12)))
        x = np.sort(grid)
        y = self.patched(x)
        slopes = np.diff(y) / np.diff(x)
        convex = bool(np.all(np.diff(slopes) >= -1e-9 * np.abs(slopes[1:])))
        return {
            "tau_gt_t": bool(np.all(tau > t)),
            "two_t_lt_tau": bool(np.all(2 * t < tau)),
            "increasing": bool(np.all(np.diff(t) > 0)),
            "t_next_gt_tau": bool(np.all(t[1:] > tau[:-1])),
            "t_gt_2": bool(np.all(t > 2)),
            "dominates_base": above,
            "convex": convex,
        }

    def domination_ratios(self, lambdas: Sequence[float] = (2.0, 4.0, 8.0)) -> dict:
        t = np.asarray(self.t_seq)
        return {lam: [float(v) for v in self.patched(2 * t) / self.base(lam * 2 * t)] for lam in lambdas}

    def schedule_ratios(self) -> list:
        """A1(2 t_j) / A(j t_j) next to the lower bound (1/2)(A(tau)/tau)(t/A(j t))."""
        out = []
        for i, (t, tau) in enumerate(zip(self.t_seq, self.tau_seq)):
            j = self.j_start + i
            ratio = float(self.patched(2 * t) / self.base(j * t))
            bound = 0.5 * float(self.base(tau)) / tau * t / float(self.base(j * t))
            out.append({"j": j, "ratio": ratio, "bound": bound})
        return out

    def growth_guard(self) -> bool:
        P = float(_P(self.alpha))
        total = 0.0
        for i, t in enumerate(self.t_seq):
            if i and total > float(self.Btilde(self.C * t)) / t ** P * 2 * (1 + 1e-9):
                return False
            total += float(self.Btilde(2 * self.C * t)) / t ** P
        return True

    def condition_v_slack(self) -> float:
        """sup of the condition-(v) ratio for the patched function over the one for the base."""
        P = float(_P(self.alpha))
        hi = 10 * max(self.tau_seq) if self.tau_seq else 1e8
        n = int(np.ceil(np.log10(hi) * 16))
        grid = np.concatenate([[1.0], np.geomspace(4.0, hi, n)])
        grid = np.union1d(grid, np.concatenate([self.t_seq, self.tau_seq]))
        rhs = self.Btilde(self.C * grid[1:]) / grid[1:] ** P
        r1 = condition_v_lhs(self.patched, self.alpha, grid)[1:] / rhs
        r0 = condition_v_lhs(self.base, self.alpha, grid)[1:] / rhs
        return float(r1.max() / r0.max())


@dataclass
class Verdict:
    outcome: str
    reason: Optional[str] = None
    candidate: Optional[YoungFunction] = None
    report: dict = field(default_factory=dict)
    witness: Optional[WitnessConstruction] = None

    @property
    def exists(self) -> bool:
        return self.outcome == EXISTS

    def as_dict(self) -> dict:
        d = {"outcome": self.outcome, "reason": self.reason, "report": self.report}
        d["candidate"] = self.candidate.to_dict() if self.candidate is not None else None
        if self.witness is not None:
            d["witness"] = self.witness.as_dict()
        return d


def _fmt(term: Optional[PLLTerm]) -> Optional[str]:
    return format_term(term) if term is not None else None


def decide(p: HardyParams, phi: FundamentalFunction, cross_check: bool = False) -> Verdict:
    x = substituted_profile(p, phi)
    report = {"alpha": str(p.alpha), "beta": str(p.beta), "phi": _fmt(phi.term), "x": _fmt(x)}
    if not diverges(x):
        report["note"] = "phi(t^{1/beta}) t^{alpha-1} is bounded; L^1 is the optimal domain"
        return Verdict(L1_OPTIMAL, None, None, report)
    u = optimal_domain_fundamental(p, phi)
    B = candidate_term(u.term)
    report.update(phi_X=_fmt(u.term), B=_fmt(B))
    candidate = SymbolicYoung(B)
    Bt = conjugate_candidate_term(B)
    if Bt is None:
        # B ~ t log^b: its conjugate is of exponential type, so G outgrows any power
        report.update(Btilde="exponential type", G="exponential type", condition_vi=True)
        return Verdict(EXISTS, None, candidate, report)
    G = g_function(Bt, p.alpha)
    vi = condition_vi(Bt, p.alpha)
    report.update(Btilde=_fmt(Bt), G=_fmt(G), condition_vi=vi)
    if cross_check:
        report["condition_v"] = condition_v(Bt, Bt, p.alpha).as_dict()
    if vi:
        return Verdict(EXISTS, None, candidate, report)
    reason = BOUNDED_G if g_bounded(G) else CRITERION_VI
    return Verdict(NO_OPTIMAL, reason, candidate, report)


# -- witness -------------------------------------------------------------------------

class WitnessError(RuntimeError):
    pass


def witness_construct(Atilde, Btilde, alpha, C: float = 1.0, j_max: int = 5, j_start: int = 2,
                      t_cap: float = 1e15, scan_ratio: float = 2.0 ** 0.25, guard_factor: float = 2.0,
                      gamma_range=(2.0, 1e6)) -> WitnessConstruction:
    """Piecewise-linear enlargement of Atilde along chords (t_j, tau_j).

    tau_t solves Atilde(tau)/tau = gamma Btilde(2Ct)/t. Each t_j is the first
    point of a 2^{1/4}-geometric scan above the previous tau with
    (Atilde(tau)/tau) t / Atilde(j t) >= j, 2t < tau, and the running sum
    of Btilde(2C t_k)/t_k^P bounded by ``guard_factor`` Btilde(Ct)/t^P.
    """
    A, B = _young(Atilde), _young(Btilde)
    alpha = as_fraction(alpha)
    P = float(_P(alpha))
    Bterm = getattr(B, "term", None)
    if Bterm is not None and g_bounded(g_function(Bterm, alpha)):
        raise PreconditionError("G is bounded: the witness for this case is not constructed")
    probe_t = np.geomspace(*gamma_range, 2000)
    gamma = 1.05 * float(np.max(A(probe_t) / B(2 * C * probe_t)))
    ratio = lambda s: A(s) / s

    def tau_of(t: float) -> float:
        target = gamma * float(B(2 * C * t)) / t
        return float(invert_increasing(ratio, target, lo=t, rtol=1e-8))

    t_seq, tau_seq, notes = [], [], []
    running = 0.0
    t = 2.0 * scan_ratio
    complete = True
    for j in range(j_start, j_max + 1):
        if tau_seq:
            t = max(t, tau_seq[-1]) * scan_ratio
        while True:
            if t > t_cap:
                complete = False
                notes.append(f"scan for j={j} passed t={t_cap:g}; witness is partial")
                break
            tau = tau_of(t)
            crit = ratio(tau) * t / float(A(j * t))
            guard = running <= guard_factor * float(B(C * t)) / t ** P
            if crit >= j and 2 * t < tau and guard:
                break
            t *= scan_ratio
        if not complete:
            break
        t_seq.append(float(t))
        tau_seq.append(float(tau))
        running += float(B(2 * C * t)) / t ** P
    segs = [Segment(t, tau, float(A(t)), float(A(tau))) for t, tau in zip(t_seq, tau_seq)]
    patched = PatchedYoung(A, segs)
    return WitnessConstruction(gamma, float(C), alpha, t_seq, tau_seq, patched, A, B, complete, j_start, notes)


# -- Orlicz vs Marcinkiewicz ------------------------------------------------------

def orlicz_equals_marcinkiewicz(A: YoungFunction, delta_grid: Sequence[float] = (0.5, 0.25, 0.1),
                                eps: Sequence[float] = tuple(10.0 ** -k for k in (4, 8, 12, 16))) -> Optional[bool]:
    """Whether int_0^1 A(delta A^{-1}(1/t)) dt < oo for some delta in (0, 1).

    Exponential families are decided symbolically; PLL Young functions give
    an integrand ~ delta^P / t, hence never. Otherwise the truncated integral
    over (eps, 1) is watched as eps -> 0; None means the trend is inconclusive.
    """
    if isinstance(A, ExplicitYoung):
        if A.family in ("exp_power", "exp_minus_linear"):
            return True
        if A.family == "power":
            return False
    if getattr(A, "term", None) is not None:
        return False
    for d in delta_grid:
        vals = []
        for e in eps:
            f = lambda t: A(d * young_inverse(A, 1.0 / t))
            vals.append(integrate_log(f, e, 1.0, per_decade=4))
        vals = np.asarray(vals)
        inc = np.diff(vals) / vals[1:]
        if np.all(inc < 1e-3):
            return True
        if np.all(inc > 0.05):
            continue
        return None
    return False


# -- S_alpha cross-check ----------------------------------------------------------

def sup_operator_probe(Btilde, alpha, scales: Sequence[float] = tuple(10.0 ** -k for k in range(1, 9)),
                       seed: int = 0) -> ProbeReport:
    """Boundedness probe of S_alpha on L^{Btilde} (bounded iff an optimal domain exists)."""
    space = OrliczSpace(_young(Btilde))
    return boundedness_probe(make_operator("sup", alpha), space, space, scales=scales, seed=seed)
