"""Norm engines: Luxemburg/Orlicz, Marcinkiewicz and Lorentz endpoint, Lorentz L^{p,q}."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ._numerics import gauss_legendre, invert_increasing
from .asymptotics import Chart, PLLTerm, as_fraction, constant, format_term, pll_power, pll_reciprocal_substitute
from .rearrangement import StepFunction, characteristic, primitive, rearrange
from .young import ExplicitYoung, YoungFunction, conjugate_value, young_inverse

REFINE_PER_CELL = 16


class NotQuasiconcave(ValueError):
    pass


class FundamentalFunction:
    """Quasiconcave function on (0, 1], given by a PLL term at zero or a table."""

    def __init__(self, term: Optional[PLLTerm] = None, table: Optional[tuple] = None, label: str = ""):
        if (term is None) == (table is None):
            raise ValueError("give exactly one of term or table")
        if term is not None and term.chart is not Chart.ZERO:
            raise ValueError("fundamental functions live on the ZERO chart")
        self.term = term
        if table is not None:
            x, y = (np.asarray(a, dtype=float) for a in table)
            if np.any(np.diff(x) <= 0) or np.any(y <= 0):
                raise ValueError("table needs increasing abscissas and positive values")
            table = (x, y)
        self.table = table
        self.label = label or (format_term(term) if term is not None else "tabulated")

    @property
    def symbolic(self) -> bool:
        return self.term is not None

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        if self.term is not None:
            return self.term.eval(t)
        x, y = self.table
        out = np.exp(np.interp(np.log(t), np.log(x), np.log(y)))
        return out if out.ndim else float(out)

    def at_zero(self) -> float:
        """phi(0+)."""
        if self.term is not None:
            return float(self.term.coeff) if self.term.is_constant() else 0.0
        return float(self.table[1][0]) if self.table[0][0] <= 0 else 0.0

    def check_quasiconcave(self, grid=None, rtol: float = 1e-9) -> bool:
        t = np.geomspace(1e-12, 1.0, 400) if grid is None else np.asarray(grid, dtype=float)
        y = np.asarray(self.eval(t))
        inc = np.all(np.diff(y) >= -rtol * y[1:])
        dec = np.all(np.diff(y / t) <= rtol * (y / t)[:-1])
        return bool(inc and dec)

    def __repr__(self):
        return f"FundamentalFunction({self.label})"


# -- space specifications ----------------------------------------------------

@dataclass(frozen=True)
class OrliczSpace:
    A: YoungFunction


@dataclass(frozen=True)
class MarcinkiewiczSpace:
    phi: FundamentalFunction


@dataclass(frozen=True)
class LorentzEndpointSpace:
    phi: FundamentalFunction


@dataclass(frozen=True)
class LorentzSpace:
    p: float
    q: float
    maximal: bool = False

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        ok = (1 < p < math.inf and 1 <= q <= math.inf) or (p == q and p in (1.0, math.inf))
        if not ok:
            raise ValueError(f"L^{{p,q}} needs 1 < p < oo, 1 <= q <= oo, or p = q in {{1, oo}}; got ({p}, {q})")


@dataclass(frozen=True)
class LebesgueSpace:
    p: float

    def __post_init__(self):
        if not float(self.p) >= 1:
            raise ValueError("Lebesgue exponent must be >= 1")


SpaceSpec = Union[OrliczSpace, MarcinkiewiczSpace, LorentzEndpointSpace, LorentzSpace, LebesgueSpace]


def power_phi(r, coeff: float = 1.0) -> FundamentalFunction:
    """t^{1/r} (r = oo gives the constant 1)."""
    if r == math.inf:
        return FundamentalFunction(constant(coeff))
    return FundamentalFunction(PLLTerm.at_zero(1 / as_fraction(r), coeff=coeff))


# -- Orlicz ------------------------------------------------------------------

def _modular(A: YoungFunction, f: StepFunction, mu):
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    with np.errstate(over="ignore", invalid="ignore"):
        vals = A.eval(np.outer(mu, f.values))
    return np.sum(vals * f.widths[None, :], axis=1)


@dataclass
class NormReport:
    value: float
    diagnostics: dict = field(default_factory=dict)


def luxemburg_report(A: YoungFunction, f: StepFunction, rtol: float = 1e-10) -> NormReport:
    if f.is_zero():
        return NormReport(0.0, {"modular": 0.0})
    # bisect on mu = 1/lambda, where the modular is increasing
    mu = invert_increasing(lambda m: _modular(A, f, m), 1.0, rtol=rtol)
    mod = float(_modular(A, f, mu)[0])
    if not np.isfinite(mod):
        raise ArithmeticError("modular is infinite for every scale")
    return NormReport(1.0 / mu, {"modular": mod})


def luxemburg_norm(A: YoungFunction, f: StepFunction, rtol: float = 1e-10) -> float:
    return luxemburg_report(A, f, rtol).value


def amemiya_norm(A: YoungFunction, f: StepFunction, k_grid=None) -> float:
    """Orlicz norm via inf_k (1 + int A(k f)) / k, an upper-bound oracle on a k-grid."""
    if f.is_zero():
        return 0.0
    lam = luxemburg_norm(A, f)
    k = np.geomspace(0.25 / lam, 8.0 / lam, 2001) if k_grid is None else np.asarray(k_grid)
    vals = (1 + _modular(A, f, k)) / k
    return float(np.min(vals))


def orlicz_dual_lower(A: YoungFunction, f: StepFunction, trials: int = 16,
                      rng: Optional[np.random.Generator] = None) -> float:
    """Lower bound for sup{int f g : int Atilde(|g|) <= 1}.

    Candidates are aligned profiles g = a(|f|/lam) (a = A') over a range of
    lam, powers of |f|, and random step functions; each is scaled to be
    exactly modular-feasible, so the result never exceeds the Orlicz norm.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if f.is_zero():
        return 0.0
    rng = np.random.default_rng(0) if rng is None else rng
    lam = luxemburg_norm(A, f)
    w, v = f.widths, f.values
    cands = [A.derivative(v / (lam * c)) for c in np.geomspace(0.5, 2.0, 9)]
    cands += [v ** r for r in (0.5, 1.0, 2.0)]
    cands += [rng.exponential(1.0, v.size) * (v > 0) for _ in range(trials)]
    best = 0.0
    for g in cands:
        g = np.asarray(g, dtype=float)
        if not np.any(g > 0) or not np.all(np.isfinite(g)):
            continue
        nz = g > 0

        def mod(c):
            c = np.atleast_1d(np.asarray(c, dtype=float))
            vals = conjugate_value(A, (c[:, None] * g[nz][None, :]).ravel())
            return vals.reshape(c.size, -1) @ w[nz]

        # mod is increasing in c: bracket on a log grid, then refine the
        # bracket on linear grids (each round shrinks it ~64x)
        cs = np.geomspace(1e-12, 1e12, 97)
        m = mod(cs)
        k = int(np.searchsorted(m, 1.0))
        if k == 0 or k == cs.size:
            continue
        lo_c, hi_c = cs[k - 1], cs[k]
        for _ in range(6):
            cs = np.linspace(lo_c, hi_c, 65)
            m = mod(cs)
            k = min(max(int(np.searchsorted(m, 1.0)), 1), cs.size - 1)
            lo_c, hi_c = cs[k - 1], cs[k]
        c = lo_c * (1 - 1e-8)
        while mod(c)[0] > 1:
            c *= 1 - 1e-6
        best = max(best, float(c * np.dot(f.values * g, w)))
    return best


# -- endpoint and Lorentz spaces --------------------------------------------

def _refinement(fs: StepFunction, per_cell: int = REFINE_PER_CELL) -> np.ndarray:
    e = fs.edges
    pts = [e[1:]]
    lo, hi = e[1:-1], e[2:]
    if lo.size:
        r = np.linspace(0, 1, per_cell + 2)[1:-1]
        pts.append((lo[:, None] * (hi / lo)[:, None] ** r[None, :]).ravel())
    return np.unique(np.concatenate(pts))


def marcinkiewicz_report(phi: FundamentalFunction, f: StepFunction) -> NormReport:
    fs = rearrange(f)
    t = _refinement(fs)
    vals = primitive(fs, t) / t * phi(t)
    i = int(np.nanargmax(vals))
    return NormReport(float(vals[i]), {"sup_location": float(t[i])})


def lorentz_endpoint_norm(phi: FundamentalFunction, f: StepFunction) -> float:
    fs = rearrange(f)
    ph = np.asarray(phi(fs.edges[1:]), dtype=float)
    inc = np.diff(np.concatenate([[0.0], ph]))
    if np.any(inc < -1e-12 * ph):
        raise NotQuasiconcave("phi decreases on the grid")
    return float(np.dot(fs.values, inc))


def endpoint_norm(spec: SpaceSpec, f: StepFunction) -> float:
    if isinstance(spec, MarcinkiewiczSpace):
        return marcinkiewicz_report(spec.phi, f).value
    if isinstance(spec, LorentzEndpointSpace):
        return lorentz_endpoint_norm(spec.phi, f)
    raise TypeError("endpoint_norm takes a Marcinkiewicz or Lorentz endpoint space")


def _maximal_q_integral(fs: StepFunction, p: float, q: float) -> float:
    """int_0^1 (t^{1/p} f**(t))^q dt/t, first cell closed form, the rest by Gauss-Legendre in log t."""
    e, v = fs.edges, fs.values
    P = primitive(fs, e[:-1])
    total = v[0] ** q * (p / q) * e[1] ** (q / p)
    lo, hi = e[1:-1], e[2:]
    if lo.size:
        x, w = gauss_legendre(24)
        ul, uh = np.log(lo)[:, None], np.log(hi)[:, None]
        t = np.exp(0.5 * (ul + uh) + 0.5 * (uh - ul) * x[None, :])
        D = (P[1:] - v[1:] * lo)[:, None]
        fss = v[1:, None] + D / t
        total += float(np.sum((t ** (1 / p) * fss) ** q * w[None, :] * 0.5 * (uh - ul)))
    return total


def _maximal_sup(fs: StepFunction, p: float) -> float:
    e, v = fs.edges, fs.values
    P = primitive(fs, e[:-1])
    cand = [e[1:]]
    D = P[1:] - v[1:] * e[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ts = np.where(v[1:] > 0, D * (p - 1) / v[1:], np.inf)
    inside = (ts > e[1:-1]) & (ts < e[2:])
    cand.append(ts[inside])
    t = np.concatenate(cand)
    return float(np.max(t ** (1 / p) * primitive(fs, t) / t))


def lorentz_pq_norm(p, q, f: StepFunction, maximal: bool = False) -> float:
    spec = LorentzSpace(p, q, maximal)
    p, q = float(spec.p), float(spec.q)
    fs = rearrange(f)
    e, v = fs.edges, fs.values
    if p == math.inf:
        return float(v[0])
    if maximal:
        if q == math.inf:
            return _maximal_sup(fs, p)
        return _maximal_q_integral(fs, p, q) ** (1 / q)
    if q == math.inf:
        return float(np.max(v * e[1:] ** (1 / p)))
    return float(np.dot(v ** q, (p / q) * np.diff(e ** (q / p)))) ** (1 / q)


def lebesgue_norm(p, f: StepFunction) -> float:
    p = float(p)
    if p == math.inf:
        return float(np.max(f.values))
    return float(np.dot(f.values ** p, f.widths)) ** (1 / p)


def norm(spec: SpaceSpec, f: StepFunction) -> float:
    if isinstance(spec, OrliczSpace):
        return luxemburg_norm(spec.A, f)
    if isinstance(spec, (MarcinkiewiczSpace, LorentzEndpointSpace)):
        return endpoint_norm(spec, f)
    if isinstance(spec, LorentzSpace):
        return lorentz_pq_norm(spec.p, spec.q, f, spec.maximal)
    if isinstance(spec, LebesgueSpace):
        return lebesgue_norm(spec.p, f)
    raise TypeError(f"unknown space {spec!r}")


# -- fundamental functions ---------------------------------------------------

def inverse_term(A: YoungFunction) -> Optional[PLLTerm]:
    """PLL term at infinity equivalent to A^{-1}, if known."""
    if isinstance(A, ExplicitYoung):
        return A.inverse_term
    term = getattr(A, "term", None)
    if term is None:
        return None
    P, Q, R = term.pow, term.logexp, term.loglogexp
    # A^{-1}(y) ~ (y/c)^{1/P} (log y / P)^{-Q/P} (loglog y)^{-R/P}
    coeff = term.coeff ** (-1 / float(P)) * float(P) ** (float(Q) / float(P))
    return PLLTerm.at_inf(1 / P, -Q / P, -R / P, coeff=coeff)


def orlicz_fundamental_term(A: YoungFunction) -> Optional[PLLTerm]:
    """1/A^{-1}(1/t) as a term at zero."""
    inv = inverse_term(A)
    if inv is None:
        return None
    return pll_power(pll_reciprocal_substitute(inv, 1), -1)


def fundamental(spec: SpaceSpec, grid=None) -> FundamentalFunction:
    if isinstance(spec, (MarcinkiewiczSpace, LorentzEndpointSpace)):
        return spec.phi
    if isinstance(spec, LebesgueSpace):
        return power_phi(float(spec.p) if spec.p != math.inf else math.inf)
    if isinstance(spec, LorentzSpace):
        p, q = float(spec.p), float(spec.q)
        c = 1.0 if q == math.inf or p == q else (p / q) ** (1 / q)
        return power_phi(as_fraction(spec.p) if p != math.inf else math.inf, coeff=c)
    if isinstance(spec, OrliczSpace):
        term = orlicz_fundamental_term(spec.A)
        if term is not None:
            return FundamentalFunction(term)
        t = np.geomspace(1e-12, 1.0, 241) if grid is None else np.asarray(grid)
        return FundamentalFunction(table=(t, 1.0 / young_inverse(spec.A, 1.0 / t)), label="orlicz(tab)")
    raise TypeError(f"unknown space {spec!r}")


def fundamental_numeric(spec: SpaceSpec, t) -> np.ndarray:
    """||chi_(0,t)|| computed by the norm engine."""
    return np.array([norm(spec, characteristic(float(x))) if x < 1 else norm(spec, StepFunction.constant())
                     for x in np.atleast_1d(t)])
