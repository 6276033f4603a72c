"""Young functions: evaluation, inversion, conjugation, and the E_xi functional.

Four backends share one interface:

* :class:`SymbolicYoung` -- a PLL term at infinity, spliced to a power law
  below a point ``t0 >= e^2`` where the term is convex and has elasticity > 1;
* :class:`TabulatedYoung` -- piecewise linear through a convex table;
* :class:`PatchedYoung` -- a base function with chords laid over intervals;
* :class:`ExplicitYoung` -- named closed forms (``exp(t^g) - 1`` and friends).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from ._numerics import cumulative_log, gauss_legendre, invert_increasing
from .asymptotics import Chart, Order, PLLTerm, as_fraction, format_term, parse_term, pll_compare

INVERSE_RTOL = 1e-10
CONJUGATE_RTOL = 1e-10


class NotAYoungFunction(ValueError):
    pass


class ScalarFunction:
    """Positive function on an interval, with an optional asymptotic PLL term."""

    def __init__(self, func: Callable, term: Optional[PLLTerm] = None, label: str = ""):
        self._func = func
        self.term = term
        self.label = label or (format_term(term) if term is not None else "<function>")

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._func(t), dtype=float)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


class YoungFunction(ScalarFunction):
    """Base class; subclasses implement ``_eval`` and ``_slope``."""

    term: Optional[PLLTerm] = None

    def __init__(self, label: str = ""):
        self.label = label

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t > 0, self._eval(np.maximum(t, 1e-300)), 0.0)
        return out if out.ndim else float(out)

    def derivative(self, t):
        """Right derivative."""
        t = np.asarray(t, dtype=float)
        out = np.where(t > 0, self._slope(np.maximum(t, 1e-300)), 0.0)
        return out if out.ndim else float(out)

    def inverse(self, y, rtol: float = INVERSE_RTOL):
        return young_inverse(self, y, rtol)

    def _eval(self, t):
        raise NotImplementedError

    def _slope(self, t):
        h = 1e-6 * t
        return (self._eval(t + h) - self._eval(t)) / h

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class SymbolicYoung(YoungFunction):
    def __init__(self, term: PLLTerm, t0: Optional[float] = None):
        if term.chart is not Chart.INF:
            raise NotAYoungFunction("Young function terms live on the INF chart")
        if term.pow < 1 or (term.pow == 1 and term.logexp <= 0 and not (term.logexp == 0 and term.loglogexp > 0)):
            raise NotAYoungFunction(f"{format_term(term)} does not outgrow t at infinity")
        super().__init__(format_term(term))
        self.term = term
        self.t0 = self._find_splice() if t0 is None else float(t0)
        self.k = float(term.elasticity(self.t0))
        self.A0 = float(term.eval(self.t0))

    def _find_splice(self) -> float:
        t0 = math.e ** 2
        for _ in range(400):
            e0 = float(self.term.elasticity(t0))
            if e0 > 1:
                grid = np.geomspace(t0, t0 * 1e8, 400)
                slope = self.term.eval(grid) * self.term.elasticity(grid) / grid
                if np.all(np.diff(slope) >= -1e-12 * np.abs(slope[1:])):
                    return t0
            t0 *= 2.0
        raise NotAYoungFunction(f"no convex region found for {format_term(self.term)}")

    def _eval(self, t):
        with np.errstate(over="ignore", invalid="ignore"):
            hi = self.term.eval(np.maximum(t, self.t0))
            lo = self.A0 * (t / self.t0) ** self.k
        return np.where(t >= self.t0, hi, lo)

    def _slope(self, t):
        with np.errstate(over="ignore", invalid="ignore"):
            tt = np.maximum(t, self.t0)
            hi = self.term.eval(tt) * self.term.elasticity(tt) / tt
            lo = self.k * self.A0 * t ** (self.k - 1) / self.t0 ** self.k
        return np.where(t >= self.t0, hi, lo)

    def to_dict(self):
        return {"backend": "symbolic", "term": format_term(self.term), "t0": self.t0}


class TabulatedYoung(YoungFunction):
    """Piecewise-linear interpolation of a convex table, power-law tails."""

    def __init__(self, x: Sequence[float], y: Sequence[float], label: str = "tabulated",
                 check: bool = True):
        super().__init__(label)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or len(x) < 3:
            raise NotAYoungFunction("need matching 1-d abscissa/value arrays of length >= 3")
        if np.any(np.diff(x) <= 0) or x[0] <= 0:
            raise NotAYoungFunction("abscissas must be positive and strictly increasing")
        if np.any(y <= 0) or np.any(np.diff(y) <= 0):
            raise NotAYoungFunction("values must be positive and strictly increasing")
        self.x, self.y = x, y
        self.slopes = np.diff(y) / np.diff(x)
        if check and np.any(np.diff(self.slopes) < -1e-9 * self.slopes[1:]):
            raise NotAYoungFunction("table is not convex")
        self.k_lo = max(1.0, min(self.slopes[0] * x[0] / y[0], 1e6))
        self.k_hi = max(1.0, self.slopes[-1] * x[-1] / y[-1])

    def _eval(self, t):
        x, y = self.x, self.y
        with np.errstate(over="ignore"):
            mid = np.interp(t, x, y)
            lo = y[0] * (t / x[0]) ** self.k_lo
            hi = y[-1] * (t / x[-1]) ** self.k_hi
        return np.where(t < x[0], lo, np.where(t > x[-1], hi, mid))

    def _slope(self, t):
        x, y = self.x, self.y
        idx = np.clip(np.searchsorted(x, t, side="right") - 1, 0, len(self.slopes) - 1)
        with np.errstate(over="ignore"):
            lo = self.k_lo * y[0] / x[0] * (t / x[0]) ** (self.k_lo - 1)
            hi = self.k_hi * y[-1] / x[-1] * (t / x[-1]) ** (self.k_hi - 1)
        return np.where(t < x[0], lo, np.where(t >= x[-1], hi, self.slopes[idx]))

    def to_dict(self):
        return {"backend": "tabulated", "x": self.x.tolist(), "y": self.y.tolist(), "label": self.label}

    def to_csv(self, path) -> None:
        np.savetxt(path, np.column_stack([self.x, self.y]), delimiter=",", fmt="%.17g")

    @classmethod
    def from_csv(cls, path, label: str = "tabulated") -> "TabulatedYoung":
        data = np.loadtxt(path, delimiter=",", ndmin=2)
        return cls(data[:, 0], data[:, 1], label=label)


@dataclass(frozen=True)
class Segment:
    t_lo: float
    t_hi: float
    value_lo: float
    value_hi: float

    @property
    def slope(self) -> float:
        return (self.value_hi - self.value_lo) / (self.t_hi - self.t_lo)


class PatchedYoung(YoungFunction):
    """Base Young function with linear chords on disjoint intervals."""

    def __init__(self, base: YoungFunction, segments: Sequence[Segment], check: bool = True):
        super().__init__(f"patched({base.label})")
        self.base = base
        self.segments = tuple(segments)
        self.term = None
        self._lo = np.array([s.t_lo for s in self.segments])
        self._hi = np.array([s.t_hi for s in self.segments])
        self._vlo = np.array([s.value_lo for s in self.segments])
        self._slopes = np.array([s.slope for s in self.segments])
        if check:
            self._validate()

    def _validate(self):
        if len(self.segments) == 0:
            return
        if np.any(self._hi <= self._lo) or np.any(self._lo[1:] < self._hi[:-1]):
            raise NotAYoungFunction("segments must be nonempty, ordered and disjoint")
        for s in self.segments:
            inner = np.linspace(s.t_lo, s.t_hi, 9)[1:-1]
            chord = s.value_lo + s.slope * (inner - s.t_lo)
            if np.any(chord < self.base(inner) * (1 - 1e-12)):
                raise NotAYoungFunction("chord dips below the base function")
            left = self.base.derivative(s.t_lo * (1 - 1e-9))
            right = self.base.derivative(s.t_hi)
            if not (left <= s.slope * (1 + 1e-9) and s.slope <= right * (1 + 1e-9)):
                raise NotAYoungFunction("patched slopes are not monotone")

    def _locate(self, t):
        idx = np.searchsorted(self._lo, t, side="right") - 1
        inside = (idx >= 0) & (t < self._hi[np.clip(idx, 0, None)]) if len(self._lo) else np.zeros(t.shape, bool)
        return np.clip(idx, 0, None), inside

    def _eval(self, t):
        base = self.base._eval(t)
        if not len(self.segments):
            return base
        idx, inside = self._locate(t)
        chord = self._vlo[idx] + self._slopes[idx] * (t - self._lo[idx])
        return np.where(inside, chord, base)

    def _slope(self, t):
        base = self.base._slope(t)
        if not len(self.segments):
            return base
        idx, inside = self._locate(t)
        return np.where(inside, self._slopes[idx], base)

    def to_dict(self):
        return {
            "backend": "patched",
            "base": self.base.to_dict(),
            "segments": [[s.t_lo, s.t_hi, s.value_lo, s.value_hi] for s in self.segments],
        }


def _exp_power(gamma):
    g = float(gamma)

    def f(t):
        with np.errstate(over="ignore"):
            return np.expm1(t ** g)

    def df(t):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.where(t > 0, g * t ** (g - 1) * np.exp(t ** g), 0.0)

    # A^{-1}(y) ~ log^{1/g} y
    return f, df, PLLTerm.at_inf(0, Fraction(1) / as_fraction(gamma))


def _exp_minus_linear():
    def f(t):
        with np.errstate(over="ignore"):
            return np.expm1(t) - t

    def df(t):
        with np.errstate(over="ignore"):
            return np.expm1(t)

    return f, df, PLLTerm.at_inf(0, 1)


def _power(p, scale=1.0):
    pf = as_fraction(p)
    p = float(pf)

    def f(t):
        with np.errstate(over="ignore"):
            return scale * t ** p

    def df(t):
        with np.errstate(over="ignore"):
            return scale * p * t ** (p - 1)

    return f, df, PLLTerm.at_inf(1 / pf, 0, coeff=scale ** (-1 / p))


_FAMILIES = {"exp_power": _exp_power, "exp_minus_linear": _exp_minus_linear, "power": _power}


class ExplicitYoung(YoungFunction):
    """Closed-form Young function from a named family.

    ``inverse_term`` is a PLL term at infinity equivalent to A^{-1}; it lets
    fundamental functions of exponential-type spaces stay symbolic.
    """

    def __init__(self, family: str, **params):
        if family not in _FAMILIES:
            raise KeyError(f"unknown family {family!r}; known: {sorted(_FAMILIES)}")
        f, df, inv_term = _FAMILIES[family](**params)
        label = family + "(" + ", ".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
        super().__init__(label)
        self.family, self.params = family, params
        self._f, self._df = f, df
        self.inverse_term = inv_term
        if family == "power":
            self.term = PLLTerm.at_inf(as_fraction(params["p"]), coeff=float(params.get("scale", 1.0)))

    def _eval(self, t):
        return self._f(t)

    def _slope(self, t):
        return self._df(t)

    def to_dict(self):
        params = {k: str(v) if isinstance(v, Fraction) else v for k, v in self.params.items()}
        return {"backend": "explicit", "family": self.family, "params": params}


def power_young(p, scale: float = 1.0) -> YoungFunction:
    """scale * t^p as an exact Young function (p > 1)."""
    return ExplicitYoung("power", p=p, scale=scale)


def young_from_dict(d: dict) -> YoungFunction:
    backend = d["backend"]
    if backend == "symbolic":
        return SymbolicYoung(parse_term(d["term"]), t0=d.get("t0"))
    if backend == "tabulated":
        return TabulatedYoung(d["x"], d["y"], label=d.get("label", "tabulated"))
    if backend == "patched":
        segs = [Segment(*s) for s in d["segments"]]
        return PatchedYoung(young_from_dict(d["base"]), segs)
    if backend == "explicit":
        return ExplicitYoung(d["family"], **d["params"])
    if backend == "xlogx":
        return _xlogx_young()
    raise ValueError(f"unknown backend {backend!r}")


def young_from_json(text: str) -> YoungFunction:
    return young_from_dict(json.loads(text))


# -- module-level operations -------------------------------------------------

def young_eval(A: YoungFunction, t):
    return A.eval(t)


def young_inverse(A: YoungFunction, y, rtol: float = INVERSE_RTOL):
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("young_inverse needs y >= 0")
    pos = np.where(y > 0, y, 1.0)
    out = invert_increasing(A.eval, pos, rtol=rtol)
    out = np.where(y > 0, out, 0.0)
    return out if out.ndim else float(out)


def _conjugate_term(term: PLLTerm) -> PLLTerm:
    """Leading PLL term of the complementary function of c t^P L^Q LL^R, P > 1."""
    P, Q, R = term.pow, term.logexp, term.loglogexp
    Pm1 = P - 1
    c = term.coeff
    coeff = (1 - 1 / float(P)) * (c * float(P)) ** (-1 / float(Pm1)) * float(Pm1) ** (float(Q) / float(Pm1))
    return PLLTerm.at_inf(P / Pm1, -Q / Pm1, -R / Pm1, coeff=coeff)


def conjugate_value(A: YoungFunction, s, iters: int = 200):
    """sup_{t>0} (s t - A(t)) by vectorized golden-section search.

    The bracket [0, T] uses T with A(T)/T >= s, past which s t - A(t) < 0.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    ratio = lambda t: A.eval(t) / t
    T = invert_increasing(ratio, s, rtol=1e-6)
    T = T * 1.01
    lo = np.zeros_like(s)
    hi = T.copy()
    g = (math.sqrt(5) - 1) / 2
    obj = lambda t: s * t - A.eval(t)
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = obj(x1), obj(x2)
    for _ in range(iters):
        left = f1 < f2
        lo = np.where(left, x1, lo)
        hi = np.where(left, hi, x2)
        x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
        f1, f2 = obj(x1), obj(x2)
        if np.all(hi - lo <= CONJUGATE_RTOL * np.maximum(hi, 1e-300)):
            break
    best = np.maximum(np.maximum(f1, f2), obj(0.5 * (lo + hi)))
    return np.maximum(best, 0.0)


@dataclass
class ConjugateResult:
    young: YoungFunction
    exact: bool
    flag: str = ""


def conjugate(A: YoungFunction, t_range: tuple[float, float] = (1e-4, 1e8),
              points: int = 2049) -> YoungFunction:
    """Complementary Young function.

    Symbolic terms with power > 1 conjugate symbolically; everything else is
    tabulated over the slope range of A on ``t_range``. The tabulated case
    sets ``flag`` on the result when the symbolic rule does not apply.
    """
    return conjugate_with_info(A, t_range, points).young


def conjugate_with_info(A: YoungFunction, t_range=(1e-4, 1e8), points: int = 2049) -> ConjugateResult:
    if isinstance(A, SymbolicYoung) and A.term.pow > 1:
        return ConjugateResult(SymbolicYoung(_conjugate_term(A.term)), True)
    if isinstance(A, ExplicitYoung) and A.family == "power" and float(A.params["p"]) > 1:
        p = as_fraction(A.params["p"])
        scale = float(A.params.get("scale", 1.0))
        pc = p / (p - 1)
        # (c t^p)~ = (1 - 1/p) (c p)^{-1/(p-1)} s^{p'}
        c2 = (1 - 1 / float(p)) * (scale * float(p)) ** (-1 / float(p - 1))
        return ConjugateResult(ExplicitYoung("power", p=str(pc), scale=c2), True)
    if isinstance(A, ExplicitYoung) and A.family == "exp_minus_linear":
        return ConjugateResult(_xlogx_young(), True)
    lo, hi = t_range
    while not float(A.derivative(hi)) < 1e250:
        hi /= 2
    s_lo = float(A.derivative(lo))
    s_hi = float(A.derivative(hi))
    if not (np.isfinite(s_hi) and s_hi > s_lo > 0):
        raise NotAYoungFunction("slope range of A is degenerate on t_range")
    s = np.geomspace(s_lo, s_hi, points)
    vals = conjugate_value(A, s)
    keep = np.concatenate([[True], np.diff(vals) > 0]) & (vals > 0)
    flag = "" if not isinstance(A, SymbolicYoung) else "power <= 1: bounded-range tabulation"
    tab = TabulatedYoung(s[keep], vals[keep], label=f"conj({A.label})", check=False)
    return ConjugateResult(tab, False, flag)


class _XLogX(YoungFunction):
    """(1 + s) log(1 + s) - s, the complement of e^t - t - 1."""

    def __init__(self):
        super().__init__("conj(exp_minus_linear)")

    def _eval(self, s):
        return (1 + s) * np.log1p(s) - s

    def _slope(self, s):
        return np.log1p(s)

    def to_dict(self):
        return {"backend": "xlogx"}


def _xlogx_young():
    return _XLogX()


def conjugate_pair_defect(A: YoungFunction, tgrid, Atilde: Optional[YoungFunction] = None) -> float:
    """Largest relative violation of t <= A^{-1}(t) Atilde^{-1}(t) <= 2t on the grid."""
    t = np.asarray(tgrid, dtype=float)
    if Atilde is None:
        inv_tilde = invert_increasing(lambda s: conjugate_value(A, s), t, rtol=1e-10)
    else:
        inv_tilde = young_inverse(Atilde, t)
    r = young_inverse(A, t) * inv_tilde / t
    return float(np.max(np.maximum(0.0, np.maximum(1.0 - r, r / 2.0 - 1.0))))


# -- E_xi ------------------------------------------------------------------

def splice_exponent(xi: float) -> int:
    """k = ceil(1/(1 - alpha)) + 1 with alpha = 1 + xi, for xi < 0."""
    return math.ceil(-1.0 / xi) + 1


class EXiProfile:
    """E_xi(t) = |xi|^{-1} t^{-1/xi} int_0^t A(s) s^{1/xi - 1} ds, tabulated eagerly.

    For xi < 0 the function is replaced on (0, 1) by A(1) s^k so that the
    integral converges at 0; this does not change the Orlicz space on (0, 1).
    """

    def __init__(self, A: YoungFunction, xi: float, t_lo: float = 1e-12, t_hi: float = 1e16,
                 per_decade: int = 8):
        xi = float(xi)
        if xi == 0:
            raise ValueError("xi must be nonzero")
        self.A, self.xi = A, xi
        self.e = 1.0 / xi
        if xi < 0:
            self.k = splice_exponent(xi)
            self.A1 = float(A(1.0))
            if self.k + self.e <= 0:
                raise ArithmeticError("splice exponent too small for convergence")
            t_lo = 1.0
        else:
            self.k = None
        self.t_lo, self.t_hi = t_lo, t_hi
        n = int(np.ceil(np.log10(t_hi / t_lo) * per_decade))
        self.grid = np.geomspace(t_lo, t_hi, n + 1)
        with np.errstate(over="ignore", invalid="ignore"):
            self.base = self._below(t_lo)
            self.cum = self.base + cumulative_log(self._integrand, self.grid)

    def _spliced(self, s):
        if self.k is None:
            return self.A.eval(s)
        return np.where(s < 1.0, self.A1 * s ** (self.k if self.k else 1), self.A.eval(s))

    def _integrand(self, s):
        with np.errstate(over="ignore", invalid="ignore"):
            return self._spliced(s) * s ** (self.e - 1.0)

    def _below(self, t: float) -> float:
        """int_0^t of the integrand for t <= t_lo."""
        if self.k is not None:
            return self.A1 * t ** (self.k + self.e) / (self.k + self.e)
        h = t * 1e-3
        elas = max(1.0, float(np.log(self.A(t) / self.A(t - h)) / np.log(t / (t - h))))
        return float(self.A(t)) * t ** self.e / (elas + self.e)

    def integral(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t)
        small = t <= self.t_lo
        for i in np.flatnonzero(small):
            out[i] = self._below(t[i]) if self.k is None else self.A1 * t[i] ** (self.k + self.e) / (self.k + self.e)
        big = ~small
        if big.any():
            tb = np.minimum(t[big], self.t_hi)
            idx = np.clip(np.searchsorted(self.grid, tb, side="right") - 1, 0, len(self.grid) - 2)
            left = self.grid[idx]
            x, w = gauss_legendre(16)
            lo = np.log(left)[:, None]
            hi = np.log(tb)[:, None]
            u = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x[None, :]
            s = np.exp(u)
            with np.errstate(over="ignore", invalid="ignore"):
                part = np.sum(self._integrand(s) * s * 0.5 * (hi - lo) * w[None, :], axis=1)
            val = self.cum[idx] + part
            beyond = t[big] > self.t_hi
            if beyond.any():
                from ._numerics import integrate_log
                extra = np.array([integrate_log(self._integrand, self.t_hi, tt) for tt in t[big][beyond]])
                val[beyond] += extra
            out[big] = val
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            val = abs(self.xi) ** -1 * t ** (-self.e) * self.integral(t).reshape(t.shape)
        return val if val.ndim else float(val)

    def inverse(self, y, rtol: float = INVERSE_RTOL):
        return invert_increasing(self.__call__, y, rtol=rtol)


def e_xi(A: YoungFunction, xi: float, t):
    return EXiProfile(A, xi)(t)


def power_cutoff_norm(A: YoungFunction, xi: float, a: float, beta: float = 1.0,
                      profile: Optional[EXiProfile] = None) -> float:
    """Luxemburg norm of t^xi on (0, a) (xi > 0) or on (a, oo) (xi < 0).

    The latter is equivalent to the norm on (a, 1) when a < 2^{-1/beta}.
    """
    xi = float(xi)
    if xi < 0 and not 0 < a < 2.0 ** (-1.0 / float(beta)):
        raise ValueError(f"a must lie in (0, 2^(-1/beta)) for the tail case, got {a}")
    if xi > 0 and not 0 < a < 1:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    prof = profile if profile is not None else EXiProfile(A, xi)
    return a ** xi / prof.inverse(1.0 / a)


def dominates(A: YoungFunction, B: YoungFunction, strict: bool = False, mode: str = "exact",
              t_grid=None) -> bool:
    """B < A (L^A embeds in L^B); with ``strict`` the embedding is proper.

    ``mode="exact"`` needs PLL terms on both sides. ``mode="sampled"`` estimates
    the limsup numerically and is only heuristic.
    """
    ta, tb = getattr(A, "term", None), getattr(B, "term", None)
    if mode == "exact":
        if ta is None or tb is None:
            raise ValueError("exact comparison needs symbolic terms for both functions")
        order = pll_compare(tb, ta)
        return order is Order.SMALLER if strict else order is not Order.LARGER
    t = np.geomspace(1e4, 1e12, 9) if t_grid is None else np.asarray(t_grid, dtype=float)
    if strict:
        for lam in (0.25, 1.0, 4.0):
            r = B(t) / A(lam * t)
            if not (r[-1] < 0.5 * r[0] and r[-1] < 1):
                return False
        return True
    for c in 2.0 ** np.arange(0, 11):
        if np.all(B(t[len(t) // 2:]) <= A(c * t[len(t) // 2:])):
            return True
    return False
