"""Power-log-loglog (PLL) terms and their eventual ordering.

A term ``c * t^a * log^b * loglog^d`` lives in one of two charts:

* ``Chart.ZERO``: ``c t^a log(2/t)^b loglog(4/t)^d`` on (0, 1],
* ``Chart.INF``:  ``c t^a (log t)^b (log log t)^d`` on (e^2, oo).

Exponents are exact :class:`fractions.Fraction` values; the coefficient is a
float and never takes part in ordering decisions.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

Rational = Union[int, Fraction, str]


class Chart(enum.Enum):
    ZERO = "zero"
    INF = "inf"


class Order(enum.Enum):
    SMALLER = "EventuallySmaller"
    EQUIVALENT = "Equivalent"
    LARGER = "EventuallyLarger"


class ChartMismatch(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Exact rational from int, str ("p/q"), Fraction, or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(repr(x))
    raise TypeError(f"cannot read {x!r} as a rational")


@dataclass(frozen=True)
class PLLTerm:
    coeff: float
    pow: Fraction
    logexp: Fraction = Fraction(0)
    loglogexp: Fraction = Fraction(0)
    chart: Chart = Chart.INF

    def __post_init__(self):
        if not self.coeff > 0 or not math.isfinite(self.coeff):
            raise ValueError(f"coefficient must be positive and finite, got {self.coeff}")
        object.__setattr__(self, "coeff", float(self.coeff))
        for name in ("pow", "logexp", "loglogexp"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not isinstance(self.chart, Chart):
            object.__setattr__(self, "chart", Chart(self.chart))

    @classmethod
    def at_zero(cls, pow=0, logexp=0, loglogexp=0, coeff=1.0) -> "PLLTerm":
        return cls(coeff, pow, logexp, loglogexp, Chart.ZERO)

    @classmethod
    def at_inf(cls, pow=0, logexp=0, loglogexp=0, coeff=1.0) -> "PLLTerm":
        return cls(coeff, pow, logexp, loglogexp, Chart.INF)

    @property
    def exponents(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.pow, self.logexp, self.loglogexp)

    def is_constant(self) -> bool:
        return self.exponents == (0, 0, 0)

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        """Evaluate the literal formula; NaN outside the region where it is positive."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.chart is Chart.ZERO:
                lg = np.log(2.0 / t)
                llg = np.log(np.log(4.0 / t))
            else:
                lg = np.log(t)
                llg = np.log(lg)
            out = np.full(t.shape, self.coeff)
            if self.pow != 0:
                out = out * t ** float(self.pow)
            if self.logexp != 0:
                out = out * lg ** float(self.logexp)
            if self.loglogexp != 0:
                out = out * llg ** float(self.loglogexp)
            if self.chart is Chart.ZERO:
                bad = (t <= 0) | (t > 1)
            else:
                bad = t <= (math.e if self.loglogexp != 0 else 1.0)
            out = np.where(bad, np.nan, out)
        return out if out.ndim else float(out)

    def log_eval(self, log_t):
        """log of the term at t = exp(log_t), chart INF only; avoids overflow."""
        if self.chart is not Chart.INF:
            raise ChartMismatch("log_eval is defined on the INF chart")
        u = np.asarray(log_t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = math.log(self.coeff) + float(self.pow) * u
            if self.logexp != 0:
                out = out + float(self.logexp) * np.log(u)
            if self.loglogexp != 0:
                out = out + float(self.loglogexp) * np.log(np.log(u))
        return out

    def elasticity(self, t):
        """t x'(t) / x(t) for the INF chart."""
        if self.chart is not Chart.INF:
            raise ChartMismatch("elasticity is defined on the INF chart")
        t = np.asarray(t, dtype=float)
        lg = np.log(t)
        out = float(self.pow) + float(self.logexp) / lg
        if self.loglogexp != 0:
            out = out + float(self.loglogexp) / (lg * np.log(lg))
        return out

    def with_coeff(self, coeff: float) -> "PLLTerm":
        return PLLTerm(coeff, self.pow, self.logexp, self.loglogexp, self.chart)

    def __str__(self):
        return format_term(self)

    def __mul__(self, other):
        if isinstance(other, PLLTerm):
            return pll_mul(self, other)
        if isinstance(other, (int, float)):
            return self.with_coeff(self.coeff * other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, r):
        return pll_power(self, r)


def constant(value: float = 1.0, chart: Chart = Chart.ZERO) -> PLLTerm:
    return PLLTerm(value, 0, 0, 0, chart)


def _same_chart(x: PLLTerm, y: PLLTerm):
    if x.chart is not y.chart:
        raise ChartMismatch(f"charts differ: {x.chart.value} vs {y.chart.value}")


def pll_mul(x: PLLTerm, y: PLLTerm) -> PLLTerm:
    _same_chart(x, y)
    return PLLTerm(
        x.coeff * y.coeff,
        x.pow + y.pow,
        x.logexp + y.logexp,
        x.loglogexp + y.loglogexp,
        x.chart,
    )


def pll_power(x: PLLTerm, r: Rational) -> PLLTerm:
    r = as_fraction(r)
    return PLLTerm(
        x.coeff ** float(r), x.pow * r, x.logexp * r, x.loglogexp * r, x.chart
    )


def pll_substitute_power(x: PLLTerm, s: Rational) -> PLLTerm:
    """Term equivalent to t -> x(t^s) in the same chart.

    log(2/t^s) = s log(2/t) + (1 - s) log 2 and log t^s = s log t, so the
    log factor contributes s^logexp to the coefficient; the loglog factor
    only shifts by log s and is left unchanged.
    """
    s = as_fraction(s)
    if s <= 0:
        raise ValueError(f"substitution exponent must be positive, got {s}")
    return PLLTerm(
        x.coeff * float(s) ** float(x.logexp),
        x.pow * s,
        x.logexp,
        x.loglogexp,
        x.chart,
    )


def pll_reciprocal_substitute(x: PLLTerm, s: Rational) -> PLLTerm:
    """Term at zero equivalent to t -> x(t^(-s)) for x at infinity, s > 0."""
    if x.chart is not Chart.INF:
        raise ChartMismatch("reciprocal substitution maps the INF chart to ZERO")
    s = as_fraction(s)
    if s <= 0:
        raise ValueError(f"substitution exponent must be positive, got {s}")
    return PLLTerm(
        x.coeff * float(s) ** float(x.logexp),
        -x.pow * s,
        x.logexp,
        x.loglogexp,
        Chart.ZERO,
    )


def _order_key(x: PLLTerm):
    if x.chart is Chart.ZERO:
        # near 0, a smaller power is larger; log(2/t) and loglog(4/t) blow up
        return (-x.pow, x.logexp, x.loglogexp)
    return (x.pow, x.logexp, x.loglogexp)


def pll_compare(x: PLLTerm, y: PLLTerm) -> Order:
    _same_chart(x, y)
    kx, ky = _order_key(x), _order_key(y)
    if kx < ky:
        return Order.SMALLER
    if kx > ky:
        return Order.LARGER
    return Order.EQUIVALENT


def diverges(x: PLLTerm) -> bool:
    """True when x tends to infinity at the chart's singular end."""
    return _order_key(x) > (0, 0, 0)


def vanishes(x: PLLTerm) -> bool:
    """True when x tends to zero at the chart's singular end."""
    return _order_key(x) < (0, 0, 0)


def pll_limit_ratio(x: PLLTerm, K: float) -> float:
    """lim_{t->oo} x(Kt)/x(t) = K^pow."""
    if x.chart is not Chart.INF:
        raise ChartMismatch("limit ratio is taken at infinity")
    if not K > 1:
        raise ValueError(f"K must exceed 1, got {K}")
    return float(K) ** float(x.pow)


def pll_sup_tail(x: PLLTerm, grid_points: int = 4096) -> PLLTerm:
    """Envelope t -> sup_{t<s<1} x(s) near zero.

    If x blows up at 0 the supremum is attained near s = t and the envelope
    is x itself (up to constants). Otherwise the envelope is bounded and is
    returned as the constant sup_{0<s<1} x(s), located on a log grid.
    """
    if x.chart is not Chart.ZERO:
        raise ChartMismatch("sup_tail works on the ZERO chart")
    if diverges(x):
        return x
    if x.is_constant():
        return x
    s = np.logspace(-300, 0, grid_points, endpoint=False)
    s = np.concatenate([s, 1.0 - np.logspace(-1, -15, 256)])
    vals = np.asarray(x.eval(s))
    i = int(np.nanargmax(vals))
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, s.size - 1)]
    for _ in range(3):
        fine = np.linspace(lo, hi, 257)
        fv = np.asarray(x.eval(fine))
        j = int(np.nanargmax(fv))
        lo, hi = fine[max(j - 1, 0)], fine[min(j + 1, fine.size - 1)]
    peak = float(max(np.nanmax(vals), np.nanmax(fv)))
    return constant(peak, Chart.ZERO)


# -- textual form ----------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_term(x: PLLTerm) -> str:
    return (
        f"{x.coeff!r} * t^{{{_fmt_rat(x.pow)}}} * log^{{{_fmt_rat(x.logexp)}}}"
        f" * loglog^{{{_fmt_rat(x.loglogexp)}}} @ {x.chart.value}"
    )


_RAT = r"[+-]?\d+(?:/\d+)?"
_FACTOR = re.compile(rf"^(t|log|loglog)\^\{{({_RAT})\}}$")


def parse_term(text: str) -> PLLTerm:
    """Inverse of :func:`format_term`; factors other than the coefficient are optional."""
    body, sep, chart = text.rpartition("@")
    if not sep:
        raise ValueError(f"missing '@ zero|inf' in {text!r}")
    chart = Chart(chart.strip())
    parts = [p.strip() for p in body.split("*")]
    coeff = float(parts[0])
    exps = {"t": Fraction(0), "log": Fraction(0), "loglog": Fraction(0)}
    for part in parts[1:]:
        m = _FACTOR.match(part)
        if not m:
            raise ValueError(f"cannot parse factor {part!r}")
        exps[m.group(1)] = Fraction(m.group(2))
    return PLLTerm(coeff, exps["t"], exps["log"], exps["loglog"], chart)
