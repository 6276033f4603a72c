"""The Hardy-type operator H_alpha^beta, its associate form, S_alpha, and a probe harness.

    (H f)(t)  = int_{t^beta}^1 f(s) s^{alpha-1} ds
    (H' g)(s) = s^{alpha-1} int_0^{s^{1/beta}} g
    (S f)(t)  = t^{alpha-1} sup_{0<s<t} s^{1-alpha} f*(s)

Operator values are exact per cell; the only error in a probe comes from
the norm engines and the output grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .asymptotics import as_fraction
from .norms import SpaceSpec, norm
from .rearrangement import StepFunction, characteristic, decade_grid, primitive, random_step, rearrange


@dataclass(frozen=True)
class HardyParams:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = as_fraction(self.alpha), as_fraction(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if not 0 < a < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {a}")
        if not b > 0:
            raise ValueError(f"beta must be positive, got {b}")
        if a + 1 / b < 1:
            raise ValueError(f"need alpha + 1/beta >= 1, got {a} + 1/{b}")

    @property
    def a(self) -> float:
        return float(self.alpha)

    @property
    def b(self) -> float:
        return float(self.beta)


def hardy_apply(p: HardyParams, f: StepFunction, t):
    t = np.asarray(t, dtype=float)
    a = p.a
    x = (t ** p.b).reshape(-1, 1)
    lo = np.maximum(f.edges[None, :-1], x)
    hi = np.maximum(f.edges[None, 1:], x)
    out = np.sum(f.values[None, :] * (hi ** a - lo ** a), axis=1) / a
    out = out.reshape(t.shape)
    return out if out.ndim else float(out)


def dual_hardy_apply(p: HardyParams, g: StepFunction, t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        out = t ** (p.a - 1) * primitive(g, t ** (1 / p.b))
    return out if out.ndim else float(out)


def sup_op_apply(alpha, f: StepFunction, t, rearranged: bool = False):
    a = float(alpha)
    if not 0 < a < 1:
        raise ValueError("alpha must lie in (0, 1)")
    fs = f if rearranged else rearrange(f)
    t = np.asarray(t, dtype=float)
    e, v = fs.edges, fs.values
    # s^{1-a} f*(s) increases on each cell, so cell sups sit at right ends
    cellmax = np.maximum.accumulate(v * e[1:] ** (1 - a))
    j = np.clip(np.searchsorted(e, t, side="right") - 1, 0, v.size - 1)
    prev = np.where(j > 0, cellmax[np.maximum(j - 1, 0)], 0.0)
    out = t ** (a - 1) * np.maximum(prev, v[j] * t ** (1 - a))
    return out if out.ndim else float(out)


# -- exact pairings ------------------------------------------------------------

def hardy_pairing(p: HardyParams, f: StepFunction, g: StepFunction) -> float:
    """int_0^1 (H f)(t) g(t) dt, exact.

    For t^beta in the f-cell (e_j, e_{j+1}) one has
    Hf(t) = C_j - v_j t^{alpha beta}/alpha, with C_j collecting the tail.
    """
    a, b = p.a, p.b
    e, v = f.edges, f.values
    full = v * (e[1:] ** a - e[:-1] ** a) / a
    tail = np.concatenate([np.cumsum(full[::-1])[::-1][1:], [0.0]])
    C = tail + v * e[1:] ** a / a
    knots = np.union1d(e ** (1 / b), g.edges)
    lo, hi = knots[:-1], knots[1:]
    mid = 0.5 * (lo + hi)
    j = np.clip(np.searchsorted(e, mid ** b, side="right") - 1, 0, v.size - 1)
    ab = a * b
    seg = C[j] * (hi - lo) - v[j] / a * (hi ** (ab + 1) - lo ** (ab + 1)) / (ab + 1)
    return float(np.dot(g(mid), seg))


def dual_pairing(p: HardyParams, f: StepFunction, g: StepFunction) -> float:
    """int_0^1 f(s) (H' g)(s) ds, exact.

    For s^{1/beta} in the g-cell (c_k, c_{k+1}), int_0^{s^{1/beta}} g
    = P_k + w_k (s^{1/beta} - c_k).
    """
    a, b = p.a, p.b
    c, w = g.edges, g.values
    P = primitive(g, c[:-1])
    knots = np.union1d(c ** b, f.edges)
    lo, hi = knots[:-1], knots[1:]
    mid = 0.5 * (lo + hi)
    k = np.clip(np.searchsorted(c, mid ** (1 / b), side="right") - 1, 0, w.size - 1)
    e2 = a + 1 / b
    seg = (P[k] - w[k] * c[k]) * (hi ** a - lo ** a) / a + w[k] * (hi ** e2 - lo ** e2) / e2
    return float(np.dot(f(mid), seg))


# -- operators as step-to-step maps -----------------------------------------

@dataclass(frozen=True)
class Operator:
    """Operator tag with the parameters it needs; ``sample`` resamples Tf on a grid."""

    tag: str
    params: HardyParams

    def pointwise(self, f: StepFunction, t):
        if self.tag == "hardy":
            return hardy_apply(self.params, f, t)
        if self.tag == "dual_hardy":
            return dual_hardy_apply(self.params, f, t)
        if self.tag == "sup":
            return sup_op_apply(self.params.alpha, f, t)
        raise ValueError(f"unknown operator {self.tag!r}")

    def sample(self, f: StepFunction, edges: np.ndarray) -> StepFunction:
        """Step function taking Tf at each cell's geometric midpoint (half the edge on the first cell)."""
        lo, hi = edges[:-1], edges[1:]
        mid = np.where(lo > 0, np.sqrt(np.maximum(lo, 1e-300) * hi), 0.5 * hi)
        return StepFunction(edges, np.asarray(self.pointwise(f, mid), dtype=float))


def make_operator(tag: str, alpha, beta=1) -> Operator:
    return Operator(tag, HardyParams(alpha, beta))


# -- boundedness probe ---------------------------------------------------------

@dataclass
class ProbeReport:
    max_ratio: float
    argmax: str
    scales: list
    scale_ratios: list
    running_max: list
    refinement: list
    verdict: str
    thresholds: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio, "argmax": self.argmax, "scales": self.scales,
            "scale_ratios": self.scale_ratios, "running_max": self.running_max,
            "refinement": self.refinement, "verdict": self.verdict, "thresholds": self.thresholds,
        }


DIVERGENCE_FACTOR = 4.0
STABILITY_TOL = 0.10


def probe_family(a: float, rng: np.random.Generator, randoms: int = 4) -> list[tuple[str, StepFunction]]:
    """Probes supported in (0, a): indicator, truncated powers, random steps."""
    fam = [(f"chi(0,{a:.3g})", characteristic(a))]
    edges = decade_grid(a * 1e-6, 8) * a
    edges[-1] = a
    edges = np.append(edges, 1.0)
    for gamma in (0.25, 0.5):
        mid = np.sqrt(np.maximum(edges[1:-1] * edges[:-2], (0.5 * edges[1]) ** 2))
        vals = np.append(mid ** -gamma, 0.0) * a ** gamma
        fam.append((f"s^-{gamma}(0,{a:.3g})", StepFunction(edges, vals)))
    for i in range(randoms):
        fam.append((f"random{i}(0,{a:.3g})", random_step(rng, 12, support=a)))
    return fam


def boundedness_probe(op: Operator, domain: SpaceSpec, target: SpaceSpec,
                      scales: Sequence[float] = tuple(10.0 ** -k for k in range(1, 9)),
                      family: Optional[Callable] = None, seed: int = 0,
                      per_decade: Sequence[int] = (8, 16), depth: float = 1e-6,
                      families: Optional[dict] = None) -> ProbeReport:
    """sup ||Tf|| / ||f|| over probe families at decreasing support scales.

    For each scale a the probes live in (0, a), and Tf is resampled on a
    geometric grid reaching ``depth * a``-ish below the support's image.
    The verdict is "bounded" when the running maximum varies by at most 10%
    over the deepest two scales, "divergent" when the per-scale ratio grows
    at least 4x per decade over the last three decades, else "inconclusive".
    """
    rng = np.random.default_rng(seed)
    family = family or probe_family
    scale_ratios, argmaxes, refinement = [], [], []
    for a in scales:
        probes = family(a, rng) if families is None else families[a]
        best, where = 0.0, ""
        per_level = []
        for pd in per_decade:
            t_min = min(depth * a ** (1 / op.params.b), depth * a)
            grid = decade_grid(max(t_min, 1e-300), pd)
            level_best = 0.0
            for name, f in probes:
                nf = norm(domain, f)
                if nf == 0:
                    raise ValueError(f"zero-norm probe {name}")
                r = norm(target, op.sample(f, grid)) / nf
                if r > level_best:
                    level_best = r
                if pd == per_decade[-1] and r > best:
                    best, where = r, name
            per_level.append(level_best)
        scale_ratios.append(best)
        argmaxes.append(where)
        refinement.append(per_level)
    running = list(np.maximum.accumulate(scale_ratios))
    decades = np.log10(np.asarray(scales[:-1]) / np.asarray(scales[1:]))
    growth = np.asarray(scale_ratios[1:]) / np.asarray(scale_ratios[:-1])
    per_dec = growth ** (1 / decades)
    if len(per_dec) >= 3 and np.all(per_dec[-3:] >= DIVERGENCE_FACTOR):
        verdict = "divergent"
    elif running[-1] <= (1 + STABILITY_TOL) * running[-2]:
        verdict = "bounded"
    else:
        verdict = "inconclusive"
    i = int(np.argmax(scale_ratios))
    return ProbeReport(
        max_ratio=float(running[-1]), argmax=argmaxes[i], scales=[float(s) for s in scales],
        scale_ratios=[float(r) for r in scale_ratios], running_max=[float(r) for r in running],
        refinement=[[float(x) for x in lvl] for lvl in refinement], verdict=verdict,
        thresholds={"divergence_per_decade": DIVERGENCE_FACTOR, "stability": STABILITY_TOL},
    )
