"""Step functions on (0, 1): distribution, rearrangement, Hardy average.

Every integral here is an exact sum over cells; nothing is approximated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numerics import gauss_legendre, integrate_log

CANONICAL_RATIO = 2.0 ** (-1.0 / 8.0)


class EmptyFunction(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise-constant function: value ``values[i]`` on (edges[i], edges[i+1])."""

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise EmptyFunction("empty function")
        if e.shape != (v.size + 1,):
            raise ValueError("need exactly one value per cell")
        if e[0] != 0.0 or e[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(e) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        e.setflags(write=False)
        v = np.abs(v)
        v.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", v)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, self.values.size - 1)
        return self.values[idx]

    def scaled(self, c: float) -> "StepFunction":
        return StepFunction(self.edges, c * self.values)

    def integral(self) -> float:
        return float(np.dot(self.values, self.widths))

    def is_zero(self) -> bool:
        return not np.any(self.values > 0)

    @classmethod
    def constant(cls, c: float = 1.0) -> "StepFunction":
        return cls(np.array([0.0, 1.0]), np.array([c]))

    @classmethod
    def from_callable(cls, func: Callable, edges, nodes: int = 8) -> "StepFunction":
        """Cell averages of ``func`` by Gauss-Legendre quadrature in log s."""
        edges = np.asarray(edges, dtype=float)
        x, w = gauss_legendre(nodes)
        lo, hi = edges[:-1], edges[1:]
        vals = np.empty(lo.size)
        pos = lo > 0
        ul, uh = np.log(lo[pos])[:, None], np.log(hi[pos])[:, None]
        s = np.exp(0.5 * (ul + uh) + 0.5 * (uh - ul) * x[None, :])
        vals[pos] = np.sum(func(s) * s * w[None, :], axis=1) * 0.5 * (uh - ul)[:, 0] / (hi[pos] - lo[pos])
        if not pos[0]:
            # log-scale panels reaching 1e-16 of the cell resolve integrable singularities at 0
            vals[0] = integrate_log(func, hi[0] * 1e-16, hi[0], per_decade=2) / hi[0]
        return cls(edges, vals)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for left, v in zip(self.edges[:-1], self.values):
                writer.writerow([repr(float(left)), repr(float(v))])

    @classmethod
    def from_csv(cls, path) -> "StepFunction":
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if row and not row[0].lstrip().startswith("#"):
                    rows.append((float(row[0]), float(row[1])))
        if not rows:
            raise EmptyFunction("empty function")
        left = np.array([r[0] for r in rows])
        return cls(np.append(left, 1.0), np.array([r[1] for r in rows]))


def geometric_grid(cells: int, ratio: float = CANONICAL_RATIO, a: float = 1.0) -> np.ndarray:
    """Edges 0 < a r^{cells-1} < ... < a r < a (then 1 if a < 1)."""
    k = np.arange(cells - 1, -1, -1)
    pts = a * ratio ** k
    edges = np.concatenate([[0.0], pts])
    if a < 1:
        edges = np.append(edges, 1.0)
    return edges


def decade_grid(t_min: float, per_decade: int = 16) -> np.ndarray:
    n = int(np.ceil(-np.log10(t_min) * per_decade))
    return np.concatenate([[0.0], np.geomspace(t_min, 1.0, n + 1)])


def characteristic(a: float, b: float = 0.0) -> StepFunction:
    """Indicator of (b, a)."""
    if not 0 <= b < a <= 1:
        raise ValueError("need 0 <= b < a <= 1")
    edges = sorted({0.0, b, a, 1.0})
    vals = [1.0 if lo >= b and hi <= a else 0.0 for lo, hi in zip(edges[:-1], edges[1:])]
    return StepFunction(np.array(edges), np.array(vals))


def random_step(rng: np.random.Generator, cells: int = 16, support: float = 1.0,
                scale: float = 1.0) -> StepFunction:
    """Random nonnegative step function supported in (0, support]."""
    cuts = np.sort(rng.uniform(0, support, cells - 1))
    edges = np.unique(np.concatenate([[0.0], cuts, [support]]))
    vals = scale * rng.exponential(1.0, edges.size - 1) * (rng.random(edges.size - 1) < 0.85)
    if support < 1:
        edges = np.append(edges, 1.0)
        vals = np.append(vals, 0.0)
    if not np.any(vals > 0):
        vals[0] = scale
    return StepFunction(edges, vals)


def common_refinement(f: StepFunction, g: StepFunction):
    edges = np.union1d(f.edges, g.edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return edges, f(mid), g(mid)


def distribution(f: StepFunction, lam):
    """|{f > lam}|."""
    lam = np.asarray(lam, dtype=float)
    out = np.sum(f.widths[None, :] * (f.values[None, :] > lam.reshape(-1, 1)), axis=1)
    return out.reshape(lam.shape) if lam.ndim else float(out[0])


def rearrange(f: StepFunction) -> StepFunction:
    order = np.argsort(-f.values, kind="stable")
    widths = f.widths[order]
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    edges[-1] = 1.0
    vals = f.values[order]
    keep = np.diff(edges) > 0
    return StepFunction(np.concatenate([[0.0], edges[1:][keep]]), vals[keep])


def _prefix(fs: StepFunction) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(fs.values * fs.widths)])


def primitive(f: StepFunction, t):
    """int_0^t f, exact."""
    t = np.asarray(t, dtype=float)
    P = _prefix(f)
    idx = np.clip(np.searchsorted(f.edges, t, side="right") - 1, 0, f.values.size - 1)
    return P[idx] + f.values[idx] * (t - f.edges[idx])


def hardy_average(f: StepFunction, t, rearranged: bool = False):
    """f**(t) = (1/t) int_0^t f*."""
    fs = f if rearranged else rearrange(f)
    t = np.asarray(t, dtype=float)
    if np.any((t <= 0) | (t > 1)):
        raise ValueError("t must lie in (0, 1]")
    out = primitive(fs, t) / t
    return out if out.ndim else float(out)


def hl_defect(f: StepFunction, g: StepFunction) -> float:
    """int f* g* - int f g."""
    fs, gs = rearrange(f), rearrange(g)
    e1, a1, b1 = common_refinement(fs, gs)
    e2, a2, b2 = common_refinement(f, g)
    return float(np.dot(a1 * b1, np.diff(e1)) - np.dot(a2 * b2, np.diff(e2)))


def pairing(f: StepFunction, g: StepFunction) -> float:
    e, a, b = common_refinement(f, g)
    return float(np.dot(a * b, np.diff(e)))
