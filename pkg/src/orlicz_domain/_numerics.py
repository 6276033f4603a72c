"""Quadrature on logarithmic panels and vectorized monotone inversion."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def log_panel_edges(a: float, b: float, per_decade: int = 4, breaks=()) -> np.ndarray:
    """Panel edges on [a, b] spaced evenly in log s, with extra break points."""
    if not 0 < a < b:
        raise ValueError(f"need 0 < a < b, got {a}, {b}")
    n = max(1, int(np.ceil(np.log10(b / a) * per_decade)))
    edges = np.geomspace(a, b, n + 1)
    extra = [x for x in breaks if a < x < b]
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    return edges


def panel_nodes(edges: np.ndarray, order: int = 16):
    """Nodes and weights for integrating f(s) ds over each panel in u = log s.

    Returns (nodes, weights) of shape (panels, order).
    """
    x, w = gauss_legendre(order)
    lo = np.log(edges[:-1])[:, None]
    hi = np.log(edges[1:])[:, None]
    u = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x[None, :]
    s = np.exp(u)
    weights = 0.5 * (hi - lo) * w[None, :] * s
    return s, weights


def integrate_log(func, a: float, b: float, per_decade: int = 4, order: int = 16, breaks=()) -> float:
    """Integral of func over [a, b], 0 < a < b, with Gauss-Legendre panels in log s."""
    if b <= a:
        return 0.0
    edges = log_panel_edges(a, b, per_decade, breaks)
    s, w = panel_nodes(edges, order)
    return float(np.sum(np.asarray(func(s)) * w))


def cumulative_log(func, grid: np.ndarray, order: int = 16, per_panel: int = 1) -> np.ndarray:
    """Cumulative integrals of func from grid[0] to every grid node."""
    grid = np.asarray(grid, dtype=float)
    if per_panel > 1:
        fine = np.exp(np.linspace(np.log(grid[0]), np.log(grid[-1]), (len(grid) - 1) * per_panel + 1))
        fine[::per_panel] = grid
    else:
        fine = grid
    s, w = panel_nodes(fine, order)
    panel = np.sum(np.asarray(func(s)) * w, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    return cum[::per_panel]


class InversionError(ArithmeticError):
    pass


def invert_increasing(func, y, lo=None, hi=None, rtol: float = 1e-10, max_iter: int = 200,
                      positive: bool = True):
    """Solve func(t) = y for a strictly increasing func, vectorized over y.

    Brackets are grown by doubling (in log scale when ``positive``), then
    bisected until |func(t) - y| <= rtol * max(|y|, 1) or the bracket has
    collapsed to a few ulps. Raises InversionError if neither happens.
    """
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    n = y.shape
    if positive:
        lo_ = np.full(n, 1.0 if lo is None else lo, dtype=float)
        hi_ = np.full(n, 1.0 if hi is None else hi, dtype=float)
        for _ in range(2100):
            f = func(lo_)
            mask = f > y
            if not mask.any():
                break
            lo_ = np.where(mask, lo_ * 0.5, lo_)
            if np.any(lo_ == 0):
                raise InversionError("lower bracket collapsed to 0")
        for _ in range(2100):
            f = func(hi_)
            mask = f < y
            if not mask.any():
                break
            hi_ = np.where(mask, hi_ * 2.0, hi_)
            if np.any(~np.isfinite(hi_)):
                raise InversionError("upper bracket overflowed")
    else:
        lo_ = np.full(n, lo, dtype=float)
        hi_ = np.full(n, hi, dtype=float)
    tol = rtol * np.maximum(np.abs(y), 1.0)
    done = np.zeros(n, dtype=bool)
    result = np.empty(n)
    for _ in range(max_iter):
        mid = np.sqrt(lo_ * hi_) if positive else 0.5 * (lo_ + hi_)
        mid = np.where(positive & (hi_ / np.maximum(lo_, 1e-300) < 4), 0.5 * (lo_ + hi_), mid)
        fm = func(mid)
        ok = (np.abs(fm - y) <= tol) | (hi_ - lo_ <= 4 * np.spacing(hi_))
        newly = ok & ~done
        result[newly] = mid[newly]
        done |= ok
        if done.all():
            break
        below = fm < y
        lo_ = np.where(below, mid, lo_)
        hi_ = np.where(below, hi_, mid)
    if not done.all():
        raise InversionError(f"inversion did not converge within {max_iter} iterations")
    return float(result[0]) if scalar else result
