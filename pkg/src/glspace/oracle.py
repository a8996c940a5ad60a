"""Brute-force dense-grid infima used to cross-check the refined optimizers.

Nothing here shares code with the scan-and-zoom optimizers. Samples are
log-spaced in the gap to each open endpoint, so the endpoint limits are
approached down to a relative gap of 1e-12.
"""

from __future__ import annotations

import math

import numpy as np

from ._search import P_MAX

ZOOM_N = 10_000
DENSE_N = 100_000
MIN_GAP = 1e-12


def _gaps(n, hi):
    """n log-spaced relative gaps in [MIN_GAP, hi]."""
    return np.exp(np.linspace(math.log(MIN_GAP), math.log(hi), n))


def dense_infimum_1d(objective, left, right=math.inf, n=DENSE_N, cap=P_MAX, chunk=20_000, zoom=ZOOM_N, levels=3):
    """Minimum of a vectorised ``objective`` over ``n`` samples of ``(left, right)``.

    The best sample's two grid cells are then resampled uniformly with
    ``zoom`` points, ``levels`` times, which resolves minima sitting on the
    edge of a narrow finite stretch. Returns ``(value, arg)``. Unbounded
    intervals stop at ``cap``.
    """
    top = min(right, cap)
    if math.isfinite(right) and right <= cap:
        half = n // 2
        pts = np.concatenate(
            [left * (1 + _gaps(half, (top - left) / (2 * left))), right * (1 - _gaps(n - half, (right - left) / (2 * right)))]
        )
    else:
        pts = left * (1 + _gaps(n, top / left - 1))
    pts = np.sort(pts)
    best, arg = math.inf, math.nan
    for i in range(0, pts.size, chunk):
        x = pts[i : i + chunk]
        vals = np.asarray(objective(x), dtype=float)
        vals = np.where(np.isnan(vals), np.inf, vals)
        j = int(np.argmin(vals))
        if vals[j] < best:
            best, arg = float(vals[j]), float(x[j])
    if math.isnan(arg):
        return best, arg
    j = int(np.searchsorted(pts, arg))
    lo, hi = pts[max(j - 1, 0)], pts[min(j + 1, pts.size - 1)]
    for _ in range(levels):
        x = np.linspace(lo, hi, zoom + 2)[1:-1]
        vals = np.asarray(objective(x), dtype=float)
        vals = np.where(np.isnan(vals), np.inf, vals)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best, arg = float(vals[k]), float(x[k])
        cell = (hi - lo) / (zoom + 1)
        lo, hi = max(lo, arg - cell), min(hi, arg + cell)
    return best, arg


def _zoom_rows(fun, z_lo, z_hi, base, zoom, levels):
    """Row-wise minimum of ``fun(Z)`` over ``z in [z_lo_k, z_hi_k]`` by repeated grid zooming.

    Each level lays ``zoom`` points over the 2-cell neighbourhood of the best
    point so far. Returns (value, z, evaluations per row).
    """
    frac = np.linspace(0.0, 1.0, base)
    Z = z_lo[:, None] + frac[None, :] * (z_hi - z_lo)[:, None]
    V = np.where(np.isnan(V := np.asarray(fun(Z), dtype=float)), np.inf, V)
    rows = np.arange(Z.shape[0])
    j = np.argmin(V, axis=1)
    best, zb = V[rows, j], Z[rows, j]
    cell = (z_hi - z_lo) / (base - 1)
    local = np.linspace(-2.0, 2.0, zoom)
    for _ in range(levels):
        Z = np.clip(zb[:, None] + local[None, :] * cell[:, None], z_lo[:, None], z_hi[:, None])
        V = np.asarray(fun(Z), dtype=float)
        V = np.where(np.isnan(V), np.inf, V)
        j = np.argmin(V, axis=1)
        better = V[rows, j] < best
        best = np.where(better, V[rows, j], best)
        zb = np.where(better, Z[rows, j], zb)
        cell = cell * 4.0 / (zoom - 1)
    return best, zb, base + levels * zoom


def _gap_bounds(base, lo, hi, cap):
    """Log relative gaps ``log(x/base - 1)`` bounding ``x`` in ``(lo, hi)``, clipped to [MIN_GAP, cap]."""
    with np.errstate(divide="ignore", invalid="ignore"):
        z_lo = np.log(np.maximum(lo / base - 1.0, MIN_GAP))
        z_hi = np.log(np.maximum(np.minimum(hi, cap) / base - 1.0, MIN_GAP))
    return z_lo, z_hi


def dense_infimum_2d(objective, r, cap=P_MAX, outer=(80, 20, 10), inner=(150, 30, 8), p_window=None, t_window=None):
    """Minimum of ``objective(p, t)`` over t > p > r by nested zooming dense scans.

    Coordinates are ``x = log(p/r - 1)`` and ``y = log(t/p - 1)``, both
    starting at a relative gap of 1e-12 and stopping where p or t reaches
    ``cap``. For every outer p the inner minimum over t is itself a zoomed
    dense scan; with the defaults about 1.1e5 points are evaluated.

    ``p_window = (lo, hi)`` and ``t_window(p) -> (lo, hi)`` optionally narrow
    the scans to where the objective is known to be finite; thin finite
    strips are otherwise invisible to any fixed grid. Returns
    ``(value, (p, t))``.
    """
    z0 = math.log(MIN_GAP)

    def inner_min(p):
        p = np.asarray(p, dtype=float).ravel()
        if t_window is None:
            y_lo, y_hi = np.full(p.shape, z0), np.log(np.maximum(cap / p - 1.0, 2 * MIN_GAP))
            empty = np.zeros(p.shape, dtype=bool)
        else:
            lo, hi = (np.broadcast_to(w, p.shape) for w in t_window(p))
            lo = np.maximum(lo, p)
            y_lo, y_hi = _gap_bounds(p, lo, hi, cap)
            empty = ~(lo < hi) | ~(y_lo < y_hi)
            y_lo, y_hi = np.where(empty, z0, y_lo), np.where(empty, z0 + 1.0, y_hi)
        val, y, _ = _zoom_rows(
            lambda Y: objective(p[:, None] + 0 * Y, p[:, None] * (1 + np.exp(Y))),
            y_lo, y_hi, *inner,
        )
        return np.where(empty, np.inf, val), p * (1 + np.exp(y))

    def outer_fun(X):
        p = r * (1 + np.exp(X))
        return inner_min(p.ravel())[0].reshape(X.shape)

    x_lo, x_hi = z0, math.log(cap / r - 1.0)
    if p_window is not None:
        lo, hi = max(p_window[0], r), p_window[1]
        if not lo < hi:
            return math.inf, (math.nan, math.nan)
        x_lo, x_hi = (float(z) for z in _gap_bounds(r, lo, hi, cap))
    val, x, _ = _zoom_rows(outer_fun, np.array([x_lo]), np.array([x_hi]), *outer)
    p = r * (1 + math.exp(x[0]))
    _, t = inner_min(np.array([p]))
    return float(val[0]), (float(p), float(t[0]))
