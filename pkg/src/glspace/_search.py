"""Batched log-coordinate scans with zooming refinement over open intervals.

Every routine works on K independent rows at once. A row's result depends
only on that row's data (iteration counts are per row, updates are masked),
so splitting a batch into chunks never changes a value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
#: exponents are truncated here when an interval is unbounded
P_MAX = 512.0
#: the coarse grid starts at left*(1+1e-6); the ladder continues towards the endpoint
LADDER = (1e-7, 1e-8, 1e-9, 1e-10)
GRID_OFFSET = 1e-6


def clean(values) -> np.ndarray:
    """Replace NaN by +inf so that undefined points never win a minimisation."""
    values = np.asarray(values, dtype=float)
    return np.where(np.isnan(values), np.inf, values)


def golden_minimize(fun, lo, hi, xtol):
    """Minimise ``fun`` independently on each bracket ``[lo_k, hi_k]``.

    ``fun`` maps an array of shape (K, 1) to an array of the same shape.
    Returns ``(x_best, f_best, evaluations)`` where the best point is the
    lowest value seen (ties go to the smaller abscissa).
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    width = np.maximum(b - a, 0.0)
    n_iter = np.ceil(np.log(np.maximum(width / xtol, 1.0)) / -math.log(INV_PHI)).astype(int)

    def f(x):
        return clean(fun(x[:, None]))[:, 0]

    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    take_c = fc <= fd
    best_x = np.where(take_c, c, d)
    best_f = np.where(take_c, fc, fd)
    evals = 2
    for it in range(int(n_iter.max(initial=0))):
        active = it < n_iter
        left = fc <= fd
        a2 = np.where(left, a, c)
        b2 = np.where(left, d, b)
        x_new = np.where(left, b2 - INV_PHI * (b2 - a2), a2 + INV_PHI * (b2 - a2))
        f_new = f(x_new)
        evals += 1
        c2 = np.where(left, x_new, d)
        d2 = np.where(left, c, x_new)
        fc2 = np.where(left, f_new, fd)
        fd2 = np.where(left, fc, f_new)
        a, b = np.where(active, a2, a), np.where(active, b2, b)
        c, d = np.where(active, c2, c), np.where(active, d2, d)
        fc, fd = np.where(active, fc2, fc), np.where(active, fd2, fd)
        better = active & ((f_new < best_f) | ((f_new == best_f) & (x_new < best_x)))
        best_x = np.where(better, x_new, best_x)
        best_f = np.where(better, f_new, best_f)
    return best_x, best_f, evals


#: interior points per zoom level; each level shrinks the bracket by (ZOOM_POINTS + 1) / 2
ZOOM_POINTS = 9


def zoom_minimize(fun, lo, hi, xtol, m=ZOOM_POINTS):
    """Minimise ``fun`` on each bracket ``[lo_k, hi_k]`` by repeated uniform sub-grids.

    Each level evaluates ``m`` interior points of every active bracket in a
    single call of ``fun`` (shape (K, m)) and keeps the cells around the
    best point. Fewer, larger calls than golden-section search for the same
    precision. Returns ``(x_best, f_best, evaluations)``.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    shrink = (m + 1) / 2.0
    width = np.maximum(b - a, 0.0)
    n_iter = np.ceil(np.log(np.maximum(width / xtol, 1.0)) / math.log(shrink)).astype(int)
    frac = np.arange(1, m + 1) / (m + 1.0)
    best_x = 0.5 * (a + b)
    best_f = np.full(a.shape, np.inf)
    rows = np.arange(a.size)
    evals = 0
    for it in range(int(n_iter.max(initial=0))):
        active = it < n_iter
        X = a[:, None] + frac[None, :] * (b - a)[:, None]
        V = clean(fun(X))
        evals += m
        j = np.argmin(V, axis=1)
        fj, xj = V[rows, j], X[rows, j]
        better = active & ((fj < best_f) | ((fj == best_f) & (xj < best_x)))
        best_x = np.where(better, xj, best_x)
        best_f = np.where(better, fj, best_f)
        step = (b - a) / (m + 1.0)
        a = np.where(active, np.maximum(best_x - step, a), a)
        b = np.where(active, np.minimum(best_x + step, b), b)
    return best_x, best_f, evals


EDGE_POINTS = 15
EDGE_STEPS = 12


def _edge_bisect(fun, inside, outside, active):
    """Close in on the boundary between a finite and an infinite sample.

    Each step samples ``EDGE_POINTS`` points from the finite end towards the
    infinite one and keeps the cell where finiteness is first lost, so after
    ``EDGE_STEPS`` steps the last finite point lies within
    ``|outside - inside| * 16**-12`` of the boundary. Returns its value and abscissa.
    """
    a = np.array(inside, dtype=float)
    b = np.array(outside, dtype=float)
    fa = np.full(a.shape, np.inf)
    frac = np.arange(1, EDGE_POINTS + 1) / (EDGE_POINTS + 1.0)
    rows = np.arange(a.size)
    for _ in range(EDGE_STEPS):
        X = a[:, None] + frac[None, :] * (b - a)[:, None]
        V = clean(fun(X))
        fin = np.isfinite(V)
        # number of leading finite samples
        k = np.argmin(np.concatenate([fin, np.zeros((a.size, 1), bool)], axis=1), axis=1)
        moved = active & (k > 0)
        a_new = X[rows, np.maximum(k - 1, 0)]
        f_new = V[rows, np.maximum(k - 1, 0)]
        b_new = np.where(k < EDGE_POINTS, X[rows, np.minimum(k, EDGE_POINTS - 1)], b)
        fa = np.where(moved, f_new, fa)
        a = np.where(moved, a_new, a)
        b = np.where(active, b_new, b)
    return fa, a, EDGE_STEPS * EDGE_POINTS


@dataclass
class ScanResult:
    value: np.ndarray
    arg: np.ndarray
    converged: np.ndarray
    evaluations: int


def open_samples(left, right, n_grid, cap=P_MAX):
    """Log-coordinate samples for the open intervals ``(left_k, right_k)``.

    Returns ``(U, empty)`` with U of shape (K, n_grid + 2*len(LADDER)) sorted
    along each row. Intervals are truncated at ``cap``; when the right end is
    a genuine open endpoint (``right <= cap``) it gets its own ladder,
    otherwise the ladder slots repeat the truncation point.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        u_left = np.log(left)
        right_open = right <= cap
        u_right = np.where(right_open, np.log(np.minimum(right, cap)), math.log(cap))
        u_lo = u_left + math.log1p(GRID_OFFSET)
        u_hi = np.where(right_open, u_right + math.log1p(-GRID_OFFSET), u_right)
    empty = ~(u_hi > u_lo) | ~np.isfinite(u_left)
    # empty rows still get samples just right of `left` so objectives see sane input
    safe_left = np.where(np.isfinite(u_left), u_left, 0.0)
    u_lo = np.where(empty, safe_left + math.log1p(GRID_OFFSET), u_lo)
    u_hi = np.where(empty, safe_left + math.log1p(2 * GRID_OFFSET), u_hi)
    frac = np.linspace(0.0, 1.0, n_grid)
    grid = u_lo[:, None] + frac[None, :] * (u_hi - u_lo)[:, None]
    eps = np.array(LADDER)
    lad_left = safe_left[:, None] + np.log1p(eps[::-1])[None, :]
    lad_right = np.where(
        right_open[:, None],
        u_right[:, None] + np.log1p(-eps)[None, :],
        u_hi[:, None],
    )
    lad_right = np.where(empty[:, None], u_hi[:, None], lad_right)
    U = np.concatenate([lad_left, grid, lad_right], axis=1)
    return U, empty


def scan_minimize(fun, left, right, *, n_grid=128, cap=P_MAX, xtol=1e-8):
    """Infimum of ``fun`` over each open interval ``(left_k, right_k)``.

    ``fun`` receives abscissae of shape (K, m) (row k belongs to interval k)
    and returns values of the same shape; +inf marks points outside the
    finiteness region. A coarse log grid plus endpoint ladders is scanned,
    then a zooming bracket search refines interior minima. A row is flagged
    not converged when its best point is an endpoint limit (the innermost
    ladder point or the truncation cap).
    """
    left = np.atleast_1d(np.asarray(left, dtype=float))
    right = np.broadcast_to(np.asarray(right, dtype=float), left.shape)
    U, empty = open_samples(left, right, n_grid, cap)
    F = clean(fun(np.exp(U)))
    F[empty] = np.inf
    evals = U.shape[1]
    K, M = U.shape
    rows = np.arange(K)
    idx = np.argmin(F, axis=1)
    value = F[rows, idx]
    u_best = U[rows, idx]
    at_end = (idx == 0) | (u_best >= U[:, -1])
    finite = np.isfinite(value)
    refine = finite & ~at_end
    if np.any(refine):
        lo = U[rows, np.maximum(idx - 1, 0)]
        hi = U[rows, np.minimum(idx + 1, M - 1)]
        lo = np.where(refine, lo, u_best)
        hi = np.where(refine, hi, u_best)
        xg, fg, n = zoom_minimize(lambda x: fun(np.exp(x)), lo, hi, xtol)
        evals += n
        better = refine & (fg < value)
        value = np.where(better, fg, value)
        u_best = np.where(better, xg, u_best)
        # a minimum next to an infinite sample may be the limit at the edge of the finiteness region
        f_hi = F[rows, np.minimum(idx + 1, M - 1)]
        f_lo = F[rows, np.maximum(idx - 1, 0)]
        edge_hi = refine & ~np.isfinite(f_hi)
        edge_lo = refine & ~edge_hi & ~np.isfinite(f_lo)
        edge = edge_hi | edge_lo
        if np.any(edge):
            out = np.where(edge_hi, hi, lo)
            fe, ue, n = _edge_bisect(lambda x: fun(np.exp(x)), u_best, out, edge)
            evals += n
            better = edge & (fe < value)
            value = np.where(better, fe, value)
            u_best = np.where(better, ue, u_best)
    arg = np.where(finite, np.exp(u_best), np.nan)
    return ScanResult(value, arg, finite & ~at_end, evals)
