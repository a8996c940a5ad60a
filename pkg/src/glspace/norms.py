"""Lebesgue-Riesz, mixed and Grand Lebesgue norms on finite atomic spaces.

Power sums are evaluated in the log domain:

    log ||f||_p = log M + (1/p) log sum_v w_v exp(p (log|f_v| - log M)),

with M the largest modulus on the positive-weight atoms. Exponents in the
hundreds on values near 1e3 stay exact to a few ulps this way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import GRID_OFFSET, P_MAX, golden_minimize
from .spaces import GridFunction, Kernel2

#: ladder used when approaching the open left end of a generating function's support
SUP_LADDER = (1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7)


class UnboundedNormError(ArithmeticError):
    """The ratio ||f||_p / psi(p) is still rising where the scan stops."""


def check_exponent(p, name="p") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(np.isnan(p)) or np.any(p < 1):
        raise ValueError(f"exponent {name} must be >= 1 (or inf), got {p}")
    return p


def _log_data(values, weights):
    keep = weights > 0
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values[..., keep])), np.log(weights[keep])


def log_norm(la, lw, p):
    """Log of the weighted p-norm from log-moduli ``la`` (last axis = atoms).

    ``p`` broadcasts against ``la.shape[:-1]``; ``p = inf`` gives the max.
    """
    p = np.asarray(p, dtype=float)
    m = np.max(la, axis=-1)
    finite_p = np.isfinite(p)
    pe = np.where(finite_p, p, 1.0)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        z = lw + pe[..., None] * (la - m[..., None])
        out = m + np.log(np.sum(np.exp(z), axis=-1)) / pe
    out = np.where(finite_p, out, m)
    return np.where(np.isneginf(m), -np.inf, out)


def _scalar_or_array(result, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(result)
    return result


def lp_norm(f: GridFunction, p) -> float | np.ndarray:
    """(sum_v w_v |f_v|**p)**(1/p); the essential sup for ``p = inf``.

    ``p`` may be an array, in which case an array of norms is returned.
    """
    p = check_exponent(p)
    la, lw = _log_data(f.values, f.space.weights)
    if la.size == 0:
        return _scalar_or_array(np.zeros(p.shape), p)
    return _scalar_or_array(np.exp(log_norm(la, lw, p)), p)


def norm_evaluator(f: GridFunction):
    """Unchecked vectorised ``p -> ||f||_p`` with the log data precomputed."""
    la, lw = _log_data(f.values, f.space.weights)
    if la.size == 0:
        return lambda p: np.zeros(np.shape(p))
    return lambda p: np.exp(log_norm(la, lw, np.asarray(p, dtype=float)))


def mixed_evaluator(h: Kernel2):
    """Unchecked vectorised ``(q, r) -> ||h||_{q,r}``; q and r must broadcast."""
    keep_x, keep_y = h.space_x.support, h.space_y.support
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(h.entries[np.ix_(keep_x, keep_y)]))[None, :, :]
        lwy = np.log(h.space_y.weights[keep_y])
        lwx = np.log(h.space_x.weights[keep_x])

    def evaluate(q, r):
        q, r = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(r, dtype=float))
        inner = log_norm(la, lwy, q.reshape(-1)[:, None])
        return np.exp(log_norm(inner, lwx, r.reshape(-1))).reshape(q.shape)

    return evaluate


def ess_sup(f: GridFunction) -> float:
    return lp_norm(f, math.inf)


def power_apply(g: GridFunction, beta: float) -> GridFunction:
    """Pointwise ``|g|**beta``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return g.with_values(np.abs(g.values) ** beta, f"|{g.label}|^{beta:g}")


def mixed_norm(h: Kernel2, q, r) -> float | np.ndarray:
    """Anisotropic norm || ||h(x, .)||_{q,Y} ||_{r,X}; broadcasts over q and r."""
    q = check_exponent(q, "q")
    r = check_exponent(r, "r")
    shape = np.broadcast_shapes(q.shape, r.shape)
    wy, wx = h.space_y.weights, h.space_x.weights
    keep_x, keep_y = wx > 0, wy > 0
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(h.entries[np.ix_(keep_x, keep_y)]))
        lwy, lwx = np.log(wy[keep_y]), np.log(wx[keep_x])
    qf = np.broadcast_to(q, shape).reshape(-1)
    rf = np.broadcast_to(r, shape).reshape(-1)
    inner = log_norm(la[None, :, :], lwy, qf[:, None])
    out = np.exp(log_norm(inner, lwx, rf)).reshape(shape)
    return _scalar_or_array(out, q, r)


def product_kernel_norm(h: Kernel2, q) -> float | np.ndarray:
    """Plain L_q norm of h on the product space with product weights."""
    q = check_exponent(q, "q")
    w = np.outer(h.space_x.weights, h.space_y.weights).ravel()
    la, lw = _log_data(h.entries.ravel(), w)
    return _scalar_or_array(np.exp(log_norm(la, lw, q)), q)


def tail_function(h: GridFunction, t: float) -> float:
    """Measure of the set where ``|h| >= t``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return float(np.sum(h.space.weights[np.abs(h.values) >= t]))


# -- Grand Lebesgue norms ------------------------------------------------------


@dataclass(frozen=True)
class PGrid:
    """Scan settings for the supremum over an open exponent interval."""

    n: int = 200
    p_max: float = P_MAX
    xtol: float = 1e-8
    slope_threshold: float = 1e-3
    extra: tuple = ()


@dataclass(frozen=True)
class QRGrid:
    n_q: int = 40
    n_r: int = 40
    q_max: float = P_MAX
    r_max: float = P_MAX
    xtol: float = 1e-8
    rounds: int = 3


@dataclass
class SupResult:
    value: float
    arg: object
    rising: bool = False
    unbounded: bool = False
    evaluations: int = 0
    samples: dict = field(default_factory=dict, repr=False)


def _exponent_samples(a, b, n, p_max, ladder=SUP_LADDER):
    """Sorted log-exponents covering (a, b) truncated at p_max, with endpoint ladders."""
    lo = max(a, 1.0)
    right_open = b <= p_max
    u_left = math.log(lo)
    u_lo = u_left + math.log1p(GRID_OFFSET)
    u_hi = math.log(b) + math.log1p(-GRID_OFFSET) if right_open else math.log(p_max)
    if u_hi <= u_lo:
        raise ValueError(f"exponent interval ({a}, {b}) is empty after truncation at {p_max}")
    pts = [u_left + math.log1p(e) for e in ladder]
    pts.extend(np.linspace(u_lo, u_hi, n))
    if right_open:
        pts.extend(math.log(b) + math.log1p(-e) for e in reversed(ladder))
    return np.array(pts), right_open


def _knots_inside(knots, a, b):
    k = np.asarray(knots, dtype=float).ravel()
    return np.log(k[(k > a) & (k < b) & np.isfinite(k)])


def gls_sup(f: GridFunction, psi, grid: PGrid | int | None = None) -> SupResult:
    """Supremum of ||f||_p / psi(p) over the support of psi, with its arg-sup.

    The scan covers a log grid, a ladder towards the open left endpoint, the
    knots of tabulated rules, and the p -> inf limit when psi has one. The
    best interior point is polished by golden-section search.
    """
    if grid is None:
        grid = PGrid()
    elif isinstance(grid, int):
        grid = PGrid(n=grid)
    a, b = psi.support
    U, right_open = _exponent_samples(a, b, grid.n, grid.p_max)
    extra = [np.log(np.asarray(grid.extra, dtype=float).ravel()), _knots_inside(psi.knots(), a, b)]
    U = np.unique(np.concatenate([U, *extra]))
    U = U[(U > math.log(max(a, 1.0))) & (U < math.log(b))]

    la, lw = _log_data(f.values, f.space.weights)
    if la.size == 0 or np.all(np.isneginf(la)):
        return SupResult(0.0, float(np.exp(U[0])), evaluations=0)

    def ratio(u):
        p = np.exp(u)
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.exp(log_norm(la, lw, p)) / psi(p)
        return np.where(np.isnan(val), 0.0, val)

    R = ratio(U)
    evals = U.size
    i = int(np.argmax(R))
    best, arg = float(R[i]), float(np.exp(U[i]))
    if 0 < i < U.size - 1:
        xg, fg, n = golden_minimize(
            lambda x: -ratio(x), np.array([U[i - 1]]), np.array([U[i + 1]]), grid.xtol
        )
        evals += n
        if -fg[0] > best:
            best, arg = float(-fg[0]), float(np.exp(xg[0]))

    rising = unbounded = False
    if not right_open:
        slope = (math.log(max(R[-1], 1e-300)) - math.log(max(R[-2], 1e-300))) / (U[-1] - U[-2])
        rising = bool(slope > grid.slope_threshold)
        limit = psi.at_infinity()
        if limit is None or np.isnan(limit):
            unbounded = rising
        else:
            with np.errstate(divide="ignore"):
                r_inf = float(np.exp(np.max(la)) / limit)
            evals += 1
            if r_inf > best:
                best, arg = r_inf, math.inf
    return SupResult(best, arg, rising, unbounded, evals, {"log_p": U, "ratio": R})


def gls_norm(f: GridFunction, psi, grid: PGrid | int | None = None, *, strict: bool = False) -> float:
    """Grand Lebesgue norm sup_p ||f||_p / psi(p).

    With ``strict=True`` an :class:`UnboundedNormError` is raised when the
    ratio is still rising at the end of an unbounded scan and psi offers no
    limit to compare against.
    """
    res = gls_sup(f, psi, grid)
    if strict and res.unbounded:
        raise UnboundedNormError(
            f"ratio still rising at p={grid.p_max if isinstance(grid, PGrid) else P_MAX:g}"
        )
    return res.value


def _axis_samples(lo, hi, n, cap):
    U, _ = _exponent_samples(lo, hi, n, cap, ladder=SUP_LADDER[-3:])
    return U


def gls_sup_2d(h: Kernel2, tau, grid: QRGrid | None = None) -> SupResult:
    """Supremum of ||h||_{q,r} / tau(q, r) over the support rectangle of tau."""
    grid = grid or QRGrid()
    (qa, qb), (ra, rb) = tau.support
    Uq = _axis_samples(qa, qb, grid.n_q, grid.q_max)
    Ur = _axis_samples(ra, rb, grid.n_r, grid.r_max)
    qs = np.exp(Uq)
    rs = np.exp(Ur)
    if qb > grid.q_max:
        qs = np.append(qs, math.inf)
    if rb > grid.r_max:
        rs = np.append(rs, math.inf)

    if not np.any(h.entries[np.ix_(h.space_x.support, h.space_y.support)]):
        return SupResult(0.0, (float(qs[0]), float(rs[0])))

    def ratio(q, r):
        with np.errstate(over="ignore", invalid="ignore"):
            val = mixed_norm(h, q, r) / tau.evaluate(q, r, limits=True)
        return np.where(np.isnan(val), 0.0, val)

    Q, R = np.meshgrid(qs, rs, indexing="ij")
    vals = ratio(Q, R)
    evals = vals.size
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best, arg = float(vals[i, j]), (float(qs[i]), float(rs[j]))

    # coordinate-wise polish for interior points
    li, lj = math.log(arg[0]), math.log(arg[1])
    nq, nr = len(Uq), len(Ur)
    if 0 < i < nq - 1 and 0 < j < nr - 1:
        brackets = [(Uq[i - 1], Uq[i + 1]), (Ur[j - 1], Ur[j + 1])]
        for _ in range(grid.rounds):
            xq, fq, n1 = golden_minimize(
                lambda x: -ratio(np.exp(x), math.exp(lj)),
                np.array([brackets[0][0]]), np.array([brackets[0][1]]), grid.xtol,
            )
            if -fq[0] > best:
                best, li = float(-fq[0]), float(xq[0])
            xr, fr, n2 = golden_minimize(
                lambda x: -ratio(math.exp(li), np.exp(x)),
                np.array([brackets[1][0]]), np.array([brackets[1][1]]), grid.xtol,
            )
            if -fr[0] > best:
                best, lj = float(-fr[0]), float(xr[0])
            evals += n1 + n2
        arg = (math.exp(li), math.exp(lj))
    return SupResult(best, arg, evaluations=evals)


def gls_norm_2d(h: Kernel2, tau, grid: QRGrid | None = None) -> float:
    """Two-dimensional Grand Lebesgue norm sup_{q,r} ||h||_{q,r} / tau(q, r)."""
    return gls_sup_2d(h, tau, grid).value
