"""Bound generating functions for the three operators and the open-domain infima behind them.

* ``W(r)  = inf_{p>r} nu(q) psi(beta p)**beta``                   (Nemytskii)
* ``theta(r) = inf_{p>r} psi(beta p)**beta kappa(q, r)``          (Urysohn)
* ``Delta(r) = inf_{(p,t) in D(r)} upsilon(r; p, t)``              (Hammerstein)

with ``q = pr/(p-r)`` and, for the Hammerstein case, ``s = tp/(t-p)``.
Each is tabulated on an r-grid; the finite stretch of the table becomes a
tabulated :class:`~glspace.generating.GeneratingFunction`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._search import P_MAX, clean, scan_minimize
from .generating import CallableRule, GeneratingFunction, tabulated
from .norms import mixed_evaluator, mixed_norm, norm_evaluator, power_apply
from .spaces import GridFunction, Kernel2

#: exponents beyond this are only reached through endpoint limits (see gls sup grids)
Q_MAX = 1e6
#: r-rows solved together; fixed so results never depend on the thread count
CHUNK = 32
DEFAULT_TOL = 1e-8


class EverywhereInfiniteError(ArithmeticError):
    """The objective has no finite sample on the domain."""


class NowhereFiniteError(ArithmeticError):
    """A bound function is infinite on (almost) the whole r-grid."""


def conjugate_exponent(p, r):
    """q with 1/r = 1/p + 1/q, i.e. q = pr/(p-r); inf when p == r."""
    p = np.asarray(p, dtype=float)
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(np.isinf(p), r, p * r / (p - r))
    q = np.where(p == r, np.inf, q)
    return float(q) if q.ndim == 0 else q


def conjugate_window(p, lo, hi):
    """Open interval of t > p on which ``tp/(t-p)`` lies in ``(lo, hi)``.

    ``tp/(t-p)`` falls from +inf (t -> p+) to p (t -> inf), so the window is
    ``(p hi/(hi-p), p lo/(lo-p))`` with the obvious readings at infinity. An
    empty window has ``t_lo = inf``.
    """
    p, lo, hi = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p, lo, hi)))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_lo = np.where(np.isinf(hi), p, np.where(hi > p, p * hi / (hi - p), np.inf))
        t_hi = np.where(lo > p, p * lo / (lo - p), np.inf)
    return t_lo, t_hi


def scaled_window(gen, beta):
    """Exponents p with ``beta p`` inside the support of ``gen``."""
    a, b = getattr(gen, "support", (1.0, math.inf))
    return a / beta, b / beta


def _intersect(*windows):
    lo, hi = windows[0]
    for a, b in windows[1:]:
        lo, hi = np.maximum(lo, a), np.minimum(hi, b)
    return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)


@dataclass(frozen=True)
class HolderTriple:
    """Exponents with 1/r = 1/p + 1/q."""

    p: float
    q: float
    r: float

    @classmethod
    def from_pr(cls, p, r):
        if not (r >= 1 and p >= r):
            raise ValueError(f"need p >= r >= 1, got p={p}, r={r}")
        return cls(float(p), conjugate_exponent(p, r), float(r))

    def residual(self) -> float:
        return abs(1 / self.p + 1 / self.q - 1 / self.r)


@dataclass(frozen=True)
class HammersteinPoint:
    """A point of D(r): 1/r = 1/p + 1/q, 1/p = 1/s + 1/t, with t > p > r > 1."""

    r: float
    p: float
    t: float
    q: float = field(init=False)
    s: float = field(init=False)

    def __post_init__(self):
        r, p, t = self.r, self.p, self.t
        if not (r > 1 and p > r and t > p):
            raise ValueError(f"(r, p, t) = ({r}, {p}, {t}) violates t > p > r > 1")
        object.__setattr__(self, "q", conjugate_exponent(p, r))
        object.__setattr__(self, "s", conjugate_exponent(t, p))

    def residuals(self) -> tuple[float, float]:
        return (
            abs(1 / self.p + 1 / self.q - 1 / self.r),
            abs(1 / self.s + 1 / self.t - 1 / self.p),
        )


@dataclass
class InfimumResult:
    value: float
    arg: object
    converged: bool
    evaluations: int


def _vectorize(objective, vectorized):
    if vectorized:
        return objective
    vec = np.vectorize(lambda *a: float(objective(*a)), otypes=[float])
    return vec


def infimum_open_1d(objective, left, right=math.inf, tol=DEFAULT_TOL, *, n_grid=128, vectorized=True):
    """Infimum of ``objective`` over the open interval ``(left, right)``.

    ``objective`` should accept numpy arrays (pass ``vectorized=False``
    otherwise). Unbounded intervals are truncated at p = 512. ``converged``
    is False when the infimum is an endpoint limit.
    """
    if not left >= 1:
        raise ValueError("left endpoint must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    fun = _vectorize(objective, vectorized)
    res = scan_minimize(lambda P: fun(P), [left], [right], n_grid=n_grid, xtol=tol)
    if not np.isfinite(res.value[0]):
        raise EverywhereInfiniteError("objective is +inf at every sample")
    return InfimumResult(float(res.value[0]), float(res.arg[0]), bool(res.converged[0]), res.evaluations)


NESTED_XTOL = 1e-6


def _nested_minimize(fun, r, *, n_grid=96, xtol=NESTED_XTOL, rounds=2):
    """Batched infimum of ``fun(r, p, t)`` over t > p > r (rows indexed by r).

    Outer scan over p, inner scan over t for each outer sample, then a few
    rounds of coordinate descent. Returns value, p, t, converged, evaluations.
    """
    r = np.asarray(r, dtype=float)
    K = r.size
    evals = [0]
    p_window = getattr(fun, "p_window", None)
    t_window = getattr(fun, "t_window", None)

    def inner(rr, pp):
        t_lo, t_hi = (pp, np.full(pp.shape, np.inf)) if t_window is None else t_window(rr, pp)
        res = scan_minimize(
            lambda T: fun(rr[:, None], pp[:, None], T), np.maximum(t_lo, pp), t_hi, n_grid=n_grid, xtol=xtol
        )
        evals[0] += res.evaluations * pp.size
        return res

    def outer(P):
        k, m = P.shape
        res = inner(np.repeat(r, m), P.ravel())
        return res.value.reshape(k, m)

    p_lo, p_hi = (r, np.full(K, np.inf)) if p_window is None else p_window(r)
    p_lo = np.maximum(p_lo, r)
    out = scan_minimize(outer, p_lo, p_hi, n_grid=n_grid, xtol=xtol)
    p_best = out.arg
    finite = np.isfinite(out.value)
    p_safe = np.where(finite, p_best, r * 2)
    res_t = inner(r, p_safe)
    value = np.where(finite, res_t.value, np.inf)
    t_best = np.where(finite, res_t.arg, np.nan)
    converged = out.converged & res_t.converged

    for _ in range(rounds):
        t_safe = np.where(finite, t_best, r * 4)
        res_p = scan_minimize(
            lambda P: fun(r[:, None], P, t_safe[:, None]), p_lo, np.minimum(t_safe, p_hi), n_grid=n_grid, xtol=xtol
        )
        evals[0] += res_p.evaluations * K
        better = finite & (res_p.value < value)
        value = np.where(better, res_p.value, value)
        p_best = np.where(better, res_p.arg, p_best)
        converged = np.where(better, res_p.converged, converged)
        p_safe = np.where(finite, p_best, r * 2)
        res_t = inner(r, p_safe)
        better = finite & (res_t.value < value)
        value = np.where(better, res_t.value, value)
        t_best = np.where(better, res_t.arg, t_best)
        converged = np.where(better, converged & res_t.converged, converged)
    return value, p_best, t_best, converged, evals[0] + out.evaluations


def infimum_open_2d(objective, r, tol=NESTED_XTOL, *, n_grid=96, vectorized=True):
    """Infimum of ``objective(p, t)`` over D(r) = {t > p > r}."""
    if not r >= 1:
        raise ValueError("r must be >= 1")
    fun = _vectorize(objective, vectorized)
    value, p, t, conv, evals = _nested_minimize(
        lambda rr, pp, tt: fun(*np.broadcast_arrays(pp, tt)), [r], n_grid=n_grid, xtol=tol
    )
    if not np.isfinite(value[0]):
        raise EverywhereInfiniteError("objective is +inf on the sampled part of D(r)")
    return InfimumResult(float(value[0]), (float(p[0]), float(t[0])), bool(conv[0]), evals)


# -- tabulation over an r-grid ----------------------------------------------------


def _threads() -> int:
    env = os.environ.get("GLS_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(4, os.cpu_count() or 1))


def _chunked(solve, r_grid):
    """Apply ``solve`` to fixed-size chunks of the r-grid, possibly in threads."""
    chunks = [r_grid[i : i + CHUNK] for i in range(0, r_grid.size, CHUNK)]
    n = min(_threads(), len(chunks))
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(solve, chunks))
    else:
        parts = [solve(c) for c in chunks]
    return [np.concatenate([p[i] for p in parts]) for i in range(len(parts[0]))]


@dataclass
class BoundTable:
    """Per-r infimum values with their minimisers."""

    r: np.ndarray
    value: np.ndarray
    arg_p: np.ndarray
    arg_t: np.ndarray | None
    converged: np.ndarray
    name: str = ""

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.value) & (self.value > 0)

    def segment(self) -> slice:
        """Longest contiguous run of finite, positive values."""
        best, start, run = (0, 0), None, 0
        for i, ok in enumerate(self.finite):
            if ok:
                start = i if start is None else start
                if i - start + 1 > best[1] - best[0]:
                    best = (start, i + 1)
            else:
                start = None
        return slice(*best)

    def to_generating(self, label: str | None = None) -> GeneratingFunction:
        seg = self.segment()
        if seg.stop - seg.start < 2:
            raise NowhereFiniteError(f"{self.name or 'bound'} is finite on fewer than two grid points")
        r = self.r[seg]
        return tabulated(r, self.value[seg], (r[0], r[-1]), label or self.name)

    def __len__(self):
        return self.r.size


def live_generating(table: BoundTable, solve_rows, label: str | None = None) -> GeneratingFunction:
    """Bound function on the finite segment of ``table`` that re-solves its infimum at every r.

    ``solve_rows`` maps a 1-D array of r values to infimum values. Unlike
    :meth:`BoundTable.to_generating` nothing is interpolated, so the result
    never dips below the infimum between table nodes.
    """
    seg = table.segment()
    if seg.stop - seg.start < 2:
        raise NowhereFiniteError(f"{table.name or 'bound'} is finite on fewer than two grid points")
    r = table.r[seg]

    def fn(p):
        p = np.asarray(p, dtype=float)
        return np.asarray(solve_rows(p.ravel()), dtype=float).reshape(p.shape)

    name = label or table.name
    return GeneratingFunction((r[0], r[-1]), CallableRule(fn, name=f"live-{name}"), name)


def parse_r_grid(spec) -> np.ndarray:
    """r-grid from a sequence or ``"geom:lo:hi:n"`` / ``"lin:lo:hi:n"``."""
    if isinstance(spec, str):
        kind, lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
        if kind == "geom":
            grid = np.geomspace(lo, hi, n)
        elif kind == "lin":
            grid = np.linspace(lo, hi, n)
        else:
            raise ValueError(f"unknown r-grid kind {kind!r}")
    else:
        grid = np.asarray(spec, dtype=float).ravel()
    if grid.size == 0 or np.any(grid < 1) or np.any(np.diff(grid) <= 0):
        raise ValueError("r-grid must be nonempty, increasing and >= 1")
    return grid


DEFAULT_R_GRID = "geom:1.01:64:25"


def _solve_1d(objective_rows, rc, tol, n_grid, window=None):
    """Row-wise infimum over p > r, restricted to ``window(r) = (lo, hi)`` when given.

    Windows come from the supports of the generating functions, so narrow
    finite stretches are scanned directly rather than hoped for by sampling.
    """
    lo, hi = (rc, np.full(rc.shape, np.inf)) if window is None else window(rc)
    lo = np.maximum(lo, rc)
    res = scan_minimize(lambda P: objective_rows(rc[:, None], P), lo, hi, n_grid=n_grid, xtol=tol)
    return res.value, res.arg, res.converged


def _table_1d(objective_rows, r_grid, name, tol, n_grid, window=None):
    r_grid = parse_r_grid(r_grid)

    def solve(rc):
        return _solve_1d(objective_rows, rc, tol, n_grid, window)

    value, arg, conv = _chunked(solve, r_grid)
    return BoundTable(r_grid, value, arg, None, conv, name)


# -- Nemytskii --------------------------------------------------------------------


def w_aux(psi, nu_gen, beta, p, r):
    """``W_a(p, r) = nu(pr/(p-r)) * psi(beta p)**beta`` (requires p > r >= 1)."""
    p_arr, r_arr = np.asarray(p, float), np.asarray(r, float)
    if np.any(~(p_arr > r_arr)) or np.any(r_arr < 1):
        raise ValueError("w_aux needs p > r >= 1")
    out = _w_rows(psi, nu_gen, beta, r_arr, p_arr)
    return float(out) if np.ndim(out) == 0 else out


def _w_rows(psi, nu_gen, beta, r, p):
    q = conjugate_exponent(p, r)
    with np.errstate(over="ignore", invalid="ignore"):
        out = nu_gen(q) * np.asarray(psi(beta * p)) ** beta
    return clean(out)


def w_window(psi, nu_gen, beta):
    """p-window of W_a(., r): nu needs q in its support, psi needs beta p in its support."""
    a, b = getattr(nu_gen, "support", (1.0, math.inf))
    return lambda r: _intersect(conjugate_window(r, a, b), scaled_window(psi, beta))


def nemytskii_table(psi, nu_gen, beta, r_grid=DEFAULT_R_GRID, *, tol=DEFAULT_TOL, n_grid=128) -> BoundTable:
    """Tabulate ``W(r) = inf_{p>r} W_a(p, r)`` over the r-grid."""
    rows = lambda r, P: _w_rows(psi, nu_gen, beta, r, P)
    return _table_1d(rows, r_grid, "W", tol, n_grid, w_window(psi, nu_gen, beta))


def nemytskii_W(psi, nu_gen, beta, r_grid=DEFAULT_R_GRID, *, live=False, tol=DEFAULT_TOL, n_grid=128) -> GeneratingFunction:
    """W as a generating function on its discovered finiteness segment.

    Tabulated (log-log interpolation between r-nodes) by default; with
    ``live=True`` every evaluation re-solves the infimum.
    """
    table = nemytskii_table(psi, nu_gen, beta, r_grid, tol=tol, n_grid=n_grid)
    if not live:
        return table.to_generating("W")
    rows = lambda r, P: _w_rows(psi, nu_gen, beta, r, P)
    window = w_window(psi, nu_gen, beta)
    return live_generating(table, lambda r: _solve_1d(rows, r, tol, n_grid, window)[0], "W")


# -- Urysohn -----------------------------------------------------------------------


def kappa(u0: Kernel2, q, r):
    """``kappa(q, r) = || ||u0||_{q,Y} ||_{r,X}``."""
    return mixed_norm(u0, q, r)


def _theta_rows(psi, kap, beta, r, p):
    q = conjugate_exponent(p, r)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.asarray(psi(beta * p)) ** beta * kap(q, r)
    return clean(out)


def urysohn_table(psi, u0, beta, r_grid=DEFAULT_R_GRID, *, tol=DEFAULT_TOL, n_grid=128) -> BoundTable:
    """Tabulate ``theta(r) = inf_{p>r} psi(beta p)**beta kappa(pr/(p-r), r)``."""
    kap = mixed_evaluator(u0)
    rows = lambda r, P: _theta_rows(psi, kap, beta, r, P)
    return _table_1d(rows, r_grid, "theta", tol, n_grid, theta_window(psi, beta))


def theta_window(psi, beta):
    """p-window of the theta objective: only psi(beta p) can be infinite."""
    return lambda r: scaled_window(psi, beta)


def urysohn_theta(psi, u0, beta, r_grid=DEFAULT_R_GRID, *, live=False, tol=DEFAULT_TOL, n_grid=128) -> GeneratingFunction:
    """theta as a generating function on its finiteness segment (see :func:`nemytskii_W`)."""
    table = urysohn_table(psi, u0, beta, r_grid, tol=tol, n_grid=n_grid)
    if not live:
        return table.to_generating("theta")
    kap = mixed_evaluator(u0)
    rows = lambda r, P: _theta_rows(psi, kap, beta, r, P)
    window = theta_window(psi, beta)
    return live_generating(table, lambda r: _solve_1d(rows, r, tol, n_grid, window)[0], "theta")


# -- Hammerstein ---------------------------------------------------------------------


@dataclass(frozen=True)
class UpsilonFactors:
    """The three factor rules of upsilon, each vectorised.

    ``h_mixed(q, r)``, ``phi_norms(s)`` and ``g_beta_norms(t)`` hold either
    raw norms or their generating-function majorants. ``p_window(r)`` and
    ``t_window(r, p)``, when set, return the open intervals outside which the
    product is certainly infinite.
    """

    h_mixed: object
    phi_norms: object
    g_beta_norms: object
    mode: str = "raw"
    p_window: object = None
    t_window: object = None

    def __call__(self, r, p, t):
        q = conjugate_exponent(p, r)
        s = conjugate_exponent(t, p)
        t = np.asarray(t, dtype=float)
        ok_q, ok_s, ok_t = q >= 1, s >= 1, t >= 1
        with np.errstate(over="ignore", invalid="ignore"):
            out = (
                self.h_mixed(np.where(ok_q, q, 2.0), np.broadcast_to(r, np.shape(q)))
                * self.phi_norms(np.where(ok_s, s, 2.0))
                * self.g_beta_norms(np.where(ok_t, t, 2.0))
            )
        return clean(np.where(ok_q & ok_s & ok_t, out, np.inf))


def raw_factors(h: Kernel2, phi: GridFunction, g: GridFunction, beta: float) -> UpsilonFactors:
    """Raw-norm factors: ||h||_{q,r}, ||phi||_s and ||g^beta||_t."""
    return UpsilonFactors(
        mixed_evaluator(h), norm_evaluator(phi), norm_evaluator(power_apply(g, beta)), "raw"
    )


def majorant_factors(tau, nu_gen, psi, beta, h_gls=1.0, phi_gls=1.0, g_gls=1.0) -> UpsilonFactors:
    """Generating-function majorants ||h||Gtau tau(q,r), ||phi||Gnu nu(s), (||g||Gpsi psi(beta t))**beta."""

    def g_part(t):
        with np.errstate(over="ignore"):
            return (g_gls * np.asarray(psi(beta * np.asarray(t)))) ** beta

    (qa, qb), (ra, rb) = tau.support
    na, nb = nu_gen.support

    def p_window(r):
        lo, hi = conjugate_window(r, qa, qb)
        inside = (np.asarray(r) > ra) & (np.asarray(r) < rb)
        return np.where(inside, lo, np.inf), hi

    def t_window(r, p):
        return _intersect(conjugate_window(p, na, nb), scaled_window(psi, beta))

    return UpsilonFactors(
        lambda q, r: h_gls * np.asarray(tau(q, r)),
        lambda s: phi_gls * np.asarray(nu_gen(s)),
        g_part,
        "gls-majorant",
        p_window,
        t_window,
    )


def upsilon(r, p, t, factors: UpsilonFactors) -> float:
    """upsilon(r; p, t) = ||h||_{q,r} ||phi||_s ||g^beta||_t (or its majorant) at a point of D(r)."""
    HammersteinPoint(r, p, t)
    return float(factors(np.float64(r), np.float64(p), np.float64(t)))


def hammerstein_table(factors: UpsilonFactors, r_grid=DEFAULT_R_GRID, *, tol=NESTED_XTOL, n_grid=96) -> BoundTable:
    """Tabulate ``Delta(r) = inf over D(r) of upsilon(r; p, t)``."""
    r_grid = parse_r_grid(r_grid)
    if np.any(r_grid <= 1):
        raise ValueError("Delta needs r > 1")

    def solve(rc):
        value, p, t, conv, _ = _nested_minimize(factors, rc, n_grid=n_grid, xtol=tol)
        return value, p, t, conv

    value, p, t, conv = _chunked(solve, r_grid)
    return BoundTable(r_grid, value, p, t, conv, "Delta")


def hammerstein_delta(
    factors: UpsilonFactors, r_grid=DEFAULT_R_GRID, *, live=False, tol=NESTED_XTOL, n_grid=96
) -> GeneratingFunction:
    """Delta as a generating function on its finiteness segment (see :func:`nemytskii_W`)."""
    table = hammerstein_table(factors, r_grid, tol=tol, n_grid=n_grid)
    if not live:
        return table.to_generating("Delta")
    return live_generating(table, lambda r: _nested_minimize(factors, r, n_grid=n_grid, xtol=tol)[0], "Delta")
