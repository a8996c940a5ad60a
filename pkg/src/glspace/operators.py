"""Nemytskii, Urysohn and Hammerstein operators as exact weighted sums,
plus probes for the factorization (domination) conditions behind the bounds."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .spaces import GridFunction, Kernel2, MeasureSpace, ScalarMap2, ScalarMap3

CERTIFY_RTOL = 1e-12


class OperatorEvaluationError(ArithmeticError):
    """A scalar map failed (raised or returned a non-finite value) at some atom."""

    def __init__(self, message, atom=None):
        super().__init__(message)
        self.atom = atom


def _checked(values, what, atoms):
    values = np.asarray(values, dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        first = tuple(int(i) for i in np.argwhere(bad)[0])
        atom = atoms[first] if atoms is not None else first
        raise OperatorEvaluationError(f"{what} is not finite at atom {atom}", atom)
    return values


def _eval_map2(n: ScalarMap2, x, z):
    try:
        return _checked(n(x, z), f"map {n.label!r}", x)
    except OperatorEvaluationError:
        raise
    except Exception as exc:
        for i, (xi, zi) in enumerate(zip(np.ravel(x), np.ravel(z))):
            try:
                n(np.array([xi]), np.array([zi]))
            except Exception:
                raise OperatorEvaluationError(f"map {n.label!r} failed at atom {int(xi)}: {exc}", int(xi)) from exc
        raise


def nemytskii_apply(n: ScalarMap2, g: GridFunction) -> GridFunction:
    """``N[g](x) = n(x, g(x))``."""
    idx = np.arange(g.space.atom_count)
    return g.with_values(_eval_map2(n, idx, g.values), f"N[{g.label}]")


def _urysohn_matrix(u: ScalarMap3, g: GridFunction, X: MeasureSpace):
    ix = np.arange(X.atom_count)[:, None]
    iy = np.arange(g.space.atom_count)[None, :]
    try:
        vals = u(ix, iy, g.values[None, :])
    except Exception as exc:
        raise OperatorEvaluationError(f"map {u.label!r} failed: {exc}") from exc
    vals = np.asarray(vals, dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, j = (int(k) for k in np.argwhere(bad)[0])
        raise OperatorEvaluationError(f"map {u.label!r} is not finite at atom (x={i}, y={j})", (i, j))
    return vals


def urysohn_apply(u: ScalarMap3, g: GridFunction, X: MeasureSpace) -> GridFunction:
    """``U[g](x) = sum_y w_y u(x, y, g(y))``."""
    vals = _urysohn_matrix(u, g, X)
    out = np.sum(vals * g.space.weights[None, :], axis=1)
    return GridFunction(X, out, f"U[{g.label}]")


def hammerstein_apply(h: Kernel2, n: ScalarMap2, g: GridFunction) -> GridFunction:
    """``H[g](x) = sum_y w_y h(x, y) n(y, g(y))``.

    The arithmetic matches :func:`urysohn_apply` with ``u = h * n`` term by term.
    """
    if g.space is not h.space_y and g.space.atom_count != h.space_y.atom_count:
        raise ValueError("g must live on the y-space of the kernel")
    nv = _eval_map2(n, np.arange(g.space.atom_count), g.values)
    vals = h.entries * nv[None, :]
    out = np.sum(vals * g.space.weights[None, :], axis=1)
    return GridFunction(h.space_x, out, f"H[{g.label}]")


# the kernel of Definition 3 is written w(y, z) before being identified with n
hammerstein_apply_w = hammerstein_apply


@dataclass(frozen=True)
class FactorizationWitness:
    """Data of the condition ``|n(x,z)| <= phi(x)|z|**beta`` (or ``u0(x,y)|z|**beta``).

    ``worst_margin`` is the smallest ``bound - |map|`` over the probes; NaN
    until :func:`check_factorization` fills it in.
    """

    beta: float
    phi: GridFunction | None = None
    u0: Kernel2 | None = None
    z_grid: np.ndarray | None = None
    worst_margin: float = float("nan")
    scale: float = 1.0

    @property
    def certified(self) -> bool:
        return bool(self.worst_margin >= -CERTIFY_RTOL * self.scale)


def default_z_grid(g: GridFunction, n: int = 257) -> np.ndarray:
    """Symmetric probe grid over [-max|g|, max|g|] plus the realised values of g."""
    top = float(np.max(np.abs(g.values))) if g.values.size else 1.0
    top = top if top > 0 else 1.0
    return np.unique(np.concatenate([np.linspace(-top, top, n), g.values]))


def check_factorization(map_, witness: FactorizationWitness) -> FactorizationWitness:
    """Probe the domination condition on every atom and every z in the witness grid."""
    z = np.asarray(witness.z_grid, dtype=float)
    if z.size == 0:
        raise ValueError("z_grid must be nonempty")
    zb = np.abs(z) ** witness.beta
    if isinstance(map_, ScalarMap3) or witness.u0 is not None:
        u0 = witness.u0.entries
        ix = np.arange(u0.shape[0])[:, None, None]
        iy = np.arange(u0.shape[1])[None, :, None]
        vals = np.abs(map_(ix, iy, z[None, None, :]))
        bound = u0[:, :, None] * zb[None, None, :]
    else:
        phi = witness.phi.values
        ix = np.arange(phi.size)[:, None]
        vals = np.abs(map_(ix, z[None, :]))
        bound = phi[:, None] * zb[None, :]
    margin = np.where(np.isnan(vals), -np.inf, bound - vals)
    scale = max(1.0, float(np.max(np.abs(bound))))
    return replace(witness, worst_margin=float(np.min(margin)), scale=scale)
