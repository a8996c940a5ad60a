"""Built-in scenarios: the two exactness examples, an all-ones Hammerstein case,
and seeded random instances that satisfy the domination conditions with equality."""

from __future__ import annotations

import math

import numpy as np

from .scenario import EXAMPLE_FLAG, Scenario, scenario_from_payload

FIXTURE_R_GRID = "geom:1.05:32:12"


def _space(label, weights):
    return {"label": label, "weights": [float(w) for w in weights]}


def _fn(label, space, values):
    return {"label": label, "space": space, "values": [float(v) for v in values]}


def _ker(label, sx, sy, entries):
    return {"label": label, "space_x": sx, "space_y": sy, "entries": [[float(v) for v in row] for row in entries]}


def example_2_1_payload(beta: float = 2.0) -> dict:
    """Probability space, phi = 1, nu = 1 and the natural psi of g: the Nemytskii bound is attained."""
    w = [0.5, 0.25, 0.125, 0.125]
    return {
        "name": "example-2.1",
        "flags": [EXAMPLE_FLAG],
        "beta": beta,
        "r_grid": FIXTURE_R_GRID,
        "instance": {
            "spaces": [_space("X", w)],
            "functions": [_fn("g", "X", [0.5, 1.0, 2.0, 3.0]), _fn("phi", "X", [1, 1, 1, 1])],
            "maps": [{"label": "n", "kind": "product", "params": {"phi": "phi", "beta": beta}}],
        },
        "nemytskii": {"g": "g", "phi": "phi", "n": "n", "psi": "natural:g", "nu": "constant:1"},
    }


def remark_3_1_payload(C: float = 2.0, beta: float = 3.0) -> dict:
    """g = C, u0 = 1, psi = 1 on probability spaces: both sides equal C**beta."""
    wx, wy = [0.5, 0.5], [0.25, 0.25, 0.5]
    return {
        "name": "remark-3.1",
        "beta": beta,
        "r_grid": FIXTURE_R_GRID,
        "instance": {
            "spaces": [_space("X", wx), _space("Y", wy)],
            "functions": [_fn("g", "Y", [C] * 3)],
            "kernels": [_ker("u0", "X", "Y", np.ones((2, 3)))],
            "maps": [{"label": "u", "kind": "kernel_product", "params": {"u0": "u0", "beta": beta}}],
        },
        "urysohn": {"g": "g", "u": "u", "u0": "u0", "psi": "constant:1"},
    }


def all_ones_payload(beta: float = 2.0) -> dict:
    """h = phi = g = 1 on probability spaces: Delta = 1 and ||H[g]||_r = 1 for every r."""
    wx, wy = [0.5, 0.5], [0.25, 0.75]
    return {
        "name": "all-ones-4.1",
        "beta": beta,
        "r_grid": FIXTURE_R_GRID,
        "instance": {
            "spaces": [_space("X", wx), _space("Y", wy)],
            "functions": [_fn("g", "Y", [1, 1]), _fn("phi", "Y", [1, 1])],
            "kernels": [_ker("h", "X", "Y", np.ones((2, 2)))],
            "maps": [{"label": "n", "kind": "product", "params": {"phi": "phi", "beta": beta}}],
        },
        "hammerstein": {
            "g": "g", "h": "h", "n": "n", "phi": "phi",
            "psi": "constant:1", "nu": "constant:1", "tau": "constant:1",
        },
    }


FIXTURES = {
    "example-2.1": example_2_1_payload,
    "remark-3.1": remark_3_1_payload,
    "all-ones-4.1": all_ones_payload,
}


def fixture(name: str) -> Scenario:
    return scenario_from_payload(FIXTURES[name]())


def fixtures() -> list[Scenario]:
    return [fixture(n) for n in FIXTURES]


# -- random instances ----------------------------------------------------------------


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _gen_spec(rng, of: str, beta: float, bounded_ok: bool = True) -> dict:
    """A random generating-function family: natural, constant or power, sometimes on a bounded support."""
    kind = ("natural", "constant", "power")[int(rng.integers(3))]
    if kind == "natural":
        spec = {"kind": "natural", "of": of}
    elif kind == "constant":
        spec = {"kind": "constant", "value": float(_log_uniform(rng, 0.2, 5.0, None))}
    else:
        spec = {"kind": "power", "exponent": float(rng.uniform(0.1, 1.5)), "scale": float(_log_uniform(rng, 0.2, 5.0, None))}
    if bounded_ok and rng.random() < 0.3:
        spec["support"] = [1.0, float(beta * rng.uniform(8.0, 40.0))]
    return spec


def _gen2_spec(rng, of: str) -> dict:
    kind = ("natural", "constant", "power")[int(rng.integers(3))]
    if kind == "natural":
        return {"kind": "natural", "of": of}
    if kind == "constant":
        return {"kind": "constant", "value": float(_log_uniform(rng, 0.2, 5.0, None))}
    return {
        "kind": "power",
        "exponents": [float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0))],
        "scale": float(_log_uniform(rng, 0.2, 5.0, None)),
    }


def random_instance(
    seed: int,
    sizes: tuple = (3, 4),
    value_range: tuple = (0.1, 10.0),
    *,
    beta_range: tuple = (1.0, 3.0),
    normalize_x: bool = False,
    normalize_y: bool = True,
    r_grid: str = "geom:1.05:32:10",
) -> dict:
    """Deterministic random scenario payload covering all three theorems.

    Values are strictly positive and log-uniform in ``value_range``. The maps
    are the equality cases of the domination conditions: ``n = phi |z|**beta``
    and ``u = u0 |z|**beta``. Y is normalised to unit mass by default because
    the Urysohn and Hammerstein estimates integrate over Y with Hoelder
    exponents whose reciprocals sum to less than one.
    """
    rng = np.random.default_rng(seed)
    nx, ny = (int(s) for s in sizes)
    if nx < 1 or ny < 1:
        raise ValueError("sizes must be >= 1")
    lo, hi = value_range
    if not (0 < lo <= hi < math.inf):
        raise ValueError("value_range must be a bounded positive interval")
    wx = rng.uniform(0.1, 1.0, nx)
    wy = rng.uniform(0.1, 1.0, ny)
    wx = wx / wx.sum() if normalize_x else wx
    wy = wy / wy.sum() if normalize_y else wy
    beta = float(rng.uniform(*beta_range))
    vals = lambda n: _log_uniform(rng, lo, hi, n)
    inst = {
        "spaces": [_space("X", wx), _space("Y", wy)],
        "functions": [
            _fn("g_x", "X", vals(nx)),
            _fn("phi_x", "X", vals(nx)),
            _fn("g_y", "Y", vals(ny)),
            _fn("phi_y", "Y", vals(ny)),
        ],
        "kernels": [_ker("u0", "X", "Y", vals((nx, ny))), _ker("h", "X", "Y", vals((nx, ny)))],
        "maps": [
            {"label": "n_x", "kind": "product", "params": {"phi": "phi_x", "beta": beta}},
            {"label": "n_y", "kind": "product", "params": {"phi": "phi_y", "beta": beta}},
            {"label": "u", "kind": "kernel_product", "params": {"u0": "u0", "beta": beta}},
        ],
    }
    return {
        "name": f"random-{seed}",
        "seed": int(seed),
        "beta": beta,
        "r_grid": r_grid,
        "instance": inst,
        "nemytskii": {
            "g": "g_x", "phi": "phi_x", "n": "n_x",
            "psi": _gen_spec(rng, "g_x", beta), "nu": _gen_spec(rng, "phi_x", 1.0),
        },
        "urysohn": {"g": "g_y", "u": "u", "u0": "u0", "psi": _gen_spec(rng, "g_y", beta)},
        "hammerstein": {
            "g": "g_y", "h": "h", "n": "n_y", "phi": "phi_y",
            "psi": _gen_spec(rng, "g_y", beta), "nu": _gen_spec(rng, "phi_y", 1.0), "tau": _gen2_spec(rng, "h"),
        },
    }


def random_scenario(seed: int, **kw) -> Scenario:
    return scenario_from_payload(random_instance(seed, **kw))
