"""Independent reference computations and random-data strategies shared by the tests.

The references here deliberately avoid the package's log-domain kernels:
norms are summed directly (or in mpmath at 50 digits) so that a bug in the
shifted-exponential path cannot be reproduced by its own oracle.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from hypothesis import strategies as st

from glspace.spaces import GridFunction, Kernel2, MeasureSpace

mpmath.mp.dps = 50


def naive_norm(values, weights, p):
    """Direct (sum w |f|^p)^(1/p); only safe for moderate p and values."""
    values = np.abs(np.asarray(values, dtype=float))
    weights = np.asarray(weights, dtype=float)
    if math.isinf(p):
        return float(np.max(values[weights > 0]))
    return float(np.sum(weights * values**p) ** (1.0 / p))


def mp_norm(values, weights, p):
    """50-digit reference norm."""
    vals = [mpmath.mpf(abs(float(v))) for v in values]
    ws = [mpmath.mpf(float(w)) for w in weights]
    if math.isinf(p):
        return float(max(v for v, w in zip(vals, ws) if w > 0))
    p = mpmath.mpf(float(p))
    return float(mpmath.fsum(w * v**p for v, w in zip(vals, ws)) ** (1 / p))


def mp_mixed(entries, wx, wy, q, r):
    rows = [mp_norm(row, wy, q) for row in np.asarray(entries)]
    return mp_norm(rows, wx, r)


def rand_space(rng, n, *, probability=False, zero_atoms=False, label="S"):
    w = rng.uniform(0.1, 1.0, n)
    if zero_atoms and n > 1:
        w[rng.random(n) < 0.25] = 0.0
        if not np.any(w > 0):
            w[0] = 0.5
    if probability:
        w = w / w.sum()
    return MeasureSpace(w, label)


def log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def rand_function(rng, space, lo=0.1, hi=10.0, *, signed=False, label="f"):
    v = log_uniform(rng, lo, hi, space.atom_count)
    if signed:
        v = v * rng.choice([-1.0, 1.0], space.atom_count)
    return GridFunction(space, v, label)


def rand_kernel(rng, sx, sy, lo=0.1, hi=10.0, label="h"):
    return Kernel2(sx, sy, log_uniform(rng, lo, hi, (sx.atom_count, sy.atom_count)), label)


# -- hypothesis strategies ------------------------------------------------------------

weights_st = st.lists(st.floats(0.01, 10.0), min_size=1, max_size=8)
values_st = st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3)
exponent_st = st.floats(1.0, 64.0)


@st.composite
def function_st(draw, probability=False, max_atoms=8):
    n = draw(st.integers(1, max_atoms))
    w = np.array(draw(st.lists(st.floats(0.01, 10.0), min_size=n, max_size=n)))
    if probability:
        w = w / w.sum()
    v = np.array(draw(st.lists(values_st, min_size=n, max_size=n)))
    return GridFunction(MeasureSpace(w), v)
