import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glspace import bounds as B
from glspace.bounds import (
    EverywhereInfiniteError,
    HammersteinPoint,
    HolderTriple,
    NowhereFiniteError,
    conjugate_exponent,
    hammerstein_delta,
    hammerstein_table,
    infimum_open_1d,
    infimum_open_2d,
    kappa,
    majorant_factors,
    nemytskii_table,
    nemytskii_W,
    parse_r_grid,
    raw_factors,
    upsilon,
    urysohn_table,
    urysohn_theta,
    w_aux,
)
from glspace.generating import constant, constant2, natural_from_function, power
from glspace.norms import lp_norm, mixed_norm
from glspace.spaces import GridFunction, Kernel2, MeasureSpace

from helpers import rand_function, rand_kernel, rand_space

INF = math.inf
X2 = MeasureSpace([0.5, 0.5], "X")
Y2 = MeasureSpace([0.25, 0.75], "Y")
R_NODES = [1.1, 1.5, 2.0, 3.0, 5.0, 8.0]


# -- exponent bookkeeping --------------------------------------------------------


@given(st.floats(1.0, 1e4), st.floats(1.0 + 1e-9, 1e3))
def test_holder_triple_closure(r, ratio):
    h = HolderTriple.from_pr(r * ratio, r)
    assert h.residual() <= 1e-14 * max(1.0, 1 / r)


def test_holder_triple_equal_exponents():
    h = HolderTriple.from_pr(3.0, 3.0)
    assert h.q == INF and h.residual() == 0.0


def test_holder_triple_rejects_p_below_r():
    with pytest.raises(ValueError):
        HolderTriple.from_pr(2.0, 3.0)


def test_conjugate_exponent_values():
    assert conjugate_exponent(4.0, 2.0) == 4.0
    assert conjugate_exponent(INF, 2.0) == 2.0


@given(st.floats(1.0 + 1e-6, 100.0), st.floats(1.0 + 1e-6, 50.0), st.floats(1.0 + 1e-6, 50.0))
def test_hammerstein_point_closure(r, a, b):
    pt = HammersteinPoint(r, r * a, r * a * b)
    e1, e2 = pt.residuals()
    assert e1 <= 1e-14 and e2 <= 1e-14
    assert pt.s == pytest.approx(pt.t * pt.p / (pt.t - pt.p), rel=1e-14)


@pytest.mark.parametrize("r, p, t", [(1.0, 2.0, 3.0), (2.0, 2.0, 3.0), (2.0, 3.0, 3.0), (2.0, 4.0, 3.0)])
def test_hammerstein_point_rejects_invalid(r, p, t):
    with pytest.raises(ValueError):
        HammersteinPoint(r, p, t)


# -- generic infima --------------------------------------------------------------


def test_infimum_1d_interior():
    res = infimum_open_1d(lambda p: (p - 2.0) ** 2 + 1.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.arg == pytest.approx(2.0, abs=1e-4)
    assert res.converged


def test_infimum_1d_left_endpoint_limit():
    res = infimum_open_1d(lambda p: p, 3.0)
    assert res.value == pytest.approx(3.0, rel=1e-8)
    assert not res.converged


def test_infimum_1d_everywhere_infinite():
    with pytest.raises(EverywhereInfiniteError):
        infimum_open_1d(lambda p: np.full(np.shape(p), np.inf), 1.0)


def test_infimum_1d_scalar_objective():
    res = infimum_open_1d(lambda p: abs(math.log(p / 7.0)) + 2.0, 1.0, vectorized=False)
    assert res.value == pytest.approx(2.0, abs=1e-7)


def test_infimum_1d_argument_checks():
    with pytest.raises(ValueError):
        infimum_open_1d(lambda p: p, 0.5)
    with pytest.raises(ValueError):
        infimum_open_1d(lambda p: p, 1.0, tol=0.0)


def test_infimum_1d_value_not_above_samples():
    rng = np.random.default_rng(0)
    for _ in range(20):
        c, w = rng.uniform(1.5, 40), rng.uniform(0.1, 3)
        fun = lambda p: np.abs(np.log(p / c)) ** w + 0.3 * np.sin(3 * np.log(p))
        res = infimum_open_1d(fun, 1.0)
        ps = np.geomspace(1.0 + 1e-6, 512, 5000)
        assert res.value <= np.min(fun(ps)) + 1e-8


def test_infimum_2d_separable():
    f = lambda p: (np.log(p / 3.0)) ** 2 + 1.0
    g = lambda t: (np.log(t / 10.0)) ** 2 + 2.0
    res = infimum_open_2d(lambda p, t: f(p) + g(t), 1.5)
    assert res.value == pytest.approx(3.0, abs=1e-8)
    assert res.arg[0] == pytest.approx(3.0, rel=1e-3)
    assert res.arg[1] == pytest.approx(10.0, rel=1e-3)


def test_infimum_2d_constant():
    res = infimum_open_2d(lambda p, t: np.ones(np.broadcast(p, t).shape), 2.0)
    assert res.value == 1.0


def test_infimum_2d_empty():
    with pytest.raises(EverywhereInfiniteError):
        infimum_open_2d(lambda p, t: np.full(np.broadcast(p, t).shape, np.inf), 2.0)


# -- Nemytskii -------------------------------------------------------------------


def test_w_aux_unit_nu():
    psi = power(1.0)
    for p, r in [(3.0, 2.0), (10.0, 1.5)]:
        assert w_aux(psi, constant(1.0), 2.0, p, r) == pytest.approx((2 * p) ** 2, rel=1e-15)


def test_w_aux_direct_value():
    assert w_aux(power(1.0), constant(1.0), 1.0, 2.0, 1.0) == 2.0


def test_w_aux_sentinel_and_errors():
    assert w_aux(constant(1.0, (1, 4)), constant(1.0), 2.0, 3.0, 1.5) == INF
    with pytest.raises(ValueError):
        w_aux(constant(1.0), constant(1.0), 2.0, 2.0, 2.0)


def test_w_constant_generators():
    table = nemytskii_table(constant(1.0), constant(1.0), 2.0, R_NODES)
    assert np.all(table.value == 1.0)


def test_w_identity_psi():
    table = nemytskii_table(power(1.0), constant(1.0), 1.0, R_NODES)
    assert np.allclose(table.value, R_NODES, rtol=1e-6)


def test_w_natural_psi_is_power_of_norm():
    g = GridFunction(MeasureSpace([0.5, 0.25, 0.25]), [0.5, 2.0, 3.0])
    psi, beta = natural_from_function(g), 2.0
    table = nemytskii_table(psi, constant(1.0), beta, R_NODES)
    expected = lp_norm(g, beta * np.array(R_NODES)) ** beta
    assert np.allclose(table.value, expected, rtol=1e-8)
    assert np.all(table.value >= expected * (1 - 1e-14))


def test_w_below_auxiliary_function():
    rng = np.random.default_rng(4)
    psi, nu, beta = power(0.7), power(0.3, 2.0, (1, 200)), 1.5
    table = nemytskii_table(psi, nu, beta, R_NODES)
    for r, w in zip(table.r, table.value):
        ps = r * (1 + np.exp(rng.uniform(-12, 4, 500)))
        assert np.all(w <= w_aux(psi, nu, beta, ps, np.full(ps.shape, r)) * (1 + 1e-12))


def test_w_discovers_finite_segment():
    psi = constant(1.0, (2.0, 12.0))
    W = nemytskii_W(psi, constant(1.0), 2.0, "geom:1.01:20:30")
    a, b = W.support
    assert a >= 1.0 and b < 6.0


def test_w_nowhere_finite():
    with pytest.raises(NowhereFiniteError):
        nemytskii_W(constant(1.0, (1.0, 1.5)), constant(1.0), 2.0, [2.0, 3.0, 4.0])


def test_w_live_matches_table_at_nodes():
    psi, nu = power(0.5), power(0.25, 1.0, (1, 300))
    table = nemytskii_table(psi, nu, 2.0, R_NODES)
    live = nemytskii_W(psi, nu, 2.0, R_NODES, live=True)
    inner = np.array(R_NODES[1:-1])
    assert np.allclose(live(inner), table.value[1:-1], rtol=1e-12)


# -- Urysohn ---------------------------------------------------------------------


def test_kappa_examples():
    ones = Kernel2(X2, Y2, np.ones((2, 2)))
    assert kappa(ones, 3.0, 5.0) == pytest.approx(1.0, rel=1e-15)
    three = Kernel2(X2, Y2, 3.0 * np.ones((2, 2)))
    assert kappa(three, 3.0, 5.0) == pytest.approx(3.0, rel=1e-15)
    u0 = Kernel2(X2, X2, [[1.0, 3.0], [2.0, 2.0]])
    assert kappa(u0, 1.0, INF) == pytest.approx(2.0, rel=1e-15)


def test_theta_examples():
    ones = Kernel2(X2, Y2, np.ones((2, 2)))
    assert np.allclose(urysohn_table(constant(1.0), ones, 3.0, R_NODES).value, 1.0, rtol=1e-14)
    assert np.allclose(urysohn_table(power(1.0), ones, 1.0, R_NODES).value, R_NODES, rtol=1e-6)


def test_theta_homogeneous_in_kernel():
    rng = np.random.default_rng(8)
    u0 = rand_kernel(rng, X2, Y2)
    psi = power(0.5)
    base = urysohn_table(psi, u0, 2.0, R_NODES).value
    scaled = urysohn_table(psi, Kernel2(X2, Y2, 4.0 * u0.entries), 2.0, R_NODES).value
    assert np.allclose(scaled, 4.0 * base, rtol=1e-8)


def test_theta_generating_function():
    ones = Kernel2(X2, Y2, np.ones((2, 2)))
    theta = urysohn_theta(power(1.0), ones, 1.0, R_NODES)
    assert theta.support == (R_NODES[0], R_NODES[-1])
    assert theta(2.5) == pytest.approx(2.5, rel=1e-3)


# -- Hammerstein -----------------------------------------------------------------


def _ones_factors():
    h = Kernel2(X2, Y2, np.ones((2, 2)))
    return raw_factors(h, GridFunction(Y2, [1.0, 1.0]), GridFunction(Y2, [1.0, 1.0]), 2.0)


def test_upsilon_unit_factors():
    one2, one1 = (lambda q, r: np.ones(np.shape(q))), (lambda s: np.ones(np.shape(s)))
    f = B.UpsilonFactors(one2, one1, one1)
    assert upsilon(2.0, 3.0, 7.0, f) == 1.0


@given(st.floats(1.01, 50.0), st.floats(1.01, 20.0), st.floats(1.01, 20.0))
def test_upsilon_all_ones(r, a, b):
    assert upsilon(r, r * a, r * a * b, _ones_factors()) == pytest.approx(1.0, rel=1e-13)


def test_upsilon_doubling_g():
    rng = np.random.default_rng(9)
    h, phi, g = rand_kernel(rng, X2, Y2), rand_function(rng, Y2), rand_function(rng, Y2)
    beta = 1.7
    f1 = raw_factors(h, phi, g, beta)
    f2 = raw_factors(h, phi, g.with_values(2 * g.values), beta)
    assert upsilon(1.5, 3.0, 8.0, f2) == pytest.approx(2**beta * upsilon(1.5, 3.0, 8.0, f1), rel=1e-13)


def test_upsilon_direct_value():
    rng = np.random.default_rng(10)
    h, phi, g = rand_kernel(rng, X2, Y2), rand_function(rng, Y2), rand_function(rng, Y2)
    r, p, t, beta = 1.5, 4.0, 10.0, 2.0
    q, s = p * r / (p - r), t * p / (t - p)
    expected = mixed_norm(h, q, r) * lp_norm(phi, s) * lp_norm(g, beta * t) ** beta
    assert upsilon(r, p, t, raw_factors(h, phi, g, beta)) == pytest.approx(expected, rel=1e-12)


def test_upsilon_rejects_invalid_point():
    with pytest.raises(ValueError):
        upsilon(2.0, 1.5, 3.0, _ones_factors())


def test_delta_all_ones():
    assert np.allclose(hammerstein_table(_ones_factors(), R_NODES).value, 1.0, rtol=1e-13)


def test_delta_majorant_unit_factors():
    f = majorant_factors(constant2(1.0), constant(1.0), constant(1.0), 2.0)
    assert np.all(hammerstein_table(f, R_NODES).value == 1.0)


def test_delta_not_above_sampled_points():
    rng = np.random.default_rng(12)
    X, Y = rand_space(rng, 3), rand_space(rng, 4, probability=True)
    f = raw_factors(rand_kernel(rng, X, Y), rand_function(rng, Y), rand_function(rng, Y), 2.0)
    table = hammerstein_table(f, [1.2, 2.0, 4.0])
    n = 10_000
    for r, d in zip(table.r, table.value):
        p = r * (1 + np.exp(rng.uniform(-10, 4, n)))
        t = p * (1 + np.exp(rng.uniform(-10, 4, n)))
        vals = f(np.full(n, r), p, t)
        assert np.all(d <= vals * (1 + 1e-12))


def test_delta_rejects_r_one():
    with pytest.raises(ValueError):
        hammerstein_table(_ones_factors(), [1.0, 2.0])


def test_delta_generating_function():
    d = hammerstein_delta(_ones_factors(), R_NODES)
    assert d(2.0) == pytest.approx(1.0, rel=1e-12)


# -- grids and determinism -------------------------------------------------------


def test_parse_r_grid():
    assert np.allclose(parse_r_grid("geom:1:8:4"), [1, 2, 4, 8])
    assert np.allclose(parse_r_grid("lin:1:3:3"), [1, 2, 3])
    for bad in ("geom:0.5:2:3", [3.0, 2.0], [], "log:1:2:3"):
        with pytest.raises(ValueError):
            parse_r_grid(bad)


def test_tables_independent_of_threads_and_chunks(monkeypatch):
    rng = np.random.default_rng(13)
    X, Y = rand_space(rng, 3), rand_space(rng, 3, probability=True)
    f = raw_factors(rand_kernel(rng, X, Y), rand_function(rng, Y), rand_function(rng, Y), 1.5)
    grid = "geom:1.05:30:40"
    results = []
    for threads, chunk in [("1", 32), ("8", 32), ("3", 7)]:
        monkeypatch.setenv("GLS_THREADS", threads)
        monkeypatch.setattr(B, "CHUNK", chunk)
        t1 = nemytskii_table(power(0.5), power(0.2, 1.0, (1, 100)), 1.5, grid)
        t3 = hammerstein_table(f, grid)
        results.append((t1.value, t1.arg_p, t3.value, t3.arg_p, t3.arg_t))
    for other in results[1:]:
        for a, b in zip(results[0], other):
            assert np.array_equal(a, b)


# -- finiteness windows ----------------------------------------------------------


def test_conjugate_window_examples():
    # s = 2t/(t-2) lies in (3, 6) for t in (3, 6)
    lo, hi = B.conjugate_window(2.0, 3.0, 6.0)
    assert (float(lo), float(hi)) == (3.0, 6.0)
    lo, hi = B.conjugate_window(2.0, 1.0, math.inf)
    assert (float(lo), float(hi)) == (2.0, math.inf)
    lo, _ = B.conjugate_window(4.0, 1.0, 3.0)
    assert float(lo) == math.inf


@given(
    st.floats(1.0, 50.0),
    st.floats(1.0, 80.0),
    st.floats(1.01, 4.0),
    st.floats(0.01, 0.99),
)
def test_conjugate_window_maps_into_interval(p, a, ratio, frac):
    b = a * ratio
    lo, hi = (float(x) for x in B.conjugate_window(p, a, b))
    if not lo < hi:
        return
    t = lo + frac * (min(hi, lo + 1e3) - lo)
    s = t * p / (t - p)
    assert a * (1 - 1e-9) <= s <= b * (1 + 1e-9)


class _Strip:
    """Finite only on a strip that closes at p = 3, decreasing towards that corner."""

    @staticmethod
    def p_window(r):
        return np.asarray(r, dtype=float), np.full(np.shape(r), 3.0)

    @staticmethod
    def t_window(r, p):
        return 2.0 * np.asarray(p, dtype=float), np.full(np.shape(p), 6.0)

    def __call__(self, r, p, t):
        r, p, t = np.broadcast_arrays(r, p, t)
        return np.where((p < 3.0) & (t > 2 * p) & (t < 6.0), 10.0 - p, np.inf)


def test_windowed_search_finds_thin_corner():
    value = B._nested_minimize(_Strip(), np.array([1.5]))[0]
    assert float(value[0]) == pytest.approx(7.0, rel=1e-6)
