import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from glspace.generating import constant, constant2, natural2_from_kernel, natural_from_function, power
from glspace.norms import (
    PGrid,
    UnboundedNormError,
    gls_norm,
    gls_norm_2d,
    gls_sup,
    lp_norm,
    mixed_norm,
    power_apply,
    product_kernel_norm,
    tail_function,
)
from glspace.spaces import GridFunction, Kernel2, MeasureSpace

from helpers import function_st, log_uniform, mp_mixed, mp_norm, naive_norm, rand_function, rand_kernel, rand_space

INF = math.inf
X2 = MeasureSpace([0.5, 0.5], "X")


# -- lp_norm ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "weights, values, p, expected",
    [
        ((0.5, 0.5), (2, 2), 3.0, 2.0),
        ((0.5, 0.5), (0, 2), 2.0, math.sqrt(2.0)),
        ((0.5, 0.5), (1, 3), INF, 3.0),
    ],
)
def test_lp_norm_examples(weights, values, p, expected):
    assert lp_norm(GridFunction(MeasureSpace(weights), values), p) == pytest.approx(expected, rel=1e-15)


def test_lp_norm_rejects_small_exponent():
    with pytest.raises(ValueError):
        lp_norm(GridFunction(X2, [1, 2]), 0.5)


def test_lp_norm_broadcasts_over_exponents():
    f = GridFunction(X2, [1.0, 3.0])
    ps = np.array([1.0, 2.0, INF])
    assert np.allclose(lp_norm(f, ps), [2.0, math.sqrt(5.0), 3.0], rtol=1e-15)


def test_lp_norm_ignores_null_atoms_for_sup():
    f = GridFunction(MeasureSpace([0.0, 1.0]), [50.0, 2.0])
    assert lp_norm(f, INF) == 2.0
    assert lp_norm(f, 3.0) == pytest.approx(2.0, rel=1e-15)


def test_lp_norm_extreme_values_against_high_precision():
    rng = np.random.default_rng(3)
    for _ in range(50):
        X = rand_space(rng, 6)
        f = GridFunction(X, log_uniform(rng, 1e-150, 1e150, 6))
        p = float(rng.uniform(1, 512))
        assert lp_norm(f, p) == pytest.approx(mp_norm(f.values, X.weights, p), rel=1e-12)


@given(function_st(), st.floats(1.0, 16.0))
def test_lp_norm_matches_direct_sum(f, p):
    assert lp_norm(f, p) == pytest.approx(naive_norm(f.values, f.space.weights, p), rel=1e-12)


@given(function_st(), st.floats(1.0, 64.0), st.floats(-100.0, 100.0).filter(lambda c: abs(c) > 1e-3))
def test_lp_norm_homogeneous(f, p, c):
    scaled = f.with_values(c * f.values)
    assert lp_norm(scaled, p) == pytest.approx(abs(c) * lp_norm(f, p), rel=1e-12)


@given(function_st(probability=True), st.floats(1.0, 64.0), st.floats(1.0, 4.0))
def test_lp_norm_nondecreasing_on_probability_spaces(f, p, factor):
    assert lp_norm(f, p * factor) >= lp_norm(f, p) * (1 - 1e-12)


# -- power_apply -----------------------------------------------------------------


def test_power_apply_example():
    g = GridFunction(X2, [1.0, 3.0])
    g2 = power_apply(g, 2.0)
    assert g2.values.tolist() == [1.0, 9.0]
    assert lp_norm(g2, 1.0) == pytest.approx(5.0, rel=1e-15)
    assert lp_norm(g, 2.0) ** 2 == pytest.approx(5.0, rel=1e-15)


def test_power_apply_uses_absolute_value():
    assert power_apply(GridFunction(X2, [-2.0, 3.0]), 1.0).values.tolist() == [2.0, 3.0]


def test_power_apply_rejects_nonpositive_beta():
    with pytest.raises(ValueError):
        power_apply(GridFunction(X2, [1.0, 2.0]), 0.0)


@given(function_st(), st.floats(1.0, 64.0), st.floats(0.5, 8.0))
def test_power_identity(f, p, beta):
    assume(beta * p >= 1.0)
    lhs = lp_norm(power_apply(f, beta), p)
    rhs = lp_norm(f, beta * p) ** beta
    assert lhs == pytest.approx(rhs, rel=1e-10)


# -- Hölder ----------------------------------------------------------------------


@given(st.integers(0, 10**6), st.floats(1.0, 50.0), st.floats(1.0001, 50.0))
def test_holder_inequality(seed, r, ratio):
    rng = np.random.default_rng(seed)
    X = rand_space(rng, 5)
    phi, g = rand_function(rng, X, 1e-2, 1e2), rand_function(rng, X, 1e-2, 1e2)
    p = r * ratio
    q = p * r / (p - r)
    lhs = lp_norm(phi.with_values(phi.values * g.values), r)
    rhs = lp_norm(phi, q) * lp_norm(g, p)
    assert lhs <= rhs * (1 + 1e-12)


# -- mixed norms -----------------------------------------------------------------


def test_mixed_norm_example():
    h = Kernel2(X2, X2, [[1.0, 3.0], [2.0, 2.0]])
    assert mixed_norm(h, 1.0, INF) == pytest.approx(2.0, rel=1e-15)


def test_mixed_norm_ones_on_probability_spaces():
    Y = MeasureSpace([0.25, 0.75])
    h = Kernel2(X2, Y, np.ones((2, 2)))
    assert mixed_norm(h, 3.0, 7.0) == pytest.approx(1.0, rel=1e-15)


def test_mixed_norm_against_high_precision():
    rng = np.random.default_rng(11)
    for _ in range(30):
        X, Y = rand_space(rng, 3, zero_atoms=True), rand_space(rng, 4, zero_atoms=True)
        h = rand_kernel(rng, X, Y, 1e-3, 1e3)
        q, r = float(rng.uniform(1, 200)), float(rng.uniform(1, 200))
        expected = mp_mixed(h.entries, X.weights, Y.weights, q, r)
        assert mixed_norm(h, q, r) == pytest.approx(expected, rel=1e-12)


@given(st.integers(0, 10**6), st.floats(1.0, 64.0))
def test_mixed_norm_equal_exponents_is_product_norm(seed, q):
    rng = np.random.default_rng(seed)
    X, Y = rand_space(rng, 3), rand_space(rng, 4)
    h = rand_kernel(rng, X, Y)
    assert mixed_norm(h, q, q) == pytest.approx(product_kernel_norm(h, q), rel=1e-12)


def test_mixed_norm_broadcasts():
    h = Kernel2(X2, X2, [[1.0, 3.0], [2.0, 2.0]])
    q = np.array([[1.0], [2.0]])
    r = np.array([1.0, 3.0, INF])
    out = mixed_norm(h, q, r)
    assert out.shape == (2, 3)
    assert out[1, 2] == pytest.approx(mixed_norm(h, 2.0, INF))


# -- tail ------------------------------------------------------------------------


@pytest.mark.parametrize("t, expected", [(2.0, 0.5), (0.5, 1.0), (4.0, 0.0)])
def test_tail_function_examples(t, expected):
    assert tail_function(GridFunction(X2, [1.0, 3.0]), t) == expected


@given(function_st(), st.floats(1e-3, 1e3), st.floats(1.0, 10.0))
def test_tail_function_nonincreasing(f, t, factor):
    assert tail_function(f, t * factor) <= tail_function(f, t)


@given(function_st(), st.floats(1.0, 20.0), st.floats(1e-2, 1e2))
def test_chebyshev_tail_bound(f, p, t):
    assert tail_function(f, t) <= lp_norm(f, p) ** p / t**p * (1 + 1e-12)


# -- Grand Lebesgue norms --------------------------------------------------------


def test_gls_natural_is_one():
    g = GridFunction(X2, [1.0, 3.0])
    assert gls_norm(g, natural_from_function(g)) == pytest.approx(1.0, abs=1e-12)


def test_gls_constant_function_against_constant_psi():
    g = GridFunction(MeasureSpace([0.3, 0.7]), [2.5, 2.5])
    assert gls_norm(g, constant(1.0)) == pytest.approx(2.5, rel=1e-12)


def test_gls_reaches_the_essential_sup_limit():
    g = GridFunction(X2, [0.0, 2.0])
    res = gls_sup(g, constant(1.0))
    assert res.value == 2.0 and res.arg == INF


def test_gls_bounded_support():
    g = GridFunction(MeasureSpace([1.0, 1.0]), [1.0, 3.0])
    # ||g||_p is largest at small p on this non-probability space; the support starts at 2
    psi = constant(1.0, (2, 10))
    assert gls_norm(g, psi) == pytest.approx(lp_norm(g, 2.0), rel=1e-9)


def test_gls_strict_unbounded():
    g = GridFunction(X2, [1.0, 3.0])
    psi = power(-1.0)  # ratio ||g||_p * p grows without limit
    assert gls_sup(g, psi).unbounded
    with pytest.raises(UnboundedNormError):
        gls_norm(g, psi, strict=True)


def test_gls_zero_function():
    assert gls_norm(GridFunction(X2, [0.0, 0.0]), constant(1.0)) == 0.0


def test_gls_sup_is_attained_value():
    rng = np.random.default_rng(5)
    for _ in range(20):
        X = rand_space(rng, 5, probability=True)
        f = rand_function(rng, X)
        psi = power(float(rng.uniform(0.05, 0.5)))
        res = gls_sup(f, psi)
        if math.isfinite(res.arg):
            assert res.value == pytest.approx(lp_norm(f, res.arg) / psi(res.arg), rel=1e-12)
        # the supremum dominates every sampled ratio
        ps = np.exp(np.linspace(0.0, math.log(500.0), 400))[1:]
        assert res.value >= np.max(lp_norm(f, ps) / psi(ps)) * (1 - 1e-12)


@given(st.integers(0, 10**6))
def test_gls_natural_unit_norm_property(seed):
    rng = np.random.default_rng(seed)
    X = rand_space(rng, int(rng.integers(1, 7)), zero_atoms=True)
    f = rand_function(rng, X, 1e-3, 1e3, signed=True)
    assert gls_norm(f, natural_from_function(f), PGrid(n=60)) == pytest.approx(1.0, abs=1e-9)


@given(st.integers(0, 10**6), st.floats(0.01, 100.0))
def test_gls_norm_homogeneous(seed, c):
    rng = np.random.default_rng(seed)
    X = rand_space(rng, 4, probability=True)
    f = rand_function(rng, X)
    psi = power(0.5)
    assert gls_norm(f.with_values(c * f.values), psi) == pytest.approx(c * gls_norm(f, psi), rel=1e-9)


def test_gls_2d_examples():
    Y = MeasureSpace([0.25, 0.75])
    ones = Kernel2(X2, Y, np.ones((2, 2)), "h")
    assert gls_norm_2d(ones, constant2(1.0)) == pytest.approx(1.0, rel=1e-12)
    h = Kernel2(X2, Y, [[1.0, 3.0], [2.0, 0.5]], "h")
    tau = natural2_from_kernel(h)
    assert gls_norm_2d(h, tau) == pytest.approx(1.0, abs=1e-12)
    five = Kernel2(X2, Y, 5.0 * h.entries)
    assert gls_norm_2d(five, tau) == pytest.approx(5.0, rel=1e-12)
