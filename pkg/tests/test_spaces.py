import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glspace.spaces import (
    GridFunction,
    InstanceError,
    Kernel2,
    MeasureSpace,
    total_mass,
    validate_instance,
)


@pytest.mark.parametrize(
    "weights, expected",
    [((0.5, 0.5), 1.0), ((0, 2, 3), 5.0), ((1,), 1.0)],
)
def test_total_mass_examples(weights, expected):
    assert total_mass(MeasureSpace(weights)) == expected


def test_validate_consistent_instance_is_clean():
    spaces = [{"label": "X", "weights": [0.5, 0.5]}]
    functions = [{"label": "g", "space": "X", "values": [1, 3]}]
    kernels = [{"label": "h", "space_x": "X", "space_y": "X", "entries": [[1, 2], [3, 4]]}]
    assert validate_instance(spaces, functions, kernels) == []


def test_validate_reports_shape_mismatch():
    out = validate_instance([{"label": "X", "weights": [0.5, 0.5]}], [{"label": "g", "space": "X", "values": [1, 2, 3]}])
    assert len(out) == 1 and "3 values" in out[0]


def test_validate_reports_negative_weight():
    out = validate_instance([{"label": "X", "weights": [-1, 2]}])
    assert len(out) == 1 and "negative" in out[0]


def test_validate_never_raises_on_garbage():
    out = validate_instance(
        [{"label": "X", "weights": "abc"}, {"label": "Y", "weights": [0, 0]}],
        [{"label": "f", "space": "nope", "values": [1]}, {"label": "g", "space": "Y", "values": [np.nan, 1]}],
        [{"label": "k", "space_x": "Y", "space_y": "Y", "entries": [[1, 2]]}],
    )
    assert len(out) == 5


def test_constructors_enforce_invariants():
    with pytest.raises(InstanceError):
        MeasureSpace([0.0, 0.0])
    X = MeasureSpace([1.0, 1.0])
    with pytest.raises(InstanceError):
        GridFunction(X, [1.0])
    with pytest.raises(InstanceError):
        GridFunction(X, [1.0, np.inf])
    with pytest.raises(InstanceError):
        Kernel2(X, X, [[1.0, 2.0]])


def test_objects_are_read_only():
    X = MeasureSpace([1.0, 2.0])
    with pytest.raises(ValueError):
        X.weights[0] = 5.0
    g = GridFunction(X, [1.0, 2.0])
    with pytest.raises(ValueError):
        g.values[0] = 5.0


def test_zero_weight_atoms_allowed():
    X = MeasureSpace([0.0, 1.0])
    assert X.support.tolist() == [False, True]


@given(st.lists(st.floats(0, 100), min_size=1, max_size=10), st.lists(st.floats(0, 100), min_size=1, max_size=10))
def test_total_mass_additive(a, b):
    a[0] += 1.0
    b[0] += 1.0
    both = total_mass(MeasureSpace(a + b))
    assert both == pytest.approx(total_mass(MeasureSpace(a)) + total_mass(MeasureSpace(b)), rel=1e-14)


@given(
    st.lists(st.floats(-1, 5, allow_nan=False) | st.just(float("inf")), min_size=1, max_size=5),
    st.lists(st.floats(-10, 10), min_size=0, max_size=6),
)
def test_validate_empty_iff_construction_succeeds(weights, values):
    spaces = [{"label": "X", "weights": weights}]
    functions = [{"label": "f", "space": "X", "values": values}] if values else []
    clean = validate_instance(spaces, functions) == []
    try:
        X = MeasureSpace(weights, "X")
        if values:
            GridFunction(X, values, "f")
        built = True
    except InstanceError:
        built = False
    assert clean == built
