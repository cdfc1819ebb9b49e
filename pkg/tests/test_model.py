import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fleetmin.errors import InvalidInputError
from fleetmin.model import (Euclidean, Instance, Line1D, Manhattan, Matrix, Trip, make_instance,
                            travel_time, validate_instance)


def test_travel_time_examples():
    assert travel_time(Line1D(), 5, 12) == 7
    assert travel_time(Line1D(), (5.0, 0.0), (12.0, 0.0)) == 7
    assert travel_time(Euclidean(1.0), (0, 0), (3, 4)) == 5
    assert travel_time(Matrix([[0, 2], [2, 0]]), 0, 1) == 2


def test_speed_scales_time():
    assert travel_time(Euclidean(2.0), (0, 0), (3, 4)) == 2.5
    assert travel_time(Manhattan(0.5), (0, 0), (3, 4)) == 14


def test_matrix_out_of_bounds():
    with pytest.raises(InvalidInputError):
        travel_time(Matrix([[0, 2], [2, 0]]), 0, 2)
    with pytest.raises(InvalidInputError):
        travel_time(Matrix([[0, 2], [2, 0]]), -1, 0)


def test_matrix_is_immutable():
    m = Matrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        m.table[0, 1] = 5


coords = st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))


@pytest.mark.parametrize("model", [Euclidean(1.0), Manhattan(1.0), Euclidean(3.5)])
@given(a=coords, b=coords)
def test_planar_models_symmetric_and_zero_on_diagonal(model, a, b):
    assert model.time(a, b) == model.time(b, a)
    assert model.time(a, a) == 0
    assert model.time(a, b) >= 0


@given(a=st.floats(-1e6, 1e6), b=st.floats(-1e6, 1e6))
def test_line_symmetric(a, b):
    assert Line1D().time(a, b) == Line1D().time(b, a)
    assert Line1D().time(a, a) == 0


@pytest.mark.parametrize("model", [Line1D(), Euclidean(1.0), Manhattan(1.0), Euclidean(0.7)])
def test_triangle_inequality_seeded(model):
    rng = random.Random(12345)
    for _ in range(1000):
        a, b, c = [(rng.uniform(-10, 10), 0.0 if isinstance(model, Line1D) else rng.uniform(-10, 10))
                   for _ in range(3)]
        assert model.time(a, c) <= model.time(a, b) + model.time(b, c) + 1e-9


def test_fixture_a_valid_strict(fixture_a):
    # ride times 10, 8, 5 against durations 10, 8, 5
    assert validate_instance(fixture_a, strict_metric=True) == []


def test_dropoff_before_pickup_reported():
    inst = make_instance([(0, 5, 0, 3)])
    rep = validate_instance(inst)
    assert rep.codes() == ["dropoff before pickup"]


def test_duplicate_id_reported():
    inst = Instance((Trip(7, 0, 0, 1, 1), Trip(7, 2, 2, 3, 3)))
    assert validate_instance(inst).codes() == ["duplicate id"]


def test_all_problems_reported_together():
    inst = Instance(
        (Trip(1, 0, 5, 0, 3), Trip(1, (0, 1), 0, 0, math.inf), Trip(-2, 0, 0, 0, 0)),
        Line1D(), delta=-1.0)
    codes = validate_instance(inst).codes()
    assert set(codes) == {"bad delta", "dropoff before pickup", "duplicate id", "line y", "non-finite", "bad id"}


def test_empty_instance():
    assert validate_instance(Instance(())).codes() == ["empty"]


def test_matrix_validation():
    bad_diag = Instance((Trip(1, 0, 0, 1, 5),), Matrix([[1, 2], [2, 0]]))
    assert "matrix diagonal" in validate_instance(bad_diag).codes()
    bad_shape = Instance((Trip(1, 0, 0, 1, 5),), Matrix([[0, 2, 1], [2, 0, 1]]))
    assert "matrix shape" in validate_instance(bad_shape).codes()
    bad_site = Instance((Trip(1, 0, 0, 4, 5),), Matrix([[0, 2], [2, 0]]))
    assert validate_instance(bad_site).codes() == ["bad site"]
    negative = Instance((Trip(1, 0, 0, 1, 5),), Matrix([[0, -2], [2, 0]]))
    assert "matrix value" in validate_instance(negative).codes()


def test_asymmetric_matrix_allowed():
    inst = Instance((Trip(1, 0, 0, 1, 5), Trip(2, 1, 9, 0, 12)), Matrix([[0, 2], [3, 0]]))
    assert validate_instance(inst, strict_metric=True) == []


def test_bad_speed():
    inst = Instance((Trip(1, (0, 0), 0, (1, 0), 5),), Euclidean(0.0))
    assert validate_instance(inst).codes() == ["bad speed"]


def test_strict_metric_flag():
    inst = make_instance([(0, 0, 10, 4)])  # 10 units of road in 4 time units
    assert validate_instance(inst) == []
    assert validate_instance(inst, strict_metric=True).codes() == ["metric"]


def test_zero_duration_trip_accepted():
    assert validate_instance(make_instance([(3, 4, 3, 4)]), strict_metric=True) == []


def test_validate_idempotent_and_pure(fixture_a):
    bad = make_instance([(0, 5, 0, 3), (1, 1, 1, 1)])
    before = bad.trips
    assert validate_instance(bad) == validate_instance(bad)
    assert bad.trips == before


def test_instance_arrays(fixture_a):
    arr = fixture_a.arrays
    np.testing.assert_array_equal(arr.pt, [0, 13, 2])
    np.testing.assert_array_equal(arr.dx, [10, 20, 5])
    np.testing.assert_array_equal(arr.py, [0, 0, 0])


def test_trip_lookup_one_based(fixture_a):
    assert fixture_a.trip(2).pickup_time == 13
    with pytest.raises(InvalidInputError):
        fixture_a.trip(0)
