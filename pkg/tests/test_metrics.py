"""Precision/recall/F1 arithmetic."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mebo import InvalidParamsError, f1


def test_perfect():
    r = f1(np.arange(5), np.arange(5), 10)
    assert r == (1.0, 1.0, 1.0)
    assert not r.empty_prediction


def test_symmetric_half_overlap():
    r = f1([0, 1], [1, 2], 10)
    assert r.precision == 0.5
    assert r.recall == 0.5
    assert r.f1 == 0.5


def test_two_thirds():
    # precision 0.5, recall 1.0
    r = f1([0, 1], [0], 10)
    assert r.precision == 0.5
    assert r.recall == 1.0
    assert r.f1 == pytest.approx(2.0 / 3.0)


def test_disjoint():
    r = f1([0, 1], [2, 3], 10)
    assert r == (0.0, 0.0, 0.0)


def test_empty_prediction_flag():
    r = f1([], [0, 1], 10)
    assert r.empty_prediction
    assert r.precision == 0.0
    assert r.f1 == 0.0
    assert r.recall == 0.0


def test_empty_truth():
    r = f1([0], [], 10)
    assert r.recall == 0.0
    assert r.f1 == 0.0
    assert not r.empty_prediction


def test_duplicates_collapse():
    assert f1([3, 3, 3], [3], 5) == (1.0, 1.0, 1.0)


def test_unpacking():
    p, r, v = f1([1], [1], 4)
    assert (p, r, v) == (1.0, 1.0, 1.0)


def test_range_validation():
    with pytest.raises(InvalidParamsError):
        f1([5], [0], 5)
    with pytest.raises(InvalidParamsError):
        f1([0], [-1], 5)


@given(st.sets(st.integers(0, 30)), st.sets(st.integers(0, 30)))
def test_bounds_property(pred, true):
    r = f1(sorted(pred), sorted(true), 31)
    assert 0.0 <= r.f1 <= 1.0
    assert r.f1 <= max(r.precision, r.recall) + 1e-12
    if len(pred) == len(true):
        swapped = f1(sorted(true), sorted(pred), 31)
        assert r.f1 == pytest.approx(swapped.f1)
        assert r.precision == pytest.approx(swapped.recall)
