import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gkcalc import intmat


def square(n, lo=-4, hi=4):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


matrices = st.integers(1, 4).flatmap(square)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_det_matches_sympy(rows):
    assert intmat.det(intmat.as_matrix(rows)) == sympy.Matrix(rows).det()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5), st.integers(0, 10_000))
def test_random_unimodular_inverse(n, seed):
    m = intmat.random_unimodular(n, random.Random(seed))
    assert intmat.det(m) in (1, -1)
    inv = intmat.inverse(m)
    assert intmat.equal(m.dot(inv), intmat.identity(n))
    if n:
        assert intmat.to_lists(inv) == sympy.Matrix(intmat.to_lists(m)).inv().tolist()


def test_inverse_rejects_non_unimodular():
    with pytest.raises(intmat.NotUnimodularError, match="not integral"):
        intmat.inverse(intmat.as_matrix([[2, 0], [0, 1]]))
    with pytest.raises(intmat.NotUnimodularError, match="singular"):
        intmat.inverse(intmat.as_matrix([[1, 1], [1, 1]]))
    with pytest.raises(intmat.NotUnimodularError):
        intmat.inverse(intmat.zeros(1, 2))


def test_big_entries_stay_exact():
    big = 10**30
    m = intmat.as_matrix([[1, big], [0, 1]])
    assert intmat.to_lists(intmat.inverse(m)) == [[1, -big], [0, 1]]
    assert intmat.det(m.dot(m)) == 1


def test_as_matrix_shapes_and_errors():
    assert intmat.as_matrix([], (0, 3)).shape == (0, 3)
    assert intmat.as_matrix([[], []], (2, 0)).shape == (2, 0)
    assert intmat.as_matrix(np.array([[1, 2]])).dtype == object
    with pytest.raises(ValueError, match="expected shape"):
        intmat.as_matrix([[1, 2]], (2, 1))
    with pytest.raises(TypeError):
        intmat.as_matrix([[1.5]])
    with pytest.raises(TypeError):
        intmat.as_matrix([[True]])


def test_det_edge_cases():
    assert intmat.det(intmat.identity(0)) == 1
    assert intmat.det(intmat.as_matrix([[0, 1], [1, 0]])) == -1
    with pytest.raises(ValueError):
        intmat.det(intmat.zeros(2, 3))
    assert intmat.is_unimodular(intmat.as_matrix([[2, 1], [1, 1]]))
    assert not intmat.is_unimodular(intmat.zeros(1, 2))


def test_format_matrix():
    assert intmat.format_matrix(intmat.identity(2)) == "[[1, 0],\n [0, 1]]"
    assert intmat.format_matrix(intmat.zeros(0, 2)) == "[] (0x2)"
