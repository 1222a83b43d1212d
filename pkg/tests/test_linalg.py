import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcavail import linalg
from lrcavail.gf import FieldSpec, gf2

F = gf2(3)


def brute_rank(F, A):
    """Dimension of the row space, found by enumerating all combinations."""
    rows, _ = A.shape
    space = set()
    for coeffs in itertools.product(range(F.order), repeat=rows):
        v = np.zeros(A.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, A):
            v = F.add(v, F.mul(c, row))
        space.add(tuple(v.tolist()))
    return round(np.log(len(space)) / np.log(F.order))


matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 7), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_matches_span_enumeration(rows):
    A = np.array(rows, dtype=np.int64)
    assert linalg.rank(F, A) == brute_rank(F, A)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.lists(st.integers(0, 7), min_size=4, max_size=4), min_size=3, max_size=3),
                min_size=1, max_size=6))
def test_batch_rank_matches_single(stack):
    A = np.array(stack, dtype=np.int64)
    got = linalg.batch_rank(F, A)
    assert got.tolist() == [linalg.rank(F, a) for a in A]


def test_batch_rank_odd_characteristic():
    G = FieldSpec(5, 2)
    rng = np.random.default_rng(1)
    A = rng.integers(0, G.order, (50, 3, 5))
    A[::3, 2] = G.add(A[::3, 0], G.mul(4, A[::3, 1]))
    assert linalg.batch_rank(G, A).tolist() == [linalg.rank(G, a) for a in A]


def test_inverse_and_solve():
    rng = np.random.default_rng(0)
    G = gf2(5)
    for _ in range(20):
        A = rng.integers(0, 32, (4, 4))
        if linalg.rank(G, A) < 4:
            with pytest.raises(linalg.SingularMatrixError):
                linalg.inverse(G, A)
            continue
        Ai = linalg.inverse(G, A)
        assert np.array_equal(linalg.matmul(G, A, Ai), np.eye(4, dtype=np.int64))
        x = rng.integers(0, 32, 4)
        b = linalg.matmul(G, x, A)
        assert np.array_equal(linalg.solve_left(G, A, b), x)


def test_left_kernel_and_in_span():
    A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    G = FieldSpec(7)
    ker = linalg.left_kernel(G, A)
    assert ker.shape == (1, 3)
    assert not linalg.matmul(G, ker, A).any()
    assert linalg.in_span(G, A[:, :2], A[:, 2])
    assert not linalg.in_span(G, np.array([[1], [0], [0]]), np.array([0, 1, 0]))


def test_solve_any():
    G = FieldSpec(3)
    A = np.array([[1, 1, 0], [0, 1, 1]])
    x = linalg.solve_any(G, A, np.array([2, 1]))
    assert np.array_equal(linalg.matmul(G, A, x[:, None])[:, 0], [2, 1])
    assert linalg.solve_any(G, np.array([[1, 1], [1, 1]]), np.array([0, 1])) is None
