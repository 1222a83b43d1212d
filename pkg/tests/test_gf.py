import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcavail.gf import (
    DEFAULT_POLYS,
    FieldMismatchError,
    FieldSpec,
    LinearizedPolynomial,
    base_degree,
    frobenius,
    gf2,
    is_irreducible,
    lin_independent_points,
    lin_poly_eval,
)


# independent oracle: plain coefficient lists, no tables, no shortcuts

def poly_divides(f, g, p):
    """Whether g divides f over GF(p) (ascending lists, g monic)."""
    f = list(f)
    while len(f) >= len(g):
        c = f[-1] % p
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        f.pop()
    return not any(x % p for x in f)


def trial_division_irreducible(poly, p):
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if poly_divides(poly, list(tail) + [1], p):
                return False
    return True


def ref_mul(F, a, b):
    p, m = F.p, F.m
    da = [(a // p**i) % p for i in range(m)]
    db = [(b // p**i) % p for i in range(m)]
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for i in range(m + 1):
                prod[d - m + i] = (prod[d - m + i] - c * F.poly[i]) % p
    return sum(prod[i] * p**i for i in range(m))


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (2, 6)])
def test_rabin_matches_trial_division(p, m):
    for tail in itertools.product(range(p), repeat=m):
        poly = list(tail) + [1]
        assert is_irreducible(poly, p) == trial_division_irreducible(poly, p), poly


def test_shipped_polynomials_are_irreducible():
    for (p, m), poly in DEFAULT_POLYS.items():
        assert len(poly) == m + 1 and poly[-1] == 1
        if m <= 8:
            assert trial_division_irreducible(poly, p)
        assert is_irreducible(poly, p)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (2, 4), (3, 2), (5, 1), (5, 2), (7, 2), (3, 3)])
def test_table_mul_matches_schoolbook(p, m):
    F = FieldSpec(p, m)
    q = F.order
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    got = F.mul(a, b)
    want = np.array([[ref_mul(F, x, y) for y in range(q)] for x in range(q)])
    assert np.array_equal(got, want)


def test_add_is_digitwise_mod_p():
    F = FieldSpec(3, 2)
    for a in range(9):
        for b in range(9):
            want = sum(((a // 3**i + b // 3**i) % 3) * 3**i for i in range(2))
            assert F.add(a, b) == want


@pytest.mark.parametrize("m", [7, 12, 17, 20])
def test_large_field_mul_matches_schoolbook(m):
    F = gf2(m)
    rng = np.random.default_rng(m)
    a = rng.integers(0, F.order, 200)
    b = rng.integers(0, F.order, 200)
    got = F.mul(a, b)
    assert all(int(g) == ref_mul(F, int(x), int(y)) for g, x, y in zip(got, a, b))


def test_inverse_every_element():
    for F in (gf2(4), FieldSpec(5, 2), FieldSpec(7)):
        x = np.arange(1, F.order)
        assert np.all(F.mul(x, F.inv(x)) == 1)
        with pytest.raises(ZeroDivisionError):
            F.inv(0)


def test_field_validation():
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x+1)^2
    with pytest.raises(ValueError):
        FieldSpec(2, 3, (1, 1, 1))  # wrong degree


def test_json_roundtrip():
    for F in (gf2(5), FieldSpec(3, 2), FieldSpec(2, 3, (1, 0, 1, 1))):
        assert FieldSpec.from_json(F.to_json()) == F


def test_field_element_ops_and_mismatch():
    F = gf2(3)
    a, b = F(3), F(6)
    assert int(a * b) == ref_mul(F, 3, 6)
    assert int((a / b) * b) == 3
    assert int(a + a) == 0
    assert int(a ** 7) == 1
    assert int(-a) == 3
    with pytest.raises(FieldMismatchError):
        _ = a + gf2(4)(3)
    with pytest.raises(ValueError):
        F(8)


fields = st.sampled_from([gf2(1), gf2(4), gf2(8), gf2(13), FieldSpec(3, 2), FieldSpec(5, 2), FieldSpec(7), FieldSpec(3, 3)])


@settings(max_examples=200, deadline=None)
@given(fields, st.data())
def test_field_axioms(F, data):
    el = st.integers(0, F.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.order - 1) == 1


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_frobenius_is_additive_and_fixes_base_field(data):
    F = gf2(6)
    a = data.draw(st.integers(0, F.order - 1))
    b = data.draw(st.integers(0, F.order - 1))
    for base in (2, 4, 8):
        fa, fb = frobenius(F(a), base), frobenius(F(b), base)
        assert int(frobenius(F(a) + F(b), base)) == int(fa + fb)
        assert int(frobenius(F(a), base, base_degree(F, base))) == a
    # elements of GF(4) inside GF(64) are fixed by x -> x^4
    sub = [x for x in range(F.order) if F.pow(x, 4) == x]
    assert len(sub) == 4
    assert all(int(frobenius(F(x), 4)) == x for x in sub)


def test_frobenius_rejects_non_subfield():
    with pytest.raises(ValueError):
        frobenius(gf2(6)(3), 32)


def _independent_bruteforce(F, pts, q):
    """No nontrivial GF(q) combination of pts vanishes (q prime here)."""
    for coeffs in itertools.product(range(q), repeat=len(pts)):
        if any(coeffs):
            acc = 0
            for c, y in zip(coeffs, pts):
                acc = F.add(acc, F.mul(c, y))
            if acc == 0:
                return False
    return True


@pytest.mark.parametrize("m,count", [(4, 4), (5, 3), (7, 7)])
def test_independent_points(m, count):
    F = gf2(m)
    pts = [int(y) for y in lin_independent_points(F, 2, count)]
    assert len(pts) == count
    assert _independent_bruteforce(F, pts, 2)
    with pytest.raises(ValueError):
        lin_independent_points(F, 2, m + 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=1, max_size=5), st.integers(0, 31), st.integers(0, 31), st.integers(0, 1))
def test_linearized_polynomial_is_gf2_linear(coeffs, y1, y2, c):
    F = gf2(5)
    f = LinearizedPolynomial(F, 2, coeffs)
    assert f(F.add(y1, y2)) == F.add(f(y1), f(y2))
    assert f(F.mul(c, y1)) == F.mul(c, f(y1))
    # direct evaluation: sum m_i y^(2^i)
    want = 0
    for i, m_i in enumerate(coeffs):
        want = F.add(want, F.mul(m_i, F.pow(y1, 2**i)))
    assert lin_poly_eval(f, y1) == want
    assert int(lin_poly_eval(f, F(y1))) == want
