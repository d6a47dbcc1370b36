import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewmon.exactlin import (
    QQ, FieldMismatch, Mat, ShapeError, apply_factor, cokernel_projection, factor_through_epi,
    factor_through_mono, inverse, is_invertible, kernel_basis, kron, permute_factors, rank, rref, solve,
)


def M(rows, p):
    return Mat.from_rows(rows, p)


def small_matrices(p, max_dim=3):
    dims = st.integers(1, max_dim)
    return st.tuples(dims, dims).flatmap(
        lambda rc: st.lists(
            st.lists(st.integers(0, p - 1), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]
        )
    )


def brute_kernel_size(rows, p):
    n = len(rows[0])
    return sum(
        all(sum(r[j] * v[j] for j in range(n)) % p == 0 for r in rows)
        for v in itertools.product(range(p), repeat=n)
    )


# worked examples


def test_rref_examples():
    e, piv = rref(Mat.identity(2, 3))
    assert e == Mat.identity(2, 3) and piv == [0, 1]
    e, piv = rref(M([[1, 1], [1, 1]], 2))
    assert e == M([[1, 1], [0, 0]], 2) and piv == [0]
    e, piv = rref(Mat.zeros(3, 2, 5))
    assert e.is_zero() and piv == []


def test_kernel_examples():
    assert kernel_basis(Mat.identity(3, 3)).cols == 0
    k = kernel_basis(M([[1, 1], [1, 1]], 2))
    assert k == M([[1], [1]], 2)
    assert kernel_basis(Mat.zeros(2, 3, 3)) == Mat.identity(3, 3)


def test_cokernel_examples():
    proj, _ = cokernel_projection(Mat.identity(3, 3))
    assert proj.rows == 0
    proj, sect = cokernel_projection(Mat.zeros(2, 2, 3))
    assert proj == Mat.identity(2, 3) and sect == Mat.identity(2, 3)
    proj, sect = cokernel_projection(M([[1], [1]], 3))
    assert proj.rows == 1
    assert (proj @ M([[1], [1]], 3)).is_zero()


def test_solve_examples():
    b = M([[1], [2]], 3)
    assert solve(Mat.identity(2, 3), b) == b
    assert solve(M([[1, 1], [1, 1]], 2), M([[1], [0]], 2)) is None
    assert solve(M([[2]], 3), M([[1]], 3)) == M([[2]], 3)


def test_kron_examples():
    assert kron(Mat.identity(2, 5), Mat.identity(3, 5)) == Mat.identity(6, 5)
    x = M([[1, 2], [0, 1]], 5)
    assert kron(M([[1]], 5), x) == x
    swap = kron(M([[0, 1], [1, 0]], 2), Mat.identity(2, 2))
    assert swap == M([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], 2)


def test_reduction_mod_p():
    assert M([[5, -1]], 3) == M([[2, 2]], 3)
    with pytest.raises(ValueError):
        Mat.identity(2, 4)


def test_field_and_shape_errors():
    with pytest.raises(FieldMismatch):
        Mat.identity(2, 3) @ Mat.identity(2, 5)
    with pytest.raises(ShapeError):
        Mat.identity(2, 3) @ Mat.identity(3, 3)
    with pytest.raises(ZeroDivisionError):
        inverse(M([[1, 1], [1, 1]], 3))


def test_tolist_is_row_major_ints():
    assert M([[1, 2], [3, 4]], 5).tolist() == [[1, 2], [3, 4]]
    assert M([[1, Fraction(1, 2)]], QQ).tolist() == [[1, "1/2"]]


# brute-force oracles over tiny fields


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_kernel_matches_enumeration(p, data):
    rows = data.draw(small_matrices(p))
    m = M(rows, p)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert p ** k.cols == brute_kernel_size(rows, p)
    assert rank(m) + k.cols == m.cols


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_solve_matches_enumeration(p, data):
    rows = data.draw(small_matrices(p))
    m = M(rows, p)
    rhs = data.draw(st.lists(st.integers(0, p - 1), min_size=m.rows, max_size=m.rows))
    b = Mat.column(rhs, p)
    x = solve(m, b)
    solvable = any(
        m @ Mat.column(list(v), p) == b for v in itertools.product(range(p), repeat=m.cols)
    )
    assert (x is not None) == solvable
    if x is not None:
        assert m @ x == b


@settings(max_examples=60, deadline=None)
@given(rows=small_matrices(5))
def test_cokernel_properties(rows):
    m = M(rows, 5)
    proj, sect = cokernel_projection(m)
    assert (proj @ m).is_zero()
    assert proj @ sect == Mat.identity(proj.rows, 5)
    assert proj.rows == m.rows - rank(m)


@settings(max_examples=60, deadline=None)
@given(rows=small_matrices(7), p=st.sampled_from([7, QQ]))
def test_inverse_roundtrip(rows, p):
    m = M(rows, p)
    if is_invertible(m):
        assert m @ inverse(m) == Mat.identity(m.rows, p)
        assert inverse(m) @ m == Mat.identity(m.rows, p)


def test_factorizations():
    epi = M([[1, 0, 1], [0, 1, 1]], 3)
    x = M([[2, 1]], 3)
    assert factor_through_epi(x @ epi, epi) == x
    assert factor_through_epi(M([[1, 0, 0]], 3), epi) is None
    mono = epi.T
    assert factor_through_mono(mono, mono @ x.T) == x.T


def test_apply_factor_matches_kron():
    rng = np.random.default_rng(1)
    dims = [2, 3, 2]
    x = Mat(rng.integers(0, 5, size=(12, 4)), 5)
    for k, d in enumerate(dims):
        a = Mat(rng.integers(0, 5, size=(d + 1, d)), 5)
        mats = [Mat.identity(e, 5) for e in dims]
        mats[k] = a
        op = kron(kron(mats[0], mats[1]), mats[2])
        assert apply_factor(x, dims, k, a) == op @ x


def test_permute_factors_by_index():
    dims = [2, 3, 2]
    x = Mat.identity(12, 3)
    y = permute_factors(x, dims, [2, 0, 1])
    for i, j, k in itertools.product(range(2), range(3), range(2)):
        src = (i * 3 + j) * 2 + k
        dst = (k * 2 + i) * 3 + j
        assert y.entry(dst, src) == 1


@settings(max_examples=40, deadline=None)
@given(
    a=st.lists(st.lists(st.fractions(max_denominator=6), min_size=3, max_size=3), min_size=2, max_size=2),
    b=st.lists(st.lists(st.fractions(max_denominator=6), min_size=2, max_size=2), min_size=3, max_size=3),
)
def test_rational_product_matches_fraction_arithmetic(a, b):
    got = Mat.from_rows(a, QQ) @ Mat.from_rows(b, QQ)
    want = [[sum((a[i][k] * b[k][j] for k in range(3)), Fraction(0)) for j in range(2)] for i in range(2)]
    assert got == Mat.from_rows(want, QQ)


def test_rational_product_large_entries_fall_back_to_ints():
    big = 3**40
    a = Mat.from_rows([[big, 1]], QQ)
    b = Mat.from_rows([[big], [Fraction(1, 7)]], QQ)
    assert (a @ b).entry(0, 0) == Fraction(big * big) + Fraction(1, 7)


def test_large_prime_exact():
    p = 2**31 - 1
    a = Mat.from_rows([[p - 1, p - 2]], p)
    b = Mat.from_rows([[p - 1], [p - 1]], p)
    assert (a @ b).entry(0, 0) == ((p - 1) ** 2 + (p - 2) * (p - 1)) % p


def test_long_inner_dimension_stays_exact():
    # partial sums beyond 2^52 need the split inner product
    p = 1048573
    n = 5000
    a = Mat(np.full((1, n), p - 1), p)
    b = Mat(np.full((n, 1), p - 1), p)
    assert (a @ b).entry(0, 0) == (n * (p - 1) ** 2) % p
