from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cayleyparity import linalg
from cayleyparity.errors import Singular
from cayleyparity.linalg import IntPolynomial, RationalMatrix

J3_I = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def square(max_n=6, lo=-9, hi=9):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def sympy_charpoly(M):
    return [int(c) for c in sympy.Matrix(M).charpoly().all_coeffs()[::-1]]


def test_char_poly_examples():
    assert linalg.char_poly([[0, 1], [1, 0]]) == [-1, 0, 1]
    assert linalg.char_poly(J3_I) == [-2, -3, 0, 1]
    assert linalg.char_poly(np.eye(4, dtype=int)) == [1, -4, 6, -4, 1]


def test_char_poly_rational_input():
    M = [[Fraction(1, 2), 1], [0, Fraction(-1, 3)]]
    assert linalg.char_poly(M) == [Fraction(-1, 6), Fraction(-1, 6), 1]


def test_integer_roots_examples():
    assert linalg.integer_roots([-2, -3, 0, 1]) == ([-1, -1, 2], [1])
    roots, rest = linalg.integer_roots([1, 0, 1])
    assert roots == [] and rest == [1, 0, 1]
    roots, rest = linalg.integer_roots([-2, 0, 1])
    assert roots == [] and rest == [-2, 0, 1]


def test_integer_roots_zero_and_large():
    roots, rest = linalg.integer_roots(linalg.poly_from_roots([0, 0, 2047, -2048, 5]))
    assert roots == [-2048, 0, 0, 5, 2047] and rest == [1]


def test_nullspace_examples():
    assert len(linalg.nullspace([[0, 0], [0, 0]])) == 2
    (v,) = linalg.nullspace([[1, 1], [1, 1]])
    assert v[0] == -v[1] != 0
    shifted = [[x - 2 * (i == j) for j, x in enumerate(row)] for i, row in enumerate(J3_I)]
    (w,) = linalg.nullspace(shifted)
    assert w[0] == w[1] == w[2] != 0


def test_det_examples():
    assert linalg.det([[1, 2], [1, -1]]) == -3 and linalg.det_parity([[1, 2], [1, -1]]) == "odd"
    assert linalg.det([[1, 1], [1, -1]]) == -2 and linalg.det_parity([[1, 1], [1, -1]]) == "even"
    I5 = np.eye(5, dtype=int)
    assert linalg.det(I5) == 1 and linalg.det_parity(I5) == "odd"


def test_poly_divides_examples():
    p = [-2, -3, 0, 1]
    assert linalg.poly_divides([1, 1], p)
    assert not linalg.poly_divides([-3, 1], p)
    assert linalg.poly_divides(p, p)


def test_inverse_and_singular():
    inv = linalg.inverse([[2, 1], [1, 1]])
    assert inv == [[1, -1], [-1, 2]]
    with pytest.raises(Singular):
        linalg.inverse([[1, 2], [2, 4]])


def test_wrapper_types():
    R = RationalMatrix.from_rows([[1, Fraction(2, 4)], [0, 3]])
    assert R.rows == R.cols == 2 and R[0][1] == Fraction(1, 2)
    assert linalg.det(R) == 3
    with pytest.raises(ValueError):
        RationalMatrix.from_rows([[1, 2], [3]])
    p = IntPolynomial((1, 2, 0, 0))
    assert p.coefficients == (1, 2) and p.degree == 1 and p(3) == 7
    assert IntPolynomial((0, 0)).degree == -1


@given(square())
def test_char_poly_matches_sympy(M):
    assert linalg.char_poly(M) == sympy_charpoly(M)


@given(square(max_n=5, lo=-3, hi=3), st.integers(1, 6))
def test_char_poly_rational_matches_sympy(M, den):
    F = [[Fraction(x, den) for x in row] for row in M]
    expect = sympy.Matrix([[sympy.Rational(x, den) for x in row] for row in M]).charpoly().all_coeffs()[::-1]
    assert linalg.char_poly(F) == [Fraction(int(c.p), int(c.q)) for c in expect]


@given(st.lists(square(max_n=4, lo=-4, hi=4), min_size=1, max_size=6).filter(lambda ms: len({len(m) for m in ms}) == 1))
def test_char_poly_many_matches_single(ms):
    assert linalg.char_poly_many(ms) == [linalg.char_poly(m) for m in ms]


@given(square())
def test_det_and_parity_match_sympy(M):
    d = int(sympy.Matrix(M).det())
    assert linalg.det(M) == d
    assert linalg.det_parity(M) == ("odd" if d % 2 else "even")


@given(square(max_n=5, lo=-2, hi=2))
def test_integer_roots_are_exact_roots(M):
    cp = linalg.char_poly(M)
    roots, rest = linalg.integer_roots(cp)
    for r in roots:
        assert linalg.poly_eval(cp, r) == 0
    assert len(roots) + len(rest) - 1 == len(M)
    assert linalg.poly_mul(linalg.poly_from_roots(roots), rest) == cp


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=7), st.lists(st.integers(-5, 5), min_size=1, max_size=3))
def test_integer_roots_recover_planted_roots(roots, tail):
    rest = linalg.poly_trim(tail)
    if rest == [0]:
        return
    p = linalg.poly_mul(linalg.poly_from_roots(roots), rest)
    found, _ = linalg.integer_roots(p)
    extra = [r for r in found]
    for r in roots:
        extra.remove(r)
    for r in extra:
        assert linalg.poly_eval(rest, r) == 0


@given(
    st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=5)
    )
)
def test_nullspace_dimension_and_kernel(M):
    basis = linalg.nullspace(M)
    assert len(basis) == len(M[0]) - linalg.rank(M)
    for v in basis:
        assert all(x == 0 for x in linalg.matvec(M, v))
    assert len(basis) == len(M[0]) - sympy.Matrix(M).rank()
