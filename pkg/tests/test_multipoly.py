from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import QQ

from src.multipoly import (
    MultipolyError,
    PolyMatrix,
    ShapeError,
    constant_term,
    divides,
    evaluate,
    identity,
    koszul_bases,
    koszul_complex,
    lcm,
    mat_mul,
    monomial_of_divisor,
    multiply,
    poly_ring,
    rank_exact,
    render,
    render_monomial,
    rescale,
    scalar_int,
    substitute,
    term,
)

R = poly_ring(3)
exponents = st.lists(st.integers(0, 4), min_size=3, max_size=3).map(tuple)


def x(i: int, e: int = 1):
    return term(R, 1, tuple(e if j == i else 0 for j in range(4)))


T = x(3)


@given(exponents, exponents)
def test_lcm_is_the_least_common_multiple(a, b):
    m = lcm(a, b)
    assert divides(a, m) and divides(b, m)
    assert all(v in (p, q) for v, p, q in zip(m, a, b))
    assert lcm(a, b) == lcm(b, a)


@given(exponents, exponents)
def test_divides_matches_polynomial_division(a, b):
    pa = term(R, 1, a + (0,))
    pb = term(R, 1, b + (0,))
    _, remainder = pb.div([pa])
    assert divides(a, b) == (not remainder)


# ── Ring properties ──────────────────────────────────────────────────────────

monomials = st.lists(st.integers(0, 3), min_size=4, max_size=4).map(tuple)
polynomials = st.dictionaries(monomials, st.integers(-5, 5), max_size=4).map(
    lambda coeffs: sum((term(R, c, m) for m, c in coeffs.items()), R.zero)
)
assignments = st.dictionaries(st.integers(0, 3), st.integers(-3, 3), max_size=4)


@given(polynomials, polynomials, polynomials)
def test_ring_axioms(p, q, s):
    assert multiply(p, q) == multiply(q, p)
    assert multiply(multiply(p, q), s) == multiply(p, multiply(q, s))
    assert multiply(p, q + s) == multiply(p, q) + multiply(p, s)
    assert multiply(p, R.one) == p
    assert p + (-p) == R.zero


@given(polynomials, polynomials, assignments)
def test_substitute_commutes_with_multiply(p, q, assignment):
    assert substitute(multiply(p, q), assignment) == multiply(substitute(p, assignment), substitute(q, assignment))


@st.composite
def integer_matrices(draw):
    rows = draw(st.integers(1, 4))
    cols = draw(st.integers(1, 4))
    row = st.lists(st.integers(-3, 3), min_size=cols, max_size=cols)
    return draw(st.lists(row, min_size=rows, max_size=rows))


@given(integer_matrices())
def test_rank_equals_rank_of_the_transpose(m):
    transposed = [list(col) for col in zip(*m)]
    assert rank_exact(m) == rank_exact(transposed)
    assert rank_exact(m) == np.linalg.matrix_rank(np.array(m, dtype=float))


def test_ring_is_cached_and_has_t_last():
    assert poly_ring(3) is R
    assert [str(g) for g in R.gens] == ["x_1", "x_2", "x_3", "t"]


def test_monomial_of_divisor():
    assert monomial_of_divisor((2, 0, 1), 3) == (2, 0, 1, 3)
    with pytest.raises(MultipolyError):
        monomial_of_divisor((1, -1, 0))


def test_term_checks_the_monomial_length():
    with pytest.raises(ShapeError):
        term(R, 1, (1, 0))
    assert term(R, 0, (1, 0, 0, 0)) == R.zero


def test_term_accepts_fractions_and_numpy_integers():
    assert term(R, Fraction(1, 2), (0, 0, 0, 0)) == R(QQ(1, 2))
    assert term(R, np.int64(3), (1, 0, 0, 0)) == 3 * x(0)


def test_substitute_keeps_other_generators():
    p = x(0, 2) * x(1) - x(2) * T
    assert substitute(p, {3: 0}) == x(0, 2) * x(1)
    assert substitute(p, {3: 1}) == x(0, 2) * x(1) - x(2)
    assert substitute(p, {0: 1, 1: 0, 2: 1, 3: 1}) == R(-1)


def test_rescale_scales_each_variable():
    p = x(0) * x(1, 2) + 5
    assert rescale(p, [2, 3]) == 18 * x(0) * x(1, 2) + 5


def test_evaluate_and_constant_term():
    p = multiply(x(0) + 1, x(1) - 2)
    assert evaluate(p, (3, 5, 7, 11)) == 12
    assert constant_term(p) == -2
    assert scalar_int(constant_term(p)) == -2


def test_render():
    assert render(x(0, 3) - x(1) * x(2) * T) == "x_1^3 - x_2*x_3*t"
    assert render_monomial(3, (1, 0, 2, 1)) == "x_1*x_3^2*t"


class TestPolyMatrix:
    def test_zero_entries_are_dropped(self):
        m = PolyMatrix(R, 2, 2, {(0, 0): R.zero, (1, 1): x(0)})
        assert m.entries == {(1, 1): x(0)}
        assert m[0, 0] == R.zero

    def test_out_of_range_entry(self):
        with pytest.raises(ShapeError):
            PolyMatrix(R, 1, 1, {(1, 0): x(0)})

    def test_mul_checks_shapes(self):
        a = PolyMatrix(R, 1, 2, {(0, 0): x(0)})
        with pytest.raises(ShapeError):
            mat_mul(a, a)

    def test_mul_by_identity(self):
        a = PolyMatrix(R, 2, 3, {(0, 0): x(0), (1, 2): x(1) - T})
        assert mat_mul(identity(R, 2), a) == a
        assert mat_mul(a, identity(R, 3)) == a

    def test_transpose_and_column(self):
        a = PolyMatrix(R, 2, 3, {(0, 2): x(0), (1, 2): x(1)})
        assert a.transpose().shape == (3, 2)
        assert a.column(2) == {0: x(0), 1: x(1)}
        assert a.transpose()[2, 1] == x(1)

    def test_to_rows(self):
        a = PolyMatrix(R, 1, 2, {(0, 1): x(0) * T})
        assert a.to_rows((2, 1, 1, 3)) == [[0, 6]]


def test_rank_exact():
    assert rank_exact([[1, 2], [2, 4]]) == 1
    assert rank_exact([[Fraction(1, 3), 1], [1, 3]]) == 1
    assert rank_exact([[1, 0], [0, 1]]) == 2
    assert rank_exact([]) == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_koszul_complex_is_a_complex(m):
    gens = [x(i, i + 1) for i in range(m)]
    ds = koszul_complex(gens, R)
    assert [d.shape for d in ds] == [
        (len(koszul_bases(m)[k - 1]), len(koszul_bases(m)[k])) for k in range(1, m + 1)
    ]
    for a, b in zip(ds, ds[1:]):
        assert mat_mul(a, b).is_zero()
