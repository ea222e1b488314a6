from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from anosovkit import linalg as la

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(entries) for _ in range(c)] for _ in range(r)]
    # force some rank deficiency now and then
    if r > 1 and draw(st.booleans()):
        k = draw(st.sampled_from([Fraction(0), Fraction(1), Fraction(-2, 3)]))
        rows[-1] = [k * v for v in rows[0]]
    return rows


@given(matrices())
def test_rank_matches_sympy(m):
    assert la.rank(m) == sympy.Matrix(m).rank()


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(m):
    assert la.det(m) == Fraction(str(sympy.Matrix(m).det()))


@given(matrices())
def test_nullspace_is_a_kernel_basis(m):
    cols = len(m[0])
    basis = la.nullspace(m, cols)
    assert len(basis) == cols - la.rank(m)
    for v in basis:
        assert not any(la.matvec(m, v))
    assert la.rank(basis) == len(basis) if basis else True


@given(matrices(5, 5), st.lists(entries, min_size=5, max_size=5))
def test_coordinates(m, coeffs):
    basis = la.span_basis(m, len(m[0]))
    v = [sum((c * b[j] for c, b in zip(coeffs, basis)), Fraction(0)) for j in range(len(m[0]))]
    c = la.coordinates(basis, v)
    assert c is not None
    back = [sum((x * b[j] for x, b in zip(c, basis)), Fraction(0)) for j in range(len(v))]
    assert back == v


def test_coordinates_outside_span_and_inverse():
    assert la.coordinates([[1, 0, 0]], [0, 1, 0]) is None
    a = [[2, 1], [1, 1]]
    assert la.matmul(la.matrix(a), la.inverse(a)) == la.identity(2)
    with pytest.raises(ZeroDivisionError):
        la.inverse([[1, 2], [2, 4]])


def test_incremental_basis():
    b = la.IncrementalBasis(3)
    assert b.add([1, 1, 0]) and b.add([0, 1, 1])
    assert not b.add([1, 2, 1])
    assert b.add([0, 0, 5]) and len(b) == 3


def test_empty_shapes():
    assert la.rank([]) == 0
    assert len(la.nullspace([], 3)) == 3
    assert la.det([]) == 1
    assert la.matmul([[1, 2]], [], ncols=0) == [[]]
    assert la.format_fraction(Fraction(-3, 6)) == "-1/2"
