import pytest
from hypothesis import given, strategies as st

from anosovkit.errors import InvalidTypeError
from anosovkit.rootsys import (
    build_root_system,
    cartan_matrix,
    dim_lie_algebra,
    longest_element_matrix,
    minus_w0_permutation,
    parse_type,
    positive_root_count,
)

from oracles import positive_roots_by_closure

ALL_SMALL = ["A1", "A2", "A3", "A4", "A7", "B2", "B3", "B5", "C3", "C4", "D4", "D5", "D6", "E6", "E7", "E8", "F4", "G2"]


@pytest.mark.parametrize("text,family,rank", [("A3", "A", 3), (" g2 ", "G", 2), ("E8", "E", 8), ("d4", "D", 4)])
def test_parse(text, family, rank):
    t = parse_type(text)
    assert (t.family, t.rank) == (family, rank)


@pytest.mark.parametrize("text", ["Z9", "A0", "B1", "D2", "E5", "E9", "F3", "G3", "", "AA", "3A"])
def test_parse_rejects(text):
    with pytest.raises(InvalidTypeError):
        parse_type(text)


@pytest.mark.parametrize("t", ALL_SMALL)
def test_positive_roots_match_closure_and_count(t):
    rs = build_root_system(t)
    assert set(rs.positive_roots) == positive_roots_by_closure(rs.cartan_matrix)
    assert len(rs.positive_roots) == positive_root_count(parse_type(t))
    assert rs.simple_roots == tuple(rs.positive_roots[: rs.rank])


@pytest.mark.parametrize(
    "t,dim", [("A1", 3), ("A2", 8), ("B2", 10), ("G2", 14), ("F4", 52), ("E6", 78), ("E7", 133), ("E8", 248), ("D4", 28)]
)
def test_dim_lie_algebra(t, dim):
    assert dim_lie_algebra(build_root_system(t)) == dim


def test_cartan_conventions():
    # Bourbaki: B_n has the short root last, C_n the long root last
    assert cartan_matrix(parse_type("B3"))[2][1] == -2
    assert cartan_matrix(parse_type("C3"))[1][2] == -2
    assert cartan_matrix(parse_type("G2")) == ((2, -3), (-1, 2))
    e6 = cartan_matrix(parse_type("E6"))
    assert e6[1][3] == -1 and e6[1][2] == 0  # node 2 hangs off node 4


@pytest.mark.parametrize(
    "t,sigma",
    [
        ("A1", (0,)),
        ("A3", (2, 1, 0)),
        ("A4", (3, 2, 1, 0)),
        ("B3", (0, 1, 2)),
        ("D4", (0, 1, 2, 3)),
        ("D5", (0, 1, 2, 4, 3)),
        ("E6", (5, 1, 4, 3, 2, 0)),
        ("E7", tuple(range(7))),
        ("G2", (0, 1)),
    ],
)
def test_minus_w0(t, sigma):
    assert minus_w0_permutation(build_root_system(t)) == sigma


@given(st.sampled_from(ALL_SMALL))
def test_w0_is_an_involution_sending_positive_to_negative(t):
    rs = build_root_system(t)
    m = longest_element_matrix(rs)
    n = rs.rank
    sq = [[sum(m[i][k] * m[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert sq == [[int(i == j) for j in range(n)] for i in range(n)]
    for r in rs.positive_roots:
        img = [sum(m[i][j] * r[j] for j in range(n)) for i in range(n)]
        assert all(x <= 0 for x in img)
