import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anosovkit import grpcoh as g
from anosovkit import linalg as la
from anosovkit.errors import RepresentationError, ValidationError


def test_free_group_cocycles_are_free():
    pres = g.free_group(3)
    rep = g.trivial_rep(3, 2)
    assert g.fox_system(pres, rep) == []
    assert g.cohomology_dims(pres, rep).z1 == 6


def test_trivial_group():
    pres = g.GroupPresentation(1, ((1,),))
    dims = g.cohomology_dims(pres, g.trivial_rep(1))
    assert dims.z1 == 0 and dims.h1 == 0 and dims.h0 == 1


def test_genus_two_trivial_module():
    pres = g.surface_group(2)
    assert pres.relators == ((1, 2, -1, -2, 3, 4, -3, -4),)
    rep = g.trivial_rep(4)
    assert la.is_zero(g.fox_system(pres, rep))
    assert g.cohomology_dims(pres, rep).as_dict() == {"z1": 4, "b1": 0, "h1": 4, "h0": 1}


@pytest.mark.parametrize("genus", [1, 2, 3, 5])
def test_surface_trivial_module_has_rank_2g(genus):
    assert g.cohomology_dims(g.surface_group(genus), g.trivial_rep(2 * genus)).h1 == 2 * genus


def test_fox_derivative_by_hand():
    # w = a b a^-1: d/da = 1 - a b a^-1, d/db = a
    rep = g.MatrixRep(1, ([[2]], [[3]]))
    assert g.fox_derivative((1, 2, -1), 1, rep) == [[Fraction(1) - 3]]
    assert g.fox_derivative((1, 2, -1), 2, rep) == [[Fraction(2)]]


def test_presentation_validation_and_reduction():
    with pytest.raises(ValidationError, match="outside"):
        g.GroupPresentation(2, ((1, 3),))
    with pytest.raises(ValidationError):
        g.GroupPresentation(2, ((1, 0),))
    assert g.GroupPresentation(2, ((1, 2, -2, -1, 1),)).relators == ((1,),)
    assert g.GroupPresentation(1, ((1, -1),)).relators == ()


def test_parse_formats():
    text = "# genus 2\n4\n1 2 -1 -2 3 4 -3 -4\n"
    assert g.parse_presentation(text) == g.surface_group(2)
    js = json.dumps({"generators": 4, "relators": ["1 2 -1 -2 3 4 -3 -4"]})
    assert g.parse_presentation(js) == g.surface_group(2)
    rep = g.parse_rep('[[["1/2"]], [["3"]]]')
    assert rep.matrices[0] == [[Fraction(1, 2)]]
    assert g.parse_rep(g.rep_to_json(rep)).matrices == rep.matrices


def test_relator_violation_is_an_error():
    rep = g.MatrixRep(2, ([[1, 1], [0, 1]], [[1, 0], [1, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]]))
    with pytest.raises(RepresentationError, match="relator"):
        g.cohomology_dims(g.surface_group(2), rep)
    with pytest.raises(RepresentationError, match="singular"):
        g.MatrixRep(1, ([[0]],))
    with pytest.raises(ValidationError):
        g.cohomology_dims(g.surface_group(2), g.trivial_rep(3))


@pytest.mark.parametrize("seed", range(12))
def test_random_surface_reps_euler_characteristic(seed):
    rng = random.Random(seed)
    genus, d = rng.randint(2, 4), rng.randint(1, 3)
    pres = g.surface_group(genus)
    rep = g.random_surface_rep(rng, genus, d)
    dims = g.cohomology_dims(pres, rep)
    h0_dual = g.invariants_dim(rep.dual())
    # chi = (2 - 2g) d with h2 = h0 of the dual module
    assert dims.h0 - dims.h1 + h0_dual == (2 - 2 * genus) * d
    assert dims.h1 == dims.z1 - dims.b1 and dims.b1 == d - dims.h0
    if dims.h0 == 0 and h0_dual == 0:
        assert dims.h1 == (2 * genus - 2) * d
        assert dims.z1 == (2 * genus - 1) * d + dims.h0


@given(st.integers(0, 10**6))
def test_diagonal_reps_with_invariants(seed):
    rng = random.Random(seed)
    genus, d = rng.randint(1, 3), rng.randint(1, 3)
    pres = g.surface_group(genus)
    rep = g.random_diagonal_rep(rng, pres, d)
    dims = g.cohomology_dims(pres, rep)
    h0_dual = g.invariants_dim(rep.dual())
    assert dims.h0 - dims.h1 + h0_dual == (2 - 2 * genus) * d
    assert 0 <= dims.h0 <= d and dims.b1 <= d and dims.h1 >= 0


@given(st.integers(0, 10**6))
def test_conjugation_invariance(seed):
    rng = random.Random(seed)
    rep = g.random_surface_rep(rng, 2, 2)
    p = g._random_invertible(rng, 2)
    assert g.cohomology_dims(g.surface_group(2), rep) == g.cohomology_dims(g.surface_group(2), rep.conjugate(p))


def test_free_group_rank_two():
    rng = random.Random(2)
    for d in (1, 2, 3):
        while True:
            rep = g.MatrixRep(d, (g._random_invertible(rng, d), g._random_invertible(rng, d)))
            if g.invariants_dim(rep) == 0:
                break
        assert g.cohomology_dims(g.free_group(2), rep).h1 == d
