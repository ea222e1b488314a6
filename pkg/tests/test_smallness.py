from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anosovkit.errors import ValidationError
from anosovkit.ideals import enumerate_balanced_ideals
from anosovkit.smallness import (
    HdimBound,
    certify_k_small,
    classification_sweep,
    expand_types,
    format_table,
    load_preset,
    max_certified_k,
    moduli_dimensions,
    preset_names,
    sweep_limited,
    verify_length_bound,
)

from conftest import config

exact = lambda v: HdimBound(Fraction(v), False)  # noqa: E731
strict = lambda v: HdimBound(Fraction(v), True)  # noqa: E731


def only(t):
    fc = config(t)
    return fc, enumerate_balanced_ideals(fc)


def test_presets():
    assert load_preset("qf") == strict(2)
    assert load_preset("hitchin") == exact(1)
    assert load_preset("son1-lattice(3)") == exact(2)
    assert load_preset("son1-lattice:5") == exact(4)
    assert "son1-lattice(n)" in preset_names()
    for bad in ("nope", "qf(2)", "son1-lattice", "son1-lattice(1)"):
        with pytest.raises(ValidationError):
            load_preset(bad)
    with pytest.raises(ValidationError):
        HdimBound(Fraction(-1), False)


def test_a2_not_certified_for_k4_with_sphere_limit_set():
    fc, ideals = only("A2")
    cert = certify_k_small(fc, ideals[0], exact(2), 4)
    assert not cert
    assert "criterion fails" in cert.failed_inequality
    assert max_certified_k(fc, ideals[0], exact(2)) == 1


def test_max_k_examples():
    fc, ideals = only("A1")
    assert max_certified_k(fc, ideals[0], exact(0)) == 1
    fc, ideals = only("B2")
    assert [max_certified_k(fc, b, exact(1)) for b in ideals] == [2, 2]
    fc, ideals = only("A1")
    assert max_certified_k(fc, ideals[0], exact(2)) is None


def test_zero_hdim_certifies_top_k():
    for t in ("A2", "B2", "G2", "A3"):
        fc, ideals = only(t)
        for b in ideals:
            k = 2 * (fc.N - b.length) - 1
            assert certify_k_small(fc, b, exact(0), k)
            assert not certify_k_small(fc, b, exact(0), k + 1)


def test_a4_qf_certificates():
    fc, ideals = only("A4")
    for b in ideals[:50]:
        c = certify_k_small(fc, b, load_preset("qf"), 4)
        assert c and c.lambda_bound == 2 * b.length + 2


def test_strict_boundary_semantics():
    fc, ideals = only("G2")  # N = 6, l = 3, so 2(N-l) - k = 6 - k
    b = ideals[0]
    assert certify_k_small(fc, b, strict(2), 4)  # hdim < 2 <= 2
    assert not certify_k_small(fc, b, exact(2), 4)  # 2 < 2 fails
    assert max_certified_k(fc, b, strict(Fraction(3, 2))) == 4
    assert max_certified_k(fc, b, exact(Fraction(3, 2))) == 4
    with pytest.raises(ValidationError):
        certify_k_small(fc, b, strict(1), -1)


@given(
    st.sampled_from(["A1", "A2", "B2", "G2", "A3"]),
    st.fractions(min_value=0, max_value=12, max_denominator=6),
    st.booleans(),
    st.integers(0, 14),
    st.data(),
)
def test_monotone_and_tightening(t, value, is_strict, k, data):
    fc, ideals = only(t)
    b = data.draw(st.sampled_from(list(ideals)))
    h = HdimBound(value, is_strict)
    ok = bool(certify_k_small(fc, b, h, k))
    mk = max_certified_k(fc, b, h)
    assert ok == (mk is not None and k <= mk)
    if ok:
        for k2 in range(k):
            assert certify_k_small(fc, b, h, k2)
        tighter = data.draw(st.fractions(min_value=0, max_value=value, max_denominator=6))
        assert certify_k_small(fc, b, HdimBound(tighter, is_strict), k)
        assert certify_k_small(fc, b, HdimBound(value, True), k)


@pytest.mark.parametrize("t,passed,witness_len", [("A1", False, 0), ("A2", False, 1), ("A3", False, 4), ("B2", False, 2), ("G2", True, None)])
def test_length_bound(t, passed, witness_len):
    rep = verify_length_bound(config(t))
    assert rep.passed is passed and rep.complete
    if witness_len is None:
        assert rep.witness is None and rep.max_length <= rep.bound
    else:
        assert rep.witness["length"] == witness_len > rep.bound
        assert rep.excluded_type


def test_length_bound_partial():
    rep = verify_length_bound(config("A4"), node_limit=100)
    assert not rep.complete and rep.passed is None


def test_sweep_rows_and_annotations():
    rows = classification_sweep(["A2", "B2", "G2", "A1"], 4, "borel", load_preset("qf"), 4)
    by = {r.type: r for r in rows}
    assert [r.type for r in rows] == ["A2", "B2", "G2", "A1"]
    assert by["A2"].all_certified is False and by["B2"].all_certified is False
    assert by["G2"].all_certified is True and not by["G2"].annotations
    assert "excluded type" in by["A1"].annotations[0]
    assert not sweep_limited(rows)
    assert "G2" in format_table(rows)


def test_sweep_records_limits_in_row():
    rows = classification_sweep(["A4", "E6", "F4"], 8, "borel", load_preset("hitchin"), 4, max_order=1200, node_limit=50)
    by = {r.type: r for r in rows}
    assert by["E6"].status == "resource_limited" and "max_order" in by["E6"].detail
    assert by["A4"].status == "resource_limited" and by["A4"].count_is_lower_bound
    assert any("Hitchin" in a for a in by["F4"].annotations)
    assert sweep_limited(rows)


def test_sweep_symmetric_selector_and_threads():
    one = classification_sweep(["B3", "A3"], 3, "symmetric", load_preset("qf"), 4)
    four = classification_sweep(["B3", "A3"], 3, "symmetric", load_preset("qf"), 4, threads=4)
    assert [r.as_dict() for r in one] == [r.as_dict() for r in four]
    assert [(r.type, r.theta_A) for r in one][:3] == [("B3", ""), ("B3", "1"), ("B3", "2")]


def test_expand_types():
    assert [str(t) for t in expand_types(["A", "G2", "E"], 3)] == ["A1", "A2", "A3", "G2"]
    assert len(expand_types(list("ABCDEFG"), 8)) == 8 + 7 + 7 + 6 + 3 + 1 + 1


@pytest.mark.parametrize("g", [2, 3, 4])
def test_moduli(g):
    m = moduli_dimensions(g, "A1")
    assert (m.qf_surface, m.qf_group, m.hitchin_real) == (6 * g - 3, 6 * g - 3, (2 * g - 2) * 3 + 6)
    assert moduli_dimensions(g, "A2").qf_group == 6 * g - 6 + 8


def test_moduli_examples_and_errors():
    assert moduli_dimensions(2, "A1").qf_surface == 9
    assert moduli_dimensions(2, "A2").qf_group == 14
    assert moduli_dimensions(2, "A1").hitchin_real == 12
    with pytest.raises(ValidationError):
        moduli_dimensions(1, "A1")
