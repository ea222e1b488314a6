import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anosovkit import homalg as h
from anosovkit import linalg as la
from anosovkit.errors import InvalidComplexError, ValidationError

V, H = h.VERTICAL, h.HORIZONTAL


def cochain_cohomology(dims, maps):
    """Plain rank-nullity for a single cochain complex."""
    out = []
    for k, d in enumerate(dims):
        r_out = la.rank(maps[k]) if k < len(maps) and maps[k] else 0
        r_in = la.rank(maps[k - 1]) if k >= 1 and maps[k - 1] else 0
        out.append(d - r_out - r_in)
    return out


def test_zero_complex():
    dc = h.DoubleComplex.zero(3, 2)
    assert h.validate(dc).ok
    assert all(h.total_cohomology(dc, k) == 0 for k in range(-1, 6))
    seq = h.ldt(dc)
    assert (seq.first_dim, seq.h1_dim, seq.last_dim) == (0, 0, 0) and seq.exact


def test_violations_are_named():
    dc = h.from_maps([[1], [1], [1]], {(0, 0): [[1]], (1, 0): [[1]]}, {})
    rep = h.validate(dc)
    assert not rep.ok and rep.first == "d_h∘d_h != 0 at (0,0)"
    with pytest.raises(InvalidComplexError, match="validate"):
        h.total_cohomology(dc, 0)
    sq = h.from_maps([[1, 1], [1, 1]], {(0, 0): [[1]], (0, 1): [[2]]}, {(0, 0): [[1]], (1, 0): [[1]]})
    assert h.validate(sq).violations == ["square at (0,0) does not commute"]
    bad_shape = h.from_maps([[2, 1], [1, 1]], {(0, 0): [[1, 2, 3]]}, {})
    assert h.validate(bad_shape).first == "shape of d_h at (0,0)"


def test_grid_caps():
    with pytest.raises(ValidationError):
        h.DoubleComplex.zero(17, 1)
    with pytest.raises(ValidationError):
        h.from_maps([[65]], {}, {})


def test_single_column_is_its_cochain_complex():
    dims = [2, 3, 1]
    maps = [[[1, 0], [0, 0], [1, 0]], [[0, 1, 0]]]
    dc = h.from_maps([dims], {}, {(0, 0): maps[0], (0, 1): maps[1]})
    assert [h.total_cohomology(dc, k) for k in range(3)] == cochain_cohomology(dims, maps)


def test_tensor_product_kunneth():
    rng = random.Random(5)
    for _ in range(10):
        a_dims, a_maps = _random_cochain(rng)
        b_dims, b_maps = _random_cochain(rng)
        dc = h.tensor_product(a_dims, a_maps, b_dims, b_maps)
        assert h.validate(dc).ok
        ha, hb = cochain_cohomology(a_dims, a_maps), cochain_cohomology(b_dims, b_maps)
        for k in range(dc.max_degree + 1):
            expect = sum(ha[p] * hb[k - p] for p in range(len(ha)) if 0 <= k - p < len(hb))
            assert h.total_cohomology(dc, k) == expect


def _random_cochain(rng, length=None):
    """Random cochain complex built from acyclic pairs and dots, then re-based."""
    n = length or rng.randint(1, 4)
    dims = [0] * n
    pairs = []
    for _ in range(rng.randint(0, 4)):
        k = rng.randrange(n)
        if k + 1 < n and rng.random() < 0.6:
            pairs.append((k, dims[k], dims[k + 1]))
            dims[k] += 1
            dims[k + 1] += 1
        else:
            dims[k] += 1
    maps = [la.zeros(dims[k + 1], dims[k]) for k in range(n - 1)]
    for k, i, j in pairs:
        maps[k][j][i] = Fraction(rng.choice([1, -2, 3]))
    return dims, maps


def test_e0_is_the_complex_and_late_pages_are_stable():
    rng = random.Random(11)
    for _ in range(15):
        dc = h.random_double_complex(rng, 5, 5, 6)
        for d in (V, H):
            e0 = h.page_dims(dc, d, 0)
            assert all(e0[(p, q)] == dc.dims[p][q] for p in range(dc.width) for q in range(dc.height))
            late = h.stable_page(dc)
            assert h.page_dims(dc, d, late + 3) == h.e_infinity(dc, d)


def test_pages_compute_cohomology_of_the_previous_page():
    rng = random.Random(3)
    for _ in range(12):
        dc = h.random_double_complex(rng, 4, 4, 6)
        for d in (V, H):
            for r in range(4):
                page = h.spectral_page(dc, d, r)
                nxt = h.page_dims(dc, d, r + 1)
                for src, m in page.maps.items():
                    tgt = page.target(*src)
                    if tgt in page.maps:
                        after = page.maps[tgt]
                        if m and after:
                            assert la.is_zero(la.matmul(after, m, ncols=len(m[0]) if m else 0))
                for (p, q), dim in page.dims.items():
                    incoming = [s for s in page.maps if page.target(*s) == (p, q)]
                    r_in = la.rank(page.maps[incoming[0]]) if incoming else 0
                    assert dim - la.rank(page.maps[(p, q)]) - r_in == nxt[(p, q)]


def test_higher_differentials_occur():
    # zigzag x(0,1) -> m(1,1) <- z(1,0) -> y(2,0): d_2 sends [x] to ±[y]
    dc = h.from_maps(
        [[0, 1], [1, 1], [1, 0]],
        {(0, 1): [[1]], (1, 0): [[1]]},
        {(1, 0): [[1]]},
    )
    assert h.validate(dc).ok
    e2 = h.page_dims(dc, V, 2)
    assert e2[(0, 1)] == 1 and e2[(2, 0)] == 1
    page = h.spectral_page(dc, V, 2)
    assert page.target(0, 1) == (2, 0)
    assert la.rank(page.maps[(0, 1)]) == 1
    assert all(v == 0 for v in h.e_infinity(dc, V).values())
    assert all(h.total_cohomology(dc, k) == 0 for k in range(4))


@pytest.mark.parametrize("seed", range(30))
def test_convergence_and_ldt_on_random_complexes(seed):
    dc = h.random_double_complex(random.Random(seed))
    assert h.validate(dc).ok
    rep = h.consistency_report(dc)
    for d in (V, H):
        assert rep[d]["converges"]
        assert rep[d]["ldt_injective"] and rep[d]["ldt_exact_at_h1"]


def _two_column(b_dims, b_maps, c_dims, c_maps, proj):
    """Column p=0 is B, p=1 is C, d_h is the projection."""
    height = max(len(b_dims), len(c_dims))
    dims = [b_dims + [0] * (height - len(b_dims)), c_dims + [0] * (height - len(c_dims))]
    d_v = {(0, q): m for q, m in enumerate(b_maps)}
    d_v.update({(1, q): m for q, m in enumerate(c_maps)})
    d_h = {(0, q): m for q, m in enumerate(proj)}
    return h.from_maps(dims, d_h, d_v)


def _ses_example(rng):
    """0 -> A -> B -> C -> 0 with B = A ⊕ C as graded spaces, d_B = [[d_A, tau], [0, d_C]].

    C^0 carries k classes connected by tau to cycles of A^1, plus free dots.
    """
    k = rng.randint(0, 3)
    extra_c0 = rng.randint(0, 2)
    a1 = k + rng.randint(0, 2)
    c0 = k + extra_c0
    # A: A^0 = 0, A^1 = a1 (d_A = 0);  C: C^0 = c0, C^1 = 0
    tau = la.zeros(a1, c0)
    for i in range(k):
        tau[i][i] = Fraction(rng.choice([1, 2, -1]))
    b0, b1 = c0, a1
    b_maps = [tau]  # B^0 = C^0 -> B^1 = A^1
    proj = [la.identity(c0), la.zeros(0, a1)]
    return _two_column([b0, b1], b_maps, [c0, 0], [la.zeros(0, c0)], proj), tau, k, extra_c0


def test_two_column_e1_is_column_cohomology():
    rng = random.Random(8)
    for _ in range(10):
        dc, tau, k, extra = _ses_example(rng)
        e1 = h.page_dims(dc, V, 1)
        b_coh = cochain_cohomology([dc.dim(0, 0), dc.dim(0, 1)], [dc.vmap(0, 0)])
        assert [e1[(0, 0)], e1[(0, 1)]] == b_coh
        assert e1[(1, 0)] == dc.dim(1, 0)  # C is concentrated in degree 0


def test_ldt_first_map_is_minus_connecting_homomorphism():
    rng = random.Random(21)
    for _ in range(10):
        dc, tau, k, extra = _ses_example(rng)
        seq = h.ldt(dc, V)
        # coker(H^0 B -> H^0 C) has dimension k: exactly the classes tau kills
        assert seq.first_dim == k and seq.injective and seq.exact
        first = seq._bases["first"]
        h1 = seq._bases["h1"]
        c0 = dc.dim(1, 0)
        for col, v in enumerate(first.reps):
            # v = (0 in B^1, c in C^0); delta^0[c] = [tau(b)] with b the lift of c in B^0
            c = v[dc.dim(0, 1):]
            assert len(c) == c0 and not any(v[: dc.dim(0, 1)])
            a = la.matvec(tau, c)
            minus_delta = [-x for x in a] + [Fraction(0)] * c0
            expected = h1.classes(minus_delta)
            assert [row[col] for row in seq.alpha] == expected


def test_horizontal_e1_concentrated_when_rows_exact():
    a_dims, a_maps = [2, 1], [[[1, 0]]]  # H^0 = 1, H^1 = 0
    rng = random.Random(4)
    b_dims, b_maps = _random_cochain(rng, 3)
    dc = h.tensor_product(a_dims, a_maps, b_dims, b_maps)
    e1 = h.page_dims(dc, H, 1)
    assert all(e1[(p, q)] == 0 for p in range(1, dc.width) for q in range(dc.height))
    assert [e1[(0, q)] for q in range(dc.height)] == b_dims


def test_functoriality_of_ldt():
    rng = random.Random(17)
    for _ in range(8):
        X = h.random_double_complex(rng, 4, 4, 5)
        Y = h.random_double_complex(rng, 4, 4, 5)
        S = h.direct_sum(X, Y)
        proj = {}
        incl = {}
        for p in range(S.width):
            for q in range(S.height):
                xd, yd = X.dim(p, q), Y.dim(p, q)
                if xd + yd == 0:
                    continue
                proj[(p, q)] = [[Fraction(int(i == j)) for j in range(xd + yd)] for i in range(xd)]
                incl[(p, q)] = [[Fraction(int(i == j)) for j in range(xd)] for i in range(xd + yd)]
        Xp = h.from_maps(
            [[X.dim(p, q) for q in range(S.height)] for p in range(S.width)],
            {(p, q): X.hmap(p, q) for p in range(S.width - 1) for q in range(S.height)},
            {(p, q): X.vmap(p, q) for p in range(S.width) for q in range(S.height - 1)},
        )
        for f, src, dst in ((proj, S, Xp), (incl, Xp, S)):
            m = h.induced_ldt_map(f, src, dst)
            assert m.left_square_commutes and m.right_square_commutes
        m = h.induced_ldt_map({k: la.identity(S.dim(*k)) for k in proj}, S, S)
        assert m.h1 == la.identity(len(m.h1))


def test_non_morphism_rejected():
    X = h.from_maps([[1, 1]], {}, {(0, 0): [[1]]})
    with pytest.raises(ValidationError):
        h.induced_ldt_map({(0, 0): [[1]]}, X, X)


@given(st.integers(0, 10**6))
def test_json_round_trip(seed):
    dc = h.random_double_complex(random.Random(seed), 3, 3, 4)
    text = h.to_json(dc)
    back = h.from_json(text)
    assert h.to_json(back) == text
    assert back.dims == dc.dims
    data = json.loads(text)
    assert set(data) == {"width", "height", "dims", "d_h", "d_v"}


def test_json_errors():
    with pytest.raises(ValidationError):
        h.from_json('{"width": 1}')
    with pytest.raises(ValidationError):
        h.from_json({"width": 1, "height": 1, "dims": [[1]], "d_h": [[[]]], "d_v": [[["x"]]]})
