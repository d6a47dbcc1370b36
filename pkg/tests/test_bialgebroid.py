import itertools

import pytest

from skewmon.bialgebroid import (
    RightBialgebroid, b1, b2, b3, b4, check_bialgebroid, enveloping_bialgebroid, from_bialgebra, galois_map,
    group_bialgebra, induced_skewmon, is_hopf,
)
from skewmon.exactlin import Mat, is_invertible, rank
from skewmon.instance import load
from skewmon.ringmod import group_algebra_cyclic, product_algebra, trivial_algebra


def same(a: RightBialgebroid, b: RightBialgebroid) -> bool:
    return (
        a.R.table == b.R.table and a.R.unit == b.R.unit and a.H.table == b.H.table and a.H.unit == b.H.unit
        and a.s == b.s and a.t == b.t and a.delta == b.delta and a.counit == b.counit
    )


@pytest.mark.parametrize("name", ["B1", "B2", "B3", "B4"])
def test_examples_are_bialgebroids(bgds, name):
    rep = check_bialgebroid(bgds[name])
    assert rep.ok, [(c.check_id, c.detail) for c in rep.failures()]
    assert {"BGD.coassoc", "BGD.counit", "BGD.multiplicative", "BGD.source", "BGD.target"} <= rep.ids()


@pytest.mark.parametrize("name,rr,rrr", [("B1", 1, 1), ("B2", 2, 4), ("B3", 2, 4), ("B4", 4, 8)])
def test_induced_product_dims(structures, name, rr, rrr):
    s, _ = structures[name]
    r = s.unit
    assert s.prod(r, r).dim == rr
    assert s.prod(r, s.prod(r, r)).dim == rrr
    assert s.prod(s.prod(r, r), r).dim == rrr


def galois_oracle_k(b):
    """Over R = k: g (x) h -> h(1) (x) g h(2), computed term by term."""
    d, p = b.H.dim, b.p
    mult = lambda i, j: [int(b.H.table.entry(r, i * d + j)) for r in range(d)]
    delta = lambda j: [int(b.delta.entry(x, j)) for x in range(d * d)]
    cols = []
    for g, h in itertools.product(range(d), repeat=2):
        out = [0] * (d * d)
        dh = delta(h)
        for a, c in itertools.product(range(d), repeat=2):
            coef = dh[a * d + c]
            if coef:
                gc = mult(g, c)
                for x in range(d):
                    out[a * d + x] += coef * gc[x]
        cols.append([v % p for v in out])
    return Mat.from_rows([list(r) for r in zip(*cols)], p)


@pytest.mark.parametrize("name,expect_rank", [("B1", 1), ("B2", 4), ("B3", 3)])
def test_galois_map_matches_oracle_over_k(bgds, name, expect_rank):
    b = bgds[name]
    g, rep = galois_map(b)
    assert rep.ok
    oracle = galois_oracle_k(b)
    assert g == oracle
    assert rank(oracle) == expect_rank


def test_b2_galois_on_basis():
    # (1(x)1, 1(x)g, g(x)1, g(x)g) -> (1(x)1, g(x)g, 1(x)g, g(x)1)
    g, _ = galois_map(b2())
    expected = Mat.from_rows(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]], 3
    )
    assert g == expected


@pytest.mark.parametrize("name,hopf,rank_,size", [
    ("B1", True, 1, (1, 1)), ("B2", True, 4, (4, 4)), ("B3", False, 3, (4, 4)), ("B4", True, 8, (8, 8)),
])
def test_is_hopf_agrees_with_gamma(bgds, structures, name, hopf, rank_, size):
    s, _ = structures[name]
    v = is_hopf(bgds[name], s)
    assert (v.hopf, v.rank, v.size) == (hopf, rank_, size)
    assert v.gamma_invertible == hopf
    assert v.report.ok
    r = s.unit
    assert is_invertible(s.gamma(r, r, r).mat) == hopf


def test_b4_squares_match_enumeration():
    b = b4()
    # dims of H (x)_{R1} H and H (x)_{R2} H over F_2 by brute-force span counting
    dh = b.H.dim

    def span_dim(actions_left, actions_right):
        vecs = []
        for h, h2 in itertools.product(range(dh), repeat=2):
            for i in range(b.R.dim):
                lhs = [0] * (dh * dh)
                rhs = [0] * (dh * dh)
                for x in range(dh):
                    lhs[x * dh + h2] ^= int(actions_left[i].entry(x, h)) % 2
                    rhs[h * dh + x] ^= int(actions_right[i].entry(x, h2)) % 2
                vecs.append(tuple(a ^ c for a, c in zip(lhs, rhs)))
        span = {tuple([0] * (dh * dh))}
        for v in vecs:
            span |= {tuple(a ^ c for a, c in zip(u, v)) for u in span}
        return dh * dh - (len(span).bit_length() - 1)

    assert b.coring_square().dim == span_dim(b.rho2, b.lambda1) == 8
    assert b.source_square().dim == span_dim(b.rho2, b.lambda2) == 8


def test_constructors_match_bundled_instances():
    assert same(load("b1.json").bialgebroid, b1())
    assert same(load("b2_kc2_f3.json").bialgebroid, b2())
    assert same(load("b3_monoid.json").bialgebroid, b3())
    assert same(load("b4_renv.json").bialgebroid, b4())


def test_generic_constructors():
    k = trivial_algebra(5)
    b = group_bialgebra(k, "k")
    assert check_bialgebroid(b).ok and is_hopf(b).hopf
    c3 = group_bialgebra(group_algebra_cyclic(5, 3), "C3")
    v = is_hopf(c3)
    assert check_bialgebroid(c3).ok and v.hopf and v.size == (9, 9)
    env = enveloping_bialgebroid(product_algebra(3, 3))
    assert env.H.dim == 9
    assert check_bialgebroid(env).ok
    assert is_hopf(env).hopf
    fb = from_bialgebra("again", c3.H, c3.delta, c3.counit)
    assert same(fb, c3)


def test_shape_mismatch_raises():
    from skewmon.exactlin import ShapeError

    b = b2()
    with pytest.raises(ShapeError):
        RightBialgebroid("bad", b.R, b.H, b.s, b.t, b.delta[:2, :], b.counit)


def test_corrupted_coproduct_is_named():
    b = b2()
    d = b.delta.tolist()
    d[0][1] = (d[0][1] + 1) % 3
    bad = RightBialgebroid("bad", b.R, b.H, b.s, b.t, Mat.from_rows(d, 3), b.counit)
    assert "BGD.coassoc" in check_bialgebroid(bad).failed_ids()
