import itertools

import pytest

from skewmon.bialgebroid import b4
from skewmon.ebimod import tensor_over_envelope
from skewmon.exactlin import Mat
from skewmon.ringmod import (
    Bimodule, BimoduleTensor, algebra_from_constants, check_algebra, check_bimodule, coequalizer, enveloping,
    equalizer, free_bimodule, group_algebra_cyclic, hom_over, opposite, product_algebra, regular_bimodule,
    right_regular, tensor_over, trivial_algebra, vector_space,
)


def gf2_rank(vectors):
    """Rank over F_2 with vectors packed into ints (an XOR basis)."""
    basis = []
    for v in vectors:
        x = int("".join(str(int(c) % 2) for c in v), 2)
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
    return len(basis)


def mult(a, i, j):
    d = a.dim
    return [a.table.entry(r, i * d + j) for r in range(d)]


def brute_assoc_failures(a):
    d, p = a.dim, a.p
    bad = []
    for i, j, l in itertools.product(range(d), repeat=3):
        ij = mult(a, i, j)
        jl = mult(a, j, l)
        left = [sum(ij[m] * mult(a, m, l)[r] for m in range(d)) % p for r in range(d)]
        right = [sum(jl[m] * mult(a, i, m)[r] for m in range(d)) % p for r in range(d)]
        if left != right:
            bad.append((i, j, l))
    return bad


def test_check_algebra_valid_examples():
    assert check_algebra(trivial_algebra(3)) == []
    c2 = group_algebra_cyclic(3, 2)
    assert brute_assoc_failures(c2) == []
    assert check_algebra(c2) == []


def test_check_algebra_names_failing_triple():
    consts = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    consts[1][1] = [1, 1]  # e1 e1 = e0 + e1 instead of e1
    bad_alg = algebra_from_constants("bad", consts, [1, 1], 2)
    oracle = brute_assoc_failures(bad_alg)
    assert oracle
    msgs = check_algebra(bad_alg)
    for i, j, l in oracle:
        assert f"associativity fails on (e{i} e{j}) e{l}" in msgs


def test_opposite_and_enveloping():
    k = trivial_algebra(2)
    assert opposite(k).table == k.table
    r = product_algebra(2, 2)
    assert opposite(r).table == r.table
    assert enveloping(r).dim == 4
    assert check_algebra(enveloping(r)) == []


def test_opposite_of_noncommutative_reverses_products():
    # upper triangular 2x2 matrices: basis E11, E12, E22
    consts = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    consts[0][0] = [1, 0, 0]
    consts[0][1] = [0, 1, 0]
    consts[1][2] = [0, 1, 0]
    consts[2][2] = [0, 0, 1]
    t = algebra_from_constants("T2", consts, [1, 0, 1], 3)
    assert check_algebra(t) == []
    op = opposite(t)
    for i, j in itertools.product(range(3), repeat=2):
        assert mult(op, i, j) == mult(t, j, i)


def test_tensor_over_k_is_plain_tensor():
    k = trivial_algebra(3)
    m, n = vector_space(2, 3, "M"), vector_space(3, 3, "N")
    assert tensor_over(m, n).obj.dim == 6


def test_tensor_regular_over_itself():
    r = product_algebra(2, 2)
    reg = regular_bimodule(r)
    t = tensor_over(reg, reg)
    assert t.obj.dim == 2
    assert check_bimodule(t.obj) == []


def test_coring_square_of_b4_matches_enumeration():
    b = b4()
    dh = b.H.dim
    rels = []
    for h, h2, i in itertools.product(range(dh), range(dh), range(b.R.dim)):
        s_r = [b.s.entry(x, i) for x in range(dh)]
        t_r = [b.t.entry(x, i) for x in range(dh)]
        hs = [sum(s_r[m] * mult(b.H, h, m)[x] for m in range(dh)) % 2 for x in range(dh)]
        h2t = [sum(t_r[m] * mult(b.H, h2, m)[x] for m in range(dh)) % 2 for x in range(dh)]
        e_h = [int(x == h) for x in range(dh)]
        e_h2 = [int(x == h2) for x in range(dh)]
        lhs = [hs[a] * e_h2[c] for a in range(dh) for c in range(dh)]
        rhs = [e_h[a] * h2t[c] for a in range(dh) for c in range(dh)]
        rels.append([(x - y) % 2 for x, y in zip(lhs, rhs)])
    oracle_dim = dh * dh - gf2_rank(rels)
    assert oracle_dim == 8
    assert b.coring_square().dim == oracle_dim


def test_hom_examples():
    k = trivial_algebra(3)
    assert len(hom_over(vector_space(1, 3), vector_space(1, 3))) == 1
    r = product_algebra(2, 2)
    reg = right_regular(r)
    assert len(hom_over(reg, reg, "right")) == 2
    f = free_bimodule(r)
    # evaluation at 1: Hom_R(R, M) has the dimension of M
    for m in (regular_bimodule(r), f):
        assert len(hom_over(right_regular(r), Bimodule(m.name, m.dim, k_of(r), r, [m.identity()], m.right), "right")) == m.dim


def k_of(r):
    return trivial_algebra(r.p)


def test_equalizer_examples():
    v = vector_space(2, 3)
    ident = v.identity()
    assert equalizer([ident], [ident], v).obj.dim == 2
    assert equalizer([ident], [Mat.zeros(2, 2, 3)], v).obj.dim == 0


def test_center_of_b4_actions_matches_enumeration():
    b = b4()
    dh = b.H.dim
    h = vector_space(dh, 2, "H")
    eq = equalizer(list(b.lambda1), list(b.rho1), h)
    count = 0
    for v in itertools.product(range(2), repeat=dh):
        col = Mat.column(list(v), 2)
        if all(x @ col == y @ col for x, y in zip(b.lambda1, b.rho1)):
            count += 1
    assert 2 ** eq.obj.dim == count


def test_coequalizer_examples():
    v = vector_space(2, 3)
    ident = v.identity()
    c = coequalizer([ident], [ident], v)
    assert c.projection == ident
    assert coequalizer([ident], [Mat.zeros(2, 2, 3)], v).obj.dim == 0


def test_amalgamation_over_envelope_for_b4():
    b = b4()
    reg = regular_bimodule(b.R)
    q = tensor_over_envelope(b, reg)
    assert q.dim == 2


def test_bimodule_tensor_unitors_are_isomorphisms():
    r = product_algebra(2, 2)
    t = BimoduleTensor(r)
    f = free_bimodule(r)
    from skewmon.exactlin import is_invertible

    assert is_invertible(t.lunit(f).mat)
    assert is_invertible(t.runit(f).mat)
    assert is_invertible(t.assoc(f, t.unit, f).mat)


def test_check_bimodule_detects_noncommuting_actions():
    r = product_algebra(2, 2)
    reg = regular_bimodule(r)
    assert check_bimodule(reg) == []
    # a valid left module structure that does not commute with the right action
    e = Mat.from_rows([[1, 1], [0, 0]], 2)
    left = [e, Mat.identity(2, 2) - e]
    bad = Bimodule("bad", 2, r, r, left, reg.right)
    assert check_bimodule(bad)
