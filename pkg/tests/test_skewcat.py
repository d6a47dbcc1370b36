import itertools

import pytest

from skewmon.exactlin import Mat, is_invertible
from skewmon.report import FAIL, NOT_VERIFIED, PASS
from skewmon.ringmod import BimodMap, vector_space
from skewmon.skewcat import (
    MutatedStructure, ProbeSet, TensorStructure, canonical_comonad, canonical_monad, check_all,
    check_comonad_laws, check_compatibility_diagram, check_galois_identity, check_involution,
    check_monad_laws, check_skewmon_functor, check_smc, coherence_failure_witness, compose, distributive_law,
    dualize, identity, identity_functor, monad_morphism_from_functor, two_arg_maps,
)


def tensor_probes(p=3):
    k = vector_space(1, p, "k")
    v2 = vector_space(2, p, "V2")
    maps = [
        BimodMap(Mat.from_rows([[1], [2]], p), k, v2),
        BimodMap(Mat.from_rows([[1, 1]], p), v2, k),
        BimodMap(Mat.from_rows([[0, 1], [1, 0]], p), v2, v2),
    ]
    return TensorStructure(k), ProbeSet([k, v2], maps)


def test_plain_tensor_satisfies_everything():
    s, probes = tensor_probes()
    rep = check_all(s, probes)
    assert rep.ok, [c.check_id for c in rep.failures()]
    # identity constraints: delta_R.mu_R equals gamma_RRR, so no witness
    assert coherence_failure_witness(s).status == FAIL


def test_compose_order_and_shape_error():
    s, probes = tensor_probes()
    f, g, sw = probes.maps
    assert compose(g, f).mat == Mat.from_rows([[3]], 3)
    assert compose(sw, sw).mat == Mat.identity(2, 3)
    from skewmon.exactlin import ShapeError

    with pytest.raises(ShapeError):
        compose(f, f)


@pytest.mark.parametrize("name", ["B1", "B2", "B3"])
def test_smc_on_small_instances(structures, name):
    s, probes = structures[name]
    rep = check_smc(s, probes)
    assert rep.ok
    assert len(rep.by_id("SMC1")) == 3 ** 4
    assert rep.ids() == {"SMC1", "SMC2", "SMC3", "SMC4", "SMC5"}


def test_corrupted_eps_is_caught_on_b3(structures):
    s, probes = structures["B3"]
    bad = MutatedStructure(s, eps=lambda e, m: e.scale(2), label="eps*2")
    rep = check_smc(bad, probes)
    # SMC3 has one eps on each side, so a scalar cancels there
    assert rep.failed_ids() == {"SMC4", "SMC5"}


def test_corrupted_gamma_breaks_pentagon(structures):
    s, probes = structures["B2"]
    r = s.unit

    def hook(g, l, m, n):
        if l is r and m is r and n is r:
            return g + Mat.unit_vector(g.rows, 0, g.p) @ Mat.unit_vector(g.cols, 0, g.p).T
        return g

    bad = MutatedStructure(s, gamma=hook, label="gamma_RRR*2")
    rep = check_smc(bad, ProbeSet([r]))
    assert not rep.passed("SMC1")


@pytest.mark.parametrize("name,tr,qr", [("B1", 1, 1), ("B2", 2, 2), ("B3", 2, 2), ("B4", 4, 4)])
def test_monad_and_comonad_dims(structures, name, tr, qr):
    s, probes = structures[name]
    r = s.unit
    assert canonical_monad(s).obj(r).dim == tr
    assert canonical_comonad(s).obj(r).dim == qr


def test_monad_dims_scale_with_object_for_bialgebra(structures):
    s, probes = structures["B2"]
    for m in probes.objects:
        assert s.T(m).dim == 2 * m.dim
        assert s.Q(m).dim == 2 * m.dim


@pytest.mark.parametrize("name", ["B1", "B2", "B3", "B4"])
def test_monad_comonad_distributive_law(structures, name):
    s, probes = structures[name]
    assert check_monad_laws(s, probes).ok
    assert check_comonad_laws(s, probes).ok
    chi, rep = distributive_law(s, probes)
    assert rep.ok
    assert rep.ids() == {"SMC14", "SMC15", "SMC16", "SMC17"}
    assert chi(s.unit) is s.gamma(s.unit, s.unit, s.unit)


@pytest.mark.parametrize("name", ["B2", "B3"])
def test_two_arg_maps_and_galois_identity(structures, name):
    s, probes = structures[name]
    *_, rep = two_arg_maps(s, probes)
    assert rep.ok
    assert check_galois_identity(s, probes).ok
    r = s.unit
    # with unit arguments the two-argument maps are the one-argument ones
    assert s.delta2(r, r).mat == s.delta(r).mat
    assert s.mu2(r, r).mat == s.mu(r).mat


@pytest.mark.parametrize("name,differs", [("B1", False), ("B2", True), ("B3", True), ("B4", True)])
def test_compatibility_and_witness(structures, name, differs):
    s, _ = structures[name]
    assert check_compatibility_diagram(s).ok
    w = coherence_failure_witness(s)
    assert (w.status == PASS) == differs


def galois_oracle(b):
    """e_i (x) e_j -> e_j (x) e_i e_j for a grouplike basis, from the table."""
    d, p = b.H.dim, b.p
    cols = []
    for i, j in itertools.product(range(d), repeat=2):
        prod = [int(b.H.table.entry(r, i * d + j)) for r in range(d)]
        cols.append([int(a == j) * prod[c] for a in range(d) for c in range(d)])
    return Mat.from_rows([list(r) for r in zip(*cols)], p)


@pytest.mark.parametrize("name,rank_", [("B2", 4), ("B3", 3)])
def test_gamma_rrr_is_the_galois_map(structures, bgds, name, rank_):
    from skewmon.exactlin import rank

    s, _ = structures[name]
    w = coherence_failure_witness(s)
    oracle = galois_oracle(bgds[name])
    assert w.witness["rhs"] == oracle
    assert rank(oracle) == rank_
    assert w.witness["lhs"] != oracle


def test_identity_functor_is_right_monoidal(structures):
    s, probes = structures["B2"]
    f = identity_functor(s)
    assert check_skewmon_functor(f, probes).ok
    phi, rep = monad_morphism_from_functor(f, probes)
    assert rep.ok
    assert phi(s.unit).mat.is_identity()


@pytest.mark.parametrize("name", ["B2", "B4"])
def test_dual_involution(structures, name):
    s, probes = structures[name]
    assert dualize(dualize(s)) is s
    assert check_involution(s, ProbeSet(probes.objects[:1] + probes.objects[2:], probes.maps[-1:])).ok


def test_dual_of_tensor_structure_is_right_monoidal():
    s, probes = tensor_probes()
    assert check_smc(dualize(s), probes).ok


def test_shape_error_is_not_verified(structures):
    s, probes = structures["B2"]
    bad = MutatedStructure(s, eta=lambda e, m: Mat.zeros(e.rows + 1, e.cols, e.p))
    rep = check_smc(bad, ProbeSet([s.unit]))
    assert any(c.status == NOT_VERIFIED for c in rep.by_id("SMC2"))
