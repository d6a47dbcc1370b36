import pytest

from skewmon.bialgebroid import b2, induced_skewmon, standard_probes
from skewmon.exactlin import Mat
from skewmon.represent import (
    Bimonad, TwistIso, bialgebra_bimonad, bialgebroid_representability, bimodule_tensor, bimonad_from_fusion,
    canonical_w, check_bimonad, check_fusion, check_fusion_roundtrips, check_heptagon_tetragon, check_monad_part,
    check_tet_roundtrip, check_tetrahedral, check_twist, check_w, compare_bialgebra_bimonad,
    corepresentability_by_duality, flip_w_dual, fusion_from_bimonad, fusion_from_w, identity_bimonad,
    opmonoidal_T_from_w, representability_pipeline, tet_from_w,
)
from skewmon.skewcat import ProbeSet, identity


@pytest.fixture(scope="module")
def b2_setup():
    b = b2()
    s = induced_skewmon(b)
    mon = bimodule_tensor(s)
    return b, s, mon, standard_probes(b, s)


def zero_row(mat, m, n):
    rows = mat.tolist()
    rows[0] = [0] * mat.cols
    return Mat.from_rows(rows, mat.p, ncols=mat.cols)


def test_identity_bimonad(b2_setup):
    b, s, mon, probes = b2_setup
    o = identity_bimonad(mon)
    assert check_bimonad(o, probes).ok
    f = fusion_from_bimonad(o)
    assert check_fusion(f, probes).ok
    assert check_fusion_roundtrips(o, f, probes).ok


def test_bialgebra_bimonad_direct(b2_setup):
    b, s, mon, probes = b2_setup
    o = bialgebra_bimonad(b, mon)
    assert check_monad_part(o, probes).ok
    rep = check_bimonad(o, probes)
    assert rep.ok
    assert {f"opmon{i}" for i in range(1, 8)} <= rep.ids()
    assert o.obj(s.unit).dim == b.H.dim


def test_corrupted_O0_fails_opmon7(b2_setup):
    b, s, mon, probes = b2_setup
    o = bialgebra_bimonad(b, mon)
    bad = Bimonad(o.mon, o.obj, o.arrow, o.mult, o.unit, o.O2,
                  type(o.O0)(o.O0.mat.scale(2), o.O0.source, o.O0.target), "O0*2", o.factor)
    failed = check_bimonad(bad, probes).failed_ids()
    assert "opmon7" in failed
    assert "opmon1" not in failed


def test_canonical_w_certificate_chain(b2_setup):
    b, s, mon, probes = b2_setup
    w = canonical_w(s, mon)
    rep = check_w(w, probes)
    assert rep.ok and {"W.invertible", "W.normalized", "HEPTAGON", "TETRAGON"} <= rep.ids()
    assert check_tetrahedral(tet_from_w(w), probes, [(s.unit,) * 4]).ok
    assert check_tet_roundtrip(w, probes).ok
    o = opmonoidal_T_from_w(w)
    assert check_bimonad(o, probes).ok
    # the bimonad from w is the bialgebra bimonad - (x) H, built independently
    assert compare_bialgebra_bimonad(b, w, probes).ok


def test_fusion_roundtrips_exact(b2_setup):
    b, s, mon, probes = b2_setup
    w = canonical_w(s, mon)
    o = opmonoidal_T_from_w(w)
    f = fusion_from_w(w)
    rep = check_fusion_roundtrips(o, f, probes)
    assert rep.passed("FUSION.roundtrip_O") and rep.passed("FUSION.roundtrip_h")
    back = bimonad_from_fusion(fusion_from_bimonad(o))
    r = s.unit
    assert back.O2(r, r).mat == o.O2(r, r).mat


def test_mutated_fusion_breaks_roundtrip(b2_setup):
    b, s, mon, probes = b2_setup
    w = canonical_w(s, mon)
    o = opmonoidal_T_from_w(w)
    f = fusion_from_w(w)
    honest = f.h

    def bumped(m, n):
        # a scalar multiple would survive the roundtrip, which is linear in h
        g = honest(m, n)
        bump = Mat.unit_vector(g.mat.rows, 0, g.mat.p) @ Mat.unit_vector(g.mat.cols, g.mat.cols - 1, g.mat.p).T
        return type(g)(g.mat + bump, g.source, g.target)

    f.h = bumped
    assert not check_fusion(f, probes).ok
    assert not check_fusion_roundtrips(o, f, probes).passed("FUSION.roundtrip_h")


def test_mutated_w_fails_heptagon(b2_setup):
    b, s, mon, probes = b2_setup
    r = s.unit
    honest = canonical_w(s, mon)

    def hook(mat, m, n):
        if m is r and n is r:
            return mat.scale(2)
        return mat

    bad = TwistIso(s, mon, lambda m, n: honest(m, n), hook=hook, name="w*2")
    rep = check_heptagon_tetragon(bad, probes)
    assert "HEPTAGON" in rep.failed_ids()
    v = representability_pipeline(bad, probes)
    assert v.status != "representable"
    assert v.first_failure is not None


def test_non_invertible_w_is_not_representable(b2_setup):
    b, s, mon, probes = b2_setup
    honest = canonical_w(s, mon)
    bad = TwistIso(s, mon, lambda m, n: honest(m, n), hook=zero_row, name="w0")
    v = representability_pipeline(bad, probes)
    assert v.status in ("homomorphism-only", "not-verified")
    assert v.stages["tetrahedral"] == "not-verified"


@pytest.mark.parametrize("name", ["B1", "B2", "B3"])
def test_representability_verdicts(bgds, name):
    v = bialgebroid_representability(bgds[name])
    assert v.status == "representable"
    assert all(x == "pass" for x in v.stages.values())
    d = v.as_dict()
    assert d["verdict"] == "representable" and d["first_failure"] is None


def test_twist_against_itself_is_identity(b2_setup):
    b, s, mon, probes = b2_setup
    assert check_twist(s, s, lambda m, n: identity(s.prod(m, n)), probes).ok


def test_corepresentability(b2_setup):
    b, s, mon, probes = b2_setup
    v = corepresentability_by_duality(flip_w_dual(s, mon), probes)
    assert v.status == "corepresentable"
    assert v.report.passed("COREPR.comonad")


def test_corepresentability_with_non_invertible_dual_w(b2_setup):
    b, s, mon, probes = b2_setup
    honest = flip_w_dual(s, mon)
    bad = TwistIso(honest.s, honest.mon, lambda m, n: honest(m, n), hook=zero_row, name="w_dual0")
    v = corepresentability_by_duality(bad, probes)
    assert v.status != "corepresentable"
    assert not v.report.passed("COREPR.verdict")


def test_flip_needs_ground_field(bgds, structures):
    s, _ = structures["B4"]
    with pytest.raises(ValueError):
        flip_w_dual(s, bimodule_tensor(s))
