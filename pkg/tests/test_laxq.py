import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewmon.ebimod import center, free_qcomodule
from skewmon.laxq import (
    LaxComonad, MonotoneMap, all_monotone, build_laxQ, check_decompose, check_degenerate, check_lax_monoidal,
    check_laxcomodule, check_simplicial, compose_all, decompose, monoidal_Qn, phi_hat,
)
from skewmon.ringmod import free_bimodule


def test_decompose_examples():
    f = MonotoneMap(3, 2, (0, 0, 1))
    assert decompose(f) == [MonotoneMap.merge(0, 1)]
    assert MonotoneMap.merge(0, 1).values == (0, 0, 1)
    g = MonotoneMap(1, 3, (1,))
    parts = decompose(g)
    assert parts == [MonotoneMap.insert(0, 1), MonotoneMap.insert(2, 0)]
    assert compose_all(parts, 1) == g
    assert decompose(MonotoneMap.identity(3)) == []


def test_monotone_validation():
    with pytest.raises(ValueError):
        MonotoneMap(2, 2, (1, 0))
    with pytest.raises(ValueError):
        MonotoneMap(1, 2, (2,))
    with pytest.raises(ValueError):
        MonotoneMap(2, 2, (0,))


@pytest.mark.parametrize("m,n", [(0, 0), (0, 3), (2, 2), (3, 2), (2, 4), (4, 3)])
def test_monotone_count(m, n):
    # multisets of size m from n values
    expected = comb(n + m - 1, m) if n else int(m == 0)
    assert len(list(all_monotone(m, n))) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.integers(1, 5), st.data())
def test_decompose_reconstructs(m, n, data):
    vals = tuple(sorted(data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))))
    f = MonotoneMap(m, n, vals)
    parts = decompose(f)
    assert compose_all(parts, m) == f
    assert all(e.elementary() for e in parts)
    # merges come first and their number is the collapse in size
    merges = [e for e in parts if e.elementary()[0] == "merge"]
    assert len(merges) == m - len(set(vals))
    assert parts[: len(merges)] == merges


def test_check_decompose():
    assert check_decompose(3).ok


@pytest.fixture(scope="module")
def b4_lax(structures, bgds):
    s, _ = structures["B4"]
    f = free_bimodule(bgds["B4"].R).renamed("F")
    return s, build_laxQ(s, 3), [s.unit, f]


def test_degenerate_case_is_iterated_Q(structures):
    s, _ = structures["B2"]
    lq = LaxComonad(s, 3)
    r = s.unit
    assert check_degenerate(lq, [r]).ok
    assert [lq.Q(r, n).dim for n in range(4)] == [1, 2, 4, 8]


def test_b4_levels_agree_with_center(b4_lax):
    s, lq, objs = b4_lax
    for m in objs:
        assert lq.Q(m, 0).dim == m.dim
        assert lq.Q(m, 1).dim == center(s, m, s.unit).obj.dim
        assert lq.equalizer_crosscheck(m, 2).ok
    # Q_n R is represented by R^{(x)(n+1)}, of dimension 2^{n+1}
    assert [lq.Q(s.unit, n).dim for n in range(4)] == [2, 4, 8, 16]


def test_b4_cosimplicial_and_nu(b4_lax):
    s, lq, objs = b4_lax
    rep = check_simplicial(lq, objs)
    assert rep.ok
    assert {"COSIMP.delta_delta", "COSIMP.eps_eps", "COSIMP.eps_delta"} <= rep.ids()
    rep = check_lax_monoidal(lq, objs)
    assert rep.ok
    assert {"NU.unit", "NU.assoc", "NU.natural_delta", "NU.natural_eps"} <= rep.ids()
    assert lq.report.ok


def test_phi_hat_on_free_comodules(b4_lax):
    s, lq, objs = b4_lax
    for m in objs:
        lifted, rep = phi_hat(lq, free_qcomodule(s, m))
        assert rep.ok
        assert rep.passed("PHIHAT.roundtrip")
        assert check_laxcomodule(lq, lifted).ok


@pytest.mark.parametrize("name", ["B2", "B4"])
def test_qn_monoidal(bgds, structures, name):
    s, _ = structures[name]
    objs = [s.unit] + ([free_bimodule(bgds[name].R).renamed("F")] if name == "B4" else [])
    qm, rep = monoidal_Qn(bgds[name], 2, objs, s)
    assert rep.ok, sorted(rep.failed_ids())
    for cid in ("QN.compare", "QN.assoc", "QN.unit", "QN.delta_square", "QN.eps_square", "QN.nu_square"):
        assert rep.passed(cid), cid
