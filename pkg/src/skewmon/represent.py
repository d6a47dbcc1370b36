"""Bimonads, fusion operators, tetrahedral maps and representability.

A monoidal category (bimodules with a tensor product over R) is wrapped as a
right-monoidal structure whose structure maps are the inverse associator,
the inverse left unitor and the right unitor, so every law below can be
written with the same ``compose``/``lw``/``rw`` vocabulary as the skew side.

The certificate chain for a right-monoidal structure ``s`` and a candidate
``w_{M,N}: M (x) TN -> M * N``:

    w invertible, normalized, heptagon and tetragon
      -> tetrahedral map t (and back to w)
      -> opmonoidal structure on T (a bimonad) and its fusion operator
      -> induced structure M (x) TN and the twist w from it to s.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .exactlin import Mat, ShapeError, factor_through_epi, inverse, is_invertible, kron, permute_factors, rank
from .report import FAIL, NOT_VERIFIED, PASS, Check, Report
from .ringmod import Bimodule, BimodMap, BimoduleTensor
from .skewcat import (
    DualStructure,
    ProbeSet,
    SkewMonStructure,
    _guarded,
    _label,
    check_smc,
    compose,
    identity,
)


# ---------------------------------------------------------------------------
# monoidal categories as right-monoidal structures


class MonoidalAsSkew(SkewMonStructure):
    """(x)_R with gamma = associator L(MN) -> (LM)N, eta = lunit^-1, eps = runit."""

    def __init__(self, t: BimoduleTensor):
        super().__init__(t.unit)
        self.t = t
        self.name = f"tensor({t.alg.name})"

    def _prod(self, m, n):
        return self.t.prod(m, n)

    def _prod_map(self, f, g):
        return self.t.prod_map(f, g).mat

    def _gamma(self, l, m, n):
        tp = self.t.tp
        lm, mn = tp(l, m), tp(m, n)
        src, tgt = tp(l, mn.obj), tp(lm.obj, n)
        x = kron(l.identity(), mn.sect) @ src.sect  # into L, M, N
        return tgt.proj @ kron(lm.proj, n.identity()) @ x

    def _eta(self, m):
        d = self.t.tp(self.unit, m)
        return d.proj @ kron(self.t.alg.unit, m.identity())

    def _eps(self, m):
        return self.t.runit(m).mat

    def runit_inv(self, m: Bimodule) -> BimodMap:
        d = self.t.tp(m, self.unit)
        return BimodMap(d.proj @ kron(m.identity(), self.t.alg.unit), m, d.obj)


class OppositeMonoidal(SkewMonStructure):
    """The same tensor product on the opposite category, product order kept.

    Arrows X -> Y are stored as transposes of Y -> X as in the op-rev dual,
    so gamma is the transposed associator (LM)N -> L(MN), eta the transposed
    left unitor and eps the transposed inverse right unitor.
    """

    def __init__(self, mon: MonoidalAsSkew):
        super().__init__(mon.unit)
        self.mon = mon
        self.name = f"op({mon.name})"

    def _prod(self, m, n):
        return self.mon.prod(m, n)

    def _prod_map(self, f, g):
        f0 = BimodMap(f.mat.T, f.target, f.source)
        g0 = BimodMap(g.mat.T, g.target, g.source)
        return self.mon.prod_map(f0, g0).mat.T

    def _gamma(self, l, m, n):
        return self.mon.t.assoc(l, m, n).mat.T

    def _eta(self, m):
        return self.mon.t.lunit(m).mat.T

    def _eps(self, m):
        return self.mon.runit_inv(m).mat.T


def bimodule_tensor(s: SkewMonStructure) -> MonoidalAsSkew:
    """(x)_R sharing the unit object of ``s``."""
    return MonoidalAsSkew(BimoduleTensor(s.unit.right_alg, unit=s.unit))


# ---------------------------------------------------------------------------
# bimonads and fusion operators


@dataclass(eq=False)
class Bimonad:
    """An opmonoidal monad (O, omega, iota; O2, O0) on ``mon``."""

    mon: SkewMonStructure
    obj: Callable[[Bimodule], Bimodule]
    arrow: Callable[[BimodMap], BimodMap]
    mult: Callable[[Bimodule], BimodMap]
    unit: Callable[[Bimodule], BimodMap]
    O2: Callable[[Bimodule, Bimodule], BimodMap]
    O0: BimodMap
    name: str = "O"
    factor: Bimodule | None = None  # H when O = - (x) H


@dataclass(eq=False)
class FusionOperator:
    """h_{M,N}: O(M (x) ON) -> OM (x) ON on the monad (O, omega, iota), with O0."""

    mon: SkewMonStructure
    obj: Callable[[Bimodule], Bimodule]
    arrow: Callable[[BimodMap], BimodMap]
    mult: Callable[[Bimodule], BimodMap]
    unit: Callable[[Bimodule], BimodMap]
    h: Callable[[Bimodule, Bimodule], BimodMap]
    O0: BimodMap
    name: str = "h"


def _memo2(fn):
    """Cache a two-object family by identity, keeping the operands alive."""
    store: dict = {}

    def get(m, n):
        key = (id(m), id(n))
        if key not in store:
            store[key] = (m, n, fn(m, n))
        return store[key][2]

    return get


def identity_bimonad(mon: SkewMonStructure) -> Bimonad:
    return Bimonad(
        mon, lambda x: x, lambda f: f, identity, identity,
        lambda m, n: identity(mon.prod(m, n)), identity(mon.unit), "id",
    )


def bialgebra_bimonad(b, mon: MonoidalAsSkew) -> Bimonad:
    """O = - (x) H for a bialgebra over k: m (x) n (x) h -> (m (x) h1) (x) (n (x) h2).

    Built directly from the structure constants, independently of any
    right-monoidal structure, for comparison with the bimonad obtained from w.
    """
    if b.R.dim != 1:
        raise ValueError("bialgebra_bimonad needs a bialgebroid over the ground field")
    p, dh = b.p, b.H.dim
    r = mon.unit
    hk = Bimodule("H", dh, r.left_alg, r.right_alg, [Mat.identity(dh, p)], [Mat.identity(dh, p)])
    tp = mon.t.tp

    def obj(m):
        return mon.prod(m, hk)

    def arrow(f):
        return mon.rw(f, hk)

    def mult(m):
        inner, outer = tp(m, hk), tp(obj(m), hk)
        x = kron(inner.sect, b.H.identity()) @ outer.sect  # M, H, H
        return BimodMap(inner.proj @ kron(m.identity(), b.H.table) @ x, outer.obj, inner.obj)

    def unit(m):
        d = tp(m, hk)
        return BimodMap(d.proj @ kron(m.identity(), b.H.unit), m, d.obj)

    def o2(m, n):
        mn = tp(m, n)
        src = tp(mn.obj, hk)
        om, on = tp(m, hk), tp(n, hk)
        tgt = tp(om.obj, on.obj)
        x = kron(mn.sect, b.H.identity()) @ src.sect  # M, N, H
        x = kron(Mat.identity(m.dim * n.dim, p), b.delta) @ x  # M, N, H, H
        x = permute_factors(x, [m.dim, n.dim, dh, dh], [0, 2, 1, 3])  # M, H, N, H
        return BimodMap(tgt.proj @ kron(om.proj, on.proj) @ x, src.obj, tgt.obj)

    d = tp(r, hk)
    o0 = BimodMap(kron(r.identity(), b.counit) @ d.sect, d.obj, r)
    return Bimonad(mon, obj, arrow, mult, unit, _memo2(o2), o0, f"-(x){b.H.name}", hk)


def check_monad_part(o: Bimonad | FusionOperator, probes: ProbeSet) -> Report:
    rep = Report()
    for m in probes.objects:
        om = o.obj(m)
        sub = _label(m)
        _guarded(rep, "MONAD.O", "assoc" + sub, lambda: (
            compose(o.mult(m), o.arrow(o.mult(m))), compose(o.mult(m), o.mult(om))
        ))
        _guarded(rep, "MONAD.O", "unit_left" + sub, lambda: (compose(o.mult(m), o.unit(om)), identity(om)))
        _guarded(rep, "MONAD.O", "unit_right" + sub, lambda: (
            compose(o.mult(m), o.arrow(o.unit(m))), identity(om)
        ))
    return rep


def check_bimonad(o: Bimonad, probes: ProbeSet, triples: Sequence[tuple] | None = None) -> Report:
    """Monad laws and the seven opmonoidality equations on probes."""
    t = o.mon
    r = t.unit
    objs = probes.objects
    rep = check_monad_part(o, probes)
    if triples is None:
        triples = list(itertools.product(objs, repeat=3))
    for l, m, n in triples:
        ol, om, on = o.obj(l), o.obj(m), o.obj(n)
        _guarded(rep, "opmon1", _label(l, m, n), lambda: (
            compose(t.gamma(ol, om, on), t.lw(ol, o.O2(m, n)), o.O2(l, t.prod(m, n))),
            compose(t.rw(o.O2(l, m), on), o.O2(t.prod(l, m), n), o.arrow(t.gamma(l, m, n))),
        ))
    for m, n in itertools.product(objs, repeat=2):
        om, on = o.obj(m), o.obj(n)
        sub = _label(m, n)
        _guarded(rep, "opmon4", sub, lambda: (
            compose(t.prod_map(o.mult(m), o.mult(n)), o.O2(om, on), o.arrow(o.O2(m, n))),
            compose(o.O2(m, n), o.mult(t.prod(m, n))),
        ))
        _guarded(rep, "opmon6", sub, lambda: (
            compose(o.O2(m, n), o.unit(t.prod(m, n))), t.prod_map(o.unit(m), o.unit(n))
        ))
    for m in objs:
        om = o.obj(m)
        _guarded(rep, "opmon2", _label(m), lambda: (
            compose(t.rw(o.O0, om), o.O2(r, m), o.arrow(t.eta(m))), t.eta(om)
        ))
        _guarded(rep, "opmon3", _label(m), lambda: (
            compose(t.eps(om), t.lw(om, o.O0), o.O2(m, r)), o.arrow(t.eps(m))
        ))
    _guarded(rep, "opmon5", _label(r), lambda: (compose(o.O0, o.mult(r)), compose(o.O0, o.arrow(o.O0))))
    _guarded(rep, "opmon7", _label(r), lambda: (compose(o.O0, o.unit(r)), identity(r)))
    return rep


def fusion_from_bimonad(o: Bimonad) -> FusionOperator:
    """h_{M,N} = (OM (x) omega_N) . O^{M,ON}."""
    t = o.mon

    def h(m, n):
        return compose(t.lw(o.obj(m), o.mult(n)), o.O2(m, o.obj(n)))

    return FusionOperator(t, o.obj, o.arrow, o.mult, o.unit, _memo2(h), o.O0, f"h({o.name})")


def bimonad_from_fusion(f: FusionOperator) -> Bimonad:
    """O^{M,N} = h_{M,N} . O(M (x) iota_N)."""
    t = f.mon

    def o2(m, n):
        return compose(f.h(m, n), f.arrow(t.lw(m, f.unit(n))))

    return Bimonad(t, f.obj, f.arrow, f.mult, f.unit, _memo2(o2), f.O0, f"O({f.name})")


def check_fusion(f: FusionOperator, probes: ProbeSet, triples: Sequence[tuple] | None = None) -> Report:
    """H0-H6 on probes."""
    t = f.mon
    r = t.unit
    objs = probes.objects
    rep = Report()
    if triples is None:
        triples = list(itertools.product(objs, repeat=3))
    for l, m, n in triples:
        ol, om, on = f.obj(l), f.obj(m), f.obj(n)
        _guarded(rep, "H1", _label(l, m, n), lambda: (
            compose(
                t.rw(f.h(l, m), on),
                f.h(t.prod(l, om), n),
                f.arrow(t.gamma(l, om, on)),
                f.arrow(t.lw(l, f.h(m, n))),
            ),
            compose(t.gamma(ol, om, on), t.lw(ol, f.h(m, n)), f.h(l, t.prod(m, on))),
        ))
    for m, n in itertools.product(objs, repeat=2):
        om, on = f.obj(m), f.obj(n)
        sub = _label(m, n)
        _guarded(rep, "H0", sub, lambda: (
            compose(t.lw(om, f.mult(n)), f.h(m, on)), compose(f.h(m, n), f.arrow(t.lw(m, f.mult(n))))
        ))
        _guarded(rep, "H2", sub, lambda: (
            compose(f.h(m, n), f.unit(t.prod(m, on))), t.rw(f.unit(m), on)
        ))
        _guarded(rep, "H5", sub, lambda: (
            compose(t.rw(f.mult(m), on), f.h(om, n), f.arrow(f.h(m, n))),
            compose(f.h(m, n), f.mult(t.prod(m, on))),
        ))
    for m in objs:
        om = f.obj(m)
        _guarded(rep, "H3", _label(m), lambda: (
            compose(t.rw(f.O0, om), f.h(r, m), f.arrow(t.eta(om))), compose(t.eta(om), f.mult(m))
        ))
        _guarded(rep, "H4", _label(m), lambda: (
            compose(t.eps(om), t.lw(om, f.O0), f.h(m, r)),
            compose(f.arrow(t.eps(m)), f.arrow(t.lw(m, f.O0))),
        ))
    _guarded(rep, "H6", _label(r), lambda: (compose(f.O0, f.unit(r)), identity(r)))
    return rep


def check_fusion_roundtrips(o: Bimonad, f: FusionOperator, probes: ProbeSet) -> Report:
    """O -> h -> O and h -> O -> h, compared exactly on probe pairs."""
    rep = Report()
    o_back = bimonad_from_fusion(fusion_from_bimonad(o))
    h_back = fusion_from_bimonad(bimonad_from_fusion(f))
    for m, n in itertools.product(probes.objects, repeat=2):
        sub = _label(m, n)
        _guarded(rep, "FUSION.roundtrip_O", sub, lambda: (o_back.O2(m, n), o.O2(m, n)))
        _guarded(rep, "FUSION.roundtrip_h", sub, lambda: (h_back.h(m, n), f.h(m, n)))
    return rep


# ---------------------------------------------------------------------------
# the structure induced by a bimonad


class BimonadInduced(SkewMonStructure):
    """M . N = M (x) ON with the associator built from O2 and omega."""

    def __init__(self, o: Bimonad):
        super().__init__(o.mon.unit)
        self.o = o
        self.name = f"induced({o.name})"

    def _prod(self, m, n):
        return self.o.mon.prod(m, self.o.obj(n))

    def _prod_map(self, f, g):
        return self.o.mon.prod_map(f, self.o.arrow(g)).mat

    def _gamma(self, l, m, n):
        o, t = self.o, self.o.mon
        om, on = o.obj(m), o.obj(n)
        return compose(t.gamma(l, om, on), t.lw(l, t.lw(om, o.mult(n))), t.lw(l, o.O2(m, on))).mat

    def _eta(self, m):
        o = self.o
        return compose(o.mon.eta(o.obj(m)), o.unit(m)).mat

    def _eps(self, m):
        o = self.o
        return compose(o.mon.eps(m), o.mon.lw(m, o.O0)).mat


def _relabel(rep: Report, check_id: str, prefix: str = "") -> Report:
    out = Report()
    for c in rep:
        out.add(Check(check_id, f"{prefix}{c.check_id}{c.subject}", c.status, c.detail, c.witness))
    return out


def induced_structure_from_bimonad(o: Bimonad, probes: ProbeSet, quads=None) -> tuple[BimonadInduced, Report]:
    """The induced structure, its five axioms and the monad morphism O -> T."""
    s = BimonadInduced(o)
    t = o.mon
    rep = _relabel(check_smc(s, probes, quads), "BIMONAD.induced")
    for n in probes.objects:
        on = o.obj(n)
        tn = s.T(n)
        _guarded(rep, "BIMONAD.monad_morphism", "mult" + _label(n), lambda: (
            compose(s.mu(n), t.eta(o.obj(tn)), o.arrow(t.eta(on))), compose(t.eta(on), o.mult(n))
        ))
        _guarded(rep, "BIMONAD.monad_morphism", "unit" + _label(n), lambda: (
            s.eta(n), compose(t.eta(on), o.unit(n))
        ))
    return s, rep


# ---------------------------------------------------------------------------
# w and tetrahedral maps


class TwistIso:
    """A family w_{M,N}: M (x) TN -> M * N with cached inverses.

    ``hook(mat, m, n)`` post-processes components (used for corruption tests).
    """

    def __init__(self, s: SkewMonStructure, mon: SkewMonStructure, build, hook=None, name: str = "w"):
        self.s, self.mon = s, mon
        self._build = build
        self._hook = hook
        self.name = name
        self._store: dict = {}

    def _entry(self, m, n):
        key = (id(m), id(n))
        if key not in self._store:
            f = self._build(m, n)
            if self._hook is not None:
                f = BimodMap(self._hook(f.mat, m, n), f.source, f.target)
            self._store[key] = [m, n, f, None]
        return self._store[key]

    def __call__(self, m: Bimodule, n: Bimodule) -> BimodMap:
        return self._entry(m, n)[2]

    def invertible(self, m: Bimodule, n: Bimodule) -> bool:
        return is_invertible(self(m, n).mat)

    def inv(self, m: Bimodule, n: Bimodule) -> BimodMap:
        e = self._entry(m, n)
        if e[3] is None:
            f = e[2]
            if not is_invertible(f.mat):
                raise ShapeError(f"{self.name}{_label(m, n)} is not invertible (rank {rank(f.mat)})")
            e[3] = BimodMap(inverse(f.mat), f.target, f.source)
        return e[3]


def canonical_w(s, mon: SkewMonStructure) -> TwistIso:
    """m (x) [r, n, h] -> [m r, n, h] for a bialgebroid-induced structure.

    Normalized: at M = R it is the left unitor of TN.
    """

    def build(m, n):
        tn = s.T(n)
        tp = mon.t.tp(m, tn)
        dt = s.pd(tn)
        d = s.pd(s.prod(m, n))
        x = kron(m.identity(), dt.sect) @ tp.sect  # M, R, N, H
        x = kron(m.right_action_map(), Mat.identity(dt.dims[1] * dt.dims[2], s.p)) @ x
        return BimodMap(d.proj @ x, tp.obj, s.prod(m, n))

    return TwistIso(s, mon, build, name="w")


def quotient_w(sq, v: TwistIso, mon: SkewMonStructure, descent: Report | None = None) -> TwistIso:
    """The unique w^q with w^q . (M (x) q_{R,N}) = q_{M,N} . v_{M,N}."""

    def build(m, n):
        epi = mon.lw(m, sq.q(sq.unit, n))
        f = compose(sq.q(m, n), v(m, n))
        x = factor_through_epi(f.mat, epi.mat)
        ok = x is not None and rank(epi.mat) == epi.mat.rows
        if descent is not None:
            descent.truth("W.descend", _label(m, n), ok, "" if ok else "v does not descend to the quotient")
        if x is None:
            x = Mat.zeros(f.mat.rows, epi.mat.rows, sq.p)
        return BimodMap(x, epi.target, sq.prod(m, n))

    return TwistIso(sq, mon, build, name="w_q")


def check_w(w: TwistIso, probes: ProbeSet, triples: Sequence[tuple] | None = None) -> Report:
    """Invertibility by rank, normalization, heptagon and tetragon."""
    s, t = w.s, w.mon
    r = s.unit
    objs = probes.objects
    rep = Report()
    for m, n in itertools.product(objs, repeat=2):
        x = w(m, n).mat
        rep.truth("W.invertible", _label(m, n), is_invertible(x), f"rank {rank(x)} of {x.rows}x{x.cols}")
    for n in objs:
        _guarded(rep, "W.normalized", _label(n), lambda: (
            compose(w(r, n), t.eta(s.T(n))), identity(s.T(n))
        ))
    rep.extend(check_heptagon_tetragon(w, probes, triples))
    return rep


def check_heptagon_tetragon(w: TwistIso, probes: ProbeSet, triples: Sequence[tuple] | None = None) -> Report:
    s, t = w.s, w.mon
    r = s.unit
    objs = probes.objects
    rep = Report()
    if triples is None:
        triples = list(itertools.product(objs, repeat=3))
    for l, m, n in triples:
        tm, tn = s.T(m), s.T(n)
        _guarded(rep, "HEPTAGON", _label(l, m, n), lambda: (
            compose(
                s.rw(w(l, m), n),
                w(t.prod(l, tm), n),
                t.gamma(l, tm, tn),
                t.lw(l, w.inv(tm, n)),
                t.lw(l, s.gamma(r, m, n)),
            ),
            compose(s.gamma(l, m, n), w(l, s.prod(m, n))),
        ))
    for m in objs:
        _guarded(rep, "TETRAGON", _label(m), lambda: (
            compose(s.eps(m), w(m, r)), compose(t.eps(m), t.lw(m, s.eps(r)))
        ))
    return rep


@dataclass(eq=False)
class TetrahedralHom:
    """t_{L,M,N}: L (x) (M * N) -> (L (x) M) * N."""

    s: SkewMonStructure
    mon: SkewMonStructure
    t: Callable[[Bimodule, Bimodule, Bimodule], BimodMap]


def tet_from_w(w: TwistIso) -> TetrahedralHom:
    """t = w_{L(x)M,N} . assoc_{L,M,TN} . (L (x) w^-1_{M,N})."""
    s, mon = w.s, w.mon

    def t(l, m, n):
        return compose(w(mon.prod(l, m), n), mon.gamma(l, m, s.T(n)), mon.lw(l, w.inv(m, n)))

    return TetrahedralHom(s, mon, t)


def w_from_tet(th: TetrahedralHom) -> TwistIso:
    """w_{M,N} = (runit_M * N) . t_{M,R,N}."""
    s, mon = th.s, th.mon
    return TwistIso(s, mon, lambda m, n: compose(s.rw(mon.eps(m), n), th.t(m, s.unit, n)), name="w(t)")


def check_tetrahedral(th: TetrahedralHom, probes: ProbeSet, quads: Sequence[tuple] | None = None) -> Report:
    """The two pentagons and the unit and counit triangles."""
    s, t, tt = th.s, th.mon, th.t
    r = s.unit
    objs = probes.objects
    rep = Report()
    if quads is None:
        quads = list(itertools.product(objs, repeat=4))
    for k, l, m, n in quads:
        sub = _label(k, l, m, n)
        _guarded(rep, "TET.P*", sub, lambda: (
            compose(s.rw(t.gamma(k, l, m), n), tt(k, t.prod(l, m), n), t.lw(k, tt(l, m, n))),
            compose(tt(t.prod(k, l), m, n), t.gamma(k, l, s.prod(m, n))),
        ))
        _guarded(rep, "TET.P**", sub, lambda: (
            compose(s.rw(tt(k, l, m), n), tt(k, s.prod(l, m), n), t.lw(k, s.gamma(l, m, n))),
            compose(s.gamma(t.prod(k, l), m, n), tt(k, l, s.prod(m, n))),
        ))
    for m, n in itertools.product(objs, repeat=2):
        sub = _label(m, n)
        _guarded(rep, "TET.unit", sub, lambda: (
            compose(tt(r, m, n), t.eta(s.prod(m, n))), s.rw(t.eta(m), n)
        ))
        _guarded(rep, "TET.counit", sub, lambda: (
            compose(s.eps(t.prod(m, n)), tt(m, n, r)), t.lw(m, s.eps(n))
        ))
    return rep


def check_tet_roundtrip(w: TwistIso, probes: ProbeSet, triples: Sequence[tuple] | None = None) -> Report:
    """w -> t -> w on pairs and t -> w -> t on triples."""
    rep = Report()
    th = tet_from_w(w)
    w2 = w_from_tet(th)
    th2 = tet_from_w(w2)
    objs = probes.objects
    for m, n in itertools.product(objs, repeat=2):
        _guarded(rep, "TET.roundtrip", "w" + _label(m, n), lambda: (w2(m, n), w(m, n)))
    if triples is None:
        triples = list(itertools.product(objs, repeat=3))
    for l, m, n in triples:
        _guarded(rep, "TET.roundtrip", "t" + _label(l, m, n), lambda: (th2.t(l, m, n), th.t(l, m, n)))
    return rep


# ---------------------------------------------------------------------------
# the bimonad T from w


def fusion_from_w(w: TwistIso) -> FusionOperator:
    """h_{M,N} = w^-1_{TM,N} . gamma_{R,M,N} . T(w_{M,N})."""
    s, t = w.s, w.mon

    def h(m, n):
        return compose(w.inv(s.T(m), n), s.gamma(s.unit, m, n), s.T_map(w(m, n)))

    return FusionOperator(t, s.T, s.T_map, s.mu, s.eta, _memo2(h), s.eps(s.unit), f"h({w.name})")


def opmonoidal_T_from_w(w: TwistIso) -> Bimonad:
    """T^{M,N} = w^-1_{TM,N} . gamma_{R,M,N} . T(w_{M,N}) . T(M (x) eta_N), T^0 = eps_R."""
    s, t = w.s, w.mon

    def o2(m, n):
        return compose(
            w.inv(s.T(m), n), s.gamma(s.unit, m, n), s.T_map(w(m, n)), s.T_map(t.lw(m, s.eta(n)))
        )

    return Bimonad(t, s.T, s.T_map, s.mu, s.eta, _memo2(o2), s.eps(s.unit), f"T({w.name})")


def check_twist(src: SkewMonStructure, tgt: SkewMonStructure, v, probes: ProbeSet,
                triples: Sequence[tuple] | None = None) -> Report:
    """v_{M,N}: M .src N -> M .tgt N against gamma, eta and eps."""
    rep = Report()
    r = tgt.unit
    objs = probes.objects
    if triples is None:
        triples = list(itertools.product(objs, repeat=3))
    for l, m, n in triples:
        _guarded(rep, "twist1", _label(l, m, n), lambda: (
            compose(v(tgt.prod(l, m), n), src.rw(v(l, m), n), src.gamma(l, m, n)),
            compose(tgt.gamma(l, m, n), v(l, tgt.prod(m, n)), src.lw(l, v(m, n))),
        ))
    for m in objs:
        _guarded(rep, "twist2", _label(m), lambda: (compose(v(r, m), src.eta(m)), tgt.eta(m)))
        _guarded(rep, "twist3", _label(m), lambda: (src.eps(m), compose(tgt.eps(m), v(m, r))))
    return rep


# ---------------------------------------------------------------------------
# pipeline


STAGES = ("w", "tetrahedral", "bimonad", "fusion", "induced", "twist")


@dataclass
class Verdict:
    status: str  # "representable", "homomorphism-only" or "not-verified"
    first_failure: str | None
    report: Report
    stages: dict = field(default_factory=dict)
    bimonad: Bimonad | None = None
    induced: SkewMonStructure | None = None

    @property
    def ok(self) -> bool:
        return self.status == "representable"

    def as_dict(self) -> dict:
        return {
            "verdict": self.status,
            "first_failure": self.first_failure,
            "stages": {k: v for k, v in self.stages.items()},
            "summary": self.report.summary(),
        }


def representability_pipeline(
    w: TwistIso,
    probes: ProbeSet,
    triples: Sequence[tuple] | None = None,
    quads: Sequence[tuple] | None = None,
    verdict_id: str = "REPR.verdict",
) -> Verdict:
    """Run the certificate chain for the candidate ``w``.

    ``triples`` restricts the three-object checks, ``quads`` the pentagons
    (default: all 4-tuples of probes for SMC1, R only for the tetrahedral
    pentagons, which are implied by the heptagon).
    """
    s = w.s
    rep = Report()
    stages: dict[str, str] = {}
    first = None

    def stage(name, sub: Report):
        nonlocal first
        rep.extend(sub)
        ok = sub.ok
        stages[name] = PASS if ok else FAIL
        if not ok and first is None:
            bad = sub.failures()[0]
            first = f"{bad.check_id} {bad.subject}"
        return ok

    stage("w", check_w(w, probes, triples))
    inv_ok = rep.passed("W.invertible")
    bimonad = induced = None
    if inv_ok:
        tquads = quads if quads is not None else [(s.unit,) * 4]
        th = tet_from_w(w)
        sub = check_tetrahedral(th, probes, tquads)
        sub.extend(check_tet_roundtrip(w, probes, triples))
        stage("tetrahedral", sub)

        bimonad = opmonoidal_T_from_w(w)
        sub = check_bimonad(bimonad, probes, triples)
        sub.add(Check("TW.T0", _label(s.unit), PASS if bimonad.O0.mat == s.eps(s.unit).mat else FAIL))
        stage("bimonad", sub)

        fw = fusion_from_w(w)
        sub = check_fusion(fw, probes, triples)
        sub.extend(check_fusion_roundtrips(bimonad, fw, probes))
        stage("fusion", sub)

        induced, sub = induced_structure_from_bimonad(bimonad, probes, quads)
        stage("induced", sub)
        stage("twist", check_twist(induced, s, w, probes, triples))
    else:
        for name in STAGES[1:]:
            stages[name] = NOT_VERIFIED
    if rep.ok:
        status = "representable"
    elif not inv_ok:
        status = "homomorphism-only" if rep.passed("HEPTAGON") and rep.passed("TETRAGON") else "not-verified"
    else:
        status = "not-verified"
    rep.add(Check(verdict_id, s.name, PASS if status == "representable" else FAIL,
                  status if first is None else f"{status}: first failure {first}"))
    return Verdict(status, first, rep, stages, bimonad, induced)


def bialgebroid_representability(b, probes: ProbeSet | None = None, quotient: bool | None = None, **kw) -> Verdict:
    """The pipeline for a bialgebroid-induced structure with its canonical w.

    Over R = k the structure itself is tested against (x)_k; otherwise the
    quotient structure on bimodules is tested against (x)_R, and the emitted
    bimonad is compared with N (x)_{R^e} H.
    """
    from .bialgebroid import induced_skewmon, standard_probes
    from .ebimod import quotient_structure, tq_as_tensor

    if quotient is None:
        quotient = b.R.dim > 1
    base = induced_skewmon(b, bimodule_unit=quotient)
    mon = bimodule_tensor(base)
    v = canonical_w(base, mon)
    probes = probes or standard_probes(b, base)
    if not quotient:
        return representability_pipeline(v, probes, **kw)
    sq = quotient_structure(base)
    descent = Report()
    wq = quotient_w(sq, v, mon, descent)
    out = representability_pipeline(wq, probes, **kw)
    extra = Report(descent.checks)
    extra.extend(sq.factor)
    extra.extend(tq_as_tensor(sq, b, probes))
    out.report.checks[-1:-1] = extra.checks
    out.stages["quotient"] = PASS if extra.ok else FAIL
    if not extra.ok:
        out.status = "not-verified"
        bad = extra.failures()[0]
        out.first_failure = out.first_failure or f"{bad.check_id} {bad.subject}"
        out.report.checks[-1] = Check("REPR.verdict", sq.name, FAIL, f"not-verified: first failure {out.first_failure}")
    return out


def compare_bialgebra_bimonad(b, w: TwistIso, probes: ProbeSet) -> Report:
    """T^{M,N} from w against - (x) H with the comultiplication, through N (x) H = TN."""
    s, mon = w.s, w.mon
    o = opmonoidal_T_from_w(w)
    hb = bialgebra_bimonad(b, mon)
    rep = Report()

    def phi(n):
        # N (x) H -> R (x) N (x) H -> TN
        src = mon.t.tp(n, hb.factor)
        d = s.pd(s.T(n))
        return BimodMap(d.proj @ kron(b.R.unit, Mat.identity(n.dim * b.H.dim, s.p)) @ src.sect, src.obj, s.T(n))

    for m, n in itertools.product(probes.objects, repeat=2):
        mn = mon.prod(m, n)
        _guarded(rep, "TW.compare", _label(m, n), lambda: (
            compose(o.O2(m, n), phi(mn)), compose(mon.prod_map(phi(m), phi(n)), hb.O2(m, n))
        ))
    for n in probes.objects:
        _guarded(rep, "TW.compare", "mult" + _label(n), lambda: (
            compose(o.mult(n), s.T_map(phi(n)), phi(hb.obj(n))), compose(phi(n), hb.mult(n))
        ))
    _guarded(rep, "TW.compare", "O0", lambda: (compose(o.O0, phi(s.unit)), hb.O0))
    return rep


# ---------------------------------------------------------------------------
# corepresentability


def flip_w_dual(s, mon: MonoidalAsSkew) -> TwistIso:
    """Candidate for the op-rev dual over R = k: [n, m, h] -> m (x) [n, 1, h].

    As an arrow of the original category it is N * M -> M (x) QN; the dual
    stores its transpose.
    """
    if s.b.R.dim != 1:
        raise ValueError("the flip candidate needs a bialgebroid over the ground field")
    d = DualStructure(s)
    op = OppositeMonoidal(mon)
    dh, p = s.b.H.dim, s.p

    def build(m, n):
        nm = s.pd(s.prod(n, m))
        qn = s.Q(n)
        dq = s.pd(qn)
        tp = mon.t.tp(m, qn)
        x = nm.sect  # N, M, H
        x = permute_factors(x, [n.dim, m.dim, dh], [1, 0, 2])  # M, N, H
        x = kron(m.identity(), kron(kron(Mat.identity(n.dim, p), s.b.R.unit), Mat.identity(dh, p))) @ x
        x = kron(m.identity(), dq.proj) @ x
        e = tp.proj @ x  # N * M -> M (x) QN
        return BimodMap(e.T, tp.obj, d.prod(m, n))

    return TwistIso(d, op, build, name="w_dual")


def corepresentability_by_duality(
    w_dual: TwistIso,
    probes: ProbeSet,
    triples: Sequence[tuple] | None = None,
    quads: Sequence[tuple] | None = None,
) -> Verdict:
    """Run the pipeline on the op-rev dual and translate the monoidal comonad back.

    On success the comonad data Q_{M,N}: QM (x) QN -> Q(M (x) N) and Q_0 = eta_R
    are recomputed in the original category from w and compared with the
    transposed bimonad data of the dual.
    """
    out = representability_pipeline(w_dual, probes, triples, quads, verdict_id="COREPR.verdict")
    d = w_dual.s
    if not isinstance(d, DualStructure) or out.bimonad is None:
        return out
    s = d.base
    mon = w_dual.mon.mon
    r = s.unit

    def w(m, n):  # N * M -> M (x) QN in the original category
        f = w_dual(m, n)
        return BimodMap(f.mat.T, f.target, f.source)

    def winv(m, n):
        f = w_dual.inv(m, n)
        return BimodMap(f.mat.T, f.target, f.source)

    rep = Report()
    for m, n in itertools.product(probes.objects, repeat=2):
        def both(m=m, n=n):
            h = compose(s.Q_map(w(m, n)), s.gamma(n, m, r), winv(s.Q(m), n))
            direct = compose(s.Q_map(mon.lw(m, s.eps(n))), h)
            dual = out.bimonad.O2(m, n)
            return direct, BimodMap(dual.mat.T, dual.target, dual.source)

        _guarded(rep, "COREPR.comonad", _label(m, n), both)
    rep.equal("COREPR.comonad", "Q0", s.eta(r).mat, out.bimonad.O0.mat.T)
    out.report.checks[-1:-1] = rep.checks
    out.stages["comonad"] = PASS if rep.ok else FAIL
    if not rep.ok and out.status == "representable":
        out.status = "not-verified"
        out.report.checks[-1] = Check("COREPR.verdict", d.name, FAIL, "not-verified: comonad translation")
    out.status = {"representable": "corepresentable"}.get(out.status, out.status)
    return out
