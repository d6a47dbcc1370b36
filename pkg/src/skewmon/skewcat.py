"""Right-monoidal (skew-monoidal) structures evaluated as exact matrices.

A structure supplies the product of two objects, the product of two arrows,
and the components of gamma, eta and eps.  Everything else in this module is
derived from those five evaluators: the canonical monad ``T = R * -`` and
comonad ``Q = - * R``, the distributive law between them, two-argument
variants, and the checks of every law on a finite probe set.

Arrows are :class:`BimodMap` values; ``compose(f, g, h)`` means ``f . g . h``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .exactlin import Mat, ShapeError
from .report import FAIL, NOT_VERIFIED, PASS, Check, Report
from .ringmod import Bimodule, BimodMap


def compose(*fs: BimodMap) -> BimodMap:
    """f0 . f1 . ... . fn (rightmost applied first)."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        if f.source.dim != out.target.dim:
            raise ShapeError(
                f"cannot compose {f.source.name}->{f.target.name} after {out.source.name}->{out.target.name}"
            )
        out = BimodMap(f.mat @ out.mat, out.source, f.target)
    return out


def identity(m: Bimodule) -> BimodMap:
    return BimodMap(m.identity(), m, m)


# ---------------------------------------------------------------------------
# structures


class SkewMonStructure:
    """Base class.  Subclasses implement the five ``_``-prefixed evaluators."""

    name = "skew"

    def __init__(self, unit: Bimodule):
        self.unit = unit
        self._prods: dict = {}
        self._cache: dict = {}

    @property
    def p(self) -> int:
        return self.unit.p

    # evaluators to override -------------------------------------------------
    def _prod(self, m: Bimodule, n: Bimodule) -> Bimodule:
        raise NotImplementedError

    def _prod_map(self, f: BimodMap, g: BimodMap) -> Mat:
        raise NotImplementedError

    def _gamma(self, l: Bimodule, m: Bimodule, n: Bimodule) -> Mat:
        raise NotImplementedError

    def _eta(self, m: Bimodule) -> Mat:
        raise NotImplementedError

    def _eps(self, m: Bimodule) -> Mat:
        raise NotImplementedError

    # cached public interface ------------------------------------------------
    def prod(self, m: Bimodule, n: Bimodule) -> Bimodule:
        key = (id(m), id(n))
        hit = self._prods.get(key)
        if hit is None:
            # keep the operands alive so their ids stay unique
            hit = (m, n, self._prod(m, n))
            self._prods[key] = hit
        return hit[2]

    def prod_map(self, f: BimodMap, g: BimodMap) -> BimodMap:
        src = self.prod(f.source, g.source)
        tgt = self.prod(f.target, g.target)
        return BimodMap(self._prod_map(f, g), src, tgt)

    def _cached(self, key, build):
        hit = self._cache.get(key)
        if hit is None:
            hit = build()
            self._cache[key] = hit
        return hit[-1]

    def gamma(self, l: Bimodule, m: Bimodule, n: Bimodule) -> BimodMap:
        def build():
            src = self.prod(l, self.prod(m, n))
            tgt = self.prod(self.prod(l, m), n)
            return (l, m, n, BimodMap(self._gamma(l, m, n), src, tgt))

        return self._cached(("gamma", id(l), id(m), id(n)), build)

    def eta(self, m: Bimodule) -> BimodMap:
        return self._cached(
            ("eta", id(m)), lambda: (m, BimodMap(self._eta(m), m, self.prod(self.unit, m)))
        )

    def eps(self, m: Bimodule) -> BimodMap:
        return self._cached(
            ("eps", id(m)), lambda: (m, BimodMap(self._eps(m), self.prod(m, self.unit), m))
        )

    # whiskering -------------------------------------------------------------
    def lw(self, m: Bimodule, g: BimodMap) -> BimodMap:
        """M * g."""
        return self.prod_map(identity(m), g)

    def rw(self, f: BimodMap, n: Bimodule) -> BimodMap:
        """f * N."""
        return self.prod_map(f, identity(n))

    # canonical monad and comonad ---------------------------------------------
    def T(self, m: Bimodule) -> Bimodule:
        return self.prod(self.unit, m)

    def Q(self, m: Bimodule) -> Bimodule:
        return self.prod(m, self.unit)

    def T_map(self, f: BimodMap) -> BimodMap:
        return self.lw(self.unit, f)

    def Q_map(self, f: BimodMap) -> BimodMap:
        return self.rw(f, self.unit)

    def mu(self, m: Bimodule) -> BimodMap:
        """(eps_R * M) . gamma_{R,R,M}: TTM -> TM."""
        r = self.unit
        return compose(self.rw(self.eps(r), m), self.gamma(r, r, m))

    def delta(self, m: Bimodule) -> BimodMap:
        """gamma_{M,R,R} . (M * eta_R): QM -> QQM."""
        r = self.unit
        return compose(self.gamma(m, r, r), self.lw(m, self.eta(r)))

    def chi(self, m: Bimodule) -> BimodMap:
        """gamma_{R,M,R}: TQM -> QTM."""
        return self.gamma(self.unit, m, self.unit)

    # two-argument maps ------------------------------------------------------
    def delta2(self, k: Bimodule, l: Bimodule) -> BimodMap:
        """gamma_{K,R,L} . (K * eta_L): K*L -> QK*L."""
        return compose(self.gamma(k, self.unit, l), self.lw(k, self.eta(l)))

    def mu2(self, k: Bimodule, l: Bimodule) -> BimodMap:
        """(eps_K * L) . gamma_{K,R,L}: K*TL -> K*L."""
        return compose(self.rw(self.eps(k), l), self.gamma(k, self.unit, l))

    def sigma(self, l: Bimodule, m: Bimodule, n: Bimodule) -> BimodMap:
        """((L*M) * eta_N) . gamma_{L,M,N} . (eps_L * (M*N)): QL*(M*N) -> (L*M)*TN."""
        return compose(
            self.lw(self.prod(l, m), self.eta(n)),
            self.gamma(l, m, n),
            self.rw(self.eps(l), self.prod(m, n)),
        )


class TensorStructure(SkewMonStructure):
    """Plain tensor product over k with identity structure maps.

    Used for the one-dimensional ground case, where every comparison map is
    the identity.  Products are k-vector spaces with trivial actions.
    """

    name = "tensor-k"

    def _prod(self, m, n):
        from .ringmod import vector_space

        return vector_space(m.dim * n.dim, self.p, f"({m.name}.{n.name})")

    def _prod_map(self, f, g):
        from .exactlin import kron

        return kron(f.mat, g.mat)

    def _gamma(self, l, m, n):
        return Mat.identity(l.dim * m.dim * n.dim, self.p)

    def _eta(self, m):
        return Mat.identity(m.dim, self.p)

    def _eps(self, m):
        return Mat.identity(m.dim, self.p)


class MutatedStructure(SkewMonStructure):
    """A structure whose gamma/eta/eps components are post-processed.

    Each hook receives the honest matrix plus the objects and returns the
    corrupted one.  Used to confirm that checks name the broken law.
    """

    def __init__(self, base: SkewMonStructure, gamma=None, eta=None, eps=None, label: str = "mutated"):
        super().__init__(base.unit)
        self.base = base
        self.name = f"{base.name}:{label}"
        self._hooks = {"gamma": gamma, "eta": eta, "eps": eps}

    def prod(self, m, n):
        return self.base.prod(m, n)

    def _prod_map(self, f, g):
        return self.base.prod_map(f, g).mat

    def _gamma(self, l, m, n):
        g = self.base.gamma(l, m, n).mat
        hook = self._hooks["gamma"]
        return hook(g, l, m, n) if hook else g

    def _eta(self, m):
        e = self.base.eta(m).mat
        hook = self._hooks["eta"]
        return hook(e, m) if hook else e

    def _eps(self, m):
        e = self.base.eps(m).mat
        hook = self._hooks["eps"]
        return hook(e, m) if hook else e


class DualStructure(SkewMonStructure):
    """The op-rev dual: M *' N = N * M with every arrow reversed.

    A dual arrow X -> Y is stored as the transpose of the original arrow
    Y -> X, so composition in the dual is ordinary matrix composition.
    gamma'_{L,M,N} is gamma_{N,M,L} reversed; eta' and eps' swap roles.
    """

    def __init__(self, base: SkewMonStructure):
        super().__init__(base.unit)
        self.base = base
        self.name = f"oprev({base.name})"

    def prod(self, m, n):
        return self.base.prod(n, m)

    def _prod_map(self, f, g):
        f0 = BimodMap(f.mat.T, f.target, f.source)
        g0 = BimodMap(g.mat.T, g.target, g.source)
        return self.base.prod_map(g0, f0).mat.T

    def _gamma(self, l, m, n):
        return self.base.gamma(n, m, l).mat.T

    def _eta(self, m):
        return self.base.eps(m).mat.T

    def _eps(self, m):
        return self.base.eta(m).mat.T


def dualize(s: SkewMonStructure) -> SkewMonStructure:
    """op-rev dual; applying it twice gives back the original on every probe."""
    if isinstance(s, DualStructure):
        return s.base
    return DualStructure(s)


def dual_arrow(f: BimodMap) -> BimodMap:
    return BimodMap(f.mat.T, f.target, f.source)


# ---------------------------------------------------------------------------
# probes


@dataclass
class ProbeSet:
    """Finite stand-in for "all objects": objects plus arrows among them."""

    objects: list[Bimodule]
    maps: list[BimodMap] = field(default_factory=list)

    def names(self) -> list[str]:
        return [o.name for o in self.objects]


def _label(*objs: Bimodule) -> str:
    return "(" + ",".join(o.name for o in objs) + ")"


def _guarded(rep: Report, check_id: str, subject: str, thunk: Callable[[], tuple[BimodMap, BimodMap]]):
    """Record lhs == rhs; a shape problem becomes not-verified, not a failure."""
    try:
        lhs, rhs = thunk()
    except ShapeError as exc:
        rep.add(Check(check_id, subject, NOT_VERIFIED, f"structural error: {exc}"))
        return
    rep.equal(check_id, subject, lhs.mat, rhs.mat)


# ---------------------------------------------------------------------------
# axiom checks


def check_smc(s: SkewMonStructure, probes: ProbeSet, quads: Sequence[tuple] | None = None) -> Report:
    """The five right-monoidal axioms on probe tuples."""
    rep = Report()
    r = s.unit
    objs = probes.objects
    if quads is None:
        quads = list(itertools.product(objs, repeat=4))
    for k, l, m, n in quads:

        def smc1(k=k, l=l, m=m, n=n):
            lhs = compose(
                s.rw(s.gamma(k, l, m), n),
                s.gamma(k, s.prod(l, m), n),
                s.lw(k, s.gamma(l, m, n)),
            )
            rhs = compose(s.gamma(s.prod(k, l), m, n), s.gamma(k, l, s.prod(m, n)))
            return lhs, rhs

        _guarded(rep, "SMC1", _label(k, l, m, n), smc1)
    for m, n in itertools.product(objs, repeat=2):
        mn = s.prod(m, n)
        _guarded(
            rep, "SMC2", _label(m, n),
            lambda: (compose(s.gamma(r, m, n), s.eta(mn)), s.rw(s.eta(m), n)),
        )
        _guarded(
            rep, "SMC3", _label(m, n),
            lambda: (compose(s.eps(mn), s.gamma(m, n, r)), s.lw(m, s.eps(n))),
        )
        _guarded(
            rep, "SMC4", _label(m, n),
            lambda: (
                compose(s.rw(s.eps(m), n), s.gamma(m, r, n), s.lw(m, s.eta(n))),
                identity(mn),
            ),
        )
    _guarded(rep, "SMC5", _label(r), lambda: (compose(s.eps(r), s.eta(r)), identity(r)))
    return rep


def check_naturality(s: SkewMonStructure, probes: ProbeSet, others: Sequence[Bimodule] | None = None) -> Report:
    """Naturality of gamma, eta, eps and bifunctoriality of the product.

    Each probe map is placed in each slot in turn; the remaining slots range
    over ``others`` (default: the unit only).
    """
    rep = Report()
    others = list(others) if others is not None else [s.unit]
    for f in probes.maps:
        a, b = f.source, f.target
        tag = f"{a.name}->{b.name}"
        for x, y in itertools.product(others, repeat=2):
            sub = f"{tag}@{_label(x, y)}"
            _guarded(rep, "NAT.gamma", "L:" + sub, lambda: (
                compose(s.gamma(b, x, y), s.prod_map(f, identity(s.prod(x, y)))),
                compose(s.rw(s.rw(f, x), y), s.gamma(a, x, y)),
            ))
            _guarded(rep, "NAT.gamma", "M:" + sub, lambda: (
                compose(s.gamma(x, b, y), s.lw(x, s.rw(f, y))),
                compose(s.rw(s.lw(x, f), y), s.gamma(x, a, y)),
            ))
            _guarded(rep, "NAT.gamma", "N:" + sub, lambda: (
                compose(s.gamma(x, y, b), s.lw(x, s.lw(y, f))),
                compose(s.lw(s.prod(x, y), f), s.gamma(x, y, a)),
            ))
        _guarded(rep, "NAT.eta", tag, lambda: (compose(s.eta(b), f), compose(s.T_map(f), s.eta(a))))
        _guarded(rep, "NAT.eps", tag, lambda: (compose(s.eps(b), s.Q_map(f)), compose(f, s.eps(a))))
        # bifunctoriality: (f*1).(1*g) = (1*g).(f*1) = f*g
        for g in probes.maps:
            sub = f"{tag},{g.source.name}->{g.target.name}"
            _guarded(rep, "FUNCT.prod", sub, lambda: (
                compose(s.rw(f, g.target), s.lw(a, g)),
                s.prod_map(f, g),
            ))
            _guarded(rep, "FUNCT.prod", "swap:" + sub, lambda: (
                compose(s.lw(b, g), s.rw(f, g.source)),
                s.prod_map(f, g),
            ))
    for o in probes.objects:
        _guarded(rep, "FUNCT.prod", f"identity{_label(o, o)}", lambda: (
            s.prod_map(identity(o), identity(o)), identity(s.prod(o, o))
        ))
    return rep


@dataclass
class Monad:
    obj: Callable[[Bimodule], Bimodule]
    arrow: Callable[[BimodMap], BimodMap]
    mult: Callable[[Bimodule], BimodMap]
    unit: Callable[[Bimodule], BimodMap]


def canonical_monad(s: SkewMonStructure) -> Monad:
    """T = R * - with mu_M = (eps_R * M) . gamma_{R,R,M} and eta."""
    return Monad(s.T, s.T_map, s.mu, s.eta)


def canonical_comonad(s: SkewMonStructure) -> Monad:
    """Q = - * R with delta_M = gamma_{M,R,R} . (M * eta_R) and eps."""
    return Monad(s.Q, s.Q_map, s.delta, s.eps)


def check_monad_laws(s: SkewMonStructure, probes: ProbeSet) -> Report:
    rep = Report()
    for m in probes.objects:
        tm = s.T(m)
        sub = _label(m)
        _guarded(rep, "SMC10", sub, lambda: (compose(s.mu(m), s.eta(tm)), identity(tm)))
        _guarded(rep, "SMC11", sub, lambda: (compose(s.mu(m), s.T_map(s.eta(m))), identity(tm)))
        _guarded(rep, "MONAD.assoc", sub, lambda: (
            compose(s.mu(m), s.T_map(s.mu(m))), compose(s.mu(m), s.mu(tm))
        ))
    return rep


def check_comonad_laws(s: SkewMonStructure, probes: ProbeSet) -> Report:
    rep = Report()
    for m in probes.objects:
        qm = s.Q(m)
        sub = _label(m)
        _guarded(rep, "SMC12", sub, lambda: (compose(s.eps(qm), s.delta(m)), identity(qm)))
        _guarded(rep, "SMC13", sub, lambda: (compose(s.Q_map(s.eps(m)), s.delta(m)), identity(qm)))
        _guarded(rep, "COMONAD.coassoc", sub, lambda: (
            compose(s.Q_map(s.delta(m)), s.delta(m)), compose(s.delta(qm), s.delta(m))
        ))
    return rep


def distributive_law(s: SkewMonStructure, probes: ProbeSet) -> tuple[Callable[[Bimodule], BimodMap], Report]:
    """chi_M = gamma_{R,M,R} together with its four compatibility checks."""
    rep = Report()
    for m in probes.objects:
        sub = _label(m)
        tm, qm = s.T(m), s.Q(m)
        _guarded(rep, "SMC14", sub, lambda: (
            compose(s.Q_map(s.mu(m)), s.chi(tm), s.T_map(s.chi(m))),
            compose(s.chi(m), s.mu(qm)),
        ))
        _guarded(rep, "SMC15", sub, lambda: (
            compose(s.Q_map(s.chi(m)), s.chi(qm), s.T_map(s.delta(m))),
            compose(s.delta(tm), s.chi(m)),
        ))
        _guarded(rep, "SMC16", sub, lambda: (compose(s.chi(m), s.eta(qm)), s.Q_map(s.eta(m))))
        _guarded(rep, "SMC17", sub, lambda: (compose(s.eps(tm), s.chi(m)), s.T_map(s.eps(m))))
    return s.chi, rep


def two_arg_maps(s: SkewMonStructure, probes: ProbeSet):
    """Evaluators for delta_{K,L}, mu_{K,L}, sigma_{L,M,N} and their relations."""
    rep = Report()
    for k, l in itertools.product(probes.objects, repeat=2):
        sub = _label(k, l)
        kl = s.prod(k, l)
        _guarded(rep, "TWO.delta_coassoc", sub, lambda: (
            compose(s.delta2(s.Q(k), l), s.delta2(k, l)),
            compose(s.rw(s.delta(k), l), s.delta2(k, l)),
        ))
        _guarded(rep, "TWO.delta_counit", sub, lambda: (
            compose(s.rw(s.eps(k), l), s.delta2(k, l)), identity(kl)
        ))
        _guarded(rep, "TWO.mu_assoc", sub, lambda: (
            compose(s.mu2(k, l), s.mu2(k, s.T(l))),
            compose(s.mu2(k, l), s.lw(k, s.mu(l))),
        ))
        _guarded(rep, "TWO.mu_unit", sub, lambda: (
            compose(s.mu2(k, l), s.lw(k, s.eta(l))), identity(kl)
        ))
    return s.delta2, s.mu2, s.sigma, rep


def check_galois_identity(s: SkewMonStructure, probes: ProbeSet) -> Report:
    """mu_{QM,N} . delta_{M,TN} = gamma_{M,R,N} on probe pairs."""
    rep = Report()
    for m, n in itertools.product(probes.objects, repeat=2):
        _guarded(rep, "GALOIS.identity", _label(m, n), lambda: (
            compose(s.mu2(s.Q(m), n), s.delta2(m, s.T(n))),
            s.gamma(m, s.unit, n),
        ))
    return rep


def compatibility_paths(s: SkewMonStructure) -> dict[str, BimodMap]:
    """Both paths of the compatibility hexagon at R and the second-row composite."""
    r = s.unit
    rr = s.prod(r, r)
    q2r = s.Q(rr)  # (R*R)*R
    t2r = s.prod(r, rr)  # R*(R*R)
    direct = compose(s.delta(r), s.mu(r))
    around = compose(
        s.rw(s.mu(r), r),
        s.mu2(t2r, r),
        s.sigma(r, rr, r),
        s.delta2(r, q2r),
        s.lw(r, s.delta(r)),
    )
    row = compose(s.rw(s.mu(r), r), s.gamma(r, rr, r), s.lw(r, s.delta(r)))
    return {"direct": direct, "around": around, "row": row, "gamma": s.gamma(r, r, r)}


def check_compatibility_diagram(s: SkewMonStructure) -> Report:
    rep = Report()
    try:
        paths = compatibility_paths(s)
    except ShapeError as exc:
        rep.add(Check("COMPAT.hexagon", "(R)", NOT_VERIFIED, f"structural error: {exc}"))
        return rep
    rep.equal("COMPAT.hexagon", "(R)", paths["direct"].mat, paths["around"].mat)
    rep.equal("COMPAT.chi_row", "(R)", paths["direct"].mat, paths["row"].mat)
    return rep


def coherence_failure_witness(s: SkewMonStructure) -> Check:
    """Passes when delta_R . mu_R and gamma_{R,R,R} differ (no coherence theorem)."""
    paths = compatibility_paths(s)
    differs = paths["direct"].mat != paths["gamma"].mat
    return Check(
        "COMPAT.witness",
        "(R)",
        PASS if differs else FAIL,
        "matrices differ" if differs else "matrices coincide",
        {"lhs": paths["direct"].mat, "rhs": paths["gamma"].mat},
    )


def check_all(s: SkewMonStructure, probes: ProbeSet, quads=None) -> Report:
    """Every structure-level law on the given probes."""
    rep = Report()
    rep.extend(check_smc(s, probes, quads))
    rep.extend(check_naturality(s, probes))
    rep.extend(check_monad_laws(s, probes))
    rep.extend(check_comonad_laws(s, probes))
    rep.extend(distributive_law(s, probes)[1])
    rep.extend(two_arg_maps(s, probes)[3])
    rep.extend(check_galois_identity(s, probes))
    rep.extend(check_compatibility_diagram(s))
    return rep.sorted()


def check_involution(s: SkewMonStructure, probes: ProbeSet) -> Report:
    """op-rev applied twice agrees with the original on probe components."""
    rep = Report()
    dd = DualStructure(DualStructure(s))
    objs = probes.objects
    for l, m, n in itertools.product(objs, repeat=3):
        rep.equal("DUAL.involution", "gamma" + _label(l, m, n), dd.gamma(l, m, n).mat, s.gamma(l, m, n).mat)
    for m in objs:
        rep.equal("DUAL.involution", "eta" + _label(m), dd.eta(m).mat, s.eta(m).mat)
        rep.equal("DUAL.involution", "eps" + _label(m), dd.eps(m).mat, s.eps(m).mat)
    for f in probes.maps:
        for g in probes.maps:
            rep.equal(
                "DUAL.involution",
                f"prod({f.source.name}->{f.target.name},{g.source.name}->{g.target.name})",
                dd.prod_map(f, g).mat,
                s.prod_map(f, g).mat,
            )
    return rep


# ---------------------------------------------------------------------------
# functors between structures


@dataclass
class SkewMonFunctorData:
    """A right-monoidal functor (F, F_2, F_0) from ``source`` to ``target``.

    ``F2(X, Y)`` is the arrow FX *' FY -> F(X * Y) in the target structure and
    ``F0`` is R' -> FR.
    """

    source: SkewMonStructure
    target: SkewMonStructure
    obj: Callable[[Bimodule], Bimodule]
    arrow: Callable[[BimodMap], BimodMap]
    F2: Callable[[Bimodule, Bimodule], BimodMap]
    F0: BimodMap


@dataclass
class OpmonFunctorData:
    """A right-opmonoidal functor: F^{X,Y}: F(X * Y) -> FX *' FY and F^0: FR -> R'."""

    source: SkewMonStructure
    target: SkewMonStructure
    obj: Callable[[Bimodule], Bimodule]
    arrow: Callable[[BimodMap], BimodMap]
    F2: Callable[[Bimodule, Bimodule], BimodMap]
    F0: BimodMap


def identity_functor(s: SkewMonStructure) -> SkewMonFunctorData:
    return SkewMonFunctorData(
        s, s, lambda x: x, lambda f: f, lambda x, y: identity(s.prod(x, y)), identity(s.unit)
    )


def check_skewmon_functor(f: SkewMonFunctorData, probes: ProbeSet) -> Report:
    rep = Report()
    s, t = f.source, f.target
    objs = probes.objects
    for x, y, z in itertools.product(objs, repeat=3):
        fx, fy, fz = f.obj(x), f.obj(y), f.obj(z)
        _guarded(rep, "smf1", _label(x, y, z), lambda: (
            compose(f.arrow(s.gamma(x, y, z)), f.F2(x, s.prod(y, z)), t.lw(fx, f.F2(y, z))),
            compose(f.F2(s.prod(x, y), z), t.rw(f.F2(x, y), fz), t.gamma(fx, fy, fz)),
        ))
    for x in objs:
        fx = f.obj(x)
        _guarded(rep, "smf2", _label(x), lambda: (
            compose(f.F2(s.unit, x), t.rw(f.F0, fx), t.eta(fx)),
            f.arrow(s.eta(x)),
        ))
        _guarded(rep, "smf3", _label(x), lambda: (
            compose(f.arrow(s.eps(x)), f.F2(x, s.unit), t.lw(fx, f.F0)),
            t.eps(fx),
        ))
    return rep


def check_monoidal_nat(
    nu: Callable[[Bimodule], BimodMap],
    f: SkewMonFunctorData,
    g: SkewMonFunctorData,
    probes: ProbeSet,
) -> Report:
    """nu: F => G with nu_{X*Y}.F_{X,Y} = G_{X,Y}.(nu_X * nu_Y) and nu_R.F_0 = G_0."""
    rep = Report()
    s, t = f.source, f.target
    for x, y in itertools.product(probes.objects, repeat=2):
        _guarded(rep, "MNAT.product", _label(x, y), lambda: (
            compose(nu(s.prod(x, y)), f.F2(x, y)),
            compose(g.F2(x, y), t.prod_map(nu(x), nu(y))),
        ))
    _guarded(rep, "MNAT.unit", _label(s.unit), lambda: (compose(nu(s.unit), f.F0), g.F0))
    return rep


def monad_morphism_from_functor(f: SkewMonFunctorData, probes: ProbeSet):
    """phi_M = F_{R,M} . (F_0 * FM): T'FM -> FTM with its two monad-morphism laws."""
    s, t = f.source, f.target

    def phi(m: Bimodule) -> BimodMap:
        return compose(f.F2(s.unit, m), t.rw(f.F0, f.obj(m)))

    rep = Report()
    for m in probes.objects:
        fm = f.obj(m)
        _guarded(rep, "MM.mult", _label(m), lambda: (
            compose(f.arrow(s.mu(m)), phi(s.T(m)), t.T_map(phi(m))),
            compose(phi(m), t.mu(fm)),
        ))
        _guarded(rep, "MM.unit", _label(m), lambda: (f.arrow(s.eta(m)), compose(phi(m), t.eta(fm))))
    return phi, rep


def comonad_morphism_from_functor(f: OpmonFunctorData, probes: ProbeSet):
    """psi_M = (FM *' F^0) . F^{M,R}: FQM -> Q'FM with its two comonad-morphism laws."""
    s, t = f.source, f.target

    def psi(m: Bimodule) -> BimodMap:
        return compose(t.lw(f.obj(m), f.F0), f.F2(m, s.unit))

    rep = Report()
    for m in probes.objects:
        fm = f.obj(m)
        _guarded(rep, "CM.comult", _label(m), lambda: (
            compose(t.Q_map(psi(m)), psi(s.Q(m)), f.arrow(s.delta(m))),
            compose(t.delta(fm), psi(m)),
        ))
        _guarded(rep, "CM.counit", _label(m), lambda: (compose(t.eps(fm), psi(m)), f.arrow(s.eps(m))))
    return psi, rep
