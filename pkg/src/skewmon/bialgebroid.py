"""Right bialgebroids and the right-monoidal structure they induce on modules.

For a right R-bialgebroid H the product of right R-modules is

    M * N = M (x)_{R1} (N (x)_{R2} H)

where R2 tensors N against left multiplication by s(r) and R1 tensors M
against right multiplication by t(r).  The product is a right module through
right multiplication by s(r).  Elements are written [m, n, h].

Every map on a product is first written on the ambient space M (x) N (x) H
and then pushed through the quotient.  The ambient formula is checked to kill
every balancing relation before it is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exactlin import (
    Mat,
    ShapeError,
    apply_block,
    apply_factor,
    hstack,
    inverse,
    is_invertible,
    kron,
    permutation_matrix,
    permute_factors,
    rank,
    vstack,
)
from .report import FAIL, NOT_VERIFIED, PASS, Check, Report
from .ringmod import (
    Algebra,
    Bimodule,
    BimodMap,
    balanced_quotient,
    bimodule_sum,
    check_algebra,
    enveloping,
    opposite,
    right_regular,
    tensor_algebra,
    trivial_algebra,
)
from .skewcat import ProbeSet, SkewMonStructure


@dataclass(eq=False)
class RightBialgebroid:
    name: str
    R: Algebra
    H: Algebra
    s: Mat  # dim H x dim R
    t: Mat  # dim H x dim R
    delta: Mat  # dim H^2 x dim H, a lift of the coproduct to H (x)_k H
    counit: Mat  # dim R x dim H
    _acts: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        dr, dh = self.R.dim, self.H.dim
        for label, m, shape in (
            ("s", self.s, (dh, dr)),
            ("t", self.t, (dh, dr)),
            ("Delta", self.delta, (dh * dh, dh)),
            ("counit", self.counit, (dr, dh)),
        ):
            if m.shape != shape:
                raise ShapeError(f"bialgebroid.{label}: shape {m.shape}, expected {shape}")

    @property
    def p(self) -> int:
        return self.H.p

    def _actions(self, which: str) -> list[Mat]:
        if which not in self._acts:
            rb = [self.R.basis(i) for i in range(self.R.dim)]
            make = {
                "lambda1": lambda r: self.H.rmul(self.t @ r),
                "rho1": lambda r: self.H.lmul(self.t @ r),
                "lambda2": lambda r: self.H.lmul(self.s @ r),
                "rho2": lambda r: self.H.rmul(self.s @ r),
            }[which]
            self._acts[which] = [make(r) for r in rb]
        return self._acts[which]

    # the four actions of R on H, one matrix per basis element of R
    @property
    def lambda1(self) -> list[Mat]:
        """h -> h t(r)"""
        return self._actions("lambda1")

    @property
    def rho1(self) -> list[Mat]:
        """h -> t(r) h"""
        return self._actions("rho1")

    @property
    def lambda2(self) -> list[Mat]:
        """h -> s(r) h"""
        return self._actions("lambda2")

    @property
    def rho2(self) -> list[Mat]:
        """h -> h s(r)"""
        return self._actions("rho2")

    def coring_square(self):
        """H (x)_{R1} H: balanced by h s(r) (x) h' = h (x) h' t(r)."""
        if "sq1" not in self._acts:
            rels = [(0, self.rho2[i], self.lambda1[i]) for i in self.R.relation_basis()]
            self._acts["sq1"] = balanced_quotient([self.H.dim] * 2, rels, self.p)
        return self._acts["sq1"]

    def source_square(self):
        """H (x)_{R2} H: balanced by h s(r) (x) h' = h (x) s(r) h'."""
        if "sq2" not in self._acts:
            rels = [(0, self.rho2[i], self.lambda2[i]) for i in self.R.relation_basis()]
            self._acts["sq2"] = balanced_quotient([self.H.dim] * 2, rels, self.p)
        return self._acts["sq2"]

    @property
    def delta_q(self) -> Mat:
        """The coproduct as a map H -> H (x)_{R1} H."""
        return self.coring_square().proj @ self.delta

    def lifted_galois(self) -> Mat:
        """J: g (x) h -> h(1) (x) g h(2) on H (x)_k H, using the coproduct lift."""
        if "J" not in self._acts:
            dh = self.H.dim
            x = apply_factor(Mat.identity(dh * dh, self.p), [dh, dh], 1, self.delta)  # g, h1, h2
            x = permute_factors(x, [dh, dh, dh], [1, 0, 2])  # h1, g, h2
            x = apply_block(x, [dh, dh, dh], 1, 3, self.H.table)  # h1, g h2
            self._acts["J"] = x
        return self._acts["J"]


# ---------------------------------------------------------------------------
# axiom checks


def _mat_sum(mats, coeffs, shape, p) -> Mat:
    out = Mat.zeros(shape[0], shape[1], p)
    for m, c in zip(mats, coeffs):
        if c:
            out = out + m.scale(c)
    return out


def counit_maps(b: RightBialgebroid) -> tuple[Mat, Mat]:
    """a (x) b -> b t(eps a) and a (x) b -> a s(eps b), as maps H (x) H -> H."""
    dh, p = b.H.dim, b.p
    left_blocks, right_cols = [], []
    for a in range(dh):
        c = b.counit.a[:, a]
        left_blocks.append(_mat_sum(b.lambda1, c, (dh, dh), p))
    left = hstack(left_blocks)
    rt = [_mat_sum(b.rho2, b.counit.a[:, j], (dh, dh), p) for j in range(dh)]
    cols = []
    for a in range(dh):
        for j in range(dh):
            cols.append(rt[j][:, a : a + 1])
    right = hstack(cols)
    return left, right


def check_bialgebroid(b: RightBialgebroid) -> Report:
    """The right-bialgebroid axioms, one record per family and basis element."""
    rep = Report()
    R, H, p = b.R, b.H, b.p
    dr, dh = R.dim, H.dim
    sub = b.name
    bad = check_algebra(R) + check_algebra(H)
    rep.truth("BGD.ring", sub, not bad, "; ".join(bad))

    rb = [R.basis(i) for i in range(dr)]
    for i in range(dr):
        for j in range(dr):
            rij = R.product(rb[i], rb[j])
            rep.equal("BGD.source", f"{sub}:s(e{i}e{j})", b.s @ rij, H.product(b.s @ rb[i], b.s @ rb[j]))
            rep.equal("BGD.target", f"{sub}:t(e{i}e{j})", b.t @ rij, H.product(b.t @ rb[j], b.t @ rb[i]))
            rep.equal(
                "BGD.st_commute", f"{sub}:(e{i},e{j})",
                H.product(b.s @ rb[i], b.t @ rb[j]), H.product(b.t @ rb[j], b.s @ rb[i]),
            )
    rep.equal("BGD.source", f"{sub}:s(1)", b.s @ R.unit, H.unit)
    rep.equal("BGD.target", f"{sub}:t(1)", b.t @ R.unit, H.unit)

    acts = {"lambda1": b.lambda1, "rho1": b.rho1, "lambda2": b.lambda2, "rho2": b.rho2}
    names = list(acts)
    for x in range(4):
        for y in range(x + 1, 4):
            ok = all(a @ c == c @ a for a in acts[names[x]] for c in acts[names[y]])
            rep.truth("BGD.actions", f"{sub}:{names[x]}|{names[y]}", ok)

    sq = b.coring_square()
    dq = b.delta_q
    for i in range(dr):
        rep.equal(
            "BGD.coring_bimodule", f"{sub}:Delta(h t(e{i}))",
            dq @ b.lambda1[i], sq.proj @ apply_factor(b.delta, [dh, dh], 0, b.lambda1[i]),
        )
        rep.equal(
            "BGD.coring_bimodule", f"{sub}:Delta(h s(e{i}))",
            dq @ b.rho2[i], sq.proj @ apply_factor(b.delta, [dh, dh], 1, b.rho2[i]),
        )
        rep.equal("BGD.coring_bimodule", f"{sub}:eps(h t(e{i}))", b.counit @ b.lambda1[i], R.left_mults[i] @ b.counit)
        rep.equal("BGD.coring_bimodule", f"{sub}:eps(h s(e{i}))", b.counit @ b.rho2[i], R.right_mults[i] @ b.counit)

    rels3 = [(k, b.rho2[i], b.lambda1[i]) for k in (0, 1) for i in R.relation_basis()]
    cube = balanced_quotient([dh] * 3, rels3, p)
    lhs = cube.proj @ apply_factor(b.delta, [dh, dh], 0, b.delta)
    rhs = cube.proj @ apply_factor(b.delta, [dh, dh], 1, b.delta)
    rep.equal("BGD.coassoc", sub, lhs, rhs)

    left, right = counit_maps(b)
    ident = Mat.identity(dh, p)
    rep.equal("BGD.counit", f"{sub}:left", left @ b.delta, ident)
    rep.equal("BGD.counit", f"{sub}:right", right @ b.delta, ident)

    for i in range(dr):
        rep.equal(
            "BGD.takeuchi", f"{sub}:e{i}",
            sq.proj @ apply_factor(b.delta, [dh, dh], 0, b.lambda2[i]),
            sq.proj @ apply_factor(b.delta, [dh, dh], 1, b.rho1[i]),
        )

    hh = tensor_algebra(H, H)
    rep.equal("BGD.multiplicative", f"{sub}:product", dq @ H.table, sq.proj @ hh.table @ kron(b.delta, b.delta))
    rep.equal("BGD.multiplicative", f"{sub}:unit", dq @ H.unit, sq.proj @ kron(H.unit, H.unit))

    eps_mult = b.counit @ H.table
    via_s = hstack([
        b.counit @ _mat_sum(b.rho2, b.counit.a[:, h], (dh, dh), p)[:, g : g + 1]
        for g in range(dh) for h in range(dh)
    ])
    via_t = hstack([
        b.counit @ _mat_sum(b.lambda1, b.counit.a[:, h], (dh, dh), p)[:, g : g + 1]
        for g in range(dh) for h in range(dh)
    ])
    rep.equal("BGD.counit_mult", f"{sub}:via s", via_s, eps_mult)
    rep.equal("BGD.counit_mult", f"{sub}:via t", via_t, eps_mult)
    rep.equal("BGD.counit_mult", f"{sub}:unit", b.counit @ H.unit, R.unit)
    return rep


# ---------------------------------------------------------------------------
# the induced right-monoidal structure


@dataclass(eq=False)
class ProductData:
    """Bookkeeping for one product M * N = quotient of M (x) N (x) H."""

    left: Bimodule
    right: Bimodule
    dims: list[int]
    proj: Mat
    sect: Mat


def check_relations(g_t: Mat, dims, relations, p) -> list[int]:
    """Indices of relations not killed by the map whose transpose is ``g_t``.

    Each relation is ((k, a), (k2, b)): the map must agree after acting with
    ``a`` on factor k and with ``b`` on factor k2.
    """
    bad = []
    for idx, ((k, a), (k2, b2)) in enumerate(relations):
        lhs = apply_factor(g_t, dims, k, a.T)
        rhs = apply_factor(g_t, dims, k2, b2.T)
        if lhs != rhs:
            bad.append(idx)
    return bad


class BialgebroidStructure(SkewMonStructure):
    """The right-monoidal structure on right R-modules induced by a bialgebroid.

    Objects are bimodules whose right algebra is R; a left action, when
    present, is carried through the first tensor factor.
    """

    def __init__(self, b: RightBialgebroid, unit: Bimodule | None = None):
        super().__init__(unit if unit is not None else right_regular(b.R, "R"))
        self.b = b
        self.name = f"induced({b.name})"
        self.data: dict[int, ProductData] = {}
        self.welldefined = Report()
        self.derived: set[int] = set()  # ids of objects built by structures layered on this one
        self._eps_core = None

    # relations of the ambient space M (x) N (x) H, each as ((k, a), (k2, b))
    def ambient_relations(self, m: Bimodule, n: Bimodule, offset: int = 0):
        b = self.b
        rels = []
        for i in b.R.relation_basis():
            rels.append(((offset + 1, n.right[i]), (offset + 2, b.lambda2[i])))
            rels.append(((offset + 0, m.right[i]), (offset + 2, b.lambda1[i])))
        return rels

    def _prod(self, m, n):
        b = self.b
        dh = b.H.dim
        rb = b.R.relation_basis()
        # N (x)_{R2} H
        q1 = balanced_quotient([n.dim, dh], [(0, n.right[i], b.lambda2[i]) for i in rb], self.p)
        lam1 = [q1.descend(kron(n.identity(), a)) for a in b.lambda1]
        # M (x)_{R1} (N (x)_{R2} H)
        q2 = balanced_quotient([m.dim, q1.dim], [(0, m.right[i], lam1[i]) for i in rb], self.p)
        proj = apply_factor(q2.proj.T, [m.dim, q1.dim], 1, q1.proj.T).T  # q2 . (I (x) q1)
        sect = apply_factor(q2.sect, [m.dim, q1.dim], 1, q1.sect)
        dims = [m.dim, n.dim, dh]
        right = [self._descend(proj, sect, dims, 2, a) for a in b.rho2]
        left = [
            Mat.identity(proj.rows, self.p) if a.is_identity() else self._descend(proj, sect, dims, 0, a)
            for a in m.left
        ]
        obj = Bimodule(f"({m.name}*{n.name})", proj.rows, m.left_alg, b.R, left, right)
        self.data[id(obj)] = ProductData(m, n, dims, proj, sect)
        return obj

    @staticmethod
    def _descend(proj, sect, dims, k, a) -> Mat:
        return proj @ apply_factor(sect, dims, k, a)

    def pd(self, obj: Bimodule) -> ProductData:
        return self.data[id(obj)]

    def _prod_map(self, f, g):
        src = self.pd(self.prod(f.source, g.source))
        tgt = self.pd(self.prod(f.target, g.target))
        x = apply_factor(src.sect, src.dims, 0, f.mat)
        x = apply_factor(x, [f.target.dim] + src.dims[1:], 1, g.mat)
        return tgt.proj @ x

    def _eta(self, m):
        b = self.b
        d = self.pd(self.prod(self.unit, m))
        # m -> 1_R (x) m (x) 1_H
        amb = kron(kron(self.unit_vector(), m.identity()), b.H.unit)
        return d.proj @ amb

    def unit_vector(self) -> Mat:
        return self.b.R.unit

    def eps_core(self) -> Mat:
        """R (x) H -> R, r (x) h -> eps(s(r) h)."""
        if self._eps_core is None:
            b = self.b
            self._eps_core = b.counit @ b.H.table @ kron(b.s, b.H.identity())
        return self._eps_core

    def _eps(self, m):
        b = self.b
        d = self.pd(self.prod(m, self.unit))
        dr = b.R.dim
        # (M (x) R (x) H) -> M (x) R -> M
        amb = m.right_action_map() @ kron(m.identity(), self.eps_core())
        if self.is_base(m):
            self._record_wd(f"eps({m.name})", amb.T, d.dims, self.ambient_relations(m, self.unit))
        return amb @ d.sect

    def _gamma(self, l, m, n):
        b = self.b
        dh = b.H.dim
        mn = self.prod(m, n)
        lm = self.prod(l, m)
        src = self.pd(self.prod(l, mn))
        inner = self.pd(mn)
        d_lm = self.pd(lm)
        tgt = self.pd(self.prod(lm, n))
        # transpose of the ambient formula
        # L (x) M (x) N (x) H_g (x) H_h -> [[l, m, h1], n, g h2]
        gt = tgt.proj.T  # (LM (x) N (x) H) x tgt
        gt = apply_factor(gt, tgt.dims, 0, d_lm.proj.T)  # L, M, H_a, N, H_b
        gt = permute_factors(gt, [l.dim, m.dim, dh, n.dim, dh], [0, 1, 3, 2, 4])  # L, M, N, H_a, H_b
        full_dims = [l.dim, m.dim, n.dim, dh, dh]
        gt = apply_block(gt, full_dims, 3, 5, b.lifted_galois().T)  # L, M, N, H_g, H_h
        rels = self.ambient_relations(m, n, offset=1)  # inner relations on M, N, H_g
        for i in b.R.relation_basis():
            rels.append(((3, b.rho2[i]), (4, b.lambda2[i])))  # outer R2: g s(r) ~ s(r) h
            rels.append(((0, l.right[i]), (4, b.lambda1[i])))  # outer R1: l r ~ h t(r)
        if self.is_base(l, m, n):
            self._record_wd(f"gamma({l.name},{m.name},{n.name})", gt, full_dims, rels)
        # pull back along the section of the source
        x = apply_factor(gt, [l.dim, m.dim * n.dim * dh, dh], 1, inner.sect.T)
        return (src.sect.T @ x).T

    def rho1_h(self, i: int) -> Mat:
        """h -> t(eps(s(r_i) h_(1))) h_(2), the right E-action on the H factor."""
        b = self.b
        key = ("rho1_h", i)
        if key not in self._cache:
            a = b.H.lmul(b.s @ b.R.basis(i))
            op = b.H.table @ kron(b.t @ b.counit @ a, b.H.identity()) @ b.delta
            self._cache[key] = (op,)
        return self._cache[key][0]

    def product_rho1(self, k: Bimodule, l: Bimodule, i: int) -> Mat:
        """rho_1 on K * L computed on the ambient K (x) L (x) H."""
        d = self.pd(self.prod(k, l))
        return self._descend(d.proj, d.sect, d.dims, 2, self.rho1_h(i))

    def is_base(self, *objs) -> bool:
        """Well-definedness is verified on modules that are not themselves products."""
        return not any(id(o) in self.data or id(o) in self.derived for o in objs)

    def _record_wd(self, subject, g_t, dims, rels):
        bad = check_relations(g_t, dims, rels, self.p)
        if bad:
            self.welldefined.add(Check("BGD.welldefined", subject, FAIL, f"relations {bad} not respected"))
        else:
            self.welldefined.add(Check("BGD.welldefined", subject, PASS))


def induced_skewmon(b: RightBialgebroid, bimodule_unit: bool = False) -> BialgebroidStructure:
    """The induced structure; with ``bimodule_unit`` the unit R also carries
    its left multiplication, so products of bimodules keep their left actions."""
    from .ringmod import regular_bimodule

    unit = regular_bimodule(b.R, "R") if bimodule_unit else None
    return BialgebroidStructure(b, unit)


# ---------------------------------------------------------------------------
# Galois map and Hopf test


def galois_map(b: RightBialgebroid) -> tuple[Mat, Report]:
    """H (x)_{R2} H -> H (x)_{R1} H, g (x) h -> h(1) (x) g h(2)."""
    sq1, sq2 = b.coring_square(), b.source_square()
    j = b.lifted_galois()
    g_t = (sq1.proj @ j).T
    dh = b.H.dim
    rels = [((0, b.rho2[i]), (1, b.lambda2[i])) for i in b.R.relation_basis()]
    bad = check_relations(g_t, [dh, dh], rels, b.p)
    rep = Report()
    rep.truth("BGD.welldefined", f"galois({b.name})", not bad, f"relations {bad}" if bad else "")
    return sq1.proj @ j @ sq2.sect, rep


@dataclass
class HopfVerdict:
    hopf: bool
    rank: int
    size: tuple[int, int]
    gamma_invertible: bool
    report: Report

    def as_dict(self) -> dict:
        return {
            "hopf": self.hopf,
            "galois_rank": self.rank,
            "galois_shape": list(self.size),
            "gamma_RRR_invertible": self.gamma_invertible,
        }


def is_hopf(b: RightBialgebroid, s: BialgebroidStructure | None = None) -> HopfVerdict:
    """Galois map invertible, cross-checked against gamma_{R,R,R}."""
    g, rep = galois_map(b)
    s = s or induced_skewmon(b)
    r = s.unit
    gam = s.gamma(r, r, r).mat
    hopf = is_invertible(g)
    ginv = is_invertible(gam)
    rep.truth(
        "BGD.hopf", b.name, hopf == ginv,
        f"galois rank {rank(g)} of {g.rows}x{g.cols}; gamma_RRR rank {rank(gam)} of {gam.rows}x{gam.cols}",
    )
    return HopfVerdict(hopf, rank(g), g.shape, ginv, rep)


# ---------------------------------------------------------------------------
# constructors


def from_bialgebra(name: str, H: Algebra, delta: Mat, counit: Mat) -> RightBialgebroid:
    """A k-bialgebra viewed as a bialgebroid over R = k."""
    k = trivial_algebra(H.p)
    return RightBialgebroid(name, k, H, H.unit, H.unit, delta, counit)


def enveloping_bialgebroid(R: Algebra, name: str | None = None) -> RightBialgebroid:
    """H = R^op (x) R with s(r) = 1 (x) r, t(r) = r (x) 1.

    Coproduct (r' (x) r) -> (r' (x) 1) (x) (1 (x) r), counit r' (x) r -> r' r.
    """
    p, d = R.p, R.dim
    H = enveloping(R)
    ident = Mat.identity(d, p)
    s = kron(R.unit, ident)
    t = kron(ident, R.unit)
    cols = [kron(t @ R.basis(i), s @ R.basis(j)) for i in range(d) for j in range(d)]
    delta = hstack(cols)
    return RightBialgebroid(name or f"env({R.name})", R, H, s, t, delta, R.table)


def group_bialgebra(H: Algebra, name: str) -> RightBialgebroid:
    """Basis elements are grouplike: Delta e_i = e_i (x) e_i, eps e_i = 1."""
    d, p = H.dim, H.p
    delta = hstack([kron(H.basis(i), H.basis(i)) for i in range(d)])
    counit = Mat.from_rows([[1] * d], p)
    return from_bialgebra(name, H, delta, counit)


def b1(p: int = 3) -> RightBialgebroid:
    return group_bialgebra(trivial_algebra(p), "B1")


def b2(p: int = 3) -> RightBialgebroid:
    from .ringmod import group_algebra_cyclic

    return group_bialgebra(group_algebra_cyclic(p, 2), "B2")


def b3(p: int = 3) -> RightBialgebroid:
    from .ringmod import algebra_from_constants

    # basis 1, x with x^2 = x
    H = algebra_from_constants("F{1,x}", [[[1, 0], [0, 1]], [[0, 1], [0, 1]]], [1, 0], p)
    return group_bialgebra(H, "B3")


def b4(p: int = 2) -> RightBialgebroid:
    from .ringmod import product_algebra

    return enveloping_bialgebroid(product_algebra(p, 2), "B4")


# ---------------------------------------------------------------------------
# default probes


def standard_probes(b: RightBialgebroid, s: BialgebroidStructure) -> ProbeSet:
    """R, R + R and H (left action s(r)h when the unit is a bimodule), with
    the two inclusions, the two projections and s: R -> H as probe maps."""
    r = s.unit
    r2 = bimodule_sum([r, r], "R2")
    dh, dr, p = b.H.dim, b.R.dim, b.p
    left = b.lambda2 if r.left_alg is b.R else [Mat.identity(dh, p)]
    h = Bimodule("H", dh, r.left_alg, b.R, left, b.rho2)
    ident, zero = Mat.identity(dr, p), Mat.zeros(dr, dr, p)
    maps = [
        BimodMap(vstack([ident, zero]), r, r2),
        BimodMap(vstack([zero, ident]), r, r2),
        BimodMap(hstack([ident, zero]), r2, r),
        BimodMap(hstack([zero, ident]), r2, r),
        BimodMap(b.s, r, h),
    ]
    return ProbeSet([r, r2, h], maps)
