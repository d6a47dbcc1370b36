"""Finite-dimensional algebras, bimodules, tensor and hom over an algebra.

An algebra is stored by its multiplication table, a ``d x d^2`` matrix sending
``e_i (x) e_j`` (index ``i*d + j``) to the coordinates of ``e_i e_j``.  A bimodule
stores one matrix per basis element of each acting algebra: ``left[i]`` is
``v -> e_i . v`` and ``right[i]`` is ``v -> v . e_i``.  Plain right modules use
the one-dimensional algebra ``k`` on the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactlin import (
    Mat,
    ShapeError,
    apply_factor,
    cokernel_projection,
    hstack,
    kernel_basis,
    kron,
    permutation_matrix,
    rank,
    solve,
    vstack,
)


class AlgebraMismatch(ValueError):
    """Modules act through different algebras."""


# ---------------------------------------------------------------------------
# algebras


@dataclass(eq=False)
class Algebra:
    name: str
    table: Mat  # d x d^2
    unit: Mat  # d x 1
    _lm: list[Mat] = field(default_factory=list, repr=False)
    _rm: list[Mat] = field(default_factory=list, repr=False)

    def __post_init__(self):
        d = self.unit.rows
        if self.table.shape != (d, d * d) or self.unit.cols != 1:
            raise ShapeError(f"algebra {self.name}: table {self.table.shape} does not fit dim {d}")

    @property
    def p(self) -> int:
        return self.table.p

    @property
    def dim(self) -> int:
        return self.unit.rows

    def basis(self, i: int) -> Mat:
        return Mat.unit_vector(self.dim, i, self.p)

    def identity(self) -> Mat:
        return Mat.identity(self.dim, self.p)

    def product(self, x: Mat, y: Mat) -> Mat:
        return self.table @ kron(x, y)

    def lmul(self, x: Mat) -> Mat:
        """Matrix of y -> x y."""
        return self.table @ kron(x, Mat.identity(self.dim, self.p))

    def rmul(self, x: Mat) -> Mat:
        """Matrix of y -> y x."""
        return self.table @ kron(Mat.identity(self.dim, self.p), x)

    @property
    def left_mults(self) -> list[Mat]:
        if not self._lm:
            self._lm = [self.lmul(self.basis(i)) for i in range(self.dim)]
        return self._lm

    @property
    def right_mults(self) -> list[Mat]:
        if not self._rm:
            self._rm = [self.rmul(self.basis(i)) for i in range(self.dim)]
        return self._rm

    def is_commutative(self) -> bool:
        swap = permutation_matrix([self.dim, self.dim], [1, 0], self.p)
        return self.table == self.table @ swap

    def relation_basis(self) -> list[int]:
        """Basis indices whose balancing relations span all of them.

        Balancing relations are linear in the algebra element and vanish on the
        unit, so one basis element with nonzero unit coefficient is redundant.
        """
        u = self.unit.a[:, 0]
        nz = [i for i in range(self.dim) if u[i] != 0]
        drop = nz[0] if nz else None
        return [i for i in range(self.dim) if i != drop]


def trivial_algebra(p: int) -> Algebra:
    return Algebra("k", Mat.from_rows([[1]], p), Mat.from_rows([[1]], p))


def algebra_from_constants(name: str, consts, unit: Sequence, p: int) -> Algebra:
    """Build from c[i][j] = coordinates of e_i e_j."""
    d = len(unit)
    cols = []
    for i in range(d):
        for j in range(d):
            cols.append([int(v) for v in consts[i][j]])
    table = Mat.from_rows([[cols[c][r] for c in range(d * d)] for r in range(d)], p)
    return Algebra(name, table, Mat.column(unit, p))


def check_algebra(a: Algebra) -> list[str]:
    """Violated associativity triples and unit laws; empty iff valid."""
    d, p = a.dim, a.p
    ident = Mat.identity(d, p)
    left = a.table @ kron(a.table, ident)
    right = a.table @ kron(ident, a.table)
    failures = []
    bad = np.flatnonzero(np.any(left.a != right.a, axis=0))
    for c in bad:
        i, rem = divmod(int(c), d * d)
        j, l = divmod(rem, d)
        failures.append(f"associativity fails on (e{i} e{j}) e{l}")
    if not a.lmul(a.unit).is_identity():
        failures.append("unit is not a left identity")
    if not a.rmul(a.unit).is_identity():
        failures.append("unit is not a right identity")
    return failures


def opposite(a: Algebra) -> Algebra:
    swap = permutation_matrix([a.dim, a.dim], [1, 0], a.p)
    name = a.name if a.is_commutative() else f"{a.name}^op"
    return Algebra(name, a.table @ swap, a.unit)


def tensor_algebra(a: Algebra, b: Algebra) -> Algebra:
    """a (x)_k b with basis index i*dim(b) + j and (x(x)y)(x'(x)y') = xx' (x) yy'."""
    if a.p != b.p:
        raise AlgebraMismatch("algebras over different fields")
    perm = permutation_matrix([a.dim, b.dim, a.dim, b.dim], [0, 2, 1, 3], a.p)
    return Algebra(f"{a.name}(x){b.name}", kron(a.table, b.table) @ perm, kron(a.unit, b.unit))


def enveloping(a: Algebra) -> Algebra:
    env = tensor_algebra(opposite(a), a)
    env.name = f"{a.name}^e"
    return env


def product_algebra(p: int, n: int) -> Algebra:
    """k x ... x k (n copies) with idempotent basis."""
    consts = [[[1 if (i == j == l) else 0 for l in range(n)] for j in range(n)] for i in range(n)]
    return algebra_from_constants("k" + "x k" * (n - 1) if n > 1 else "k", consts, [1] * n, p)


def group_algebra_cyclic(p: int, n: int) -> Algebra:
    consts = [[[1 if l == (i + j) % n else 0 for l in range(n)] for j in range(n)] for i in range(n)]
    return algebra_from_constants(f"F{p}[C{n}]", consts, [1] + [0] * (n - 1), p)


# ---------------------------------------------------------------------------
# bimodules


@dataclass(eq=False)
class Bimodule:
    name: str
    dim: int
    left_alg: Algebra
    right_alg: Algebra
    left: tuple[Mat, ...]
    right: tuple[Mat, ...]

    def __post_init__(self):
        self.left = tuple(self.left)
        self.right = tuple(self.right)
        if len(self.left) != self.left_alg.dim or len(self.right) != self.right_alg.dim:
            raise ShapeError(f"{self.name}: wrong number of action matrices")
        for m in self.left + self.right:
            if m.shape != (self.dim, self.dim):
                raise ShapeError(f"{self.name}: action matrix {m.shape} on dim {self.dim}")

    @property
    def p(self) -> int:
        return self.right_alg.p

    def identity(self) -> Mat:
        return Mat.identity(self.dim, self.p)

    def act_left(self, x: Mat) -> Mat:
        return _combine(self.left, x, self.dim, self.p)

    def act_right(self, x: Mat) -> Mat:
        return _combine(self.right, x, self.dim, self.p)

    def right_action_map(self) -> Mat:
        """M (x) B -> M, column index v*dim(B) + b holds v.e_b."""
        db = self.right_alg.dim
        out = np.zeros((self.dim, self.dim * db), dtype=self.right[0].a.dtype)
        for b, m in enumerate(self.right):
            out[:, b::db] = m.a
        return Mat(out, self.p)

    def left_action_map(self) -> Mat:
        """B (x) M -> M, column index b*dim(M) + v holds e_b.v."""
        return hstack(list(self.left))

    def renamed(self, name: str) -> "Bimodule":
        return Bimodule(name, self.dim, self.left_alg, self.right_alg, self.left, self.right)


def _combine(mats: Sequence[Mat], x: Mat, dim: int, p: int) -> Mat:
    out = Mat.zeros(dim, dim, p)
    for i, m in enumerate(mats):
        c = x.entry(i, 0)
        if c:
            out = out + m.scale(c)
    return out


def regular_bimodule(a: Algebra, name: str = "R") -> Bimodule:
    return Bimodule(name, a.dim, a, a, a.left_mults, a.right_mults)


def right_regular(a: Algebra, name: str = "R") -> Bimodule:
    k = trivial_algebra(a.p)
    return Bimodule(name, a.dim, k, a, [Mat.identity(a.dim, a.p)], a.right_mults)


def free_bimodule(a: Algebra, name: str = "F") -> Bimodule:
    """A (x)_k A with A acting on the left of the first and the right of the second factor."""
    ident = Mat.identity(a.dim, a.p)
    left = [kron(x, ident) for x in a.left_mults]
    right = [kron(ident, x) for x in a.right_mults]
    return Bimodule(name, a.dim * a.dim, a, a, left, right)


def vector_space(n: int, p: int, name: str | None = None) -> Bimodule:
    k = trivial_algebra(p)
    ident = Mat.identity(n, p)
    return Bimodule(name or f"k^{n}", n, k, k, [ident], [ident])


def forget_left(m: Bimodule) -> Bimodule:
    k = trivial_algebra(m.p)
    return Bimodule(m.name, m.dim, k, m.right_alg, [m.identity()], m.right)


def bimodule_sum(ms: Sequence[Bimodule], name: str | None = None) -> Bimodule:
    from .exactlin import direct_sum

    first = ms[0]
    for m in ms[1:]:
        if m.left_alg is not first.left_alg or m.right_alg is not first.right_alg:
            raise AlgebraMismatch("direct sum of modules over different algebras")

    def block(get):
        acc = get(ms[0])
        for m in ms[1:]:
            acc = [direct_sum(x, y) for x, y in zip(acc, get(m))]
        return acc

    return Bimodule(
        name or "+".join(m.name for m in ms),
        sum(m.dim for m in ms),
        first.left_alg,
        first.right_alg,
        block(lambda m: list(m.left)),
        block(lambda m: list(m.right)),
    )


def check_bimodule(m: Bimodule) -> list[str]:
    """Unitality, multiplicativity and commutation of the two actions."""
    out = []
    for side, alg, mats, order in (
        ("left", m.left_alg, m.left, "same"),
        ("right", m.right_alg, m.right, "reversed"),
    ):
        if not _combine(mats, alg.unit, m.dim, m.p).is_identity():
            out.append(f"{side} action is not unital")
        for i in range(alg.dim):
            for j in range(alg.dim):
                prod = _combine(mats, alg.product(alg.basis(i), alg.basis(j)), m.dim, m.p)
                expect = mats[i] @ mats[j] if order == "same" else mats[j] @ mats[i]
                if prod != expect:
                    out.append(f"{side} action not multiplicative on (e{i}, e{j})")
    for i, x in enumerate(m.left):
        for j, y in enumerate(m.right):
            if x @ y != y @ x:
                out.append(f"left e{i} and right e{j} do not commute")
    return out


@dataclass(eq=False)
class BimodMap:
    mat: Mat
    source: Bimodule
    target: Bimodule

    def __post_init__(self):
        if self.mat.shape != (self.target.dim, self.source.dim):
            raise ShapeError(
                f"map {self.mat.shape} does not fit {self.source.name} -> {self.target.name}"
            )

    def is_equivariant(self) -> bool:
        return all(
            self.mat @ a == b @ self.mat
            for a, b in zip(self.source.left + self.source.right, self.target.left + self.target.right)
        )


# ---------------------------------------------------------------------------
# tensor products and quotients


@dataclass(eq=False)
class Quotient:
    """A quotient V ->> W given by projection and a coordinate section."""

    proj: Mat
    sect: Mat

    @property
    def dim(self) -> int:
        return self.proj.rows

    def descend(self, x: Mat) -> Mat:
        """Transport an endomorphism of V that preserves the kernel."""
        return self.proj @ x @ self.sect


def _on_factor(dims: Sequence[int], k: int, a: Mat, p: int) -> Mat:
    """I (x) a (x) I with ``a`` on factor k."""
    pre, post = int(np.prod(dims[:k])), int(np.prod(dims[k + 1 :]))
    return kron(kron(Mat.identity(pre, p), a), Mat.identity(post, p))


def balanced_quotient(dims: Sequence[int], relations: Sequence[tuple[int, Mat, Mat]], p: int) -> Quotient:
    """Quotient of the tensor product of ``dims`` by balancing relations.

    Each relation ``(k, a, b)`` identifies ``(.. x.a (x) y ..)`` with
    ``(.. x (x) b.y ..)`` where ``a`` acts on factor ``k`` and ``b`` on factor k+1.
    """
    n = int(np.prod(dims)) if dims else 1
    ident = Mat.identity(n, p)
    cols = [_on_factor(dims, k, a, p) - _on_factor(dims, k + 1, b, p) for k, a, b in relations]
    if not cols:
        return Quotient(ident, ident)
    proj, sect = cokernel_projection(hstack(cols))
    return Quotient(proj, sect)


@dataclass(eq=False)
class TensorProduct:
    obj: Bimodule
    proj: Mat
    sect: Mat


def tensor_over(m: Bimodule, n: Bimodule, name: str | None = None) -> TensorProduct:
    """M (x)_B N for M a right B-module and N a left B-module."""
    if m.right_alg is not n.left_alg:
        if m.right_alg.dim != n.left_alg.dim or m.right_alg.table != n.left_alg.table:
            raise AlgebraMismatch(f"{m.name} is over {m.right_alg.name}, {n.name} over {n.left_alg.name}")
    b = m.right_alg
    rels = [(0, m.right[i], n.left[i]) for i in b.relation_basis()]
    q = balanced_quotient([m.dim, n.dim], rels, m.p)
    ident_m, ident_n = m.identity(), n.identity()
    left = [q.descend(kron(x, ident_n)) for x in m.left]
    right = [q.descend(kron(ident_m, y)) for y in n.right]
    obj = Bimodule(name or f"{m.name}(x){n.name}", q.dim, m.left_alg, n.right_alg, left, right)
    return TensorProduct(obj, q.proj, q.sect)


def intertwiners(dim_src: int, dim_tgt: int, pairs: Sequence[tuple[Mat, Mat]], p: int) -> list[Mat]:
    """Basis of linear f: k^src -> k^tgt with f a = b f for each (a, b)."""
    if not pairs:
        n = dim_src * dim_tgt
        basis = Mat.identity(n, p)
    else:
        blocks = []
        it, is_ = Mat.identity(dim_tgt, p), Mat.identity(dim_src, p)
        for a, b in pairs:
            blocks.append(kron(it, a.T) - kron(b, is_))
        basis = kernel_basis(vstack(blocks))
    out = []
    for c in range(basis.cols):
        out.append(Mat(basis.a[:, c].reshape(dim_tgt, dim_src), p))
    return out


def hom_over(m: Bimodule, n: Bimodule, sides: str = "both") -> list[Mat]:
    """Basis of module maps M -> N ('left', 'right' or 'both' actions respected)."""
    pairs = []
    if sides in ("left", "both"):
        if m.left_alg.dim != n.left_alg.dim:
            raise AlgebraMismatch("left algebras differ")
        pairs += list(zip(m.left, n.left))
    if sides in ("right", "both"):
        if m.right_alg.dim != n.right_alg.dim:
            raise AlgebraMismatch("right algebras differ")
        pairs += list(zip(m.right, n.right))
    return intertwiners(m.dim, n.dim, pairs, m.p)


def restrict(inc: Mat, x: Mat) -> Mat | None:
    """The endomorphism y with inc y = x inc, if x preserves im(inc)."""
    return solve(inc, x @ inc)


@dataclass(eq=False)
class Equalizer:
    obj: Bimodule
    inclusion: Mat


@dataclass(eq=False)
class Coequalizer:
    obj: Bimodule
    projection: Mat
    section: Mat


def equalizer(fs: Sequence[Mat], gs: Sequence[Mat], src: Bimodule, name: str | None = None) -> Equalizer:
    """Joint kernel of f_i - g_i with the actions of ``src`` restricted."""
    if len(fs) != len(gs):
        raise ShapeError("equalizer needs parallel families")
    for f, g in zip(fs, gs):
        if f.shape != g.shape or f.cols != src.dim:
            raise ShapeError("equalizer maps must share source and target")
    if fs:
        inc = kernel_basis(vstack([f - g for f, g in zip(fs, gs)]))
    else:
        inc = src.identity()
    left, right = [], []
    for x in src.left:
        y = restrict(inc, x)
        if y is None:
            raise ValueError(f"left action of {src.name} does not preserve the equalizer")
        left.append(y)
    for x in src.right:
        y = restrict(inc, x)
        if y is None:
            raise ValueError(f"right action of {src.name} does not preserve the equalizer")
        right.append(y)
    obj = Bimodule(name or f"Eq({src.name})", inc.cols, src.left_alg, src.right_alg, left, right)
    return Equalizer(obj, inc)


def coequalizer(fs: Sequence[Mat], gs: Sequence[Mat], tgt: Bimodule, name: str | None = None) -> Coequalizer:
    """Cokernel of the f_i - g_i with the actions of ``tgt`` descended."""
    if len(fs) != len(gs):
        raise ShapeError("coequalizer needs parallel families")
    for f, g in zip(fs, gs):
        if f.shape != g.shape or f.rows != tgt.dim:
            raise ShapeError("coequalizer maps must share source and target")
    if fs:
        proj, sect = cokernel_projection(hstack([f - g for f, g in zip(fs, gs)]))
        rel = hstack([f - g for f, g in zip(fs, gs)])
    else:
        proj = sect = tgt.identity()
        rel = None
    acts = []
    for x in list(tgt.left) + list(tgt.right):
        if rel is not None and not (proj @ x @ rel).is_zero():
            raise ValueError(f"an action of {tgt.name} does not descend to the coequalizer")
        acts.append(proj @ x @ sect)
    nl = len(tgt.left)
    obj = Bimodule(name or f"Coeq({tgt.name})", proj.rows, tgt.left_alg, tgt.right_alg, acts[:nl], acts[nl:])
    return Coequalizer(obj, proj, sect)


def is_surjective(m: Mat) -> bool:
    return rank(m) == m.rows


def is_injective(m: Mat) -> bool:
    return rank(m) == m.cols


# ---------------------------------------------------------------------------
# monoidal structures on bimodules


class BimoduleTensor:
    """(bimodules over R, (x)_R, R) with explicit associator and unitors."""

    def __init__(self, r: Algebra, unit: Bimodule | None = None):
        self.alg = r
        self.unit = unit if unit is not None else regular_bimodule(r, "R")
        self._tp: dict = {}

    @property
    def p(self) -> int:
        return self.alg.p

    def tp(self, m: Bimodule, n: Bimodule) -> TensorProduct:
        key = (id(m), id(n))
        if key not in self._tp:
            self._tp[key] = (m, n, tensor_over(m, n, f"({m.name}(x){n.name})"))
        return self._tp[key][2]

    def prod(self, m: Bimodule, n: Bimodule) -> Bimodule:
        return self.tp(m, n).obj

    def prod_map(self, f: BimodMap, g: BimodMap) -> BimodMap:
        src, tgt = self.tp(f.source, g.source), self.tp(f.target, g.target)
        return BimodMap(tgt.proj @ kron(f.mat, g.mat) @ src.sect, src.obj, tgt.obj)

    def assoc(self, l: Bimodule, m: Bimodule, n: Bimodule) -> BimodMap:
        """(L (x) M) (x) N -> L (x) (M (x) N)."""
        lm, mn = self.tp(l, m), self.tp(m, n)
        src, tgt = self.tp(lm.obj, n), self.tp(l, mn.obj)
        x = kron(lm.sect, n.identity()) @ src.sect  # into L, M, N
        x = kron(l.identity(), mn.proj) @ x
        return BimodMap(tgt.proj @ x, src.obj, tgt.obj)

    def lunit(self, m: Bimodule) -> BimodMap:
        """R (x) M -> M, r (x) v -> r.v."""
        t = self.tp(self.unit, m)
        return BimodMap(m.left_action_map() @ t.sect, t.obj, m)

    def runit(self, m: Bimodule) -> BimodMap:
        """M (x) R -> M, v (x) r -> v.r."""
        t = self.tp(m, self.unit)
        return BimodMap(m.right_action_map() @ t.sect, t.obj, m)
