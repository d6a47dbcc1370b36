"""Exact dense linear algebra over F_p (and optionally the rationals).

Matrices are immutable wrappers around numpy arrays.  Over F_p the entries are
residues in [0, p), stored as float64 (exact for p < 2^20, so products can use
BLAS with the inner dimension split to keep partial sums below 2^52) or as
Python ints for larger primes.  Over Q they are ``fractions.Fraction`` objects
in an object array.  The field tag ``QQ`` (= 0) selects the rationals.

Pivoting is deterministic everywhere: the first nonzero entry of the leftmost
remaining column becomes the pivot, so kernels, quotients and sections come out
the same on every run.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

QQ = 0
_FLOAT_EXACT = 2**52
_SMALL_P = 2**20


class FieldMismatch(ValueError):
    """Operands live over different fields."""


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _big(p: int) -> bool:
    """Large primes are stored as Python ints; small ones as exact float64."""
    return p >= _SMALL_P


def _zeros(shape, p: int) -> np.ndarray:
    if p == QQ:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    if _big(p):
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape, dtype=np.float64)


def _normalize(a: np.ndarray, p: int) -> np.ndarray:
    if p == QQ:
        out = np.empty(a.shape, dtype=object)
        flat = a.reshape(-1)
        oflat = out.reshape(-1)
        for i, v in enumerate(flat):
            oflat[i] = Fraction(v)
        return out
    if _big(p):
        out = np.empty(a.shape, dtype=object)
        oflat = out.reshape(-1)
        for i, v in enumerate(a.reshape(-1)):
            oflat[i] = int(v) % p
        return out
    if a.dtype == object:
        a = np.array([int(v) % p for v in a.reshape(-1)], dtype=np.int64).reshape(a.shape)
    elif a.dtype.kind == "f":
        return np.mod(a, p)
    return np.mod(a.astype(np.int64, copy=False), p).astype(np.float64)


def _dot_rational(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Clear denominators (per row of a, per column of b) and multiply integers.

    The integer product runs in float64 when every partial sum is provably
    below 2^52, otherwise with Python ints.
    """
    m, inner = a.shape
    n = b.shape[1]
    if m == 0 or n == 0 or inner == 0:
        return _zeros((m, n), QQ)
    da = [math.lcm(*(x.denominator for x in row)) for row in a]
    db = [math.lcm(*(x.denominator for x in col)) for col in b.T]
    ia = np.array([[x.numerator * (d // x.denominator) for x in row] for row, d in zip(a, da)], dtype=object)
    ib = np.array([[x.numerator * (d // x.denominator) for x in col] for col, d in zip(b.T, db)], dtype=object).T
    bound = max(abs(x) for x in ia.flat) * max(abs(x) for x in ib.flat) * inner
    if bound < _FLOAT_EXACT:
        ints = np.dot(ia.astype(np.float64), ib.astype(np.float64)).astype(np.int64).tolist()
    else:
        ints = np.dot(ia, ib).tolist()
    out = np.empty((m, n), dtype=object)
    for i in range(m):
        for j in range(n):
            den = da[i] * db[j]
            out[i, j] = _integer(ints[i][j]) if den == 1 else Fraction(ints[i][j], den)
    return out


_INTS: dict[int, Fraction] = {}


def _integer(v: int) -> Fraction:
    """Shared Fraction objects for integers (they are immutable)."""
    f = _INTS.get(v)
    if f is None:
        f = _INTS[v] = Fraction(v)
    return f


def _dot(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product of two residue/rational arrays (2-d)."""
    if p == QQ:
        return _dot_rational(a, b)
    if _big(p):
        return _normalize(np.dot(a, b), p)
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    step = max(1, _FLOAT_EXACT // ((p - 1) ** 2 + 1))
    if inner <= step:
        return np.mod(np.dot(a, b), p)
    # split the inner dimension so every partial sum stays exact
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    for k in range(0, inner, step):
        out = np.mod(out + np.mod(np.dot(a[:, k : k + step], b[k : k + step]), p), p)
    return out


class Mat:
    """Immutable matrix over F_p or Q."""

    __slots__ = ("a", "p")

    def __init__(self, a, p: int, *, _trusted: bool = False):
        if p != QQ and not is_prime(p):
            raise ValueError(f"field characteristic {p} is not prime")
        arr = np.asarray(a)
        if arr.ndim != 2:
            raise ShapeError(f"matrix data must be 2-d, got shape {arr.shape}")
        self.a = arr if _trusted else _normalize(arr, p)
        self.a.setflags(write=False)
        self.p = p

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], p: int, ncols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(0, ncols or 0, p)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged row data")
        if p == QQ:
            return cls(np.array(rows, dtype=object), p)
        return cls(np.array([[int(v) % p for v in r] for r in rows], dtype=object), p)

    @classmethod
    def zeros(cls, r: int, c: int, p: int) -> "Mat":
        return cls(_zeros((r, c), p), p, _trusted=True)

    @classmethod
    def identity(cls, n: int, p: int) -> "Mat":
        a = _zeros((n, n), p)
        for i in range(n):
            a[i, i] = Fraction(1) if p == QQ else 1
        return cls(a, p, _trusted=True)

    @classmethod
    def column(cls, values: Sequence, p: int) -> "Mat":
        return cls.from_rows([[v] for v in values], p, ncols=1)

    @classmethod
    def unit_vector(cls, n: int, i: int, p: int) -> "Mat":
        m = cls.zeros(n, 1, p).a.copy()
        m[i, 0] = 1 if p != QQ else Fraction(1)
        return cls(m, p, _trusted=True)

    # basic protocol -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def _check(self, other: "Mat") -> None:
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.p != self.p:
            raise FieldMismatch(f"field {self.p} vs {other.p}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot compose {self.shape} with {other.shape}")
        return Mat(_dot(self.a, other.a, self.p), self.p, _trusted=True)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Mat(self._wrap(self.a + other.a), self.p, _trusted=True)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return Mat(self._wrap(self.a - other.a), self.p, _trusted=True)

    def __neg__(self) -> "Mat":
        return Mat(self._wrap(-self.a), self.p, _trusted=True)

    def scale(self, c) -> "Mat":
        if self.p == QQ:
            return Mat(self.a * Fraction(c), self.p, _trusted=True)
        return Mat(self._wrap(self.a * (int(c) % self.p)), self.p, _trusted=True)

    def _wrap(self, a: np.ndarray) -> np.ndarray:
        return a if self.p == QQ else np.mod(a, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.all(self.a == other.a))

    __hash__ = None  # type: ignore[assignment]

    @property
    def T(self) -> "Mat":
        return Mat(self.a.T.copy(), self.p, _trusted=True)

    def __getitem__(self, key) -> "Mat":
        sub = self.a[key]
        if sub.ndim != 2:
            raise ShapeError("matrix slicing must keep two axes")
        return Mat(sub.copy(), self.p, _trusted=True)

    def is_zero(self) -> bool:
        return bool(np.all(self.a == 0))

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Mat.identity(self.rows, self.p)

    def entry(self, i: int, j: int):
        v = self.a[i, j]
        return v if self.p == QQ else int(v)

    def tolist(self) -> list[list]:
        """Row-major plain entries: ints over F_p; over Q, ints where integral and 'n/d' strings otherwise."""
        if self.p == QQ:
            return [[int(v) if v.denominator == 1 else str(v) for v in row] for row in self.a]
        return [[int(v) for v in row] for row in self.a]

    def __repr__(self) -> str:
        field = "Q" if self.p == QQ else f"F_{self.p}"
        return f"Mat({self.tolist()}, {field})"


# ---------------------------------------------------------------------------
# elimination


def _rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r, c:] = np.mod(a[r, c:] * inv, p)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[np.ix_(hit, np.arange(c, ncols))] = np.mod(
                a[np.ix_(hit, np.arange(c, ncols))] - np.outer(col[hit], a[r, c:]), p
            )
        pivots.append(c)
        r += 1
    return a, pivots


def _rref_qq(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = a.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        i = next((k for k in range(r, nrows) if a[k, c] != 0), None)
        if i is None:
            continue
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r, c:] = a[r, c:] / a[r, c]
        for k in range(nrows):
            if k != r and a[k, c] != 0:
                a[k, c:] = a[k, c:] - a[k, c] * a[r, c:]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row-echelon form and pivot columns (leftmost-first pivoting)."""
    if m.p == QQ:
        a, piv = _rref_qq(m.a)
    else:
        a, piv = _rref_modp(m.a, m.p)
    return Mat(a, m.p, _trusted=True), piv


def rank(m: Mat) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate on the shorter side
    return len(rref(m if m.rows <= m.cols else m.T)[1])


def kernel_basis(m: Mat) -> Mat:
    """Columns spanning ker m, one per free column in increasing order."""
    n = m.cols
    if m.rows == 0:
        return Mat.identity(n, m.p)
    e, piv = rref(m)
    free = [j for j in range(n) if j not in set(piv)]
    out = Mat.zeros(n, len(free), m.p).a.copy()
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(piv):
            out[pc, k] = -e.a[i, f]
    return Mat(out if m.p == QQ else np.mod(out, m.p), m.p, _trusted=True)


def image_basis(m: Mat) -> Mat:
    """Columns of m at pivot positions: a basis of the column space."""
    _, piv = rref(m)
    return m[:, piv] if piv else Mat.zeros(m.rows, 0, m.p)


def cokernel_projection(m: Mat) -> tuple[Mat, Mat]:
    """Projection onto k^V / im(m) and a section of it.

    The quotient basis consists of the coordinates that are not pivots of the
    row-reduced image, so ``section`` is a coordinate inclusion.
    """
    v = m.rows
    if m.cols == 0:
        ident = Mat.identity(v, m.p)
        return ident, ident
    e, piv = rref(m.T)
    pset = set(piv)
    keep = [j for j in range(v) if j not in pset]
    proj = Mat.zeros(len(keep), v, m.p).a.copy()
    sect = Mat.zeros(v, len(keep), m.p).a.copy()
    for k, j in enumerate(keep):
        proj[k, j] = 1
        sect[j, k] = 1
    if keep and piv:
        block = e.a[: len(piv)][:, keep]  # pivot rows restricted to kept coords
        for i, pc in enumerate(piv):
            proj[:, pc] = -block[i]
    if m.p != QQ:
        proj = np.mod(proj, m.p)
    return Mat(proj, m.p, _trusted=True), Mat(sect, m.p, _trusted=True)


def solve(m: Mat, b: Mat) -> Mat | None:
    """A solution x of m x = b (free variables set to zero), or None."""
    if m.p != b.p:
        raise FieldMismatch(f"field {m.p} vs {b.p}")
    if m.rows != b.rows:
        raise ShapeError(f"rows differ: {m.shape} vs {b.shape}")
    n = m.cols
    aug = hstack([m, b])
    e, piv = rref(aug)
    if any(pc >= n for pc in piv):
        return None
    x = Mat.zeros(n, b.cols, m.p).a.copy()
    for i, pc in enumerate(piv):
        x[pc] = e.a[i, n:]
    return Mat(x, m.p, _trusted=True)


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise ShapeError(f"non-square matrix {m.shape} has no inverse")
    x = solve(m, Mat.identity(m.rows, m.p))
    if x is None or rank(m) != m.rows:
        raise ZeroDivisionError("matrix is singular")
    return x


def is_invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def factor_through_epi(f: Mat, epi: Mat) -> Mat | None:
    """X with X @ epi == f, provided f vanishes on ker(epi)."""
    if f.cols != epi.cols:
        raise ShapeError(f"{f.shape} vs epi {epi.shape}")
    xt = solve(epi.T, f.T)
    if xt is None:
        return None
    return xt.T


def factor_through_mono(mono: Mat, g: Mat) -> Mat | None:
    """X with mono @ X == g, provided im(g) lies in im(mono)."""
    return solve(mono, g)


# ---------------------------------------------------------------------------
# assembly


def hstack(ms: Sequence[Mat]) -> Mat:
    ms = list(ms)
    if not ms:
        raise ShapeError("hstack of nothing")
    p = ms[0].p
    for m in ms:
        if m.p != p:
            raise FieldMismatch("mixed fields in hstack")
    return Mat(np.hstack([m.a for m in ms]), p, _trusted=True)


def vstack(ms: Sequence[Mat]) -> Mat:
    ms = list(ms)
    if not ms:
        raise ShapeError("vstack of nothing")
    p = ms[0].p
    for m in ms:
        if m.p != p:
            raise FieldMismatch("mixed fields in vstack")
    return Mat(np.vstack([m.a for m in ms]), p, _trusted=True)


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; row index i_a * rows(b) + i_b."""
    if a.p != b.p:
        raise FieldMismatch(f"field {a.p} vs {b.p}")
    if a.p == QQ:
        return Mat(np.kron(a.a, b.a), a.p, _trusted=True)
    return Mat(np.mod(np.kron(a.a, b.a), a.p), a.p, _trusted=True)


def kron_all(ms: Iterable[Mat]) -> Mat:
    return reduce(kron, ms)


def direct_sum(a: Mat, b: Mat) -> Mat:
    if a.p != b.p:
        raise FieldMismatch(f"field {a.p} vs {b.p}")
    out = Mat.zeros(a.rows + b.rows, a.cols + b.cols, a.p).a.copy()
    out[: a.rows, : a.cols] = a.a
    out[a.rows :, a.cols :] = b.a
    return Mat(out, a.p, _trusted=True)


# ---------------------------------------------------------------------------
# tensor-factor helpers: cheap alternatives to multiplying by I (x) A (x) I


def _prod(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def apply_block(x: Mat, dims: Sequence[int], k0: int, k1: int, a: Mat) -> Mat:
    """Compute (I (x) a (x) I) @ x where a acts on tensor factors k0..k1-1.

    ``x`` has rows indexed by the row-major tensor product of ``dims``.
    """
    dims = list(dims)
    if _prod(dims) != x.rows:
        raise ShapeError(f"dims {dims} do not match {x.rows} rows")
    pre, mid, post = _prod(dims[:k0]), _prod(dims[k0:k1]), _prod(dims[k1:])
    if a.cols != mid:
        raise ShapeError(f"block operator {a.shape} does not fit factor size {mid}")
    ncols = x.cols
    t = x.a.reshape(pre, mid, post * ncols).transpose(1, 0, 2).reshape(mid, -1)
    r = _dot(a.a, t, x.p)
    r = r.reshape(a.rows, pre, post * ncols).transpose(1, 0, 2).reshape(pre * a.rows * post, ncols)
    return Mat(np.ascontiguousarray(r), x.p, _trusted=True)


def apply_factor(x: Mat, dims: Sequence[int], k: int, a: Mat) -> Mat:
    return apply_block(x, dims, k, k + 1, a)


def permute_factors(x: Mat, dims: Sequence[int], perm: Sequence[int]) -> Mat:
    """Reorder tensor factors: output factor i is input factor perm[i]."""
    dims = list(dims)
    perm = list(perm)
    if sorted(perm) != list(range(len(dims))):
        raise ShapeError(f"{perm} is not a permutation of {len(dims)} factors")
    ncols = x.cols
    t = x.a.reshape(dims + [ncols]).transpose(perm + [len(dims)]).reshape(x.rows, ncols)
    return Mat(np.ascontiguousarray(t), x.p, _trusted=True)


def permutation_matrix(dims: Sequence[int], perm: Sequence[int], p: int) -> Mat:
    n = _prod(dims)
    return permute_factors(Mat.identity(n, p), dims, perm)
