"""Dense exact matrices and the rank / characteristic polynomial / eigenvalue kernel.

Everything is immutable and pure.  Matrices store a flat row-major tuple of
canonical scalars together with the owning field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .fields import (
    GF,
    QQ,
    QQT,
    FieldError,
    UniPoly,
    UnsupportedFieldOperation,
)


class MatrixError(ValueError):
    pass


class PoleAtZero(FieldError):
    """An entry of a QQ(t) matrix has a pole at t=0; carries 1-based (row, col)."""

    def __init__(self, row: int, col: int):
        super().__init__(f"pole at t=0 in entry ({row},{col})")
        self.row = row
        self.col = col


@dataclass(frozen=True)
class Matrix:
    field: object
    rows: int
    cols: int
    entries: tuple

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_rows(field, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        if any(len(r) != nc for r in rows):
            raise MatrixError("ragged rows")
        ent = tuple(field.coerce(v) for r in rows for v in r)
        return Matrix(field, nr, nc, ent)

    @staticmethod
    def zeros(field, rows, cols=None) -> "Matrix":
        cols = rows if cols is None else cols
        return Matrix(field, rows, cols, (field.zero,) * (rows * cols))

    @staticmethod
    def identity(field, n) -> "Matrix":
        ent = [field.zero] * (n * n)
        for i in range(n):
            ent[i * n + i] = field.one
        return Matrix(field, n, n, tuple(ent))

    @staticmethod
    def basis(field, n, i, j) -> "Matrix":
        """The matrix unit E_{ij} (0-based) in gl_n."""
        ent = [field.zero] * (n * n)
        ent[i * n + j] = field.one
        return Matrix(field, n, n, tuple(ent))

    @staticmethod
    def scalar(field, n, c) -> "Matrix":
        return Matrix.identity(field, n).scale(c)

    @staticmethod
    def diag_blocks(blocks) -> "Matrix":
        field = blocks[0].field
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        ent = [field.zero] * (n * m)
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                base = (r0 + i) * m + c0
                for j in range(b.cols):
                    ent[base + j] = b.entry(i, j)
            r0 += b.rows
            c0 += b.cols
        return Matrix(field, n, m, tuple(ent))

    @staticmethod
    def from_blocks(grid) -> "Matrix":
        """Assemble from a 2d list of blocks with matching shapes."""
        field = grid[0][0].field
        row_h = [row[0].rows for row in grid]
        col_w = [b.cols for b in grid[0]]
        n, m = sum(row_h), sum(col_w)
        ent = [field.zero] * (n * m)
        r0 = 0
        for bi, row in enumerate(grid):
            c0 = 0
            for bj, b in enumerate(row):
                if b.rows != row_h[bi] or b.cols != col_w[bj]:
                    raise MatrixError("block shape mismatch")
                for i in range(b.rows):
                    base = (r0 + i) * m + c0
                    for j in range(b.cols):
                        ent[base + j] = b.entry(i, j)
                c0 += b.cols
            r0 += row_h[bi]
        return Matrix(field, n, m, tuple(ent))

    # -- access --------------------------------------------------------------

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row_list(self, i):
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self):
        return [self.row_list(i) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        ent = tuple(self.entry(i, j) for i in row_idx for j in col_idx)
        return Matrix(self.field, len(row_idx), len(col_idx), ent)

    def block(self, r0, r1, c0, c1) -> "Matrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    # -- arithmetic -----------------------------------------------------------

    def _chk(self, other):
        if self.field != other.field:
            raise MatrixError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._chk(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("shape mismatch in +")
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      tuple(f.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, self.rows, self.cols, tuple(f.neg(a) for a in self.entries))

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(f, self.rows, self.cols, tuple(f.mul(c, a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._chk(other)
        if self.cols != other.rows:
            raise MatrixError("shape mismatch in @")
        f = self.field
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(m):
                acc = f.zero
                for t in range(k):
                    av = arow[t]
                    if not f.is_zero(av):
                        acc = f.add(acc, f.mul(av, b[t * m + j]))
                out.append(acc)
        return Matrix(f, n, m, tuple(out))

    def transpose(self) -> "Matrix":
        ent = tuple(self.entry(j, i) for i in range(self.cols) for j in range(self.rows))
        return Matrix(self.field, self.cols, self.rows, ent)

    def trace(self):
        if not self.is_square:
            raise MatrixError("trace of non-square matrix")
        f = self.field
        acc = f.zero
        for i in range(self.rows):
            acc = f.add(acc, self.entry(i, i))
        return acc

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(a) for a in self.entries)

    def map_field(self, new_field, convert) -> "Matrix":
        return Matrix(new_field, self.rows, self.cols,
                      tuple(convert(a) for a in self.entries))


@dataclass(frozen=True)
class RrefResult:
    rank: int
    rref: Matrix
    transform: Matrix
    pivots: tuple


def rank_and_rref(M: Matrix) -> RrefResult:
    """Gauss-Jordan elimination; returns invertible T with T @ M = rref."""
    f = M.field
    n, m = M.rows, M.cols
    a = [M.row_list(i) + [f.one if j == i else f.zero for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if not f.is_zero(a[i][c])), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = f.inv(a[r][c])
        a[r] = [f.mul(inv, v) for v in a[r]]
        for i in range(n):
            if i != r and not f.is_zero(a[i][c]):
                coef = a[i][c]
                a[i] = [f.sub(v, f.mul(coef, w)) for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    rref = Matrix(f, n, m, tuple(v for row in a for v in row[:m]))
    transform = Matrix(f, n, n, tuple(v for row in a for v in row[m:]))
    return RrefResult(r, rref, transform, tuple(pivots))


def rank(M: Matrix) -> int:
    return rank_and_rref(M).rank


def det(M: Matrix):
    """Determinant by fraction-producing elimination (exact over any field)."""
    if not M.is_square:
        raise MatrixError("determinant of non-square matrix")
    f = M.field
    n = M.rows
    a = [M.row_list(i) for i in range(n)]
    sign = 1
    acc = f.one
    for c in range(n):
        pr = next((i for i in range(c, n) if not f.is_zero(a[i][c])), None)
        if pr is None:
            return f.zero
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            sign = -sign
        piv = a[c][c]
        acc = f.mul(acc, piv)
        inv = f.inv(piv)
        for i in range(c + 1, n):
            if not f.is_zero(a[i][c]):
                coef = f.mul(a[i][c], inv)
                a[i] = [f.sub(v, f.mul(coef, w)) for v, w in zip(a[i], a[c])]
    return acc if sign == 1 else f.neg(acc)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square:
        raise MatrixError("inverse of non-square matrix")
    res = rank_and_rref(M)
    if res.rank != M.rows:
        raise MatrixError("matrix is singular")
    return res.transform


def is_invertible(M: Matrix) -> bool:
    return M.is_square and rank(M) == M.rows


def kernel_basis(M: Matrix) -> list[Matrix]:
    """Canonical right-kernel basis (one column vector per free column)."""
    f = M.field
    res = rank_and_rref(M)
    piv = set(res.pivots)
    basis = []
    for free in range(M.cols):
        if free in piv:
            continue
        v = [f.zero] * M.cols
        v[free] = f.one
        for r, pc in enumerate(res.pivots):
            v[pc] = f.neg(res.rref.entry(r, free))
        basis.append(Matrix(f, M.cols, 1, tuple(v)))
    return basis


def solve_right(A: Matrix, B: Matrix) -> Matrix | None:
    """A particular X with A @ X = B, or None; free variables are set to 0."""
    if A.rows != B.rows:
        raise MatrixError("shape mismatch in solve")
    f = A.field
    res = rank_and_rref(A)
    rb = res.transform @ B
    for i in range(res.rank, A.rows):
        for j in range(B.cols):
            if not f.is_zero(rb.entry(i, j)):
                return None
    ent = [f.zero] * (A.cols * B.cols)
    for r, pc in enumerate(res.pivots):
        for j in range(B.cols):
            ent[pc * B.cols + j] = rb.entry(r, j)
    return Matrix(f, A.cols, B.cols, tuple(ent))


def solve_left(A: Matrix, B: Matrix) -> Matrix | None:
    """A particular X with X @ A = B, or None."""
    xt = solve_right(A.transpose(), B.transpose())
    return None if xt is None else xt.transpose()


def column_space_basis(M: Matrix) -> list[Matrix]:
    res = rank_and_rref(M)
    return [M.submatrix(range(M.rows), [c]) for c in res.pivots]


def char_poly(M: Matrix) -> UniPoly:
    """det(xI - M), monic, by the division-free Berkowitz scheme."""
    if not M.is_square:
        raise MatrixError("characteristic polynomial of non-square matrix")
    f = M.field
    n = M.rows
    if n == 0:
        return UniPoly.make(f, [f.one])
    # p holds descending coefficients of det(xI - A_k) for the leading k x k block
    p = [f.one, f.neg(M.entry(0, 0))]
    for k in range(1, n):
        a = M.entry(k, k)
        R = [M.entry(k, j) for j in range(k)]
        C = [M.entry(i, k) for i in range(k)]
        Asub = [[M.entry(i, j) for j in range(k)] for i in range(k)]
        s = []
        v = C[:]
        for _ in range(k):
            acc = f.zero
            for rv, vv in zip(R, v):
                acc = f.add(acc, f.mul(rv, vv))
            s.append(acc)
            v = [
                _dot(f, Asub[i], v)
                for i in range(k)
            ]
        first_col = [f.one, f.neg(a)] + [f.neg(x) for x in s]
        newp = []
        for i in range(k + 2):
            acc = f.zero
            for j in range(k + 1):
                d = i - j
                if 0 <= d < len(first_col):
                    acc = f.add(acc, f.mul(first_col[d], p[j]))
            newp.append(acc)
        p = newp
    return UniPoly.make(f, list(reversed(p)))


def _dot(f, xs, ys):
    acc = f.zero
    for x, y in zip(xs, ys):
        acc = f.add(acc, f.mul(x, y))
    return acc


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def eigen_data(M: Matrix) -> list[tuple]:
    """All K-rational eigenvalues with geometric multiplicities, in canonical order."""
    if not M.is_square:
        raise MatrixError("eigen_data of non-square matrix")
    f = M.field
    n = M.rows
    if isinstance(f, QQT):
        raise UnsupportedFieldOperation("eigenvalues over QQ(t) are not supported")
    out = []
    if isinstance(f, GF):
        candidates = list(f.elements())
    else:
        cp = char_poly(M)
        coeffs = list(cp.coeffs)  # Fractions, monic
        lcm_den = 1
        for c in coeffs:
            lcm_den = lcm_den * c.denominator // gcd(lcm_den, c.denominator)
        ints = [int(c * lcm_den) for c in coeffs]
        candidates = set()
        v = 0
        while v < len(ints) and ints[v] == 0:
            v += 1
        if v > 0:
            candidates.add(Fraction(0))
            ints = ints[v:]
        if ints:
            a0, an = ints[0], ints[-1]
            for pnum in _int_divisors(a0):
                for qden in _int_divisors(an):
                    for s in (1, -1):
                        cand = Fraction(s * pnum, qden)
                        if cp.eval(cand) == 0:
                            candidates.add(cand)
        candidates = sorted(candidates)
    ident = Matrix.identity(f, n)
    for lam in candidates:
        r = rank(M - ident.scale(lam))
        if r < n:
            out.append((lam, n - r))
    out.sort(key=lambda t: f.sort_key(t[0]))
    return out


def transform(M: Matrix, g: Matrix, mode: str) -> Matrix:
    """Similarity g M g^{-1} or congruence g M g^T, exactly."""
    if mode not in ("similarity", "congruence"):
        raise MatrixError(f"unknown transform mode {mode!r}")
    if not (M.is_square and g.is_square and g.rows == M.rows):
        raise MatrixError("shape mismatch in transform")
    if mode == "similarity":
        return g @ M @ inverse(g)
    return g @ M @ g.transpose()


def limit_at_zero(M: Matrix) -> Matrix:
    """Entrywise evaluation of a QQ(t) matrix at t=0; PoleAtZero on failure."""
    f = M.field
    if not isinstance(f, QQT):
        raise MatrixError("limit_at_zero expects a matrix over QQ(t)")
    qq = QQ()
    ent = []
    for i in range(M.rows):
        for j in range(M.cols):
            a = M.entry(i, j)
            if f.has_pole_at_zero(a):
                raise PoleAtZero(i + 1, j + 1)
            ent.append(f.value_at_zero(a))
    return Matrix(qq, M.rows, M.cols, tuple(ent))


def lift_to_qqt(M: Matrix) -> Matrix:
    """Embed a QQ matrix into QQ(t)."""
    if not isinstance(M.field, QQ):
        raise MatrixError("lift_to_qqt expects a QQ matrix")
    qqt = QQT()
    return M.map_field(qqt, qqt.coerce)


def random_matrix(n: int, m: int, field, rng) -> Matrix:
    return Matrix(field, n, m, tuple(field.random(rng) for _ in range(n * m)))


def random_invertible(n: int, field, rng) -> Matrix:
    """Deterministic-given-seed invertible sample over GF(p) or QQ."""
    if isinstance(field, QQT):
        raise UnsupportedFieldOperation("random_invertible over QQ(t) is not supported")
    while True:
        M = random_matrix(n, n, field, rng)
        if rank(M) == n:
            return M
