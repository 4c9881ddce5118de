"""Tuple rank, shift rank, and the off-diagonal submatrix criterion.

The rank of a tuple (Q_1, ..., Q_k) is the minimum rank of a nonzero linear
combination, indexed by projective space.  Over finite fields the minimum is
found by full projective enumeration; for tuples (P, I) it reduces to the
shift rank min over lambda of rank(P - lambda I), which eigenvalue data gives
over any field with decidable eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fields import GF, UnsupportedFieldOperation
from .matrix import Matrix, MatrixError, eigen_data, inverse, rank, random_invertible

ENUMERATION_BUDGET = 10**6


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class PencilTuple:
    matrices: tuple

    @staticmethod
    def make(matrices) -> "PencilTuple":
        ms = tuple(matrices)
        if not ms:
            raise MatrixError("empty pencil tuple")
        f, r, c = ms[0].field, ms[0].rows, ms[0].cols
        for m in ms:
            if m.field != f or (m.rows, m.cols) != (r, c):
                raise MatrixError("pencil matrices must share shape and field")
        return PencilTuple(ms)


@dataclass(frozen=True)
class ShiftRankResult:
    lam: object  # scalar or None when no K-eigenvalue exists
    rank: int


def shift_rank(P: Matrix) -> ShiftRankResult:
    """Minimize rank(P - lambda I) over lambda in K.

    Ties break toward lambda = 0, then the field's canonical scalar order.
    When P has no K-eigenvalue the result carries lam=None and rank n.
    """
    if not P.is_square:
        raise MatrixError("shift_rank of non-square matrix")
    f = P.field
    n = P.rows
    eig = eigen_data(P)
    if not eig:
        return ShiftRankResult(None, n)
    best_mult = max(m for _, m in eig)
    cands = [lam for lam, m in eig if m == best_mult]
    zero = f.zero
    lam = zero if zero in cands else min(cands, key=f.sort_key)
    return ShiftRankResult(lam, n - best_mult)


def tuple_rank_identity(P: Matrix) -> int:
    """rk(P, I_n): the minimum rank over the projective pencil through P and I."""
    return min(P.rows, shift_rank(P).rank)


def projective_points(field, k: int):
    """Points of P^{k-1}(F_q), first nonzero coordinate normalized to 1.

    Canonical order: by position of the leading 1, then remaining coordinates
    lexicographically in the field's scalar order.  Witness reporting relies
    on this order being fixed.
    """
    if not isinstance(field, GF):
        raise UnsupportedFieldOperation("projective enumeration needs a finite field")
    elems = list(field.elements())

    def rest(depth):
        if depth == 0:
            yield ()
            return
        for e in elems:
            for tail in rest(depth - 1):
                yield (e,) + tail

    for lead in range(k):
        for tail in rest(k - lead - 1):
            yield (field.zero,) * lead + (field.one,) + tail


def projective_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def pencil_rank_enumerate(tup: PencilTuple) -> tuple[int, tuple]:
    """Exact minimum rank over P^{k-1}(F_q) with the canonical minimizing witness."""
    ms = tup.matrices
    f = ms[0].field
    if not isinstance(f, GF):
        raise UnsupportedFieldOperation("pencil_rank_enumerate needs a finite field")
    k = len(ms)
    if projective_count(f.p, k) > ENUMERATION_BUDGET:
        raise BudgetExceeded(f"P^{k-1}(F_{f.p}) exceeds the enumeration budget")
    best_rank = None
    best_point = None
    for mu in projective_points(f, k):
        comb = None
        for c, M in zip(mu, ms):
            if f.is_zero(c):
                continue
            term = M if c == f.one else M.scale(c)
            comb = term if comb is None else comb + term
        r = rank(comb)
        if best_rank is None or r < best_rank:
            best_rank, best_point = r, mu
            if r == 0:
                break
    return best_rank, best_point


# ---------------------------------------------------------------------------
# GL_n(F_q) enumeration (rows chosen in lexicographic order, skipping spans)
# ---------------------------------------------------------------------------

def gl_order(n: int, q: int) -> int:
    total = 1
    for i in range(n):
        total *= q**n - q**i
    return total


def _all_vectors(n, p):
    if n == 0:
        yield ()
        return
    for v in _all_vectors(n - 1, p):
        for c in range(p):
            yield v + (c,)


def enumerate_gl_rows(n: int, p: int):
    """Yield the row tuples of every element of GL_n(F_p), lexicographically."""
    vectors = [v for v in _all_vectors(n, p)][1:]  # skip zero; lex order

    def extend(rows, span):
        if len(rows) == n:
            yield tuple(rows)
            return
        for v in vectors:
            if v in span:
                continue
            new_span = set()
            for s in span | {(0,) * n}:
                for c in range(p):
                    new_span.add(tuple((a + c * b) % p for a, b in zip(s, v)))
            new_span.discard((0,) * n)
            rows.append(v)
            yield from extend(rows, new_span)
            rows.pop()

    yield from extend([], set())


@lru_cache(maxsize=4)
def _gl_with_inverses(n: int, p: int):
    """All (g, g^{-1}) pairs of GL_n(F_p) as row tuples; cached."""
    field = GF(p)
    out = []
    for rows in enumerate_gl_rows(n, p):
        g = Matrix.from_rows(field, rows)
        gi = inverse(g)
        out.append((rows, tuple(tuple(gi.row_list(i)) for i in range(n))))
    return tuple(out)


def _rank_rows_mod(rows, p) -> int:
    """Rank of small integer row lists mod p."""
    a = [list(r) for r in rows]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    r = 0
    for c in range(nc):
        pr = None
        for i in range(r, nr):
            if a[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], -1, p)
        for i in range(r + 1, nr):
            if a[i][c] % p:
                coef = (a[i][c] * inv) % p
                a[i] = [(x - coef * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == nr:
            break
    return r


def offdiag_criterion_check(P: Matrix, k: int, m: int, mode: str = "exhaustive",
                            trials: int = 200, rng=None):
    """Decide whether every conjugate Q of P has rank(Q_[K,L]) <= k.

    K = the first m indices and L = the next m indices.  In exhaustive mode the
    verdict equals tuple_rank_identity(P) <= k whenever n >= 2m >= 2(k+1); a
    False verdict carries a certified witness (g, K, L).  Sampled mode draws
    random conjugators and random disjoint index pairs; a pass is statistical.
    """
    f = P.field
    n = P.rows
    if not P.is_square:
        raise MatrixError("offdiag criterion expects a square matrix")
    if not (n >= 2 * m >= 2 * (k + 1)):
        raise ValueError(f"need n >= 2m >= 2(k+1), got n={n}, m={m}, k={k}")
    K = tuple(range(m))
    L = tuple(range(m, 2 * m))
    if mode == "exhaustive":
        if not isinstance(f, GF):
            raise UnsupportedFieldOperation("exhaustive mode needs a finite field")
        if gl_order(n, f.p) > ENUMERATION_BUDGET:
            raise BudgetExceeded("GL_n(F_q) exceeds the enumeration budget")
        p = f.p
        prow = [tuple(P.row_list(i)) for i in range(n)]
        for g_rows, gi_rows in _gl_with_inverses(n, p):
            # rows K of g.P, then columns L of the inverse
            gp = []
            for i in K:
                grow = g_rows[i]
                gp.append([sum(grow[t] * prow[t][j] for t in range(n)) % p for j in range(n)])
            blk = []
            for row in gp:
                blk.append([sum(row[t] * gi_rows[t][j] for t in range(n)) % p for j in L])
            if _rank_rows_mod(blk, p) > k:
                g = Matrix.from_rows(f, g_rows)
                return False, (g, K, L)
        return True, None
    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode needs an rng")
        for _ in range(trials):
            g = random_invertible(n, f, rng)
            Q = g @ P @ inverse(g)
            idx = list(range(n))
            rng.shuffle(idx)
            Ks, Ls = tuple(sorted(idx[:m])), tuple(sorted(idx[m : 2 * m]))
            if rank(Q.submatrix(Ks, Ls)) > k:
                return False, (g, Ks, Ls)
        return True, None
    raise ValueError(f"unknown mode {mode!r}")


def projection_stabilization(tup: PencilTuple, n_max: int | None = None) -> list[int]:
    """Pencil ranks of the leading principal truncations at sizes 1..n_max."""
    ms = tup.matrices
    n = ms[0].rows
    if n_max is None:
        n_max = n
    if n_max > n:
        raise ValueError("n_max exceeds the matrices' size")
    out = []
    prev = -1
    for size in range(1, n_max + 1):
        trunc = PencilTuple.make([M.block(0, size, 0, size) for M in ms])
        r, _ = pencil_rank_enumerate(trunc)
        if r < prev:
            raise AssertionError("pencil rank of truncations must be nondecreasing")
        prev = r
        out.append(r)
    return out
