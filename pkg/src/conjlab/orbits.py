"""Constructive conjugation lemmas: placing prescribed top-left blocks,
raising the rank of sums of conjugates, orbit-closure classification, the
level-raising tuple-rank witness, and exact degeneration curves over QQ(t).

Each construction realizes a block shape by an explicit change of basis
(greedy, deterministic tie-breaks over the standard basis, with a seeded
generic fallback) and then corrects with unipotent factors.  Every
returned witness is verified against its postcondition before returning.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .chains import ChainSpec, ChainError
from .fields import GF, QQ, QQT
from .matrix import (
    Matrix,
    MatrixError,
    column_space_basis,
    det,
    inverse,
    kernel_basis,
    lift_to_qqt,
    limit_at_zero,
    rank,
    random_invertible,
    solve_left,
    solve_right,
)
from .pencil import (
    BudgetExceeded,
    ENUMERATION_BUDGET,
    enumerate_gl_rows,
    gl_order,
    shift_rank,
    tuple_rank_identity,
)


class ConstructionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Incremental span (membership tests for greedy basis building)
# ---------------------------------------------------------------------------

class _Span:
    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.rows = {}  # pivot index -> reduced row (list)

    def _reduce(self, vec):
        f = self.field
        v = list(vec)
        for piv in sorted(self.rows):
            if not f.is_zero(v[piv]):
                c = v[piv]
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, self.rows[piv])]
        return v

    def contains(self, vec) -> bool:
        return all(self.field.is_zero(x) for x in self._reduce(vec))

    def add(self, vec) -> bool:
        f = self.field
        v = self._reduce(vec)
        piv = next((i for i, x in enumerate(v) if not f.is_zero(x)), None)
        if piv is None:
            return False
        inv = f.inv(v[piv])
        self.rows[piv] = [f.mul(inv, x) for x in v]
        return True


def _col(M: Matrix, j: int) -> list:
    return [M.entry(i, j) for i in range(M.rows)]


def _vec_add(f, a, b):
    return [f.add(x, y) for x, y in zip(a, b)]


def _complete_basis(field, cols, n, rng=None) -> list:
    """Extend the given independent columns to a basis of K^n.

    Standard basis vectors are tried in index order (the lexicographically
    least column selection); a seeded random fallback covers degenerate cases.
    """
    span = _Span(field, n)
    out = [list(c) for c in cols]
    for c in out:
        if not span.add(c):
            raise ConstructionError("given columns are dependent")
    for i in range(n):
        if len(out) == n:
            break
        e = [field.one if t == i else field.zero for t in range(n)]
        if span.add(e):
            out.append(e)
    attempts = 0
    while len(out) < n:
        if rng is None:
            rng = random.Random(0)
        v = [field.random(rng) for _ in range(n)]
        if span.add(v):
            out.append(v)
        attempts += 1
        if attempts > 500:
            raise ConstructionError("could not complete to a basis")
    return out


# ---------------------------------------------------------------------------
# Block-shape conjugation: zero right columns, full-rank lower-left block
# ---------------------------------------------------------------------------

def shape_left(P: Matrix, m: int):
    """h with B = h P h^{-1} satisfying B[:, m:] = 0 and rank(B[m:, :m]) = rank(P).

    Needs rank(P) <= m and m + rank(P) <= n.  The new basis is (W | Z) with
    Z inside ker P and span(W) meeting im P trivially.
    """
    f = P.field
    n = P.rows
    k = rank(P)
    if not (k <= m and m + k <= n):
        raise ConstructionError(f"shape_left needs rank <= m and m + rank <= n (rank {k}, m {m}, n {n})")
    from .matrix import rank_and_rref
    im_cols = column_space_basis(P)
    pivots = rank_and_rref(P).pivots
    ker = [_col(K, 0) for K in kernel_basis(P)]
    rng = random.Random(0)
    for _attempt in range(50):
        span = _Span(f, n)
        for c in im_cols:
            span.add(_col(c, 0))
        W: list = []
        ok = True
        # particular solutions P e_j = (pivot column j), adjusted by kernel vectors
        for j in pivots:
            base = [f.one if t == j else f.zero for t in range(n)]
            adjusts = [[f.zero] * n] + ker
            chosen = None
            for t in adjusts:
                cand = _vec_add(f, base, t)
                if not span.contains(cand):
                    chosen = cand
                    break
            if chosen is None:
                # random kernel combinations
                for _ in range(100):
                    t = [f.zero] * n
                    for kv in ker:
                        c = f.random(rng)
                        t = _vec_add(f, t, [f.mul(c, x) for x in kv])
                    cand = _vec_add(f, base, t)
                    if not span.contains(cand):
                        chosen = cand
                        break
            if chosen is None:
                ok = False
                break
            span.add(chosen)
            W.append(chosen)
        if not ok:
            continue
        for kv in ker:
            if len(W) == m:
                break
            if not span.contains(kv):
                span.add(kv)
                W.append(kv)
        if len(W) < m:
            continue
        # complete with kernel vectors independent of W (and of each other)
        wspan = _Span(f, n)
        for wv in W:
            wspan.add(wv)
        Z: list = []
        for kv in ker:
            if len(Z) == n - m:
                break
            if wspan.add(kv):
                Z.append(kv)
        if len(Z) < n - m:
            continue
        Mb = Matrix.from_rows(f, [[(W + Z)[j][i] for j in range(n)] for i in range(n)])
        try:
            h = inverse(Mb)
        except MatrixError:
            continue
        B = h @ P @ Mb
        if all(f.is_zero(B.entry(i, j)) for i in range(n) for j in range(m, n)) \
                and rank(B.block(m, n, 0, m)) == k:
            return h, B
    raise ConstructionError("shape_left search failed")


def shape_right(P: Matrix, m: int):
    """g with C = g P g^{-1} satisfying C[m:, :] = 0 and rank(C[:m, m:]) = rank(P)."""
    hT, _ = shape_left(P.transpose(), m)
    g = inverse(hT).transpose()
    C = g @ P @ inverse(g)
    f = P.field
    n = P.rows
    assert all(f.is_zero(C.entry(i, j)) for i in range(m, n) for j in range(n))
    assert rank(C.block(0, m, m, n)) == rank(P)
    return g, C


# ---------------------------------------------------------------------------
# Prescribed top-left block
# ---------------------------------------------------------------------------

def topleft_realization(P: Matrix, Q: Matrix) -> Matrix:
    """g with (g P g^{-1})[:n, :n] = Q, for P in gl_{2n} of rank k < n and
    rank(Q) <= k.  Steps: realize a rank-k lower-left block, align kernels,
    then a unipotent correction."""
    f = P.field
    if not (P.is_square and Q.is_square and P.rows == 2 * Q.rows):
        raise MatrixError("need P in gl_{2n} and Q in gl_n")
    n = Q.rows
    k = rank(P)
    if not (k < n and rank(Q) <= k):
        raise ValueError(f"need rank(P) = k < n and rank(Q) <= k (got {k}, n={n}, rank Q {rank(Q)})")
    h1, B = shape_left(P, n)
    R = B.block(n, 2 * n, 0, n)
    # kernel alignment: h . ker(R) inside ker(Q)
    kR = kernel_basis(R)
    kQ = kernel_basis(Q)
    src = _complete_basis(f, [_col(v, 0) for v in kR], n)
    tgt_seed = [_col(v, 0) for v in kQ[: len(kR)]]
    tgt = _complete_basis(f, tgt_seed, n)
    Msrc = Matrix.from_rows(f, [[src[j][i] for j in range(n)] for i in range(n)])
    Mtgt = Matrix.from_rows(f, [[tgt[j][i] for j in range(n)] for i in range(n)])
    h = Mtgt @ inverse(Msrc)
    g2 = Matrix.diag_blocks([h, Matrix.identity(f, n)])
    B2 = g2 @ B @ inverse(g2)
    R2 = B2.block(n, 2 * n, 0, n)
    S = solve_left(R2, Q)
    T = solve_left(R2, B2.block(0, n, 0, n))
    if S is None or T is None:
        raise ConstructionError("block equations unexpectedly unsolvable")
    U = Matrix.from_blocks([
        [Matrix.identity(f, n), S - T],
        [Matrix.zeros(f, n), Matrix.identity(f, n)],
    ])
    g = U @ g2 @ h1
    got = (g @ P @ inverse(g)).block(0, n, 0, n)
    if got != Q:
        raise ConstructionError("top-left realization failed verification")
    return g


# ---------------------------------------------------------------------------
# Raising the rank of a sum of conjugates
# ---------------------------------------------------------------------------

def raise_sum_rank(mats) -> list[Matrix]:
    """Conjugators g_i with k < rank(sum g_i P_i g_i^{-1}) <= 3k and the sum's
    identity-tuple rank equal to its rank.  Requires each rank exactly k >= 1,
    at least two matrices, and n >= 6k."""
    mats = list(mats)
    if len(mats) < 2:
        raise ValueError("need at least two matrices")
    f = mats[0].field
    n = mats[0].rows
    k = rank(mats[0])
    if k < 1:
        raise ValueError("need rank k >= 1")
    for M in mats:
        if M.rows != n or not M.is_square or rank(M) != k:
            raise ValueError("all matrices must be n x n of rank exactly k")
    if n < 6 * k:
        raise ValueError("need n >= 6k")
    gs: list[Matrix] = []
    # first pair: disjointly supported blocks add ranks
    h1, B1 = shape_left(mats[0], k)
    h2, _ = shape_right(mats[1], k)
    gs = [h1, h2]
    S = h1 @ mats[0] @ inverse(h1) + h2 @ mats[1] @ inverse(h2)
    for j in range(2, len(mats)):
        r = rank(S)
        m = max(r, k)
        if r <= 2 * k:
            hS, _ = shape_left(S, m)
            hj, _ = shape_right(mats[j], m)
        else:
            hS, _ = shape_left(S, m)
            hj, _ = shape_left(mats[j], m)
        gs = [hS @ g for g in gs] + [hj]
        S = hS @ S @ inverse(hS) + hj @ mats[j] @ inverse(hj)
    r = rank(S)
    if not (k < r <= 3 * k):
        raise ConstructionError(f"sum rank {r} escaped the bound ({k}, {3 * k}]")
    if tuple_rank_identity(S) != r:
        raise ConstructionError("identity-tuple rank of the sum does not match its rank")
    check = None
    for g, M in zip(gs, mats):
        term = g @ M @ inverse(g)
        check = term if check is None else check + term
    assert check == S
    return gs


# ---------------------------------------------------------------------------
# All-conjugates leading-minor criterion
# ---------------------------------------------------------------------------

def minor_vanishing_test(P: Matrix, k: int, mode: str = "exhaustive",
                         trials: int = 300, rng=None) -> bool:
    """Whether det((g P g^{-1})_[k],[k]) = 0 for all conjugates; exhaustive mode
    decides it over the full finite group and cross-checks rank(P) < k."""
    f = P.field
    n = P.rows
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    if mode == "exhaustive":
        if not isinstance(f, GF):
            raise BudgetExceeded("exhaustive mode needs a finite field")
        if gl_order(n, f.p) > ENUMERATION_BUDGET:
            raise BudgetExceeded("GL_n(F_q) exceeds the enumeration budget")
        verdict = True
        for rows in enumerate_gl_rows(n, f.p):
            g = Matrix.from_rows(f, rows)
            Qc = g @ P @ inverse(g)
            if not f.is_zero(det(Qc.block(0, k, 0, k))):
                verdict = False
                break
        if verdict != (rank(P) < k):
            raise ConstructionError("minor criterion disagrees with the rank oracle")
        return verdict
    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode needs an rng")
        for _ in range(trials):
            g = random_invertible(n, f, rng)
            Qc = g @ P @ inverse(g)
            if not f.is_zero(det(Qc.block(0, k, 0, k))):
                return False
        return True
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Orbit-closure classification at a finite level
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitClosure:
    kind: str  # "dense" or "stratum"
    lam: object = None
    rank: int | None = None
    level: int | None = None


def classify_orbit_closure(P: Matrix) -> OrbitClosure:
    """Shift stratum when some shift has corank above n/2 (where the minimizing
    shift is unique); otherwise a dense marker for this level."""
    n = P.rows
    sr = shift_rank(P)
    if sr.lam is not None and sr.rank < n / 2:
        return OrbitClosure("stratum", sr.lam, sr.rank, n)
    return OrbitClosure("dense", None, None, n)


# ---------------------------------------------------------------------------
# Level-raising witness for bounded tuple rank
# ---------------------------------------------------------------------------

def tuple_rank_lift(chain: ChainSpec, i: int, P: Matrix, k: int | None = None) -> Matrix:
    """A level-(i+1) conjugator g such that the dual projection of g P g^{-1}
    has identity-tuple rank strictly above k = rk(P, I).

    P is a level-(i+1) representative; the shift normalization picks the
    representative of minimal rank.  Scalar classes (k = 0) admit no witness:
    conjugation fixes them and they project to scalar classes.
    """
    from .chains import project_dual  # local import to avoid cycles at module load

    s = chain.signature_at(i)
    if chain.letter != "A" or s.l + s.r < 2:
        raise ChainError("needs a type A chain with l + r >= 2 at this level")
    f = P.field
    N = chain.ambient_at(i + 1)
    m = chain.n_at(i)
    if P.rows != N:
        raise MatrixError(f"P must be a level-{i + 1} representative ({N}x{N})")
    kP = tuple_rank_identity(P)
    if k is None:
        k = kP
    if k != kP:
        raise ValueError(f"declared k={k} but rk(P, I) = {kP}")
    if k == 0:
        raise ChainError("tuple rank 0 means a scalar class; its conjugates project to scalars")
    if m < 6 * k:
        raise ChainError("needs n_i >= 6k")
    sr = shift_rank(P)
    P0 = P - Matrix.scalar(f, N, sr.lam)
    assert rank(P0) == k
    rng = random.Random(0)
    blocks = None
    g0 = None
    for _ in range(300):
        cand = random_invertible(N, f, rng)
        B = cand @ P0 @ inverse(cand)
        bl = []
        good = True
        for jb in range(s.l + s.r):
            blk = B.block(jb * m, (jb + 1) * m, jb * m, (jb + 1) * m)
            if rank(blk) != k:
                good = False
                break
            bl.append(blk)
        if good:
            g0, blocks = cand, bl
            break
    if g0 is None:
        raise ConstructionError("could not position rank-k diagonal blocks (diagnostic: "
                                f"N={N}, m={m}, k={k})")
    summands = blocks[: s.l] + [-(Qb.transpose()) for Qb in blocks[s.l:]]
    hs = raise_sum_rank(summands)
    diag = hs[: s.l] + [inverse(h).transpose() for h in hs[s.l:]]
    if s.z:
        diag.append(Matrix.identity(f, s.z))
    g = Matrix.diag_blocks(diag) @ g0
    proj = project_dual(chain, i, g @ P @ inverse(g))
    if tuple_rank_identity(proj) <= k:
        raise ConstructionError("projection failed to raise the tuple rank")
    return g


# ---------------------------------------------------------------------------
# Skew congruence normal form and degeneration curves
# ---------------------------------------------------------------------------

def is_skew(M: Matrix) -> bool:
    return M.is_square and (M + M.transpose()).is_zero()


def skew_normal_form(R: Matrix):
    """g with g R g^T = Diag(J_2, ..., J_2, 0), J_2 = [[0,1],[-1,0]]."""
    f = R.field
    n = R.rows
    if not is_skew(R):
        raise MatrixError("expected a skew matrix")

    def form(u, v):
        acc = f.zero
        for a in range(n):
            if f.is_zero(u[a]):
                continue
            for b in range(n):
                acc = f.add(acc, f.mul(f.mul(u[a], R.entry(a, b)), v[b]))
        return acc

    vecs = [[f.one if t == i else f.zero for t in range(n)] for i in range(n)]
    pairs = []
    while True:
        found = None
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                if not f.is_zero(form(vecs[a], vecs[b])):
                    found = (a, b)
                    break
            if found:
                break
        if not found:
            break
        a, b = found
        u = vecs[a]
        c = form(u, vecs[b])
        v = [f.div(x, c) for x in vecs[b]]
        rest = [vecs[t] for t in range(len(vecs)) if t not in (a, b)]
        fixed = []
        for w in rest:
            cu = form(u, w)
            cv = form(v, w)
            w2 = [f.add(f.sub(x, f.mul(cu, y)), f.mul(cv, z)) for x, y, z in zip(w, v, u)]
            fixed.append(w2)
        pairs.append((u, v))
        vecs = fixed
    cols = []
    for u, v in pairs:
        cols.append(u)
        cols.append(v)
    cols.extend(vecs)
    B = Matrix.from_rows(f, [[cols[j][i] for j in range(n)] for i in range(n)])
    g = B.transpose()
    N = g @ R @ g.transpose()
    expect = _skew_jform(f, n, len(pairs))
    if N != expect:
        raise ConstructionError("skew normal form failed verification")
    return g, len(pairs)


def _skew_jform(field, n, npairs) -> Matrix:
    ent = [[field.zero] * n for _ in range(n)]
    for i in range(npairs):
        ent[2 * i][2 * i + 1] = field.one
        ent[2 * i + 1][2 * i] = field.neg(field.one)
    return Matrix.from_rows(field, ent)


def _qqt_diag_scale(n: int, keep: int) -> Matrix:
    """Diag(I_keep, t, ..., t) over QQ(t)."""
    qqt = QQT()
    ent = [[qqt.zero] * n for _ in range(n)]
    for i in range(n):
        ent[i][i] = qqt.one if i < keep else qqt.t
    return Matrix.from_rows(qqt, ent)


def degeneration_witness(R: Matrix, W: Matrix, Q: Matrix, V: Matrix) -> Matrix:
    """An invertible curve g over QQ(t) with limits g R g^T -> Q and g W -> V
    at t = 0; the action is simultaneous congruence on the skew part and left
    multiplication on the column part.  Requires rank(W) = k columns and
    rank(Q) <= rank(R) - 2k."""
    f = R.field
    if not isinstance(f, QQ):
        raise MatrixError("degeneration curves are built over QQ")
    n = R.rows
    k = W.cols
    if W.rows != n or V.rows != n or V.cols != k:
        raise MatrixError("W and V must be n x k")
    if not (is_skew(R) and is_skew(Q)) or Q.rows != n:
        raise MatrixError("R and Q must be skew n x n")
    if rank(W) != k:
        raise ValueError("W must have full column rank")
    if rank(Q) > rank(R) - 2 * k:
        raise ValueError("need rank(Q) <= rank(R) - 2k")
    G = _degen(R, W, Q, V)
    if not _invertible_over_qqt(G):
        raise ConstructionError("degeneration curve is singular over QQ(t)")
    Rl = limit_at_zero(G @ lift_to_qqt(R) @ G.transpose())
    Wl = limit_at_zero(G @ lift_to_qqt(W))
    if Rl != Q or Wl != V:
        raise ConstructionError("degeneration limits missed the target")
    return G


def _invertible_over_qqt(G: Matrix) -> bool:
    """Nonzero determinant in QQ(t), decided by evaluation at sample points
    (sound: a nonzero specialization proves det != 0) with a symbolic fallback."""
    from fractions import Fraction
    from .fields import ipoly_eval
    qq = QQ()
    for t0 in (1, 2, 3, 5, 7):
        try:
            at_t0 = G.map_field(qq, lambda a: Fraction(ipoly_eval(a.num, Fraction(t0)),
                                                       1) / ipoly_eval(a.den, Fraction(t0)))
        except ZeroDivisionError:
            continue
        if not qq.is_zero(det(at_t0)):
            return True
    return not QQT().is_zero(det(G))


def _degen(R: Matrix, W: Matrix, Q: Matrix, V: Matrix) -> Matrix:
    f = R.field
    qqt = QQT()
    n = R.rows
    k = W.cols
    if k == 0:
        gR, _ = skew_normal_form(R)
        gQ, sQ = skew_normal_form(Q)
        D = _qqt_diag_scale(n, 2 * sQ)
        return lift_to_qqt(inverse(gQ)) @ D @ lift_to_qqt(gR)
    # step 1: move the last column of W to e_n
    wl = _col(W, k - 1)
    others = _complete_basis(f, [wl], n)[1:]
    Mb = Matrix.from_rows(f, [[(others + [wl])[j][i] for j in range(n)] for i in range(n)])
    g1 = inverse(Mb)
    R1, W1 = g1 @ R @ g1.transpose(), g1 @ W
    # step 2: push the last column of R out of the column space of W
    choice = None
    for idx in range(n):
        u = [f.zero] * n
        u[n - 1] = f.one
        if idx < n - 1:
            u[idx] = f.one
        cvec = Matrix(f, n, 1, tuple(
            _dotrow(f, R1, a, u) for a in range(n)))
        if solve_right(W1, cvec) is None:
            choice = u
            break
    if choice is None:
        raise ConstructionError("no shear makes the last R column leave im(W)")
    L = Matrix.identity(f, n)
    if any(not f.is_zero(c) for c in choice[: n - 1]):
        ent = [[f.one if a == b else f.zero for b in range(n)] for a in range(n)]
        for b in range(n - 1):
            ent[n - 1][b] = choice[b]
        L = Matrix.from_rows(f, ent)
    R2, W2 = L @ R1 @ L.transpose(), L @ W1
    # step 3: normalize that column to e_{n-1}
    ctop = [R2.entry(a, n - 1) for a in range(n - 1)]
    comp = _complete_basis(f, [ctop], n - 1)[1:]
    M2 = Matrix.from_rows(f, [[(comp + [ctop])[j][i] for j in range(n - 1)] for i in range(n - 1)])
    h = inverse(M2)
    g3 = Matrix.diag_blocks([h, Matrix.identity(f, 1)])
    R3, W3 = g3 @ R2 @ g3.transpose(), g3 @ W2
    assert R3.entry(n - 2, n - 1) == f.one and R3.entry(n - 1, n - 2) == f.neg(f.one)
    # step 4: squeeze row/column n-1 (0-based n-2) with Diag(I, t, 1)
    qD = Matrix.diag_blocks([
        Matrix.identity(qqt, n - 2),
        Matrix.from_rows(qqt, [[qqt.t]]),
        Matrix.identity(qqt, 1),
    ])
    R4 = Matrix.from_rows(f, [
        [R3.entry(a, b) if (a < n - 2 and b < n - 2) else f.zero for b in range(n)]
        for a in range(n)
    ])
    W4 = Matrix.from_rows(f, [
        [f.zero if a == n - 2 else W3.entry(a, b) for b in range(k)]
        for a in range(n)
    ])
    Rc = R4.block(0, n - 2, 0, n - 2)
    Wc = W4.block(0, n - 2, 0, k - 1)
    if rank(Wc) != k - 1:
        raise ConstructionError("corner column block lost rank")
    if rank(Q) > rank(Rc) - 2 * (k - 1):
        raise ConstructionError("corner skew block lost too much rank")
    # step 5: recurse into the corner toward the normal form of Q
    gQ, sQ = skew_normal_form(Q)
    Qin = _skew_jform(f, n - 2, sQ)
    Vin = Matrix.from_rows(f, [
        [f.one if (a >= n - k - 1 and a - (n - k - 1) == b) else f.zero for b in range(k - 1)]
        for a in range(n - 2)
    ])
    Gin = _degen(Rc, Wc, Qin, Vin)
    Gstep = Matrix.diag_blocks([Gin, Matrix.identity(qqt, 2)])
    # exact state after the corner move
    R5 = Matrix.from_rows(f, [
        [Qin.entry(a, b) if (a < n - 2 and b < n - 2) else f.zero for b in range(n)]
        for a in range(n)
    ])
    W5rows = []
    for a in range(n):
        if a < n - 2:
            W5rows.append([Vin.entry(a, b) for b in range(k - 1)] + [f.zero])
        elif a == n - 2:
            W5rows.append([f.zero] * k)
        else:
            W5rows.append([W4.entry(a, b) for b in range(k)])
    W5 = Matrix.from_rows(f, W5rows)
    # step 6: move the zero row n-2 up so the identity block sits at the bottom
    order = list(range(n - k - 1)) + [n - 2] + list(range(n - k - 1, n - 3 + 1)) + [n - 1]
    perm = Matrix.from_rows(f, [
        [f.one if order[a] == b else f.zero for b in range(n)] for a in range(n)
    ])
    R6 = perm @ R5 @ perm.transpose()
    W6 = perm @ W5
    assert R6 == R5  # the moved rows and columns are zero
    # step 7: shrink the last k coordinates while feeding in the target columns
    u = [W6.entry(n - 1, b) for b in range(k - 1)]
    Vuse = gQ @ V
    Tu = Matrix.from_rows(f, [
        [f.one if a == b else f.zero for b in range(k - 1)] + [f.zero]
        for a in range(k - 1)
    ] + [[f.neg(x) for x in u] + [f.one]])
    corr = Vuse @ Tu
    ent = [[qqt.zero] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a == b:
                ent[a][b] = qqt.one if a < n - k else qqt.t
    for a in range(n):
        for b in range(k):
            ent[a][n - k + b] = qqt.add(ent[a][n - k + b], qqt.coerce(corr.entry(a, b)))
    A = Matrix.from_rows(qqt, ent)
    gf = lift_to_qqt(inverse(gQ))
    return gf @ A @ perm.map_field(qqt, qqt.coerce) @ Gstep @ qD @ \
        lift_to_qqt(g3 @ L @ g1)


def _dotrow(f, M: Matrix, row: int, vec) -> object:
    acc = f.zero
    for b in range(M.cols):
        acc = f.add(acc, f.mul(M.entry(row, b), vec[b]))
    return acc
