import itertools
import random

import pytest
from fractions import Fraction

from conftest import matrix_of_rank, skew_of_rank

from conjlab.chains import ChainError, ChainSpec, project_dual
from conjlab.fields import GF, QQ
from conjlab.matrix import (
    Matrix,
    det,
    inverse,
    lift_to_qqt,
    limit_at_zero,
    rank,
    random_matrix,
)
from conjlab.orbits import (
    OrbitClosure,
    classify_orbit_closure,
    degeneration_witness,
    minor_vanishing_test,
    raise_sum_rank,
    shape_left,
    shape_right,
    skew_normal_form,
    topleft_realization,
    tuple_rank_lift,
)
from conjlab.pencil import shift_rank, tuple_rank_identity

G2, G5, G7, QQ_ = GF(2), GF(5), GF(7), QQ()


def test_shape_left_right(rng):
    for fld in (G5, QQ_):
        for _ in range(15):
            n = 6
            k = rng.randint(1, 2)
            P = matrix_of_rank(fld, n, k, rng)
            m = rng.randint(k, 3)
            h, B = shape_left(P, m)
            assert B == h @ P @ inverse(h)
            assert all(fld.is_zero(B.entry(i, j)) for i in range(n) for j in range(m, n))
            assert rank(B.block(m, n, 0, m)) == k
            g, C = shape_right(P, m)
            assert C == g @ P @ inverse(g)
            assert all(fld.is_zero(C.entry(i, j)) for i in range(m, n) for j in range(n))
            assert rank(C.block(0, m, m, n)) == k


def test_topleft_examples():
    P = Matrix.basis(QQ_, 4, 0, 0)
    g = topleft_realization(P, Matrix.basis(QQ_, 2, 0, 0))
    assert (g @ P @ inverse(g)).block(0, 2, 0, 2) == Matrix.basis(QQ_, 2, 0, 0)
    g = topleft_realization(P, Matrix.zeros(QQ_, 2))
    assert (g @ P @ inverse(g)).block(0, 2, 0, 2).is_zero()
    with pytest.raises(ValueError):
        topleft_realization(Matrix.identity(QQ_, 4), Matrix.zeros(QQ_, 2))  # rank not < n


def test_topleft_random(rng):
    for fld in (G5, QQ_):
        for _ in range(30):
            n = rng.randint(2, 3)
            k = rng.randint(1, n - 1)
            P = matrix_of_rank(fld, 2 * n, k, rng)
            Q = matrix_of_rank(fld, n, rng.randint(0, k), rng)
            g = topleft_realization(P, Q)
            conj = g @ P @ inverse(g)
            assert conj.block(0, n, 0, n) == Q
            assert rank(conj) == rank(P)


def test_raise_sum_rank_example():
    mats = [Matrix.basis(QQ_, 6, 0, 0)] * 2
    gs = raise_sum_rank(mats)
    S = sum((g @ M @ inverse(g) for g, M in zip(gs, mats)), Matrix.zeros(QQ_, 6))
    assert 1 < rank(S) <= 3
    assert tuple_rank_identity(S) == rank(S)
    assert shift_rank(S).lam == 0


def test_raise_sum_rank_random(rng):
    for ell in (2, 3, 4):
        for _ in range(8):
            mats = [matrix_of_rank(G7, 6, 1, rng) for _ in range(ell)]
            gs = raise_sum_rank(mats)
            S = sum((g @ M @ inverse(g) for g, M in zip(gs, mats)), Matrix.zeros(G7, 6))
            assert 1 < rank(S) <= 3
            assert tuple_rank_identity(S) == rank(S)
    with pytest.raises(ValueError):
        raise_sum_rank([Matrix.zeros(QQ_, 6)] * 2)  # rank 0
    with pytest.raises(ValueError):
        raise_sum_rank([matrix_of_rank(QQ_, 5, 1, rng)] * 2)  # n < 6k


def test_minor_vanishing():
    assert minor_vanishing_test(Matrix.zeros(G2, 2), 1)
    assert not minor_vanishing_test(Matrix.identity(G2, 2), 1)
    rng = random.Random(3)
    assert not minor_vanishing_test(Matrix.identity(QQ_, 3), 2, mode="sampled", rng=rng)


def test_minor_vanishing_exhaustive_gf2_n2():
    for ent in itertools.product(range(2), repeat=4):
        P = Matrix(G2, 2, 2, ent)
        for k in (1, 2):
            assert minor_vanishing_test(P, k) == (rank(P) < k)


def test_minor_vanishing_gf2_n3_sample(rng):
    for _ in range(25):
        P = random_matrix(3, 3, G2, rng)
        for k in (1, 2, 3):
            assert minor_vanishing_test(P, k) == (rank(P) < k)


def test_classify_orbit_closure(rng):
    P = Matrix.scalar(QQ_, 4, 5) + Matrix.basis(QQ_, 4, 0, 0)
    oc = classify_orbit_closure(P)
    assert oc == OrbitClosure("stratum", Fraction(5), 1, 4)
    D = Matrix.from_rows(QQ_, [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]])
    assert classify_orbit_closure(D).kind == "dense"
    for _ in range(15):
        P = matrix_of_rank(G7, 5, 1, rng)
        g = inverse(random_matrix(5, 5, G7, rng)) if False else None
        from conjlab.matrix import random_invertible
        g = random_invertible(5, G7, rng)
        assert classify_orbit_closure(g @ P @ inverse(g)) == classify_orbit_closure(P)


def test_tuple_rank_lift_example():
    ch = ChainSpec.make("A", 6, [], [(2, 0, 0)])
    P = Matrix.diag_blocks([Matrix.basis(G5, 6, 0, 0), Matrix.zeros(G5, 6)])
    assert tuple_rank_identity(P) == 1
    g = tuple_rank_lift(ch, 1, P)
    proj = project_dual(ch, 1, g @ P @ inverse(g))
    assert tuple_rank_identity(proj) == 2


def test_tuple_rank_lift_random(rng):
    ch = ChainSpec.make("A", 6, [], [(2, 0, 0)])
    for _ in range(15):
        P = matrix_of_rank(G5, 12, 1, rng)
        g = tuple_rank_lift(ch, 1, P)
        assert tuple_rank_identity(project_dual(ch, 1, g @ P @ inverse(g))) > 1
    # with a dual copy in the signature
    chr_ = ChainSpec.make("A", 6, [], [(1, 1, 0)])
    for _ in range(10):
        P = matrix_of_rank(G5, 12, 1, rng)
        g = tuple_rank_lift(chr_, 1, P)
        assert tuple_rank_identity(project_dual(chr_, 1, g @ P @ inverse(g))) > 1


def test_tuple_rank_lift_scalar_rejected():
    ch = ChainSpec.make("A", 6, [], [(2, 0, 0)])
    with pytest.raises(ChainError):
        tuple_rank_lift(ch, 1, Matrix.scalar(G5, 12, 3))


def test_skew_normal_form(rng):
    for n in (2, 3, 4, 5):
        for _ in range(8):
            R = skew_of_rank(QQ_, n, rng.choice([r for r in (0, 2, 4) if r <= n]), rng)
            g, pairs = skew_normal_form(R)
            N = g @ R @ g.transpose()
            assert rank(R) == 2 * pairs
            for i in range(pairs):
                assert N.entry(2 * i, 2 * i + 1) == 1


def test_degeneration_examples():
    J2 = Matrix.from_rows(QQ_, [[0, 1], [-1, 0]])
    G = degeneration_witness(J2, Matrix.zeros(QQ_, 2, 0), Matrix.zeros(QQ_, 2),
                             Matrix.zeros(QQ_, 2, 0))
    assert limit_at_zero(G @ lift_to_qqt(J2) @ G.transpose()).is_zero()
    W = Matrix.from_rows(QQ_, [[0], [1]])
    V = Matrix.from_rows(QQ_, [[1], [0]])
    G = degeneration_witness(J2, W, Matrix.zeros(QQ_, 2), V)
    assert limit_at_zero(G @ lift_to_qqt(W)) == V


def test_degeneration_preconditions():
    J2 = Matrix.from_rows(QQ_, [[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        degeneration_witness(J2, Matrix.from_rows(QQ_, [[0], [1]]), J2,
                             Matrix.from_rows(QQ_, [[1], [0]]))  # rank Q too big
    with pytest.raises(ValueError):
        degeneration_witness(J2, Matrix.zeros(QQ_, 2, 1), Matrix.zeros(QQ_, 2),
                             Matrix.zeros(QQ_, 2, 1))  # W not full column rank


def test_topleft_gf2(rng):
    # the binary field is the hardest case for the greedy basis choices
    for _ in range(60):
        n = rng.randint(2, 3)
        k = rng.randint(1, n - 1)
        P = matrix_of_rank(G2, 2 * n, k, rng)
        Q = matrix_of_rank(G2, n, rng.randint(0, k), rng)
        g = topleft_realization(P, Q)
        assert (g @ P @ inverse(g)).block(0, n, 0, n) == Q


def test_raise_sum_rank_k2_gf2(rng):
    for _ in range(6):
        mats = [matrix_of_rank(G2, 12, 2, rng) for _ in range(3)]
        gs = raise_sum_rank(mats)
        S = sum((g @ M @ inverse(g) for g, M in zip(gs, mats)), Matrix.zeros(G2, 12))
        assert 2 < rank(S) <= 6 and tuple_rank_identity(S) == rank(S)


def test_tuple_rank_lift_with_trivial_summands(rng):
    chz = ChainSpec.make("A", 6, [], [(2, 0, 3)])
    for _ in range(6):
        P = matrix_of_rank(G5, 15, 1, rng)
        g = tuple_rank_lift(chz, 1, P)
        assert tuple_rank_identity(project_dual(chz, 1, g @ P @ inverse(g))) > 1


def test_degeneration_two_marked_columns(rng):
    # k = 2 runs the recursion twice and needs the interior row permutation
    for _ in range(8):
        n = rng.choice((4, 5, 6))
        rR = 4 if n >= 4 else 2
        R = skew_of_rank(QQ_, n, rR, rng)
        Q = skew_of_rank(QQ_, n, 0, rng)
        while True:
            W = random_matrix(n, 2, QQ_, rng)
            if rank(W) == 2:
                break
        V = random_matrix(n, 2, QQ_, rng)
        G = degeneration_witness(R, W, Q, V)
        assert limit_at_zero(G @ lift_to_qqt(R) @ G.transpose()) == Q
        assert limit_at_zero(G @ lift_to_qqt(W)) == V


def test_degeneration_random(rng):
    for _ in range(10):
        R = skew_of_rank(QQ_, 4, 4, rng)
        W = random_matrix(4, 1, QQ_, rng)
        while rank(W) != 1:
            W = random_matrix(4, 1, QQ_, rng)
        Q = skew_of_rank(QQ_, 4, rng.choice((0, 2)), rng)
        V = random_matrix(4, 1, QQ_, rng)
        G = degeneration_witness(R, W, Q, V)
        # curve invertible over QQ(t) and pole-free at 0
        assert not det(G).num == ()
        assert limit_at_zero(G @ lift_to_qqt(R) @ G.transpose()) == Q
        assert limit_at_zero(G @ lift_to_qqt(W)) == V
