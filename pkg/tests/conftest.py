"""Shared test oracles, independent of the code paths they check."""

import itertools
import random

import pytest

from conjlab.fields import UniPoly
from conjlab.matrix import Matrix, random_matrix


def cofactor_det(field, grid):
    """Recursive Laplace expansion; entries support add/sub/mul."""
    n = len(grid)
    if n == 0:
        return UniPoly.make(field, [field.one])
    if n == 1:
        return grid[0][0]
    acc = UniPoly.make(field, [])
    for j in range(n):
        minor = [[grid[i][jj] for jj in range(n) if jj != j] for i in range(1, n)]
        term = grid[0][j].mul(cofactor_det(field, minor))
        acc = acc.add(term) if j % 2 == 0 else acc.sub(term)
    return acc


def charpoly_oracle(M: Matrix) -> UniPoly:
    """det(xI - M) by cofactor expansion over the polynomial ring."""
    f = M.field
    n = M.rows
    grid = [
        [
            UniPoly.make(f, [f.neg(M.entry(i, j))] + ([f.one] if i == j else []))
            for j in range(n)
        ]
        for i in range(n)
    ]
    return cofactor_det(f, grid)


def minor_rank_oracle(M: Matrix) -> int:
    """Largest k with a nonzero k x k minor (scalar cofactor determinants)."""
    f = M.field

    def det_scalar(rows, cols):
        if not rows:
            return f.one
        if len(rows) == 1:
            return M.entry(rows[0], cols[0])
        acc = f.zero
        for idx, c in enumerate(cols):
            sub = det_scalar(rows[1:], cols[:idx] + cols[idx + 1 :])
            term = f.mul(M.entry(rows[0], c), sub)
            acc = f.add(acc, term) if idx % 2 == 0 else f.sub(acc, term)
        return acc

    best = 0
    for k in range(1, min(M.rows, M.cols) + 1):
        found = False
        for rows in itertools.combinations(range(M.rows), k):
            for cols in itertools.combinations(range(M.cols), k):
                if not f.is_zero(det_scalar(list(rows), list(cols))):
                    found = True
                    break
            if found:
                break
        if found:
            best = k
        else:
            break
    return best


def matrix_of_rank(field, n, k, rng) -> Matrix:
    """Random n x n matrix of rank exactly k, as a product of full-rank factors."""
    from conjlab.matrix import rank

    if k == 0:
        return Matrix.zeros(field, n)
    while True:
        A = random_matrix(n, k, field, rng)
        B = random_matrix(k, n, field, rng)
        M = A @ B
        if rank(M) == k:
            return M


def skew_of_rank(field, n, rk, rng) -> Matrix:
    from conjlab.matrix import rank

    assert rk % 2 == 0
    while True:
        S = Matrix.zeros(field, n)
        for _ in range(rk // 2):
            u = random_matrix(n, 1, field, rng)
            v = random_matrix(n, 1, field, rng)
            S = S + u @ v.transpose() - v @ u.transpose()
        if rank(S) == rk:
            return S


@pytest.fixture
def rng():
    return random.Random(20240801)
