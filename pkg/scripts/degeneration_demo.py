#!/usr/bin/env python3
"""Print an explicit degeneration curve: a skew form plus marked columns
degenerating onto a lower-rank target, exact over QQ(t)."""

from conjlab.fields import QQ
from conjlab.jsonio import matrix_to_json
from conjlab.matrix import Matrix, lift_to_qqt, limit_at_zero
from conjlab.orbits import degeneration_witness


def main():
    qq = QQ()
    R = Matrix.from_rows(qq, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    W = Matrix.from_rows(qq, [[1], [2], [3], [4]])
    Q = Matrix.from_rows(qq, [[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    V = Matrix.from_rows(qq, [[5], [6], [7], [8]])
    G = degeneration_witness(R, W, Q, V)
    print("curve g(t):")
    for row in matrix_to_json(G)["rows"]:
        print("  ", row)
    print("limit of g R g^T at t=0:", limit_at_zero(G @ lift_to_qqt(R) @ G.transpose()).to_rows())
    print("limit of g W at t=0:   ", limit_at_zero(G @ lift_to_qqt(W)).to_rows())


if __name__ == "__main__":
    main()
