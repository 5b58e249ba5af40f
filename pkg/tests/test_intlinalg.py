from __future__ import annotations

from kaplansky.intlinalg import (
    adjugate,
    det,
    elementary_divisors,
    hnf,
    left_kernel,
    matmul,
    rational_nullspace,
    reduce_basis,
    snf,
)


def test_hnf_of_single_relation():
    H, U = hnf([[3, -2]])
    assert H == [[3, -2]]
    assert matmul(U, [[3, -2]]) == H


def test_hnf_pivot_gcd_one():
    H, U = hnf([[3, -2], [5, 1]])
    assert H[0][0] == 1
    assert matmul(U, [[3, -2], [5, 1]]) == H


def test_snf_divisibility():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    D, U, V = snf(M)
    assert matmul(matmul(U, M), V) == D
    assert [D[i][i] for i in range(3)] == [2, 6, 12]


def test_left_kernel_of_4_6_13():
    K = left_kernel([[4], [6], [13]])
    assert K == [[1, 8, -4], [0, 13, -6]]
    assert elementary_divisors(K) == [1, 1]


def test_reduce_basis_same_lattice():
    K = [[1, 8, -4], [0, 13, -6]]
    R = reduce_basis(K)
    assert R == [[3, -2, 0], [2, 3, -2]]
    assert hnf(R)[0][:2] == K


def test_det_and_adjugate():
    A = [[2, 3, 9], [1, 2, 3], [2, 3, 10]]
    assert det(A) == 1
    adj = adjugate(A)
    assert matmul(adj, A) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_rational_nullspace():
    assert rational_nullspace([[4, 6, 13]]) == [(-3, 2, 0), (-13, 0, 4)]
