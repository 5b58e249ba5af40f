"""Exact integer and rational linear algebra on list-of-lists matrices.

Hermite and Smith normal forms return their unimodular transforms so callers
can audit ``U @ M == H`` and ``U @ M @ V == D``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]

__all__ = [
    "adjugate",
    "det",
    "elementary_divisors",
    "hnf",
    "identity",
    "inverse",
    "left_kernel",
    "matmul",
    "primitive",
    "reduce_basis",
    "rank",
    "rational_nullspace",
    "rref",
    "snf",
    "transpose",
]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*M)] if M else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b == g >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form: ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.

    Pivots are positive, entries above a pivot are reduced into ``[0, pivot)``
    and zero rows sit at the bottom.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        for i in range(row + 1, m):
            if A[i][col] == 0:
                continue
            a, b = A[row][col], A[i][col]
            g, s, t = _xgcd(a, b)
            p, q = a // g, b // g
            # [[s, t], [-q, p]] has determinant 1.
            A[row], A[i] = (
                [s * x + t * y for x, y in zip(A[row], A[i])],
                [-q * x + p * y for x, y in zip(A[row], A[i])],
            )
            U[row], U[i] = (
                [s * x + t * y for x, y in zip(U[row], U[i])],
                [-q * x + p * y for x, y in zip(U[row], U[i])],
            )
        piv = A[row][col]
        if piv == 0:
            continue
        if piv < 0:
            A[row] = [-x for x in A[row]]
            U[row] = [-x for x in U[row]]
            piv = -piv
        for i in range(row):
            k = A[i][col] // piv
            if k:
                A[i] = [x - k * y for x, y in zip(A[i], A[row])]
                U[i] = [x - k * y for x, y in zip(U[i], U[row])]
        row += 1
    return A, U


def snf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(D, U, V)`` with ``U @ M @ V == D``.

    Diagonal entries are nonnegative and each divides the next.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for r in A:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return A, U, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    add_row(i, t, -q)
                if A[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    add_col(j, t, -q)
                if A[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def left_kernel(M: Sequence[Sequence[int]]) -> Matrix:
    """HNF basis of ``{k in Z^m : k @ M == 0}``; always saturated."""
    H, U = hnf(M)
    rows = [U[i] for i, r in enumerate(H) if not any(r)]
    if not rows:
        return []
    K, _ = hnf(rows)
    return [r for r in K if any(r)]


def det(M: Sequence[Sequence]) -> Fraction | int:
    n = len(M)
    A = [[Fraction(x) for x in r] for r in M]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        result *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = sign * result
    return int(out) if out.denominator == 1 else out


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    A = [[Fraction(x) for x in r] for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    row = 0
    for c in range(n):
        p = next((i for i in range(row, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][c]
        A[row] = [x * inv for x in A[row]]
        for i in range(m):
            if i != row and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[row])]
        pivots.append(c)
        row += 1
        if row == m:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def rational_nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Primitive integer basis of ``{x : M @ x == 0}`` (rational span)."""
    if not M:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols or 0)]
    n = len(M[0])
    A, pivots = rref(M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -A[r][f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in v]))
    return basis


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    A, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in A]


def adjugate(M: Sequence[Sequence[int]]) -> Matrix:
    """Integer adjugate, ``adj(M) @ M == det(M) * I``."""
    n = len(M)
    if n == 1:
        return [[1]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(M) if k != i]
            out[j][i] = (-1) ** (i + j) * int(det(minor))
    return out


def reduce_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Pairwise size reduction until no row gets shorter; spans the same lattice."""
    B = [list(map(int, r)) for r in rows if any(r)]

    def norm(v):
        return sum(x * x for x in v)

    changed = True
    while changed:
        changed = False
        B.sort(key=lambda v: (norm(v), v))
        for i in range(len(B)):
            for j in range(len(B)):
                if i == j:
                    continue
                d = norm(B[j])
                k = round(Fraction(sum(a * b for a, b in zip(B[i], B[j])), d))
                if k:
                    cand = [a - k * b for a, b in zip(B[i], B[j])]
                    if norm(cand) < norm(B[i]):
                        B[i] = cand
                        changed = True
    return [r if next(x for x in r if x) > 0 else [-x for x in r] for r in B]
