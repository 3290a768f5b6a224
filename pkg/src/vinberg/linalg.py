"""Exact linear algebra over Z, real quadratic integer rings, and their fields.

Matrices are lists of lists whose entries are plain ints (over Q) or
RingElement values.  Classification routines decide definiteness under the
identity embedding by fraction-free elimination; nothing here touches
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from vinberg.ring import Field, FieldElement, RingElement

Element = "int | RingElement"


def _sgn(x) -> int:
    if isinstance(x, int):
        return (x > 0) - (x < 0)
    return x.sign()


def _is_zero(x) -> bool:
    if isinstance(x, int):
        return x == 0
    return x.is_zero()


def _ediv(x, y):
    """Exact division, int or RingElement."""
    if isinstance(x, int) and isinstance(y, int):
        q, r = divmod(x, y)
        if r:
            raise ArithmeticError(f"inexact division {x}/{y}")
        return q
    return x.divide_exact(y)


def _fe(x, field: Field) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, int):
        return FieldElement.from_int(field, x)
    return FieldElement(x, 1)


POSITIVE_DEFINITE = "positive_definite"
POSITIVE_SEMIDEFINITE = "positive_semidefinite"
INDEFINITE = "indefinite"


@dataclass(frozen=True)
class DefiniteClass:
    kind: str
    rank: int
    nullity: int = 0

    @property
    def is_positive_definite(self) -> bool:
        return self.kind == POSITIVE_DEFINITE

    @property
    def is_positive_semidefinite(self) -> bool:
        return self.kind == POSITIVE_SEMIDEFINITE


def _check_symmetric(M) -> None:
    n = len(M)
    for i in range(n):
        if len(M[i]) != n:
            raise ValueError("matrix is not square")
        for j in range(i):
            if isinstance(M[i][j], int):
                if M[i][j] != M[j][i]:
                    raise ValueError("matrix is not symmetric")
            elif M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")


def definite_rank_class(M, field: Field | None = None) -> DefiniteClass:
    """Classify a symmetric matrix under the identity embedding.

    Fraction-free (Bareiss) elimination with symmetric pivoting: pivots are
    chosen on the diagonal, so the running pivot equals a leading principal
    minor of the permuted matrix and its sign is decided exactly.
    """
    _check_symmetric(M)
    n = len(M)
    if n == 0:
        return DefiniteClass(POSITIVE_DEFINITE, 0)
    W = [row[:] for row in M]
    prev = 1  # previous pivot (D_{k-1}); an int works as neutral start
    k = 0
    while k < n:
        # Any negative diagonal value in the active block certifies a
        # negative direction (previous pivots are all positive).
        pivot_idx = -1
        for i in range(k, n):
            s = _sgn(W[i][i])
            if s < 0:
                return DefiniteClass(INDEFINITE, rank_ff(M))
            if s > 0 and pivot_idx < 0:
                pivot_idx = i
        if pivot_idx < 0:
            # All active diagonal entries vanish: positive semidefinite iff
            # the whole active block vanishes.
            for i in range(k, n):
                for j in range(k, n):
                    if not _is_zero(W[i][j]):
                        return DefiniteClass(INDEFINITE, rank_ff(M))
            return DefiniteClass(POSITIVE_SEMIDEFINITE, k, nullity=n - k)
        if pivot_idx != k:
            W[k], W[pivot_idx] = W[pivot_idx], W[k]
            for row in W:
                row[k], row[pivot_idx] = row[pivot_idx], row[k]
        piv = W[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                W[i][j] = _ediv(piv * W[i][j] - W[i][k] * W[k][j], prev)
        prev = piv
        k += 1
    return DefiniteClass(POSITIVE_DEFINITE, n)


def rank_ff(M) -> int:
    """Exact rank by fraction-free elimination with full pivoting."""
    rows = len(M)
    if rows == 0:
        return 0
    cols = len(M[0])
    W = [row[:] for row in M]
    prev = 1
    r = 0
    for c in range(cols):
        pivot_row = -1
        for i in range(r, rows):
            if not _is_zero(W[i][c]):
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            W[r], W[pivot_row] = W[pivot_row], W[r]
        piv = W[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                W[i][j] = _ediv(piv * W[i][j] - W[i][c] * W[r][j], prev)
            W[i][c] = 0 if isinstance(piv, int) else piv.field.zero()
        prev = piv
        r += 1
        if r == rows:
            break
    return r


def det_bareiss(M):
    """Exact determinant (int or RingElement) by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    W = [row[:] for row in M]
    prev = 1
    sign_flip = 1
    for k in range(n - 1):
        if _is_zero(W[k][k]):
            swap = -1
            for i in range(k + 1, n):
                if not _is_zero(W[i][k]):
                    swap = i
                    break
            if swap < 0:
                return W[k][k]  # zero of the right type
            W[k], W[swap] = W[swap], W[k]
            sign_flip = -sign_flip
        piv = W[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                W[i][j] = _ediv(piv * W[i][j] - W[i][k] * W[k][j], prev)
        prev = piv
    out = W[n - 1][n - 1]
    return out if sign_flip > 0 else -out


def inertia(M, field: Field) -> tuple[int, int, int]:
    """Exact (positive, negative, zero) eigenvalue counts of a symmetric
    matrix under the identity embedding, by symmetric congruence over the
    field of fractions."""
    _check_symmetric(M)
    n = len(M)
    W = [[_fe(x, field) for x in row] for row in M]
    pos = neg = 0
    k = 0
    while k < n:
        if W[k][k].is_zero():
            swap = -1
            for i in range(k + 1, n):
                if not W[i][i].is_zero():
                    swap = i
                    break
            if swap >= 0:
                W[k], W[swap] = W[swap], W[k]
                for row in W:
                    row[k], row[swap] = row[swap], row[k]
            else:
                # all active diagonals zero; congruence-add a row with a
                # nonzero off-diagonal entry (char 0, so this is safe)
                j_found = -1
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if not W[i][j].is_zero():
                            swap, j_found = i, j
                            break
                    if j_found >= 0:
                        break
                if j_found < 0:
                    break  # zero block
                if swap != k:
                    W[k], W[swap] = W[swap], W[k]
                    for row in W:
                        row[k], row[swap] = row[swap], row[k]
                for j in range(k, n):
                    W[k][j] = W[k][j] + W[j_found][j]
                for i in range(k, n):
                    W[i][k] = W[i][k] + W[i][j_found]
        piv = W[k][k]
        if piv.is_zero():
            break
        if piv.sign() > 0:
            pos += 1
        else:
            neg += 1
        # Row elimination alone leaves the correct congruent Schur block,
        # since column k becomes zero below the pivot.
        for i in range(k + 1, n):
            factor = W[i][k] / piv
            if factor.is_zero():
                continue
            for j in range(k + 1, n):
                W[i][j] = W[i][j] - factor * W[k][j]
            W[i][k] = W[i][k] - factor * piv
        k += 1
    return pos, neg, n - pos - neg


def matrix_inverse_field(M, field: Field) -> list[list[FieldElement]]:
    """Exact inverse over the field of fractions (Gauss-Jordan)."""
    n = len(M)
    W = [[_fe(x, field) for x in row] + [
        FieldElement.from_int(field, 1 if i == j else 0) for j in range(n)
    ] for i, row in enumerate(M)]
    for k in range(n):
        pivot_row = -1
        for i in range(k, n):
            if not W[i][k].is_zero():
                pivot_row = i
                break
        if pivot_row < 0:
            raise ArithmeticError("matrix is singular")
        W[k], W[pivot_row] = W[pivot_row], W[k]
        piv = W[k][k]
        W[k] = [x / piv for x in W[k]]
        for i in range(n):
            if i == k or W[i][k].is_zero():
                continue
            f = W[i][k]
            W[i] = [a - f * b for a, b in zip(W[i], W[k])]
    return [row[n:] for row in W]


def invariant_factor_exponent(M, field: Field) -> RingElement:
    """Largest invariant factor (exponent of the cokernel) of a symmetric
    nonsingular matrix over the ring: det / gcd(adjugate entries), as a
    canonical associate."""
    from vinberg.ring import ring_gcd, ring_gcd_many

    n = len(M)
    det = det_bareiss(M)
    det_r = det if isinstance(det, RingElement) else RingElement(field, det)
    if det_r.is_zero():
        raise ArithmeticError("singular matrix has no finite cokernel")
    inv = matrix_inverse_field(M, field)
    adj_entries: list[RingElement] = []
    for row in inv:
        for x in row:
            v = x * FieldElement(det_r, 1)
            if not v.is_integral():
                raise ArithmeticError("adjugate entry not integral")
            adj_entries.append(v.ring_value())
    g = ring_gcd_many(adj_entries)
    return det_r.divide_exact(g).canonical_associate()


def lll_transform(A, delta: float = 0.99):
    """Unimodular U (numpy int64) such that U^T A U is LLL-reduced, for a
    positive definite float Gram matrix A.  Affects enumeration speed only;
    caller exactness never depends on the reduction quality."""
    import numpy as np

    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    W = np.linalg.cholesky(A).T  # columns W[:, i] realize the Gram
    basis = W.copy()
    U = np.eye(n, dtype=np.int64)

    def gso(B):
        Q = np.zeros_like(B)
        mu = np.zeros((n, n))
        norms = np.zeros(n)
        for i in range(n):
            v = B[:, i].copy()
            for j in range(i):
                mu[i, j] = (B[:, i] @ Q[:, j]) / norms[j]
                v -= mu[i, j] * Q[:, j]
            Q[:, i] = v
            norms[i] = v @ v
        return Q, mu, norms

    Q, mu, norms = gso(basis)
    k = 1
    guard = 0
    while k < n and guard < 10000 * n:
        guard += 1
        changed = False
        for j in range(k - 1, -1, -1):
            q = int(round(mu[k, j]))
            if q:
                basis[:, k] -= q * basis[:, j]
                U[:, k] -= q * U[:, j]
                changed = True
        if changed:
            Q, mu, norms = gso(basis)
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            basis[:, [k - 1, k]] = basis[:, [k, k - 1]]
            U[:, [k - 1, k]] = U[:, [k, k - 1]]
            Q, mu, norms = gso(basis)
            k = max(k - 1, 1)
    return U


# -- integer linear systems -----------------------------------------------------


def _colop_reduce(H: list[list[int]], U: list[list[int]], r: int, c1: int, c2: int) -> None:
    """Column operations making H[r][c2] zero via extended gcd; applied to U too."""
    a, b = H[r][c1], H[r][c2]
    if b == 0:
        return
    g = math.gcd(a, b)
    if g == 0:
        return
    # x*a + y*b = g
    x, y = _ext_gcd(a, b)
    a_, b_ = a // g, b // g
    rows = len(H)
    for i in range(rows):
        h1, h2 = H[i][c1], H[i][c2]
        H[i][c1] = h1 * x + h2 * y
        H[i][c2] = -h1 * b_ + h2 * a_
    m = len(U)
    for i in range(m):
        u1, u2 = U[i][c1], U[i][c2]
        U[i][c1] = u1 * x + u2 * y
        U[i][c2] = -u1 * b_ + u2 * a_


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


class IntegerAffineSolver:
    """Solves A x = b over Z for many right-hand sides with one HNF pass."""

    def __init__(self, A: list[list[int]]) -> None:
        rows = len(A)
        m = len(A[0]) if rows else 0
        H = [row[:] for row in A]
        U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        r = 0
        pivots: list[tuple[int, int]] = []
        for row in range(rows):
            if r >= m:
                break
            for c in range(r + 1, m):
                _colop_reduce(H, U, row, r, c)
            if H[row][r] == 0:
                continue
            if H[row][r] < 0:
                for i in range(rows):
                    H[i][r] = -H[i][r]
                for i in range(m):
                    U[i][r] = -U[i][r]
            pivots.append((row, r))
            r += 1
        self.rows = rows
        self.m = m
        self._H = H
        self._U = U
        self._pivots = pivots
        self._rank = r
        self.kernel_basis = [[U[i][c] for i in range(m)] for c in range(r, m)]

    def solve(self, b: list[int]) -> list[int] | None:
        """A particular integer solution of A x = b, or None."""
        m = self.m
        H, U = self._H, self._U
        y = [0] * m
        used = {pr for pr, _ in self._pivots}
        for pr, pc in self._pivots:
            rhs = b[pr] - sum(H[pr][c] * y[c] for c in range(pc))
            q, rem = divmod(rhs, H[pr][pc])
            if rem:
                return None
            y[pc] = q
        for row in range(self.rows):
            if row in used:
                continue
            if sum(H[row][c] * y[c] for c in range(m)) != b[row]:
                return None
        return [sum(U[i][c] * y[c] for c in range(m)) for i in range(m)]


def solve_integer_system(A: list[list[int]], b: list[int]):
    """All integer solutions of A x = b as (particular, kernel_basis), or
    None when no integer solution exists."""
    solver = IntegerAffineSolver(A)
    x0 = solver.solve(b)
    if x0 is None:
        return None
    return x0, solver.kernel_basis
