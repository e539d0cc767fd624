"""Exact linear algebra over Z, Q and the Laurent polynomial ring.

Square integer matrices are plain lists of lists of ints.  Determinants use
fraction-free Bareiss elimination (every division exact, no rationals), which
also yields all leading principal minors for the negative-definiteness test.
Linear systems are solved by Gaussian elimination over Fraction, with the
solution re-substituted into the system as a safety check.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotSymmetric, ScaleMismatch, SingularMatrix
from .laurent import WPoly


def int_det(matrix: list[list[int]]) -> int:
    """Determinant of an integer matrix via Bareiss with row swaps."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def leading_principal_minors(matrix: list[list[int]]) -> list[int]:
    """All n leading principal minors det(M[:k][:k]), k = 1..n."""
    return [int_det([row[:k] for row in matrix[:k]]) for k in range(1, len(matrix) + 1)]


def check_negative_definite(matrix: list[list[int]]) -> bool:
    """True iff the symmetric matrix is negative definite.

    Criterion: the k-th leading principal minor is nonzero with sign (-1)^k
    for every k.  Computed by fraction-free elimination without pivoting, so
    the pivots produced along the way are exactly the minors; a zero pivot
    means some minor vanishes and the test fails.
    """
    n = len(matrix)
    for i in range(n):
        if len(matrix[i]) != n:
            raise NotSymmetric("matrix is not square")
        for j in range(i):
            if matrix[i][j] != matrix[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) != ({j},{i})")
    m = [list(row) for row in matrix]
    prev = 1
    for k in range(n):
        # before round k, m[k][k] holds the det of the leading (k+1) block
        minor = m[k][k]
        if minor == 0 or (minor > 0) != (k % 2 == 1):
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return True


def solve_rational_system(matrix: list[list[int]], rhs) -> list[Fraction]:
    """Exact solution x of M x = rhs over Q.

    Raises SingularMatrix when det M = 0.  The result is verified by
    re-substitution before returning (exact arithmetic makes this a cheap
    internal consistency guarantee rather than a tolerance check).
    """
    n = len(matrix)
    a = [[Fraction(matrix[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / pv
            if f:
                for c in range(col, n + 1):
                    a[r][c] -= f * a[col][c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = a[r][n] - sum(a[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / a[r][r]
    for i in range(n):
        if sum(Fraction(matrix[i][j]) * x[j] for j in range(n)) != Fraction(rhs[i]):
            raise SingularMatrix("re-substitution failed (inconsistent system)")
    return x


def _cofactor_det(rows: list[list[WPoly]], t: int) -> WPoly:
    n = len(rows)
    if n == 0:
        return WPoly.const(1, t)
    if n == 1:
        return rows[0][0]
    total = WPoly.zero(t)
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = rows[0][j] * _cofactor_det(minor, t)
        total = total + term if j % 2 == 0 else total - term
    return total


def poly_determinant(rows: list[list[WPoly]]) -> WPoly:
    """Exact determinant of a square WPoly matrix.

    Cofactor expansion for dimension <= 4; fraction-free Bareiss elimination
    with exact polynomial division above that (the ring is a UFD, so every
    Bareiss division is exact).  Both strategies return the same polynomial.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    scales = {entry.t for row in rows for entry in row}
    if len(scales) != 1:
        raise ScaleMismatch(f"entries carry different scales: {sorted(scales)}")
    t = scales.pop()
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix is not square")
    if n <= 4:
        return _cofactor_det(rows, t)
    m = [list(row) for row in rows]
    sign = 1
    prev = WPoly.const(1, t)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return WPoly.zero(t)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).divexact(prev)
            m[i][k] = WPoly.zero(t)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det
