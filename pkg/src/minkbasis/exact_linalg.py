"""Exact rational linear algebra.

Vectors are tuples of :class:`fractions.Fraction`, matrices are tuples of
rows.  Nothing in here ever touches a float.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, NotSymmetric, SingularMatrix

Rat = Fraction
QVector = tuple
QMatrix = tuple

RatLike = Union[int, Fraction, str]


def rat(x: RatLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fmt_rat(q: RatLike) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vector(xs: Iterable[RatLike]) -> QVector:
    return tuple(rat(x) for x in xs)


def matrix(rows: Iterable[Iterable[RatLike]]) -> QMatrix:
    m = tuple(vector(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix")
    return m


def identity(n: int) -> QMatrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def diag(*entries: RatLike) -> QMatrix:
    n = len(entries)
    return tuple(
        tuple(rat(entries[i]) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def mat_vec(M: Sequence[Sequence], v: Sequence) -> QVector:
    if M and len(M[0]) != len(v):
        raise DimensionMismatch(f"{shape(M)} matrix times length-{len(v)} vector")
    return tuple(dot(row, v) for row in M)


def transpose(M: Sequence[Sequence]) -> QMatrix:
    return tuple(zip(*M))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> QMatrix:
    if shape(A)[1] != shape(B)[0]:
        raise DimensionMismatch(f"{shape(A)} @ {shape(B)}")
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def bilinear(u: Sequence, M: Sequence[Sequence], v: Sequence):
    return dot(u, mat_vec(M, v))


def is_symmetric(M: Sequence[Sequence]) -> bool:
    n, m = shape(M)
    return n == m and all(M[i][j] == M[j][i] for i in range(n) for j in range(i))


def _require_square(M: Sequence[Sequence]) -> int:
    n, m = shape(M)
    if n != m:
        raise DimensionMismatch(f"expected a square matrix, got {n}x{m}")
    return n


def _integer_rows(M: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Clear denominators row by row; return the integer matrix and the scale."""
    rows, scale = [], 1
    for row in M:
        den = 1
        for x in row:
            den = den * rat(x).denominator // math.gcd(den, rat(x).denominator)
        rows.append([int(rat(x) * den) for x in row])
        scale *= den
    return rows, scale


def _bareiss(A: list[list[int]], pivoting: bool) -> tuple[int, list[int]]:
    """Fraction-free elimination in place.

    Returns ``(det, pivots)``.  Without pivoting, ``pivots[k]`` is the leading
    (k+1)x(k+1) minor; elimination stops at the first zero pivot.
    """
    n = len(A)
    sign, prev = 1, 1
    pivots: list[int] = []
    for k in range(n):
        if A[k][k] == 0:
            if not pivoting:
                pivots.append(0)
                return 0, pivots
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0, pivots
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pk = A[k][k]
        pivots.append(pk)
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return sign * (A[n - 1][n - 1] if n else 1), pivots


def determinant(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Bareiss elimination on the denominator-cleared matrix."""
    n = _require_square(M)
    if n == 0:
        return Fraction(1)
    A, scale = _integer_rows(M)
    det, _ = _bareiss(A, pivoting=True)
    return Fraction(det, scale)


def leading_minors(M: Sequence[Sequence]) -> list[Fraction]:
    """Leading principal minors, stopping after the first vanishing one."""
    n = _require_square(M)
    A, _ = _integer_rows(M)
    _, pivots = _bareiss(A, pivoting=False)
    minors, den = [], 1
    for k, p in enumerate(pivots):
        den *= _row_scale(M[k])
        minors.append(Fraction(p, den))
    return minors[:n]


def _row_scale(row: Sequence) -> int:
    den = 1
    for x in row:
        d = rat(x).denominator
        den = den * d // math.gcd(den, d)
    return den


def is_negative_definite(M: Sequence[Sequence]) -> bool:
    """Sylvester's criterion: (-1)^k * (k-th leading minor) > 0 for every k."""
    if not is_symmetric(M):
        raise NotSymmetric("definiteness test needs a symmetric matrix")
    n = len(M)
    minors = leading_minors(M)
    if len(minors) < n:
        return False
    return all((m < 0) if k % 2 == 1 else (m > 0) for k, m in enumerate(minors, 1))


def solve_linear(M: Sequence[Sequence], b: Sequence) -> QVector:
    """Solve ``M x = b`` exactly by Gauss-Jordan elimination."""
    n = _require_square(M)
    if len(b) != n:
        raise DimensionMismatch(f"{n}x{n} system with right-hand side of length {len(b)}")
    if n and all(M[i][j] == 0 for i in range(n) for j in range(n) if i != j):
        if any(M[i][i] == 0 for i in range(n)):
            raise SingularMatrix("zero on the diagonal of a diagonal matrix")
        return tuple(rat(b[i]) / rat(M[i][i]) for i in range(n))
    A = [[rat(x) for x in row] + [rat(bi)] for row, bi in zip(M, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        A[k], A[piv] = A[piv], A[k]
        pk = A[k][k]
        row_k = [x / pk for x in A[k]]
        A[k] = row_k
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [x - f * y for x, y in zip(A[i], row_k)]
    return tuple(A[i][n] for i in range(n))


def rank(rows: Sequence[Sequence]) -> int:
    A = [[rat(x) for x in r] for r in rows]
    if not A:
        return 0
    m, rk = len(A[0]), 0
    for col in range(m):
        piv = next((i for i in range(rk, len(A)) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        for i in range(rk + 1, len(A)):
            if A[i][col] != 0:
                f = A[i][col] / A[rk][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[rk])]
        rk += 1
        if rk == len(A):
            break
    return rk


def inertia(M: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric form, by exact congruence."""
    if not is_symmetric(M):
        raise NotSymmetric("inertia needs a symmetric matrix")
    A = [[rat(x) for x in row] for row in M]
    n = len(A)
    pos = neg = 0
    k = 0
    while k < n:
        # bring a nonzero diagonal entry to position k, manufacturing one if needed
        piv = next((i for i in range(k, n) if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes A[i][i] = 2 A[i][j] + A[j][j] = 2 A[i][j]
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            piv = i
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            for row in A:
                row[k], row[piv] = row[piv], row[k]
        pk = A[k][k]
        if pk > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = A[i][k] / pk
            if f:
                for c in range(k, n):
                    A[i][c] -= f * A[k][c]
                for r in range(k, n):
                    A[r][i] -= f * A[r][k]
        k += 1
    return pos, neg, n - pos - neg


def primitive_integral(v: Sequence) -> tuple[int, ...]:
    """The primitive integer vector on the ray through a nonzero rational vector."""
    fr = [rat(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


class NegDefChain:
    """Incremental negative-definiteness along a growing principal submatrix.

    Holds an LDL^T factorisation of a Gram matrix known to be negative
    definite.  :meth:`extend` appends one row/column; the new pivot is the
    Schur complement, and the product of pivots gives each leading minor.
    """

    __slots__ = ("pivots", "lrows")

    def __init__(self, pivots: tuple = (), lrows: tuple = ()):
        self.pivots = pivots
        self.lrows = lrows

    def __len__(self) -> int:
        return len(self.pivots)

    def _solve_lower(self, col: Sequence) -> list[Fraction]:
        # z = L^{-1} col with unit lower-triangular L
        z: list[Fraction] = []
        for i, row in enumerate(self.lrows):
            s = rat(col[i])
            for j in range(i):
                s -= row[j] * z[j]
            z.append(s)
        return z

    def schur(self, col: Sequence, diag_entry: RatLike) -> Fraction:
        """``g - col^T G^{-1} col`` for the bordered matrix [[G, col], [col^T, g]]."""
        if len(col) != len(self.pivots):
            raise DimensionMismatch("border column length must equal current size")
        z = self._solve_lower(col)
        return rat(diag_entry) - sum((zi * zi / d for zi, d in zip(z, self.pivots)), Fraction(0))

    def extend(self, col: Sequence, diag_entry: RatLike) -> "NegDefChain | None":
        """The chain for the bordered matrix, or None if it is not negative definite."""
        if len(col) != len(self.pivots):
            raise DimensionMismatch("border column length must equal current size")
        z = self._solve_lower(col)
        s = rat(diag_entry) - sum((zi * zi / d for zi, d in zip(z, self.pivots)), Fraction(0))
        if s >= 0:
            return None
        new_row = tuple(zi / d for zi, d in zip(z, self.pivots))
        return NegDefChain(self.pivots + (s,), self.lrows + (new_row,))

    def minors(self) -> list[Fraction]:
        out, p = [], Fraction(1)
        for d in self.pivots:
            p *= d
            out.append(p)
        return out
