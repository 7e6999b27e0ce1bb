"""Exact linear algebra over any field whose elements support ``+ - * /``.

Used with :class:`fractions.Fraction` for weight computations and with
:class:`flagberg.polycore.GaussRat` for pointwise metric algebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularSystemError(ArithmeticError):
    pass


def _is_zero(x) -> bool:
    return x == 0


def solve(a: Sequence[Sequence], b: Sequence, zero=Fraction(0)) -> list:
    """Solve ``a x = b`` exactly.

    ``a`` may be rectangular (more equations than unknowns); the system must
    be consistent and have a unique solution, otherwise
    :class:`SingularSystemError` is raised.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [list(r) + [bv] for r, bv in zip(a, b)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if not _is_zero(m[i][c])), None)
        if p is None:
            raise SingularSystemError(f"no pivot in column {c}")
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if not _is_zero(m[i][cols]):
            raise SingularSystemError("inconsistent system")
    x = [zero] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return x


def inverse(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(m[i][c])), None)
        if p is None:
            raise SingularSystemError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return [row[n:] for row in m]


def det(a: Sequence[Sequence]):
    """Determinant by Gaussian elimination (field elements)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    result = None
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(m[i][c])), None)
        if p is None:
            return m[0][0] * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        result = piv if result is None else result * piv
        for i in range(c + 1, n):
            if not _is_zero(m[i][c]):
                f = m[i][c] / piv
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return result if sign == 1 else -result


def leading_minors(a: Sequence[Sequence]) -> list:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]
