"""Exact linear algebra over the rationals and the integers.

Matrices are plain lists of lists. Entries are ints or fractions.Fraction;
Fraction keeps itself reduced with a positive denominator, which is exactly
the canonical-form invariant we need, so there is no wrapper class. All
dimensions in this package are <= 32, so cubic algorithms with exact
arithmetic are nowhere near a bottleneck.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def mat_copy(a):
    return [list(row) for row in a]


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def mat_eq(a, b) -> bool:
    if len(a) != len(b):
        return False
    return all(
        len(ra) == len(rb) and all(frac(x) == frac(y) for x, y in zip(ra, rb))
        for ra, rb in zip(a, b)
    )


def is_symmetric(a) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i)
    )


def denominator_lcm(a) -> int:
    d = 1
    for row in a:
        for x in row:
            d = lcm(d, frac(x).denominator)
    return d


def clear_denominators(a):
    """Return (d * a as integer matrix, d) with d the lcm of denominators."""
    d = denominator_lcm(a)
    out = []
    for row in a:
        out.append([int(frac(x) * d) for x in row])
    return out, d


def det(a) -> Fraction:
    """Determinant by fraction-free Bareiss on the cleared integer matrix."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m, d = clear_denominators(a)
    m = mat_copy(m)
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
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], d**n)


def leading_principal_minors(a) -> list[Fraction]:
    return [det([row[: k + 1] for row in a[: k + 1]]) for k in range(len(a))]


def is_positive_definite(a) -> bool:
    """Exact Sylvester criterion; requires a symmetric."""
    return all(mk > 0 for mk in leading_principal_minors(a))


def inverse(a):
    """Gauss-Jordan with Fractions. Raises ZeroDivisionError if singular."""
    n = len(a)
    aug = [[frac(x) for x in row] + [frac(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def solve_right(a, b):
    """Solve x @ a = b for a square invertible a (row-vector convention)."""
    return mat_vec(transpose(inverse(a)), b)


def adjugate(a):
    """det(a) * inverse(a), exact; integer matrix when a is integer."""
    d = det(a)
    inv = inverse(a)
    adj = [[x * d for x in row] for row in inv]
    if all(frac(x).denominator == 1 for row in a for x in row):
        adj = [[int(x) for x in row] for row in adj]
    return adj


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hnf_with_transform(rows):
    """Row-style Hermite form of an integer matrix.

    Returns (H, U) with U unimodular, U @ rows == H, pivots positive,
    entries above each pivot reduced into [0, pivot). Zero rows of H sink
    to the bottom. H's nonzero rows are the canonical basis of the row
    span; rows of U aligned with zero rows of H span the left kernel.
    """
    a = mat_copy(rows)
    m = len(a)
    n = len(a[0]) if m else 0
    u = identity(m)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            g, s, t = _xgcd(a[r][c], a[i][c])
            pr, pi = a[r][c] // g, a[i][c] // g
            a[r], a[i] = (
                [s * x + t * y for x, y in zip(a[r], a[i])],
                [pr * y - pi * x for x, y in zip(a[r], a[i])],
            )
            u[r], u[i] = (
                [s * x + t * y for x, y in zip(u[r], u[i])],
                [pr * y - pi * x for x, y in zip(u[r], u[i])],
            )
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == m:
            break
    return a, u


def hnf(rows):
    """Nonzero rows of the Hermite form: canonical basis of the row span."""
    h, _ = hnf_with_transform(rows)
    return [row for row in h if any(row)]


def left_kernel_int(rows):
    """Basis of {x integer : x @ rows == 0}, via the Hermite transform."""
    h, u = hnf_with_transform(rows)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def rank(rows) -> int:
    num = [[frac(x) for x in row] for row in rows]
    cleared, _ = clear_denominators(num)
    return len(hnf(cleared))


def row_gcd_primitive(v):
    """v divided by the gcd of its entries (integer vector, not all zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return [x // g for x in v]
