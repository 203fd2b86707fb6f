"""Truncated q-series on the quarter-exponent grid.

A series is a plain list of Fractions where index k holds the coefficient
of q^(k/4). The quarter grid exists because the second Jacobi theta
function has exponents (2n+1)^2/4; everything assembled from theta
functions here lands back on integer exponents and can be read off with
integer_prefix. All arithmetic is exact and truncation is explicit: every
constructor takes the number of grid slots to keep.
"""

from __future__ import annotations

from fractions import Fraction


def zeros(terms: int) -> list[Fraction]:
    return [Fraction(0)] * terms


def grid_slots(upto: int) -> int:
    """Slots needed to hold integer exponents 0..upto."""
    return 4 * upto + 1


def theta2(terms: int) -> list[Fraction]:
    """2 q^(1/4) + 2 q^(9/4) + 2 q^(25/4) + ..."""
    out = zeros(terms)
    n = 0
    while (2 * n + 1) ** 2 < terms:
        out[(2 * n + 1) ** 2] += 2
        n += 1
    return out


def theta3(terms: int) -> list[Fraction]:
    """1 + 2q + 2q^4 + 2q^9 + ..."""
    out = zeros(terms)
    out[0] = Fraction(1)
    n = 1
    while 4 * n * n < terms:
        out[4 * n * n] += 2
        n += 1
    return out


def theta4(terms: int) -> list[Fraction]:
    """1 - 2q + 2q^4 - 2q^9 + ..."""
    out = zeros(terms)
    out[0] = Fraction(1)
    n = 1
    while 4 * n * n < terms:
        out[4 * n * n] += 2 * (-1) ** n
        n += 1
    return out


def mul(a, b) -> list[Fraction]:
    terms = min(len(a), len(b))
    out = zeros(terms)
    for i, x in enumerate(a[:terms]):
        if x == 0:
            continue
        for j in range(terms - i):
            y = b[j]
            if y != 0:
                out[i + j] += x * y
    return out


def power(a, k: int) -> list[Fraction]:
    if k < 0:
        raise ValueError("negative power")
    out = zeros(len(a))
    out[0] = Fraction(1)
    sq = list(a)
    while k:
        if k & 1:
            out = mul(out, sq)
        k >>= 1
        if k:
            sq = mul(sq, sq)
    return out


def add(a, b) -> list[Fraction]:
    return [x + y for x, y in zip(a, b)]


def sub(a, b) -> list[Fraction]:
    return [x - y for x, y in zip(a, b)]


def scale(a, c) -> list[Fraction]:
    c = Fraction(c)
    return [x * c for x in a]


def delta8(terms: int) -> list[Fraction]:
    """The cusp form (1/16) theta2^4 theta4^4; starts at q^1."""
    return scale(mul(power(theta2(terms), 4), power(theta4(terms), 4)), Fraction(1, 16))


def integer_prefix(series, upto: int) -> list[int]:
    """Coefficients of q^0..q^upto; errors if anything sits off the
    integer grid or a denominator survives."""
    if len(series) < grid_slots(upto):
        raise ValueError("series too short for requested prefix")
    for k, x in enumerate(series):
        if k % 4 != 0 and x != 0:
            raise ValueError(f"nonzero coefficient at exponent {k}/4")
    out = []
    for j in range(upto + 1):
        x = series[4 * j]
        if x.denominator != 1:
            raise ValueError(f"non-integer coefficient at exponent {j}")
        out.append(x.numerator)
    return out


# -- the unimodular identities ----------------------------------------

IDENTITY_FORMS = {
    "O23": (23, 15, 46),
    "L1623": (16, 8, 32),
    "Z7": (7, None, 0),
}


def theta_identity_rhs(name: str, upto: int) -> list[int]:
    """Integer coefficients q^0..q^upto of the claimed theta expression:
    theta3^n minus a multiple of theta3^(n-8) Delta8."""
    if name not in IDENTITY_FORMS:
        raise ValueError(f"no identity on record for {name!r}")
    n, n8, mult = IDENTITY_FORMS[name]
    terms = grid_slots(upto)
    t3 = theta3(terms)
    rhs = power(t3, n)
    if mult:
        rhs = sub(rhs, scale(mul(power(t3, n8), delta8(terms)), mult))
    return integer_prefix(rhs, upto)


def verify_theta_identity(name: str, upto: int, workers=None) -> dict:
    """Enumerate shells of the named lattice and compare with the modular
    expression coefficient by coefficient."""
    from . import catalog, shells

    lat = catalog.build(name)
    counted = shells.theta_prefix(lat, upto, workers=workers)
    claimed = theta_identity_rhs(name, upto)
    return {
        "name": name,
        "upto": upto,
        "counted": counted,
        "claimed": claimed,
        "match": counted == claimed,
    }
