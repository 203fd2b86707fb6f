"""Named lattice constructions.

Everything is built from first principles in exact arithmetic and then
self-validated: the Golay code by its weight distribution, the Leech
lattice by determinant, evenness, minimum and kissing number, the derived
lattices by the determinant dichotomy of the projection construction.
Rescaled constructions that would need irrational coordinates (sqrt2 E8,
sqrt3 Z) are carried as scaled Gram matrices.

Ambient coordinates for the sixteen-dimensional family are the orthonormal
epsilon-coordinates in which the glue vectors f1..f13 are usually written;
the Leech lattice is assembled in Golay coordinates (integer entries,
inner product divided by 8) and then kept as a Gram matrix.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import ratmat as rm
from .lattice import (
    Lattice,
    LatticeError,
    contains_sublattice,
    from_generators,
    orthogonal_complement,
    project_along_minimal,
    rescale,
    sublattice_with_glue,
    verify_coset_decomposition,
)

HALF = Fraction(1, 2)


# -- binary Golay code -------------------------------------------------


def _gf2_mod(a: int, b: int) -> int:
    """Remainder of GF(2) polynomial division, coefficients as bitmasks."""
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


@lru_cache(maxsize=1)
def _golay23_generator() -> int:
    """Generator polynomial of the length-23 quadratic-residue code, as a
    bitmask of coefficients (bit k = coefficient of x^k).

    Found by brute force: x^23 + 1 factors over GF(2) as (x + 1) times two
    irreducible degree-11 polynomials (the residue and nonresidue codes,
    reciprocal to each other and generating equivalent codes). We take the
    lexicographically smaller factor; the weight-distribution check on the
    extended code validates the choice.
    """
    x23 = (1 << 23) | 1
    found = []
    for middle in range(1 << 10):
        g = (1 << 11) | (middle << 1) | 1
        if _gf2_mod(x23, g) == 0:
            found.append(g)
    if len(found) != 2:
        raise LatticeError("factorization of x^23 + 1 went wrong")
    return min(found)


def golay_basis() -> list[int]:
    """12 generator rows of the extended [24,12,8] Golay code, as 24-bit
    masks: 23 cyclic-code bits plus an overall parity bit 23."""
    g = _golay23_generator()
    rows = []
    for shift in range(12):
        word = g << shift  # degree 11 + shift <= 22, stays in 23 bits
        parity = bin(word).count("1") % 2
        rows.append(word | (parity << 23))
    return rows


@lru_cache(maxsize=1)
def golay_codewords() -> tuple[int, ...]:
    rows = golay_basis()
    words = [0]
    for r in rows:
        words += [w ^ r for w in words]
    return tuple(words)


def golay_weight_distribution() -> dict[int, int]:
    dist: dict[int, int] = {}
    for w in golay_codewords():
        k = bin(w).count("1")
        dist[k] = dist.get(k, 0) + 1
    return dist


def check_golay() -> None:
    dist = golay_weight_distribution()
    expected = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
    if dist != expected:
        raise LatticeError(f"golay weight distribution wrong: {dist}")


# -- glue vectors for the sixteen-dimensional family -------------------


def _eps(*indices, half_block=None, n=16):
    """Sum of unit vectors (1-based indices), optionally plus half of a
    contiguous block of coordinates."""
    v = [Fraction(0)] * n
    for i in indices:
        v[i - 1] += 1
    if half_block:
        lo, hi = half_block
        for i in range(lo, hi + 1):
            v[i - 1] += HALF
    return v


def glue_vectors() -> list[list[Fraction]]:
    f1 = _eps(9, half_block=(1, 8))
    f2 = _eps(1, half_block=(9, 16))
    f3 = _eps(1, 5, 9, 13)
    f4 = _eps(1, 3, 5, 7)
    f5 = _eps(1, 3, 9, 11)
    f6 = _eps(1, 3, 13, 15)
    pair_glues = [_eps(1, 2, 2 * k + 1, 2 * k + 2) for k in range(1, 8)]  # f7..f13
    return [f1, f2, f3, f4, f5, f6] + pair_glues


# -- individual constructions ------------------------------------------


def _z_lattice(n: int) -> Lattice:
    eye = rm.identity(n)
    return Lattice(eye, basis=eye, label=f"Z{n}")


def _a_lattice(n: int) -> Lattice:
    rows = []
    for i in range(n):
        r = [0] * (n + 1)
        r[i] = 1
        r[i + 1] = -1
        rows.append(r)
    return from_generators(rows, label=f"A{n}")


def _d_lattice(n: int) -> Lattice:
    if n < 2:
        raise LatticeError("D_n needs n >= 2")
    rows = []
    for i in range(n - 1):
        r = [0] * n
        r[i] = 1
        r[i + 1] = -1
        rows.append(r)
    last = [0] * n
    last[n - 2] = 1
    last[n - 1] = 1
    rows.append(last)
    return from_generators(rows, label=f"D{n}")


def _e8() -> Lattice:
    rows = []
    for i in range(7):
        r = [0] * 8
        r[i] = 1
        r[i + 1] = -1
        rows.append(r)
    rows.append([1, 1, 0, 0, 0, 0, 0, 0])
    rows.append([HALF] * 8)
    lat = from_generators(rows, label="E8")
    if lat.determinant() != 1 or not lat.is_even():
        raise LatticeError("E8 construction failed")
    return lat


def _e7() -> Lattice:
    e8 = build("E8")
    # complement of one root
    root = e8.coords_of_ambient([1, -1, 0, 0, 0, 0, 0, 0])
    out = orthogonal_complement(e8, root, label="E7")
    if out.determinant() != 2:
        raise LatticeError("E7 construction failed")
    return out


def _e6() -> Lattice:
    # complement of an A2 spanned by roots r1, r2 with (r1, r2) = -1;
    # r1 + 2 r2 is orthogonal to r1 and spans the same plane with it
    e8 = build("E8")
    r1 = e8.coords_of_ambient([1, -1, 0, 0, 0, 0, 0, 0])
    step = orthogonal_complement(e8, r1)
    r3 = step.coords_of_ambient([1, 1, -2, 0, 0, 0, 0, 0])
    out = orthogonal_complement(step, r3, label="E6")
    if out.determinant() != 3:
        raise LatticeError("E6 construction failed")
    return out


def _block_rows_a1_16():
    rows = []
    for b in range(8):
        i = 2 * b
        plus = [0] * 16
        plus[i] = 1
        plus[i + 1] = 1
        minus = [0] * 16
        minus[i] = 1
        minus[i + 1] = -1
        rows += [plus, minus]
    return rows


def _block_rows_d(block: int):
    """D_block basis rows repeated across 16/block coordinate blocks."""
    rows = []
    for b in range(16 // block):
        off = block * b
        for i in range(block - 1):
            r = [0] * 16
            r[off + i] = 1
            r[off + i + 1] = -1
            rows.append(r)
        last = [0] * 16
        last[off + block - 2] = 1
        last[off + block - 1] = 1
        rows.append(last)
    return rows


def _leech() -> Lattice:
    check_golay()
    rows = []
    for word in golay_basis():
        rows.append([2 * ((word >> i) & 1) for i in range(24)])
    for j in range(1, 24):
        r = [0] * 24
        r[0] = 4
        r[j] = 4
        rows.append(r)
    r8 = [0] * 24
    r8[0] = 8
    rows.append(r8)
    rows.append([-3] + [1] * 23)
    basis = rm.hnf(rows)
    if len(basis) != 24:
        raise LatticeError("Leech generators have wrong rank")
    gram = [[Fraction(rm.vec_dot(a, b), 8) for b in basis] for a in basis]
    lat = Lattice(gram, basis=None, label="Leech")
    if lat.determinant() != 1 or not lat.is_even():
        raise LatticeError("Leech construction failed")
    _LEECH_INTEGER_BASIS[:] = [[list(r) for r in basis]]
    return lat


_LEECH_INTEGER_BASIS: list = []


def leech_integer_basis():
    """Basis rows in Golay coordinates (norm = dot/8)."""
    build("Leech")
    return [list(r) for r in _LEECH_INTEGER_BASIS[0]]


def _lex_smallest_shell_vector(lat: Lattice, m) -> list[int]:
    from . import shells

    sh = shells.enumerate_shell(lat, m)
    if len(sh) == 0:
        raise LatticeError(f"no vectors of norm {m}")
    return [int(v) for v in sh.vectors[0]]


def _o23() -> Lattice:
    leech = build("Leech")
    e = _lex_smallest_shell_vector(leech, 4)
    out = project_along_minimal(leech, e, label="O23")
    if out.determinant() != 1:
        raise LatticeError("O23 should be unimodular")
    return out


def _o22() -> Lattice:
    o23 = build("O23")
    v = _lex_smallest_shell_vector(o23, 3)
    out = orthogonal_complement(o23, v, label="O22")
    if out.determinant() != 3:
        raise LatticeError("O22 should have determinant 3")
    return out


def _o7() -> Lattice:
    lam8 = build("Lambda8")
    e = _lex_smallest_shell_vector(lam8, 4)
    out = project_along_minimal(lam8, e, label="O7")
    if out.determinant() != 64:
        raise LatticeError("O7 should have determinant 64")
    return out


def _sixteen(name: str) -> Lattice:
    glues = glue_vectors()
    if name == "A1_16":
        return from_generators(_block_rows_a1_16(), label=name)
    if name == "D4_4":
        return from_generators(_block_rows_d(4), label=name)
    if name == "D8_2":
        return from_generators(_block_rows_d(8), label=name)
    if name == "sqrt2A1_16":
        rows = []
        for i in range(16):
            r = [0] * 16
            r[i] = 2
            rows.append(r)
        return from_generators(rows, label=name)
    if name == "O16":
        return sublattice_with_glue(build("sqrt2A1_16"), glues, label=name)
    if name == "L1621":
        return sublattice_with_glue(build("A1_16"), glues[:6], label=name)
    if name == "L1622":
        return sublattice_with_glue(build("D4_4"), glues[:3], label=name)
    if name == "L1623":
        return sublattice_with_glue(build("D8_2"), glues[:2], label=name)
    raise LatticeError(f"unknown sixteen-dimensional name {name}")


_EXPECTED_DET = {
    "O16": 64,
    "L1621": 16,
    "L1622": 4,
    "L1623": 1,
    "A1_16": 2**16,
    "D4_4": 4**4,
    "D8_2": 4**2,
    "sqrt2A1_16": 4**16,
}

CATALOG_NAMES = (
    "O1",
    "O7",
    "O16",
    "O22",
    "O23",
    "L1621",
    "L1622",
    "L1623",
    "Leech",
    "Lambda8",
    "E6",
    "E7",
    "E8",
    "A1_16",
    "D4_4",
    "D8_2",
    "sqrt2A1_16",
)


_cache: dict[str, Lattice] = {}


def build(name: str) -> Lattice:
    """Construct a named lattice; Zn/An/Dn take the dimension suffix."""
    if name in _cache:
        return _cache[name]
    if name == "O1":
        lat = Lattice([[3]], label="O1")
    elif name == "Leech":
        lat = _leech()
    elif name == "Lambda8":
        lat = rescale(build("E8"), 2, label="Lambda8")
    elif name == "E8":
        lat = _e8()
    elif name == "E7":
        lat = _e7()
    elif name == "E6":
        lat = _e6()
    elif name == "O7":
        lat = _o7()
    elif name == "O23":
        lat = _o23()
    elif name == "O22":
        lat = _o22()
    elif name in ("O16", "L1621", "L1622", "L1623", "A1_16", "D4_4", "D8_2", "sqrt2A1_16"):
        lat = _sixteen(name)
        if lat.determinant() != _EXPECTED_DET[name]:
            raise LatticeError(f"{name} determinant check failed")
    elif name.startswith("Z") and name[1:].isdigit():
        lat = _z_lattice(int(name[1:]))
    elif name.startswith("A") and name[1:].isdigit():
        lat = _a_lattice(int(name[1:]))
    elif name.startswith("D") and name[1:].isdigit():
        lat = _d_lattice(int(name[1:]))
    else:
        raise LatticeError(f"unknown catalog name {name!r}")
    _cache[name] = lat
    return lat


def containment_chain_report() -> list[dict]:
    """The inclusion chain of the sixteen-dimensional family plus the
    rank-one scaling relation, each item checked exactly."""
    out = []

    def rec(statement, holds):
        out.append({"statement": statement, "holds": bool(holds)})

    chain = ["sqrt2A1_16", "A1_16", "D4_4", "D8_2"]
    for small, big in zip(chain, chain[1:]):
        rec(f"{small} subset {big}", contains_sublattice(build(big), build(small)))
    rec("O16 subset L1621", contains_sublattice(build("L1621"), build("O16")))
    lam = ["L1621", "L1622", "L1623"]
    for small, big in zip(lam, lam[1:]):
        rec(f"{small} subset {big}", contains_sublattice(build(big), build(small)))
    rec("O1 == rescale(Z1, 3)", rescale(build("Z1"), 3).gram == build("O1").gram)
    for big_name, small_name, shift in coset_decompositions():
        rec(
            f"{big_name} == {small_name} u (shift + {small_name})",
            verify_coset_decomposition(build(big_name), build(small_name), shift),
        )
    return out


def coset_decompositions() -> list[tuple[str, str, list[Fraction]]]:
    """(big, small, shift) triples asserted by the construction notes."""
    return [
        ("L1621", "O16", _eps(1, 2)),
        ("L1622", "L1621", _eps(1, 3)),
        ("L1623", "L1622", _eps(1, 5)),
    ]
