"""Sign-class combinatorics of norm-3 shells.

A shell whose norm-2 companions form sixteen orthogonal root pairs
splits into sign-flip classes; the class supports are the blocks of a
2-(16,6,2) design, the blocks span a binary code, and the design is
enough to rebuild the lattice. Separately, the 7-dimensional integer
lattice's norm-3 shell decomposes into 56-vector pieces indexed by
Fano planes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .lattice import Lattice, LatticeError, from_generators
from .shells import ShellSet, enumerate_shell, theta_prefix
from .classify import NON_CONSTANT, root_decompose, _integer_gram


# A 2-(16,6,2) incidence matrix whose row span is a [16, 6, 6] code;
# verify_design() and code_from_incidence() re-derive both claims.
BLOCK_DESIGN_16_6_2 = (
    "1100000010101010",
    "1100000001010101",
    "1010101011000000",
    "1010010100110000",
    "1001100100001100",
    "1001011000000011",
    "0110100100000011",
    "0110011000001100",
    "0101101000110000",
    "0101010111000000",
    "0011000010100101",
    "0011000001011010",
    "0000110010011001",
    "0000110001100110",
    "0000001110010110",
    "0000001101101001",
)


# -- frames ------------------------------------------------------------


def _canonical_directions(s2: ShellSet) -> np.ndarray:
    """One representative per antipodal pair, lexicographically largest,
    rows sorted."""
    seen = {}
    for row in s2.vectors:
        key = tuple(int(v) for v in row)
        neg = tuple(-v for v in key)
        pick = max(key, neg)
        seen[frozenset((key, neg))] = pick
    rows = sorted(seen.values())
    return np.asarray(rows, dtype=np.int64)


def detect_frame(s2: ShellSet) -> np.ndarray:
    """The sixteen orthogonal directions of a norm-2 shell of type
    sixteen-orthogonal-pairs, as coordinate rows."""
    decomp = root_decompose(s2)
    if decomp.label() != "(A1)^16":
        raise LatticeError(f"norm-2 shell has type {decomp.label()}, not (A1)^16")
    return _canonical_directions(s2)


def orthogonal_frame(s2: ShellSet) -> np.ndarray:
    """A full orthogonal frame of norm-2 directions chosen from any root
    shell, lexicographically first via backtracking. Agrees with
    detect_frame when the shell itself is sixteen orthogonal pairs."""
    dirs = _canonical_directions(s2)
    g = _integer_gram(s2.lattice)
    dots = dirs @ g @ dirs.T
    dim = s2.lattice.dim
    chosen: list[int] = []

    def extend(start: int) -> bool:
        if len(chosen) == dim:
            return True
        for idx in range(start, len(dirs)):
            if all(dots[idx, j] == 0 for j in chosen):
                chosen.append(idx)
                if extend(idx + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        raise LatticeError("no orthogonal frame of full rank in this shell")
    return dirs[chosen]


# -- sign classes ------------------------------------------------------


@dataclass
class SignClass:
    support: tuple  # frame indices with nonzero inner product
    members: np.ndarray  # indices into the shell
    representative: np.ndarray  # lexicographically first member row


def sign_classes(shell: ShellSet, frame: np.ndarray) -> list[SignClass]:
    """Partition a norm-3 shell by sign flips along the frame.

    Reflection in a frame root stays inside the lattice, so every class
    must contain all sign patterns on its support; class count and
    support sizes are forced by the norm.
    """
    g = _integer_gram(shell.lattice)
    ips = shell.vectors.astype(np.int64) @ g @ frame.T
    if np.abs(ips).max() > 1:
        raise LatticeError("a shell vector has |(x, r)| > 1 against the frame")

    buckets: dict[tuple, list[int]] = {}
    for i, row in enumerate(ips != 0):
        buckets.setdefault(tuple(np.nonzero(row)[0].tolist()), []).append(i)

    classes = []
    for support in sorted(buckets):
        members = buckets[support]
        if len(support) != 6:
            raise LatticeError("class support is not six frame directions")
        if len(members) != 64:
            raise LatticeError("class is not closed under sign flips")
        rep = min(tuple(int(v) for v in shell.vectors[i]) for i in members)
        classes.append(
            SignClass(support, np.asarray(members), np.asarray(rep, dtype=np.int64))
        )
    if len(classes) * 64 != len(shell):
        raise LatticeError("classes do not partition the shell")
    if len(classes) == 16:
        for a, b in combinations(classes, 2):
            if len(set(a.support) & set(b.support)) != 2:
                raise LatticeError("two class supports do not meet in 2 points")
    return classes


# -- block designs -----------------------------------------------------


@dataclass
class IncidenceMatrix:
    rows: np.ndarray  # (b, v) of 0/1

    @property
    def b(self) -> int:
        return self.rows.shape[0]

    @property
    def v(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_strings(cls, rows) -> "IncidenceMatrix":
        return cls(np.asarray([[int(c) for c in r] for r in rows], dtype=np.uint8))


def incidence_from_classes(classes: list[SignClass], v: int = 16) -> IncidenceMatrix:
    mat = np.zeros((len(classes), v), dtype=np.uint8)
    for i, cls_ in enumerate(classes):
        mat[i, list(cls_.support)] = 1
    weights = mat.sum(axis=1)
    if weights.min() != weights.max():
        raise LatticeError("block sizes are not uniform")
    return IncidenceMatrix(mat)


def verify_design(m: IncidenceMatrix, t: int, v: int, k: int, lam: int) -> bool:
    """Every t-set of points lies in exactly lam blocks."""
    if m.v != v or not (m.rows.sum(axis=1) == k).all():
        return False
    for points in combinations(range(v), t):
        if int(m.rows[:, points].all(axis=1).sum()) != lam:
            return False
    return True


def design_lambda(m: IncidenceMatrix, t: int = 2):
    """The common t-set coverage count, or the non-constant marker."""
    covers = [
        int(m.rows[:, points].all(axis=1).sum())
        for points in combinations(range(m.v), t)
    ]
    return covers[0] if min(covers) == max(covers) else NON_CONSTANT


# -- binary codes ------------------------------------------------------


@dataclass
class BinaryCode:
    length: int
    dimension: int
    min_distance: int | None  # None for the zero code
    generators: tuple  # reduced generator rows as bitmasks

    def parameters(self):
        return (self.length, self.dimension, self.min_distance)


def code_from_incidence(m: IncidenceMatrix) -> BinaryCode:
    """The row span over the two-element field, with the minimum weight
    found by enumerating all codewords."""
    length = m.v
    basis: list[int] = []
    for row in m.rows:
        word = 0
        for j, bit in enumerate(row):
            if bit:
                word |= 1 << j
        for b in basis:
            word = min(word, word ^ b)
        if word:
            basis.append(word)
            basis.sort(reverse=True)
    k = len(basis)
    if k == 0:
        return BinaryCode(length, 0, None, ())
    best = length
    for mask in range(1, 1 << k):
        word = 0
        for i in range(k):
            if mask >> i & 1:
                word ^= basis[i]
        best = min(best, bin(word).count("1"))
    return BinaryCode(length, k, best, tuple(basis))


# -- design to lattice -------------------------------------------------


def _standard_frame_rows(v: int = 16):
    """Sixteen orthogonal norm-2 integer rows: consecutive coordinate
    pairs, sum and difference."""
    rows = []
    for i in range(0, v, 2):
        for sign in (1, -1):
            row = [0] * v
            row[i] = 1
            row[i + 1] = sign
            rows.append(row)
    return rows


def lattice_from_design(m: IncidenceMatrix, signs=None) -> Lattice:
    """Rebuild a lattice from a 2-(16,6,2) design: the frame roots plus
    one norm-3 representative per block (half the signed sum of the
    block's frame roots). Any sign choice gives an isometric result; the
    default is all-plus."""
    if not verify_design(m, 2, 16, 6, 2):
        raise LatticeError("matrix is not a 2-(16,6,2) design")
    frame = _standard_frame_rows()
    gens = [list(map(Fraction, row)) for row in frame]
    for bi in range(m.b):
        support = np.nonzero(m.rows[bi])[0]
        srow = signs[bi] if signs is not None else [1] * len(support)
        rep = [Fraction(0)] * 16
        for s, fi in zip(srow, support):
            for j, val in enumerate(frame[fi]):
                rep[j] += Fraction(s * val, 2)
        gens.append(rep)
    lat = from_generators(gens, label="design-rebuild")
    shell = enumerate_shell(lat, 3)
    if len(shell) != 1024:
        raise LatticeError("rebuilt lattice has the wrong norm-3 shell size")
    if code_from_incidence(m).parameters() == (16, 6, 6):
        from . import catalog

        if theta_prefix(lat, 6) != theta_prefix(catalog.build("L1621"), 6):
            raise LatticeError("rebuilt lattice has the wrong theta prefix")
    return lat


# -- Fano planes inside the 7-dimensional integer lattice ---------------


@dataclass
class FanoSubset:
    lines: tuple  # seven sorted point triples
    vectors: np.ndarray = field(repr=False)  # (56, 7) rows, sorted

    def vector_set(self) -> frozenset:
        return frozenset(tuple(int(v) for v in row) for row in self.vectors)


def fano_planes() -> list[tuple]:
    """All 2-(7,3,1) line systems on seven labeled points."""
    triples = list(combinations(range(7), 3))
    pair_index = {p: i for i, p in enumerate(combinations(range(7), 2))}
    pair_bits = {}
    for tr in triples:
        bits = 0
        for pair in combinations(tr, 2):
            bits |= 1 << pair_index[pair]
        pair_bits[tr] = bits
    full = (1 << 21) - 1
    out: list[tuple] = []

    def extend(start: int, covered: int, chosen: list):
        if covered == full:
            out.append(tuple(chosen))
            return
        if len(chosen) == 7:
            return
        for idx in range(start, len(triples)):
            tr = triples[idx]
            bits = pair_bits[tr]
            if covered & bits == 0:
                chosen.append(tr)
                extend(idx + 1, covered | bits, chosen)
                chosen.pop()

    extend(0, 0, [])
    return out


def _line_vectors(lines) -> np.ndarray:
    rows = []
    for tr in lines:
        for signs in range(8):
            row = [0] * 7
            for bit, point in enumerate(tr):
                row[point] = 1 if signs >> bit & 1 else -1
            rows.append(row)
    rows.sort()
    return np.asarray(rows, dtype=np.int64)


def _fingerprint(vectors: np.ndarray, gram: np.ndarray) -> tuple:
    """Sorted multiset of per-vector inner-product multisets; a complete
    isometry invariant for these configurations."""
    dots = vectors @ gram @ vectors.T
    return tuple(sorted(tuple(sorted(row.tolist())) for row in dots))


def o7_shell_fingerprint() -> tuple:
    from . import catalog

    lat = catalog.build("O7")
    shell = enumerate_shell(lat, 3)
    return _fingerprint(shell.vectors.astype(np.int64), _integer_gram(lat))


def fano_subsets() -> list[FanoSubset]:
    """The 56-vector subsets of the norm-3 shell of the integer lattice
    in dimension 7, one per Fano plane, each checked isometric to the
    norm-3 shell of the 7-dimensional odd minimum-3 lattice."""
    target = o7_shell_fingerprint()
    eye = np.eye(7, dtype=np.int64)
    subsets = []
    for lines in fano_planes():
        vectors = _line_vectors(lines)
        if _fingerprint(vectors, eye) != target:
            raise LatticeError("a Fano subset is not isometric to the target shell")
        subsets.append(FanoSubset(lines, vectors))
    return subsets


def max_disjoint_family(subsets: list[FanoSubset] | None = None) -> dict:
    """Largest family of pairwise vector-disjoint Fano subsets, by exact
    clique search on the 30-node disjointness graph."""
    if subsets is None:
        subsets = fano_subsets()
    sets = [s.vector_set() for s in subsets]
    n = len(sets)
    adj = [
        {j for j in range(n) if j != i and not (sets[i] & sets[j])} for i in range(n)
    ]
    pairs = [(i, j) for i in range(n) for j in adj[i] if j > i]

    best: list[int] = []

    def grow(clique: list[int], candidates: set[int]):
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        for v in sorted(candidates):
            grow(clique + [v], candidates & adj[v] & set(range(v + 1, n)))

    grow([], set(range(n)))
    return {
        "count": n,
        "disjoint_pairs": len(pairs),
        "max_family": len(best),
        "witness": best or None,
    }


# -- reports -----------------------------------------------------------


def design_code_report(lat: Lattice) -> dict:
    """Frame, sign classes, design parameters, and code parameters for a
    norm-3 shell; frames outside the sixteen-pair case are chosen by
    backtracking and flagged as a reconstruction."""
    s2 = enumerate_shell(lat, 2)
    decomp = root_decompose(s2)
    reconstructed = decomp.label() != "(A1)^16"
    frame = orthogonal_frame(s2)
    shell = enumerate_shell(lat, 3)
    classes = sign_classes(shell, frame)
    mat = incidence_from_classes(classes)
    lam = design_lambda(mat, 2)
    code = code_from_incidence(mat)
    return {
        "root_system": decomp.label(),
        "frame_reconstructed": reconstructed,
        "classes": len(classes),
        "block_size": 6,
        "design": {
            "t": 2,
            "v": 16,
            "k": 6,
            "lambda": lam,
            "is_2_16_6_2": lam == 2 and verify_design(mat, 2, 16, 6, 2),
        },
        "code": list(code.parameters()),
    }


def fano_report() -> dict:
    subsets = fano_subsets()
    family = max_disjoint_family(subsets)
    return family
