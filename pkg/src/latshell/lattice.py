"""Lattices presented by rational Gram matrices and optional ambient bases.

A Lattice is a free Z-module of rank n with a positive definite symmetric
bilinear form, stored as an exact rational Gram matrix. When a natural
ambient coordinate system exists (Z^n, the epsilon-coordinates of the
sixteen-dimensional constructions, the Golay coordinates of the Leech
lattice) the basis rows are stored too and the Gram matrix is validated
against them. Constructions that would need an irrational embedding are
carried as scaled Gram matrices instead; nothing downstream ever needs
float coordinates.

Vectors handed to the operations below are coordinate rows with respect to
the stored basis unless an argument name says "ambient".
"""

from __future__ import annotations

from fractions import Fraction

from . import ratmat as rm


class LatticeError(ValueError):
    pass


class Lattice:
    """Rank-n lattice with exact Gram matrix and optional ambient basis."""

    __slots__ = ("dim", "gram", "basis", "label")

    def __init__(self, gram, basis=None, label: str | None = None, _checked: bool = False):
        gram = [[rm.frac(x) for x in row] for row in gram]
        n = len(gram)
        if not _checked:
            if any(len(row) != n for row in gram):
                raise LatticeError("gram matrix must be square")
            if not rm.is_symmetric(gram):
                raise LatticeError("gram matrix must be symmetric")
            if not rm.is_positive_definite(gram):
                raise LatticeError("gram matrix must be positive definite")
        if basis is not None:
            basis = [[rm.frac(x) for x in row] for row in basis]
            if len(basis) != n:
                raise LatticeError("basis must have one row per dimension")
            bbt = rm.mat_mul(basis, rm.transpose(basis))
            if not rm.mat_eq(bbt, gram):
                raise LatticeError("gram matrix does not match basis")
        self.dim = n
        self.gram = gram
        self.basis = basis
        self.label = label

    def __repr__(self):
        name = self.label or "lattice"
        return f"<{name}: dim {self.dim}, det {self.determinant()}>"

    def determinant(self) -> Fraction:
        return rm.det(self.gram)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    def is_even(self) -> bool:
        return self.is_integral() and all(self.gram[i][i] % 2 == 0 for i in range(self.dim))

    def is_odd_integral(self) -> bool:
        return self.is_integral() and not self.is_even()

    def inner(self, u, v) -> Fraction:
        """Inner product of two coordinate rows."""
        gv = rm.mat_vec(self.gram, [rm.frac(x) for x in v])
        return sum(rm.frac(a) * b for a, b in zip(u, gv))

    def norm(self, v) -> Fraction:
        return self.inner(v, v)

    def gram_fingerprint(self) -> tuple:
        return tuple(tuple(row) for row in self.gram)

    def relabel(self, label: str) -> "Lattice":
        out = Lattice.__new__(Lattice)
        out.dim = self.dim
        out.gram = self.gram
        out.basis = self.basis
        out.label = label
        return out

    # -- membership ----------------------------------------------------

    def coords_of_ambient(self, vec):
        """Coordinates of an ambient vector in this basis, or None.

        Requires a stored basis. Returns the exact rational coordinate row
        when vec lies in the rational span, else None.
        """
        if self.basis is None:
            raise LatticeError("lattice carries no ambient basis")
        vec = [rm.frac(x) for x in vec]
        if len(vec) != len(self.basis[0]):
            raise LatticeError("ambient dimension mismatch")
        # c @ B = vec  =>  c = vec @ B^T @ (B B^T)^{-1}, then verify residual
        bt = rm.transpose(self.basis)
        rhs = rm.mat_vec(rm.transpose(bt), vec)  # vec @ B^T
        c = rm.solve_right(self.gram, rhs)  # c @ G = rhs
        if rm.mat_vec(rm.transpose(self.basis), c) != vec:
            return None
        return c

    def contains_ambient(self, vec) -> bool:
        c = self.coords_of_ambient(vec)
        return c is not None and all(x.denominator == 1 for x in c)


def hnf_basis(generators):
    """Canonical basis for the lattice generated by rational row vectors.

    Clears denominators, takes the integer Hermite form, and scales back,
    so equal rational row spans always produce the identical basis. Rows of
    zeros are dropped; the result may have fewer rows than the input.
    """
    gens = [[rm.frac(x) for x in row] for row in generators]
    ints, d = rm.clear_denominators(gens)
    h = rm.hnf(ints)
    return [[Fraction(x, d) for x in row] for row in h]


def from_generators(generator_rows, label=None) -> Lattice:
    """Lattice from ambient generators; errors if they are rank deficient.

    "Rank deficient" here means fewer independent rows than ambient
    columns is fine, but the construction demands the generators span a
    positive-dimensional space; use hnf_basis directly for subspace work.
    """
    basis = hnf_basis(generator_rows)
    if not basis:
        raise LatticeError("generators span the zero lattice")
    gram = rm.mat_mul(basis, rm.transpose(basis))
    return Lattice(gram, basis=basis, label=label)


def rescale(lat: Lattice, c, label=None) -> Lattice:
    """Same Z-module, form multiplied by c > 0. Drops the ambient basis
    unless c is a square of a rational (it never is where this is used)."""
    c = rm.frac(c)
    if c <= 0:
        raise LatticeError("rescale factor must be positive")
    gram = [[x * c for x in row] for row in lat.gram]
    return Lattice(gram, basis=None, label=label)


def direct_sum(a: Lattice, b: Lattice, label=None) -> Lattice:
    n, m = a.dim, b.dim
    gram = [[Fraction(0)] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            gram[i][j] = a.gram[i][j]
    for i in range(m):
        for j in range(m):
            gram[n + i][n + j] = b.gram[i][j]
    basis = None
    if a.basis is not None and b.basis is not None:
        wa = len(a.basis[0])
        wb = len(b.basis[0])
        basis = [list(row) + [Fraction(0)] * wb for row in a.basis]
        basis += [[Fraction(0)] * wa + list(row) for row in b.basis]
    return Lattice(gram, basis=basis, label=label)


def orthogonal_complement(lat: Lattice, v_coords, label=None) -> Lattice:
    """Sublattice {x in L : (x, v) = 0} for a nonzero coordinate row v."""
    v = [rm.frac(x) for x in v_coords]
    if all(x == 0 for x in v):
        raise LatticeError("complement of the zero vector is the whole lattice")
    w = rm.mat_vec(lat.gram, v)
    wints, _ = rm.clear_denominators([w])
    ker = rm.left_kernel_int(rm.transpose(wints))  # {c : c . w = 0}
    if len(ker) != lat.dim - 1:
        raise LatticeError("unexpected kernel rank in orthogonal complement")
    ker = rm.hnf(ker)
    gram = rm.mat_mul(ker, rm.mat_mul(lat.gram, rm.transpose(ker)))
    basis = None
    if lat.basis is not None:
        basis = rm.mat_mul(ker, lat.basis)
    out = Lattice(gram, basis=basis, label=label)
    return out


def project_along_minimal(lat: Lattice, e_coords, label=None) -> Lattice:
    """Quotient-by-projection construction for even lattices of minimum 4.

    With e a norm-4 minimal vector, take L' = {x : (e,x) even} and project
    it orthogonally to e. The image is an odd integral lattice of minimum
    at least 3 and rank n-1; its determinant equals det(L) when some (e,x)
    is odd, and det(L)/4 when all (e,x) are even but some is 2 mod 4.
    Raises on any other parity situation and verifies every claimed
    property of the output exactly.
    """
    from . import shells  # local import: shells depends on this module

    if not lat.is_even():
        raise LatticeError("projection requires an even integral lattice")
    if shells.minimum(lat) != 4:
        raise LatticeError("projection requires minimum exactly 4")
    e = [rm.frac(x) for x in e_coords]
    if lat.norm(e) != 4:
        raise LatticeError("projection direction must have norm 4")

    ge = rm.mat_vec(lat.gram, e)  # (b_i, e) for basis rows
    ge_int = [int(x) for x in ge]
    if any(x != int(x) for x in ge):
        raise LatticeError("projection direction must lie in the dual")

    odd = [i for i, x in enumerate(ge_int) if x % 2 == 1]
    if odd:
        expected_det = lat.determinant()
    elif any(x % 4 == 2 for x in ge_int):
        expected_det = lat.determinant() / 4
    else:
        raise LatticeError("all inner products with e vanish mod 4; unsupported case")

    # basis of L' = {x : (e,x) even}: kernel of the mod-2 functional
    n = lat.dim
    if odd:
        p = odd[0]
        rows = []
        for i in range(n):
            if i == p:
                continue
            row = [0] * n
            row[i] = 1
            if ge_int[i] % 2 == 1:
                row[p] = -1
            rows.append(row)
        dbl = [0] * n
        dbl[p] = 2
        rows.append(dbl)
        sub = rm.hnf(rows)
    else:
        sub = rm.identity(n)

    # project: x -> x - ((x,e)/4) e, in coordinates of lat
    proj_rows = []
    for row in sub:
        ip = sum(rm.frac(a) * b for a, b in zip(row, ge))
        proj_rows.append([rm.frac(a) - ip / 4 * b for a, b in zip(row, e)])
    basis_rows = hnf_basis(proj_rows)
    if len(basis_rows) != n - 1:
        raise LatticeError("projected lattice has unexpected rank")
    gram = rm.mat_mul(basis_rows, rm.mat_mul(lat.gram, rm.transpose(basis_rows)))
    out = Lattice(gram, basis=None, label=label)

    if not out.is_odd_integral():
        raise LatticeError("projected lattice is not odd integral")
    if out.determinant() != expected_det:
        raise LatticeError("projected determinant disagrees with the parity dichotomy")
    if shells.minimum(out) < 3:
        raise LatticeError("projected minimum below 3")
    return out


def sublattice_with_glue(base: Lattice, glue_ambient_rows, label=None) -> Lattice:
    """Lattice generated by a base lattice and extra ambient glue rows."""
    if base.basis is None:
        raise LatticeError("glue construction needs an ambient basis")
    gens = [list(row) for row in base.basis]
    gens += [[rm.frac(x) for x in row] for row in glue_ambient_rows]
    out = from_generators(gens, label=label)
    if out.dim != base.dim:
        raise LatticeError("glue vectors changed the rank")
    return out


def contains_sublattice(big: Lattice, small: Lattice) -> bool:
    """True if every basis vector of small lies in big (ambient bases)."""
    if big.basis is None or small.basis is None:
        raise LatticeError("containment needs ambient bases on both sides")
    return all(big.contains_ambient(row) for row in small.basis)


def verify_coset_decomposition(big: Lattice, small: Lattice, shift_ambient) -> bool:
    """Check big = small  u  (shift + small) as point sets.

    Exact and total: small must sit inside big with determinant ratio 1
    (trivial decomposition, shift in small) or 4 (index 2, shift in the
    nontrivial coset).
    """
    if not contains_sublattice(big, small):
        return False
    ratio = small.determinant() / big.determinant()
    shift = [rm.frac(x) for x in shift_ambient]
    if ratio == 1:
        return small.contains_ambient(shift)
    if ratio == 4:
        return big.contains_ambient(shift) and not small.contains_ambient(shift)
    return False


def lattices_equal(a: Lattice, b: Lattice) -> bool:
    """Same point set: identical canonical bases (needs ambient bases)."""
    if a.basis is None or b.basis is None:
        return a.gram == b.gram
    if len(a.basis[0]) != len(b.basis[0]):
        return False
    return hnf_basis(a.basis) == hnf_basis(b.basis)


# -- file format -------------------------------------------------------
#
#   dim 3
#   label thing
#   2 0 0
#   0 2 0
#   0 0 1/2
#   basis
#   1 1 0
#   1 -1 0
#   0 0 1/2
#
# Entries are integers or reduced fractions p/q. The label line is
# optional, as is the whole basis block. Round trips are bit exact because
# Fraction normalizes to lowest terms with positive denominator.


def _fmt(x: Fraction) -> str:
    x = rm.frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps_lattice(lat: Lattice) -> str:
    lines = [f"dim {lat.dim}"]
    if lat.label:
        lines.append(f"label {lat.label}")
    for row in lat.gram:
        lines.append(" ".join(_fmt(x) for x in row))
    if lat.basis is not None:
        lines.append("basis")
        for row in lat.basis:
            lines.append(" ".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def loads_lattice(text: str) -> Lattice:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim "):
        raise LatticeError("lattice file must start with a dim line")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise LatticeError("malformed dim line") from None
    if n <= 0:
        raise LatticeError("dimension must be positive")
    pos = 1
    label = None
    if pos < len(lines) and lines[pos].startswith("label "):
        label = lines[pos][len("label "):].strip()
        pos += 1
    if len(lines) < pos + n:
        raise LatticeError("missing gram rows")
    gram = []
    for i in range(n):
        parts = lines[pos + i].split()
        if len(parts) != n:
            raise LatticeError(f"gram row {i} has {len(parts)} entries, expected {n}")
        gram.append([Fraction(p) for p in parts])
    pos += n
    basis = None
    if pos < len(lines):
        if lines[pos] != "basis":
            raise LatticeError(f"unexpected line: {lines[pos]!r}")
        rows = lines[pos + 1:]
        if len(rows) != n:
            raise LatticeError("basis block must have one row per dimension")
        basis = [[Fraction(p) for p in row.split()] for row in rows]
        if any(len(r) != len(basis[0]) for r in basis):
            raise LatticeError("ragged basis block")
    return Lattice(gram, basis=basis, label=label)


def save_lattice(lat: Lattice, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_lattice(lat))


def load_lattice(path) -> Lattice:
    with open(path) as fh:
        return loads_lattice(fh.read())
