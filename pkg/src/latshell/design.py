"""Spherical design tests for lattice shells via the moment criterion.

A shell X of norm m in a rank-n lattice is a spherical t-design exactly
when, with e the largest even number <= t,

    sum_{x in X} (x, a)^e  =  c_e * m^(e/2) * (a, a)^(e/2)   for all a,

and all odd-degree power sums through t vanish (automatic for antipodal
sets, which every shell is). c_e = (e-1)!! / (n(n+2)...(n+e-2)) * |X|.

Working in basis coordinates with Gram matrix G and substituting w = G a,
the left side becomes a polynomial in w with integer moment coefficients
and the right side c_e m^(e/2) (w^T G^{-1} w)^(e/2). Comparing coefficients
after clearing det(G) powers is a pure integer/rational identity, which is
how the exact certification below works. Negative verdicts come even
cheaper: one witness w where the identity fails refutes the universally
quantified criterion, and each witness evaluation is an exact histogram
computation. Floats appear only inside blocked matrix products whose
entries are a-priori bounded below 2^53 and are rounded back to integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

import numpy as np

from . import ratmat as rm
from .lattice import LatticeError
from .shells import ShellSet, shell_count

# exact tensor certification above this (#monomials)^2 * |X| cost switches
# to seeded witness screening; negatives are exact either way
TENSOR_COST_CAP = 8 * 10**11

_WITNESS_SEED = 20230405
_SCREEN_WITNESSES = 48


def c_coefficient(n: int, size: int, k: int) -> Fraction:
    """c_k = (k-1)!! / (n (n+2) ... (n+k-2)) * size, for even k >= 2."""
    if k % 2 != 0 or k <= 0:
        raise ValueError("c_k is defined for positive even k")
    num = 1
    den = 1
    for j in range(1, k, 2):
        num *= j
    for j in range(n, n + k - 1, 2):
        den *= j
    return Fraction(num, den) * size


def _integer_dual_row(lat, alpha):
    """Clear denominators of G @ alpha: returns (w integer row, scale) with
    w = scale * G @ alpha."""
    ga = rm.mat_vec(lat.gram, [rm.frac(x) for x in alpha])
    wints, scale = rm.clear_denominators([ga])
    return wints[0], scale


def _power_sum(shell: ShellSet, w_int, k: int):
    """sum_x (x . w_int)^k exactly, via a value histogram."""
    dots = shell.dots_with_integer_row(w_int)
    values, counts = np.unique(dots, return_counts=True)
    total = 0
    for v, c in zip(values.tolist(), counts.tolist()):
        total += c * v**k
    return total


def moment_sum(shell: ShellSet, alpha, k: int) -> Fraction:
    """sum_{x in X} (x, alpha)^k for a rational coordinate row alpha."""
    w, scale = _integer_dual_row(shell.lattice, alpha)
    return Fraction(_power_sum(shell, w, k), scale**k)


def _witness_rows(n: int, count: int, seed: int = _WITNESS_SEED):
    """Deterministic integer witness rows: unit vectors, the all-ones row,
    then seeded small random rows."""
    rows = []
    for i in range(min(n, 4)):
        e = [0] * n
        e[i] = 1
        rows.append(e)
    rows.append([1] * n)
    rng = np.random.default_rng(seed)
    while len(rows) < count:
        r = rng.integers(-3, 4, size=n)
        if np.any(r):
            rows.append([int(v) for v in r])
    return rows[:count]


_ginv_cache: dict = {}


def _gram_inverse(lat):
    key = lat.gram_fingerprint()
    got = _ginv_cache.get(key)
    if got is None:
        got = _ginv_cache[key] = rm.inverse(lat.gram)
    return got


def _witness_identity_holds(shell: ShellSet, w_int, e: int) -> bool:
    """Exact check of the degree-e identity at one integer dual row w."""
    lat = shell.lattice
    h = e // 2
    lhs = Fraction(_power_sum(shell, w_int, e))
    ginv = _gram_inverse(lat)
    q = sum(
        rm.frac(w_int[i]) * ginv[i][j] * w_int[j]
        for i in range(lat.dim)
        for j in range(lat.dim)
    )
    rhs = c_coefficient(lat.dim, len(shell), e) * (rm.frac(shell.m) ** h) * q**h
    return lhs == rhs


def _odd_sums_vanish(shell: ShellSet, upto: int) -> bool:
    for w in _witness_rows(shell.lattice.dim, 3):
        for k in range(1, upto + 1, 2):
            if _power_sum(shell, w, k) != 0:
                return False
    return True


def _monomials(n: int, d: int):
    return list(combinations_with_replacement(range(n), d))


def _mono_exponents(mono, n):
    ex = [0] * n
    for i in mono:
        ex[i] += 1
    return tuple(ex)


def _multinomial(e: int, exponents) -> int:
    out = factorial(e)
    for x in exponents:
        out //= factorial(x)
    return out


def _moment_matrix(X: np.ndarray, monos) -> np.ndarray:
    """T[i, j] = sum_x x^{mono_i} x^{mono_j}, exact, returned as int64.

    Blocked float64 products; the block size keeps every partial sum under
    2^53 so the rounding back to integers is exact, and the full sums are
    checked against the int64 range.
    """
    count, n = X.shape
    d = len(monos[0]) if monos else 0
    rowmax = int(np.abs(X).max()) if count else 0
    if rowmax == 0:
        return np.zeros((len(monos), len(monos)), np.int64)
    per_row = rowmax ** (2 * d)
    if count * per_row >= 2**63:
        raise OverflowError("moment tensor exceeds int64 range")
    block = max(1, min(count, int(2**52 // max(per_row, 1))))
    # keep each monomial block around a hundred MB
    block = max(1, min(block, 16 * 10**6 // max(len(monos), 1)))
    T = np.zeros((len(monos), len(monos)), np.int64)
    for start in range(0, count, block):
        chunk = X[start : start + block].astype(np.float64)
        Y = np.empty((chunk.shape[0], len(monos)))
        for c, mono in enumerate(monos):
            col = None
            for i in mono:
                col = chunk[:, i] if col is None else col * chunk[:, i]
            Y[:, c] = col if col is not None else 1.0
        T += np.rint(Y.T @ Y).astype(np.int64)
    return T


def _dual_form_power(lat, h: int):
    """Integer coefficients of (w^T adj(G) w)^h plus det(G).

    Returns (coeffs: dict exponent-tuple -> int, det) where the
    polynomial is in the n variables of w.
    """
    key = (lat.gram_fingerprint(), h)
    cached = _dual_power_cache.get(key)
    if cached is not None:
        return cached
    n = lat.dim
    gram_int, den = rm.clear_denominators(lat.gram)
    # adj of the *integer* gram; scale bookkeeping handled by caller via det
    adj = rm.adjugate(gram_int)
    base: dict = {}
    for i in range(n):
        for j in range(i, n):
            ex = [0] * n
            ex[i] += 1
            ex[j] += 1
            coef = adj[i][j] if i == j else 2 * adj[i][j]
            if coef:
                base[tuple(ex)] = base.get(tuple(ex), 0) + coef
    poly = {tuple([0] * n): 1}
    for _ in range(h):
        nxt: dict = {}
        for ex1, c1 in poly.items():
            for ex2, c2 in base.items():
                ex = tuple(a + b for a, b in zip(ex1, ex2))
                nxt[ex] = nxt.get(ex, 0) + c1 * c2
        poly = nxt
    det_int = rm.det(gram_int)
    result = (poly, det_int, den)
    _dual_power_cache[key] = result
    return result


_dual_power_cache: dict = {}


def _tensor_certify(shell: ShellSet, e: int) -> bool:
    """Full exact moment-tensor comparison at even degree e."""
    lat = shell.lattice
    n = lat.dim
    h = e // 2
    X = shell.vectors
    monos = _monomials(n, h)
    T = _moment_matrix(X, monos)
    exps = [_mono_exponents(mo, n) for mo in monos]
    moments: dict = {}
    k = len(monos)
    for i in range(k):
        ei = exps[i]
        row = T[i]
        for j in range(i, k):
            mu = tuple(a + b for a, b in zip(ei, exps[j]))
            seen = moments.get(mu)
            if seen is None:
                moments[mu] = int(row[j])
            elif seen != row[j]:
                raise ArithmeticError("inconsistent moment tensor entries")
    # identity: multinom(e,mu) M_mu == c_e m^h (w G^-1 w)^h coefficient.
    # With D = den*G integer: (w G^-1 w) = den * (w D^-1 w)
    #                        = den * (w adj(D) w) / det(D).
    poly, det_int, den = _dual_form_power(lat, h)
    ce = c_coefficient(n, len(shell), e)
    scale = ce * (rm.frac(shell.m) ** h) * Fraction(den, 1) ** h / Fraction(det_int) ** h
    for mu, m_mu in moments.items():
        lhs = Fraction(_multinomial(e, mu) * m_mu)
        rhs = scale * poly.get(mu, 0)
        if lhs != rhs:
            return False
    # exponents mu with zero moment but nonzero rhs coefficient
    for mu, coef in poly.items():
        if mu not in moments and scale * coef != 0:
            return False
    return True


@dataclass
class DesignVerdict:
    is_design: bool
    exact: bool  # False means a positive verdict rests on screening only
    degree: int


def design_report(
    shell: ShellSet,
    t: int,
    force_exact: bool = False,
    cost_cap: int | None = None,
) -> DesignVerdict:
    """Full verdict for the t-design property with evidence grade."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    cap = TENSOR_COST_CAP if cost_cap is None else cost_cap
    lat = shell.lattice
    if len(shell) == 0:
        raise LatticeError("empty shell has no design strength")
    e = t - (t % 2)
    odd_cap = t if t % 2 else t - 1
    if odd_cap >= 1 and not _odd_sums_vanish(shell, odd_cap):
        return DesignVerdict(False, True, e)
    if e == 0:
        return DesignVerdict(True, True, 0)
    # exact witness refutation first: cheap and decides most negatives
    for w in _witness_rows(lat.dim, 8):
        if not _witness_identity_holds(shell, w, e):
            return DesignVerdict(False, True, e)
    cost = len(_monomials(lat.dim, e // 2)) ** 2 * len(shell)
    if cost > cap and not force_exact:
        for w in _witness_rows(lat.dim, _SCREEN_WITNESSES, seed=_WITNESS_SEED + e):
            if not _witness_identity_holds(shell, w, e):
                return DesignVerdict(False, True, e)
        return DesignVerdict(True, False, e)
    return DesignVerdict(_tensor_certify(shell, e), True, e)


def is_t_design(shell: ShellSet, t: int, force_exact: bool = False) -> bool:
    return design_report(shell, t, force_exact=force_exact).is_design


def strength_with_cap(shell: ShellSet, t_max: int = 9, cost_cap: int | None = None):
    """(largest t <= t_max with the design property, capped?, all exact?).

    Shells are antipodal so strength only needs testing at odd t.
    """
    strength = 0
    exact = True
    t = 1
    while t <= t_max:
        verdict = design_report(shell, t, cost_cap=cost_cap)
        if not verdict.is_design:
            break
        strength = t
        exact = exact and verdict.exact
        t += 2
    capped = strength + 2 > t_max
    return strength, capped, exact


def design_strength(shell: ShellSet, t_max: int = 9) -> int:
    return strength_with_cap(shell, t_max)[0]


def distance_set(shell: ShellSet, sweep_cap: int = 4096):
    """Sorted list of inner products (x, y) over distinct pairs in X.

    Exact for every input that this package meets: values are ruled out by
    empty difference/sum shells (x - y and x + y land in shells of norm
    2(m -+ gamma)), witnessed by batched exact inner-product sweeps, and
    for shells up to 10^5 vectors the sweep is simply exhaustive. A huge
    shell whose sweep stalls raises instead of answering approximately.
    """
    lat = shell.lattice
    X = shell.vectors
    count = len(shell)
    if count <= 1:
        return []
    _, den = rm.clear_denominators(lat.gram)
    m_int = int(rm.frac(shell.m) * den)

    candidates = set(range(-m_int + 1, m_int))  # scaled by den
    excluded = set()
    for k in list(candidates):
        gamma = Fraction(k, den)
        for nrm in (2 * (shell.m - gamma), 2 * (shell.m + gamma)):
            # only consult shells that are cheap to certify empty
            if nrm <= 4 and shell_count(lat, nrm) == 0:
                excluded.add(k)
                break
    possible = candidates - excluded

    gram_int, _ = rm.clear_denominators(lat.gram)
    GX = np.asarray(gram_int, dtype=np.int64) @ X.T.astype(np.int64)
    GXf = GX.astype(np.float64)
    seen = np.zeros(2 * m_int + 1, dtype=bool)
    batch = max(1, min(count, 8 * 10**6 // max(count, 1) + 1))
    exhaustive = count <= 10**5
    swept = 0
    for start in range(0, count, batch):
        rows = X[start : start + batch].astype(np.float64)
        dots = rows @ GXf
        idx = np.rint(dots).astype(np.int64) + m_int
        seen[np.unique(idx)] = True
        swept += rows.shape[0]
        witnessed = {int(v) - m_int for v in np.nonzero(seen)[0]}
        witnessed.discard(m_int)  # self pairs only
        if possible <= witnessed:
            return sorted(Fraction(k, den) for k in witnessed | {-m_int})
        if not exhaustive and swept >= sweep_cap:
            raise RuntimeError(
                "distance set undecided after sweep cap; rerun with a larger cap"
            )
    witnessed = {int(v) - m_int for v in np.nonzero(seen)[0]}
    witnessed.discard(m_int)
    return sorted(Fraction(k, den) for k in witnessed | {-m_int})


@dataclass
class Configuration:
    """One row of a shell configuration table."""

    d: int  # lattice rank
    n: int  # shell size
    s: int  # number of distinct inner products among distinct pairs
    t: int  # design strength (largest tested odd t that holds)
    capped: bool  # strength reached the testing cap
    exact: bool  # False when the positive part of t rests on screening


def configuration(
    shell: ShellSet, t_max: int = 9, cost_cap: int | None = None
) -> Configuration:
    t, capped, exact = strength_with_cap(shell, t_max, cost_cap=cost_cap)
    s = len(distance_set(shell))
    return Configuration(shell.lattice.dim, len(shell), s, t, capped, exact)
