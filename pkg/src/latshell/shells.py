"""Shell enumeration: all lattice vectors of a given norm.

The enumerator is a Fincke-Pohst tree walk over coordinate vectors using
the exact LDL^T decomposition of the Gram matrix. Two implementations share
the same traversal:

* a pure Python one with Fraction bounds, exact at every node, used as the
  reference and for small problems;
* a numba kernel using float64 bounds inflated by a safety margin, with an
  exact int64 Gram-norm recheck at every leaf. Floats only ever prune; a
  vector is admitted or rejected by integer arithmetic alone.

Both enumerate a half shell (highest-index nonzero coordinate positive)
and mirror it, so antipodality of the output is structural. Vectors come
back as a lexicographically sorted numpy array of coordinate rows, which
makes results independent of worker count and scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ratmat as rm
from .lattice import Lattice, LatticeError

DEFAULT_MEMORY_CAP = 10**8  # vectors, not bytes

_have_numba = True
try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _have_numba = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


class ShellTooLarge(RuntimeError):
    """Raised when a shell would exceed the configured vector cap."""


@dataclass
class ShellSet:
    """A full shell s_m(L): every coordinate row x with (x, x) = m."""

    lattice: Lattice
    m: Fraction
    vectors: np.ndarray  # (count, dim) int32, lexicographically sorted
    _dots_cache: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    def dots_with_integer_row(self, w) -> np.ndarray:
        """Exact int64 inner products of all shell coordinate rows with an
        integer row w (w is already Gram-multiplied by the caller)."""
        w = np.asarray(w, dtype=np.int64)
        key = w.tobytes()
        if key not in self._dots_cache:
            self._dots_cache[key] = self.vectors.astype(np.int64) @ w
        return self._dots_cache[key]


def _ldl(gram):
    """Exact Fincke-Pohst decomposition: Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2."""
    n = len(gram)
    q = [[rm.frac(x) for x in row] for row in gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise LatticeError("gram matrix not positive definite")
        for j in range(i + 1, n):
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                # only the upper triangle carries working values
                q[k][l] = q[k][l] - q[i][k] * q[i][i] * q[i][l]
    d = [q[i][i] for i in range(n)]
    mu = [[q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return d, mu


def _floor_plus_sqrt(c: Fraction, r: Fraction) -> int:
    """floor(c + sqrt(r)) for rationals, r >= 0, exactly."""
    approx = float(c) + math.sqrt(float(r))
    k = math.floor(approx)
    # fix up the float estimate with exact comparisons
    while True:  # k <= c + sqrt(r) ?
        diff = Fraction(k) - c
        if diff <= 0 or diff * diff <= r:
            break
        k -= 1
    while True:  # does k+1 still fit?
        diff = Fraction(k + 1) - c
        if diff <= 0 or diff * diff <= r:
            k += 1
        else:
            break
    return k


def _ceil_minus_sqrt(c: Fraction, r: Fraction) -> int:
    return -_floor_plus_sqrt(-c, r)


def _scaled_integer_form(lat: Lattice):
    """(integer gram, denominator) with gram_int = den * gram."""
    gint, den = rm.clear_denominators(lat.gram)
    return gint, den


def _enumerate_exact(lat: Lattice, m: Fraction, half_only=False):
    """Reference enumerator, exact at every node. Returns a python list of
    coordinate tuples (the half shell under the sign convention)."""
    n = lat.dim
    d, mu = _ldl(lat.gram)
    m = rm.frac(m)
    out = []
    x = [0] * n

    def walk(i, remaining, allzero):
        s = sum(mu[i][j] * x[j] for j in range(i + 1, n))
        r = remaining / d[i]
        lo = _ceil_minus_sqrt(-s, r)
        hi = _floor_plus_sqrt(-s, r)
        if allzero:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            x[i] = v
            t = Fraction(v) + s
            rem2 = remaining - d[i] * t * t
            if rem2 < 0:
                continue
            if i == 0:
                if rem2 == 0 and any(x):
                    out.append(tuple(x))
            else:
                walk(i - 1, rem2, allzero and v == 0)
        x[i] = 0

    if n > 0 and m > 0:
        walk(n - 1, m, True)
    return out


@njit(cache=True, nogil=True)
def _enum_kernel(diag, mu, gint, m_int, m_f, top_lo, top_hi, half, store, cap):
    n = diag.shape[0]
    eps = 1e-7 * (1.0 + m_f)
    btol = 1e-9
    x = np.zeros(n, np.int64)
    lo = np.zeros(n, np.int64)
    hi = np.zeros(n, np.int64)
    s = np.zeros(n, np.float64)
    part = np.zeros(n, np.float64)
    zflag = np.zeros(n, np.uint8)

    out = np.empty((256 if store else 1, n), np.int32)
    count = 0

    i = n - 1
    s[i] = 0.0
    part[i] = 0.0
    zflag[i] = 1
    r = math.sqrt(max(m_f + eps, 0.0) / diag[i])
    l = int(math.ceil(-r - btol * (1.0 + r)))
    h = int(math.floor(r + btol * (1.0 + r)))
    if half:
        l = max(l, 0)
    l = max(l, top_lo)
    h = min(h, top_hi)
    lo[i] = l
    hi[i] = h
    x[i] = l - 1

    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i >= n:
                break
            continue
        t = x[i] + s[i]
        val = part[i] + diag[i] * t * t
        if val > m_f + eps:
            continue
        if i == 0:
            acc = np.int64(0)
            for a in range(n):
                xa = x[a]
                if xa != 0:
                    acc += gint[a, a] * xa * xa
                    for b in range(a + 1, n):
                        if x[b] != 0:
                            acc += 2 * gint[a, b] * xa * x[b]
            if acc == m_int:
                if count >= cap:
                    return -1, out[:0]
                if store:
                    if count >= out.shape[0]:
                        bigger = np.empty((out.shape[0] * 2, n), np.int32)
                        bigger[: out.shape[0]] = out
                        out = bigger
                    for a in range(n):
                        out[count, a] = np.int32(x[a])
                count += 1
            continue
        j = i - 1
        zflag[j] = 1 if (zflag[i] == 1 and x[i] == 0) else 0
        part[j] = val
        acc2 = 0.0
        for k in range(j + 1, n):
            acc2 += mu[j, k] * x[k]
        s[j] = acc2
        rem = m_f + eps - part[j]
        if rem < 0.0:
            rem = 0.0
        r = math.sqrt(rem / diag[j])
        width = btol * (1.0 + r + abs(acc2))
        l = int(math.ceil(-acc2 - r - width))
        h = int(math.floor(-acc2 + r + width))
        if half and zflag[j] == 1 and l < 0:
            l = 0
        lo[j] = l
        hi[j] = h
        x[j] = l - 1
        i = j

    return count, out[:count]


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("LATSHELL_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _top_range(lat: Lattice, m: Fraction):
    d, _ = _ldl(lat.gram)
    i = lat.dim - 1
    return _floor_plus_sqrt(Fraction(0), rm.frac(m) / d[i])


def enumerate_shell(
    lat: Lattice,
    m,
    workers=None,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    _force_exact: bool = False,
) -> ShellSet:
    """All vectors of norm m, as a sorted antipodal ShellSet.

    m = 0 gives the zero vector alone. Rational m is fine; the shell is
    empty unless den(gram) * m is an integer.
    """
    m = rm.frac(m)
    if m < 0:
        raise LatticeError("norm must be nonnegative")
    n = lat.dim
    if m == 0:
        return ShellSet(lat, m, np.zeros((1, n), np.int32))

    gint, den = _scaled_integer_form(lat)
    scaled = m * den
    if scaled.denominator != 1:
        return ShellSet(lat, m, np.zeros((0, n), np.int32))
    m_int = int(scaled)

    use_numba = _have_numba and not _force_exact
    if not use_numba:
        half = _enumerate_exact(lat, m)
        arr = np.array(sorted(half), dtype=np.int32).reshape(len(half), n)
        if 2 * len(half) > memory_cap:
            raise ShellTooLarge(
                f"shell of size {2 * len(half)} exceeds cap {memory_cap}"
            )
    else:
        diag_f, mu_f = _ldl(lat.gram)
        diag = np.array([float(x) for x in diag_f], dtype=np.float64)
        mu = np.array([[float(x) for x in row] for row in mu_f], dtype=np.float64)
        g = np.array(gint, dtype=np.int64)
        m_f = float(m)
        cap_half = memory_cap // 2 + 1
        top_hi = _top_range(lat, m)
        nworkers = _worker_count(workers)
        if nworkers <= 1 or top_hi == 0:
            cnt, arr = _enum_kernel(diag, mu, g, m_int, m_f, 0, top_hi, True, True, cap_half)
            if cnt < 0:
                raise ShellTooLarge(f"shell exceeds vector cap {memory_cap}")
        else:
            values = list(range(top_hi + 1))
            chunks = [values[w::nworkers] for w in range(nworkers)]

            def run(vals):
                parts = {}
                for v in vals:
                    c, a = _enum_kernel(diag, mu, g, m_int, m_f, v, v, True, True, cap_half)
                    if c < 0:
                        raise ShellTooLarge(f"shell exceeds vector cap {memory_cap}")
                    parts[v] = a.copy()
                return parts

            merged = {}
            with ThreadPoolExecutor(max_workers=nworkers) as pool:
                for parts in pool.map(run, chunks):
                    merged.update(parts)
            arrs = [merged[v] for v in sorted(merged)]
            arr = np.concatenate(arrs, axis=0) if arrs else np.zeros((0, n), np.int32)
            if arr.shape[0] > cap_half:
                raise ShellTooLarge(f"shell exceeds vector cap {memory_cap}")

    full = np.concatenate([arr, -arr], axis=0)
    order = np.lexsort(full.T[::-1])
    full = np.ascontiguousarray(full[order])
    return ShellSet(lat, m, full)


def shell_count(lat: Lattice, m, workers=None, memory_cap=DEFAULT_MEMORY_CAP) -> int:
    """|s_m(L)| without storing the vectors."""
    m = rm.frac(m)
    if m < 0:
        raise LatticeError("norm must be nonnegative")
    if m == 0:
        return 1
    gint, den = _scaled_integer_form(lat)
    scaled = m * den
    if scaled.denominator != 1:
        return 0
    m_int = int(scaled)
    if not _have_numba:
        return 2 * len(_enumerate_exact(lat, m))
    diag_f, mu_f = _ldl(lat.gram)
    diag = np.array([float(x) for x in diag_f], dtype=np.float64)
    mu = np.array([[float(x) for x in row] for row in mu_f], dtype=np.float64)
    g = np.array(gint, dtype=np.int64)
    top_hi = _top_range(lat, m)
    nworkers = _worker_count(workers)
    cap_half = memory_cap // 2 + 1
    if nworkers <= 1 or top_hi == 0:
        cnt, _ = _enum_kernel(diag, mu, g, m_int, float(m), 0, top_hi, True, False, cap_half)
        if cnt < 0:
            raise ShellTooLarge(f"shell exceeds vector cap {memory_cap}")
        return 2 * cnt
    values = list(range(top_hi + 1))
    chunks = [values[w::nworkers] for w in range(nworkers)]

    def run(vals):
        total = 0
        for v in vals:
            c, _ = _enum_kernel(diag, mu, g, m_int, float(m), v, v, True, False, cap_half)
            if c < 0:
                raise ShellTooLarge(f"shell exceeds vector cap {memory_cap}")
            total += c
        return total

    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        return 2 * sum(pool.map(run, chunks))


def minimum(lat: Lattice) -> Fraction:
    """Smallest nonzero norm, found by trying the possible values upward."""
    _, den = _scaled_integer_form(lat)
    bound = min(lat.gram[i][i] for i in range(lat.dim))
    k = 1
    while True:
        m = Fraction(k, den)
        if m > bound:
            raise LatticeError("no vector found up to the diagonal bound")
        if shell_count(lat, m) > 0:
            return m
        k += 1


def theta_prefix(lat: Lattice, upto: int, workers=None, memory_cap=DEFAULT_MEMORY_CAP):
    """Counts [ |s_0|, |s_1|, ..., |s_upto| ] at integer norms."""
    return [shell_count(lat, m, workers=workers, memory_cap=memory_cap) for m in range(upto + 1)]
