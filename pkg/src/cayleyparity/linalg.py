"""Exact dense linear algebra over the rationals.

Matrices are lists of rows (anything indexable works as input, including
numpy integer arrays); entries are ``int`` or :class:`fractions.Fraction`.
Polynomials are coefficient lists, lowest degree first.

Characteristic polynomials of integer matrices are computed by Hessenberg
reduction modulo several primes followed by Chinese remaindering, with a
Hadamard-type bound on the coefficients deciding how many primes are used.
Nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import modp
from .errors import Singular

# -- conversion ---------------------------------------------------------------


def _py(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def as_matrix(M) -> list[list]:
    """Copy ``M`` into a list of lists of ``int``/``Fraction``."""
    return [[_py(x) for x in row] for row in M]


def _frac_matrix(M) -> list[list[Fraction]]:
    return [[Fraction(_py(x)) for x in row] for row in M]


def is_integral(M) -> bool:
    return all(Fraction(_py(x)).denominator == 1 for row in M for x in row)


def _clear_denominators(M) -> tuple[list[list[int]], int]:
    if isinstance(M, np.ndarray) and M.dtype.kind in "iu":
        return M.astype(object).tolist(), 1
    F = _frac_matrix(M)
    D = 1
    for row in F:
        for x in row:
            D = math.lcm(D, x.denominator)
    return [[int(x * D) for x in row] for row in F], D


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable exact matrix; iterates over rows so every function here accepts it."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, M) -> "RationalMatrix":
        F = tuple(tuple(row) for row in _frac_matrix(M))
        if not F or not F[0] or any(len(r) != len(F[0]) for r in F):
            raise ValueError("matrix must be non-empty and rectangular")
        return cls(len(F), len(F[0]), F)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return self.rows

    def __getitem__(self, i):
        return self.entries[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class IntPolynomial:
    """Integer coefficients, lowest degree first, trimmed."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coefficients)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(int(x) for x in (c or [0])))

    @property
    def degree(self) -> int:
        return -1 if self.coefficients == (0,) else len(self.coefficients) - 1

    def __call__(self, x):
        return poly_eval(self.coefficients, x)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A) -> list[list]:
    return [list(col) for col in zip(*A)]


# -- elimination ---------------------------------------------------------------


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = _frac_matrix(M)
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        pr = R[r]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], pr)]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def nullspace(M) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    R, pivots = rref(M)
    cols = len(M[0]) if len(M) else 0
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def _bareiss_det(N: list[list[int]]) -> int:
    A = [row[:] for row in N]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1] if n else 1


def det(M) -> Fraction:
    """Exact determinant (fraction-free elimination after clearing denominators)."""
    N, D = _clear_denominators(M)
    return Fraction(_bareiss_det(N), D ** len(N))


def det_parity(M) -> str:
    """``"odd"`` or ``"even"``: parity of the determinant of an integer matrix.

    Computed by elimination over GF(2) with rows packed into bitmasks.
    """
    rows = []
    for row in M:
        mask = 0
        for j, x in enumerate(row):
            x = Fraction(_py(x))
            if x.denominator != 1:
                raise ValueError("det_parity needs an integer matrix")
            if x.numerator & 1:
                mask |= 1 << j
        rows.append(mask)
    n = len(rows)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i] >> c & 1), None)
        if piv is None:
            return "even"
        rows[c], rows[piv] = rows[piv], rows[c]
        for i in range(c + 1, n):
            if rows[i] >> c & 1:
                rows[i] ^= rows[c]
    return "odd"


def inverse(M) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(_frac_matrix(M))]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise Singular("matrix is singular")
    return [row[n:] for row in R]


# -- polynomials -----------------------------------------------------------------


def poly_trim(p: Sequence) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [0]


def poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_from_roots(roots) -> list[int]:
    p = [1]
    for r in roots:
        p = poly_mul(p, [-r, 1])
    return p


def poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_divmod(p: Sequence, q: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    q = poly_trim(q)
    if q == [0]:
        raise ZeroDivisionError("division by the zero polynomial")
    r = [Fraction(_py(c)) for c in poly_trim(p)]
    dq, lead = len(q) - 1, Fraction(_py(q[-1]))
    if len(r) - 1 < dq:
        return [Fraction(0)], r
    quo = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lead
        quo[k] = c
        if c:
            for j, qc in enumerate(q):
                r[k + j] -= c * qc
    return poly_trim(quo), poly_trim(r[:dq] or [Fraction(0)])


def poly_divides(q: Sequence, p: Sequence) -> bool:
    """True iff ``q`` divides ``p`` over the rationals."""
    return all(c == 0 for c in poly_divmod(p, q)[1])


def _primitive(p: Sequence) -> list[int]:
    fr = [Fraction(_py(c)) for c in poly_trim(p)]
    D = 1
    for c in fr:
        D = math.lcm(D, c.denominator)
    ints = [int(c * D) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    g = g or 1
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _ceil_root(a: int, k: int) -> int:
    """Smallest integer ``b >= 0`` with ``b**k >= a``."""
    if a <= 0:
        return 0
    lo, hi = 0, 1 << (a.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k >= a:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _synthetic_div(p: list[int], r: int) -> tuple[list[int], int]:
    """Divide ``p`` by ``x - r``; returns quotient and remainder ``p(r)``."""
    n = len(p) - 1
    quo = [0] * n
    acc = 0
    for k in range(n, 0, -1):
        acc = acc * r + p[k]
        quo[k - 1] = acc
    return quo, acc * r + p[0]


def integer_roots(p: Sequence) -> tuple[list[int], list[int]]:
    """Integer roots of ``p`` with multiplicity, and the leftover factor.

    Candidates are divisors of the constant term up to a Fujiwara root bound;
    each is removed by synthetic division as often as it divides.  The
    remainder is primitive with a positive leading coefficient.
    """
    f = _primitive(p)
    if f == [0]:
        raise ValueError("zero polynomial has every integer as a root")
    roots: list[int] = []
    while len(f) > 1 and f[0] == 0:
        roots.append(0)
        f = f[1:]
    deg = len(f) - 1
    if deg == 0:
        return roots, f
    lead = abs(f[-1])
    # Fujiwara: every root has |z| <= 2 max_k |a_{deg-k} / a_deg|^(1/k);
    # float logs only size the search, padded so they never undershoot
    bound = 0.0
    for k in range(1, deg + 1):
        a = abs(f[deg - k])
        if a:
            bound = max(bound, math.exp((math.log(a) - math.log(lead)) / k))
    bound = int(2 * bound * (1 + 1e-9)) + 2
    for c in range(1, bound + 1):
        for r in (c, -c):
            while len(f) > 1 and f[0] % r == 0:
                quo, rem = _synthetic_div(f, r)
                if rem:
                    break
                roots.append(r)
                f = quo
        if len(f) == 1:
            break
    return sorted(roots), f


# -- characteristic polynomial -----------------------------------------------------


def _coefficient_bound(N) -> int:
    """Bound on |coefficients| of det(xI - N) for an integer matrix.

    The x^(n-k) coefficient sums C(n,k) principal k-minors, each bounded by
    Hadamard's inequality with the largest row norm R: C(n,k) R^k.
    """
    n = len(N)
    R2 = max(sum(x * x for x in row) for row in N)
    return max(math.comb(n, k) * (math.isqrt(R2**k) + 1) for k in range(n + 1))


def _crt_primes_for(bound: int) -> list[int]:
    primes, modulus = [], 1
    for p in modp.crt_primes():
        primes.append(p)
        modulus *= p
        if modulus > 2 * bound:
            return primes


def _crt_lift(residues: list[tuple[int, list[int]]]) -> list[int]:
    coeffs = []
    for k in range(len(residues[0][1])):
        x, m = 0, 1
        for p, cp in residues:
            t = ((int(cp[k]) - x) * pow(m, -1, p)) % p
            x += m * t
            m *= p
        coeffs.append(x - m if x > m // 2 else x)
    return coeffs


def _charpoly_integer(N: list[list[int]]) -> list[int]:
    n = len(N)
    if n == 0:
        return [1]
    arr = np.array(N, dtype=object)
    residues = []
    for p in _crt_primes_for(_coefficient_bound(N)):
        Mp = np.array((arr % p).tolist(), dtype=np.int64)
        residues.append((p, modp.charpoly_modp(Mp, p)))
    return _crt_lift(residues)


def char_poly_many(mats, chunk: int = 1024) -> list[list[int]]:
    """Characteristic polynomials of many same-size integer matrices.

    Matrices share one prime set sized for the worst coefficient bound, and
    each prime is processed as a vectorized batch.
    """
    stack = np.asarray(mats, dtype=np.int64)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError("expected a stack of square matrices")
    B, n, _ = stack.shape
    if n == 0:
        return [[1] for _ in range(B)]
    R2 = int((stack.astype(object) ** 2).sum(axis=2).max())
    bound = max(math.comb(n, k) * (math.isqrt(R2**k) + 1) for k in range(n + 1))
    primes = _crt_primes_for(bound)
    out = []
    for start in range(0, B, chunk):
        part = stack[start : start + chunk]
        per_prime = [modp.charpoly_modp_batch(part % p, p).tolist() for p in primes]
        for i in range(len(part)):
            out.append(_crt_lift([(p, per_prime[j][i]) for j, p in enumerate(primes)]))
    return out


def char_poly(M) -> list:
    """``det(xI - M)`` exactly, lowest degree first.

    Integer matrices give integer coefficients; rational ones give
    ``Fraction`` coefficients.
    """
    N, D = _clear_denominators(M)
    c = _charpoly_integer(N)
    if D == 1:
        return c
    n = len(N)
    # det(xI - N/D) = D^-n det(D x I - N)
    return [Fraction(ck * D**k, D**n) for k, ck in enumerate(c)]
