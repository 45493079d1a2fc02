"""Dense linear algebra over prime fields GF(p), on numpy int64 arrays.

All functions expect entries already reduced into ``0..p-1`` and keep them
there.  Products are formed in int64, so ``p`` must satisfy
``n * p**2 < 2**63`` for the matrix sizes involved; moduli below ``2**24``
are safe up to the group-size cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import prevprime

from .errors import SplitFailure

CRT_PRIME_CEILING = 1 << 24


@lru_cache(maxsize=1)
def _crt_prime_list(count: int = 64) -> tuple[int, ...]:
    out, p = [], CRT_PRIME_CEILING
    for _ in range(count):
        p = prevprime(p)
        out.append(p)
    return tuple(out)


def crt_primes():
    """Deterministic stream of primes just below ``2**24``, largest first."""
    yield from _crt_prime_list()
    p = _crt_prime_list()[-1]
    while True:
        p = prevprime(p)
        yield p


def reduce(M, p: int) -> np.ndarray:
    return np.mod(np.asarray(M, dtype=object), p).astype(np.int64)


def charpoly_modp(M: np.ndarray, p: int) -> np.ndarray:
    """Coefficients (lowest first) of ``det(xI - M)`` over GF(p).

    Similarity-reduces ``M`` to upper Hessenberg form, then runs the
    standard three-term recurrence on the leading principal blocks.
    """
    H = np.array(M, dtype=np.int64) % p
    n = H.shape[0]
    for j in range(n - 2):
        nz = np.flatnonzero(H[j + 1 :, j])
        if len(nz) == 0:
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            H[[i, j + 1], :] = H[[j + 1, i], :]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        tinv = pow(int(H[j + 1, j]), -1, p)
        u = (H[j + 2 :, j] * tinv) % p
        if not u.any():
            continue
        H[j + 2 :, :] = (H[j + 2 :, :] - u[:, None] * H[j + 1, :][None, :]) % p
        H[:, j + 1] = (H[:, j + 1] + H[:, j + 2 :] @ u) % p

    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    h = H.tolist()
    for m in range(1, n + 1):
        # 1-indexed recurrence; h[m-1][m-1] is h_mm
        prev = polys[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - h[m - 1][m - 1] * prev) % p
        if m > 1:
            coef = [0] * (m - 1)
            t = 1
            for i in range(m - 1, 0, -1):
                t = t * h[i][i - 1] % p
                coef[i - 1] = h[i - 1][m - 1] * t % p
            acc = np.array(coef, dtype=np.int64) @ polys[: m - 1]
            cur = (cur - acc % p) % p
        polys[m] = cur
    return polys[n]


def _inv_vec(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p by Fermat; zeros map to zero."""
    out = np.ones_like(a)
    base, e = a % p, p - 2
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return np.where(a % p == 0, 0, out)


def charpoly_modp_batch(Ms: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomials of a stack ``(B, n, n)`` of matrices over GF(p).

    Same reduction as :func:`charpoly_modp`, vectorized over the stack.
    Returns shape ``(B, n + 1)``, lowest degree first.
    """
    H = np.array(Ms, dtype=np.int64) % p
    B, n, _ = H.shape
    bidx = np.arange(B)
    for j in range(n - 2):
        nz = H[:, j + 1 :, j] != 0
        first = np.argmax(nz, axis=1) + j + 1
        need = nz.any(axis=1) & (first != j + 1)
        if need.any():
            sub, f = bidx[need], first[need]
            tmp = H[sub, j + 1, :].copy()
            H[sub, j + 1, :] = H[sub, f, :]
            H[sub, f, :] = tmp
            tmp = H[sub, :, j + 1].copy()
            H[sub, :, j + 1] = H[sub, :, f]
            H[sub, :, f] = tmp
        tinv = _inv_vec(H[:, j + 1, j], p)
        u = H[:, j + 2 :, j] * tinv[:, None] % p
        H[:, j + 2 :, :] = (H[:, j + 2 :, :] - u[:, :, None] * H[:, j + 1, None, :]) % p
        H[:, :, j + 1] = (H[:, :, j + 1] + np.matmul(H[:, :, j + 2 :], u[:, :, None])[:, :, 0]) % p

    polys = np.zeros((B, n + 1, n + 1), dtype=np.int64)
    polys[:, 0, 0] = 1
    for m in range(1, n + 1):
        prev = polys[:, m - 1]
        cur = np.zeros((B, n + 1), dtype=np.int64)
        cur[:, 1:] = prev[:, :-1]
        cur = (cur - H[:, m - 1, m - 1, None] * prev) % p
        t = np.ones(B, dtype=np.int64)
        for i in range(m - 1, 0, -1):
            t = t * H[:, i, i - 1] % p
            coef = H[:, i - 1, m - 1] * t % p
            cur = (cur - coef[:, None] * polys[:, i - 1]) % p
        polys[:, m] = cur
    return polys[:, n]


def rref_modp(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        f = R[:, c].copy()
        f[r] = 0
        R = (R - f[:, None] * R[r][None, :]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def nullspace_modp(M: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of the right kernel of ``M`` over GF(p)."""
    R, pivots = rref_modp(M, p)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return basis


def rank_modp(M: np.ndarray, p: int) -> int:
    return len(rref_modp(M, p)[1])


def roots_modp(poly, p: int) -> list[int]:
    """Distinct roots in GF(p) by evaluating at every residue (chunked Horner)."""
    coeffs = [int(c) % p for c in poly]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) == 1:
        if coeffs[0] == 0:
            raise ValueError("zero polynomial")
        return []
    found = []
    chunk = 1 << 20
    for start in range(0, p, chunk):
        xs = np.arange(start, min(p, start + chunk), dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(coeffs):
            acc = (acc * xs + c) % p
        found.extend(int(x) for x in xs[acc == 0])
    return found


def poly_divmod_modp(a, b, p: int) -> tuple[list[int], list[int]]:
    a = [int(c) % p for c in a]
    b = [int(c) % p for c in b]
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    if b == [0]:
        raise ZeroDivisionError("division by zero polynomial")
    db, inv = len(b) - 1, pow(b[-1], -1, p)
    if len(a) - 1 < db:
        return [0], a
    quo = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * inv % p
        quo[k] = c
        if c:
            for j, bc in enumerate(b):
                a[k + j] = (a[k + j] - c * bc) % p
    rem = a[:db] or [0]
    return quo, rem


def poly_divides_modp(q, f, p: int) -> bool:
    return not any(poly_divmod_modp(f, q, p)[1])


@dataclass(frozen=True)
class CommonEigenspace:
    """Rows of ``basis`` span a subspace on which matrix ``i`` acts as ``scalars[i]``."""

    basis: np.ndarray
    scalars: tuple[int, ...]

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])


def _restrict(A: np.ndarray, basis: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Matrix of ``A`` on the invariant row-space ``basis`` (in reduced form).

    Column ``i`` holds the coordinates of ``A b_i``.  Raises SplitFailure if
    the subspace is not invariant.
    """
    images = (basis @ A.T) % p  # row i = A b_i
    coords = images[:, pivots]  # coordinates in the reduced basis
    if not np.array_equal((coords @ basis) % p, images):
        raise SplitFailure("subspace is not invariant; matrices do not commute mod p")
    return coords.T


def _split(A: np.ndarray, basis: np.ndarray, p: int) -> list[tuple[int, np.ndarray]]:
    """Split the row-space ``basis`` into eigenspaces of ``A``."""
    basis, pivots = rref_modp(basis, p)
    basis = basis[: len(pivots)]
    X = _restrict(A, basis, pivots, p)
    dim = X.shape[0]
    lambdas = roots_modp(charpoly_modp(X, p), p)
    pieces, total = [], 0
    eye = np.eye(dim, dtype=np.int64)
    for lam in lambdas:
        ker = nullspace_modp((X - lam * eye) % p, p)
        if len(ker):
            pieces.append((lam, (ker @ basis) % p))
            total += len(ker)
    if total != dim:
        raise SplitFailure(f"matrix is not diagonalizable over GF({p})")
    return pieces


def modp_eigen_split(family, p: int, seed: int = 0) -> list[CommonEigenspace]:
    """Decompose GF(p)^N into common eigenspaces of a commuting family.

    A seeded random combination of the family does most of the splitting in
    one pass; each member is then applied in turn so the result is a full
    common decomposition regardless of the draw.
    """
    mats = [np.asarray(A, dtype=np.int64) % p for A in family]
    if not mats:
        raise ValueError("empty family")
    N = mats[0].shape[0]
    spaces = [np.eye(N, dtype=np.int64)]
    rng = np.random.default_rng(seed)
    combo = np.zeros((N, N), dtype=np.int64)
    for A in mats:
        combo = (combo + int(rng.integers(1, p)) * A) % p
    for A in [combo] + mats:
        spaces = [piece for W in spaces for _, piece in _split(A, W, p)]

    out = []
    for W in spaces:
        W, pivots = rref_modp(W, p)
        W = W[: len(pivots)]
        scalars = []
        for A in mats:
            X = _restrict(A, W, pivots, p)
            lam = int(X[0, 0])
            if not np.array_equal(X, (lam * np.eye(len(W), dtype=np.int64)) % p):
                raise SplitFailure("family member does not act as a scalar on a common eigenspace")
            scalars.append(lam)
        out.append(CommonEigenspace(basis=W, scalars=tuple(scalars)))
    return out
