"""Spectral data of the full conjugacy class scheme, computed modulo a prime.

Eigenvalues of the conjugacy class scheme are generally irrational, but
they are algebraic integers in the cyclotomic field of the group exponent
``e``.  For a prime ``p = 1 (mod e)`` that field splits completely, so
the class algebra diagonalizes over GF(p) and its common eigenvectors give a
faithful image of the eigenmatrix.  Small integers (class sizes,
multiplicities, the group order) are recovered exactly because ``p > n^2``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

import numpy as np
from sympy import isprime

from .errors import LiftFailure, NonSimpleSpectrum, NotInteger, NotOdd, SplitFailure
from .groups import FiniteGroup, conjugacy_classes, pc_classes
from .modp import modp_eigen_split
from .schemes import (
    AssociationScheme,
    IntersectionNumbers,
    is_subscheme,
    scheme_from_partition,
    valencies,
    verify_scheme_axioms,
)
from .spectra import QuotientReport, eigensystem_integral, equitable_quotient_check, frame_quotient_value


@dataclass(frozen=True)
class ModPEigenmatrix:
    """Rows are class-algebra eigenspaces, columns are conjugacy classes, entries in GF(p)."""

    p: int
    Pm: tuple[tuple[int, ...], ...]
    star: tuple[int, ...]
    seed: int = 0
    m: tuple[int, ...] | None = None

    @property
    def d(self) -> int:
        return len(self.star) - 1


def exponent(G: FiniteGroup) -> int:
    return math.lcm(*(int(o) for o in G.elem_order))


def admissible_primes(G: FiniteGroup):
    """Primes ``p = 1 (mod exponent)`` with ``p > n^2``, in increasing order."""
    e, n = exponent(G), G.order
    p = -(-n * n // e) * e + 1
    while True:
        if isprime(p):
            yield p
        p += e


def choose_prime(G: FiniteGroup) -> int:
    return next(admissible_primes(G))


def conjugacy_eigenmatrix_modp(
    S: AssociationScheme, nums: IntersectionNumbers, p: int, seed: int = 0
) -> ModPEigenmatrix:
    """Central-character table of the class algebra over GF(p).

    Row ``j`` lists the eigenvalues of the intersection matrices
    ``L_r[s, t] = p[r, s, t]`` on their ``j``-th common eigenvector.  Since
    that eigenvector, scaled to coordinate 0 equal to 1, has the eigenvalues
    themselves as coordinates, the row is read off the vector directly and
    cross-checked against the scalars.
    """
    D = S.d + 1
    mats = [nums.intersection_matrix(r) for r in range(1, D)] or [np.eye(1, dtype=np.int64)]
    spaces = modp_eigen_split(mats, p, seed=seed)
    rows = []
    for W in spaces:
        if W.dim != 1:
            raise NonSimpleSpectrum(f"common eigenspace of dimension {W.dim} over GF({p})")
        vec = W.basis[0]
        if vec[0] == 0:
            raise SplitFailure("common eigenvector vanishes at the identity class")
        vec = vec * pow(int(vec[0]), -1, p) % p
        row = tuple(int(x) for x in vec)
        if D > 1 and row[1:] != tuple(int(s) for s in W.scalars):
            raise SplitFailure("eigenvector coordinates disagree with class-sum eigenvalues")
        rows.append(row)
    v = tuple(x % p for x in valencies(S))
    rows.sort(key=lambda r: (r != v, r))
    if rows[0] != v:
        raise SplitFailure("no common eigenvector reproduces the valencies")
    return ModPEigenmatrix(p=p, Pm=tuple(rows), star=S.transpose_map, seed=seed)


@dataclass(frozen=True)
class MultiplicityVector:
    m: tuple[int, ...]

    def __iter__(self):
        return iter(self.m)

    def __len__(self):
        return len(self.m)


def multiplicities_modp(Pm: ModPEigenmatrix, v, n: int) -> MultiplicityVector:
    """Recover ``m_j = n / sum_r |w_j(r)|^2 / v_r`` from the mod-p table and lift."""
    p = Pm.p
    out = []
    for row in Pm.Pm:
        acc = 0
        for r, vr in enumerate(v):
            acc = (acc + row[r] * row[Pm.star[r]] * pow(vr, -1, p)) % p
        if acc == 0:
            raise LiftFailure(f"orthogonality sum vanishes mod {p}")
        mj = n * pow(acc, -1, p) % p
        if not 0 < mj <= n:
            raise LiftFailure(f"multiplicity residue {mj} does not lift into 1..{n}")
        out.append(mj)
    if sum(out) != n:
        raise LiftFailure(f"lifted multiplicities sum to {sum(out)}, not {n}")
    return MultiplicityVector(tuple(out))


def frame_quotient_conjugacy(v, m, n: int, d: int) -> int:
    """Exact ``n^(d+1) prod v_j / m_j``; odd order additionally demands an odd value."""
    if len(v) != d + 1 or len(m) != d + 1:
        raise ValueError("v and m must both have d + 1 entries")
    fq = frame_quotient_value(n, v, m)
    if fq.denominator != 1:
        raise NotInteger(f"frame quotient {fq} is not an integer")
    fq = int(fq)
    if n % 2 == 1 and fq % 2 == 0:
        raise NotOdd(f"frame quotient {fq} of an odd-order group is even")
    return fq


def modp_identity_residual(Pm: ModPEigenmatrix, v, m, n: int) -> bool:
    """Check ``Pm Qm = nI`` over GF(p) with ``Qm[r][j] = m_j Pm[j][r*] / v_r``."""
    p, D = Pm.p, len(v)
    P = np.array(Pm.Pm, dtype=object)
    Qm = np.array(
        [[m[j] * Pm.Pm[j][Pm.star[r]] * pow(v[r], -1, p) % p for j in range(D)] for r in range(D)],
        dtype=object,
    )
    prod = (P.dot(Qm)) % p
    return bool((prod == (n * np.eye(D, dtype=np.int64)) % p).all())


@dataclass
class ConjugacyReport:
    group: str
    n: int
    d: int
    primes: list[int]
    seed: int
    valencies: list[int]
    multiplicities: list[int]
    frame_quotient: int
    parity: str
    digests: list[str]
    identities_hold: bool
    consistent_across_primes: bool

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "n": self.n,
            "d": self.d,
            "primes": self.primes,
            "seed": self.seed,
            "valencies": self.valencies,
            "multiplicities": self.multiplicities,
            "frame_quotient": self.frame_quotient,
            "parity": self.parity,
            "pm_digests": self.digests,
            "identities_hold": self.identities_hold,
            "consistent_across_primes": self.consistent_across_primes,
        }


def _digest(Pm: ModPEigenmatrix) -> str:
    return hashlib.sha256(repr((Pm.p, Pm.Pm)).encode()).hexdigest()[:16]


def conjugacy_scheme(G: FiniteGroup) -> tuple[AssociationScheme, IntersectionNumbers]:
    S = scheme_from_partition(G, conjugacy_classes(G))
    rep = verify_scheme_axioms(S)
    if not rep.passed:
        raise SplitFailure(f"conjugacy class scheme fails axioms {rep.failed()}")
    return S, rep.intersection


def eigenmatrices_modp(G: FiniteGroup, n_primes: int = 3, seed: int = 0) -> list[ModPEigenmatrix]:
    """Mod-p eigenmatrices (with multiplicities attached) for the first admissible primes.

    A prime whose split fails is skipped in favour of the next one.
    """
    S, nums = conjugacy_scheme(G)
    v = valencies(S)
    out = []
    for p in admissible_primes(G):
        try:
            Pm = conjugacy_eigenmatrix_modp(S, nums, p, seed=seed)
        except SplitFailure:
            continue
        m = multiplicities_modp(Pm, v, G.order)
        out.append(replace(Pm, m=m.m))
        if len(out) == n_primes:
            return out


def conjugacy_report(G: FiniteGroup, n_primes: int = 3, seed: int = 0) -> ConjugacyReport:
    S, _ = conjugacy_scheme(G)
    v = valencies(S)
    tables = eigenmatrices_modp(G, n_primes, seed)
    mults = [sorted(T.m) for T in tables]
    consistent = all(mm == mults[0] for mm in mults)
    m = list(tables[0].m)
    fq = frame_quotient_conjugacy(v, m, G.order, S.d)
    idents = all(modp_identity_residual(T, v, T.m, G.order) for T in tables)
    return ConjugacyReport(
        group=G.descriptor,
        n=G.order,
        d=S.d,
        primes=[T.p for T in tables],
        seed=seed,
        valencies=list(v),
        multiplicities=m,
        frame_quotient=fq,
        parity="odd" if fq % 2 else "even",
        digests=[_digest(T) for T in tables],
        identities_hold=idents,
        consistent_across_primes=consistent,
    )


@dataclass
class SubschemeQuotientReport:
    group: str
    reports: list[QuotientReport]
    exact: QuotientReport | None

    @property
    def passed(self) -> bool:
        checks = self.reports + ([self.exact] if self.exact else [])
        return bool(checks) and all(r.passed for r in checks)

    @property
    def consistent(self) -> bool:
        cells = [sorted(map(len, r.row_cells)) for r in self.reports]
        return all(c == cells[0] for c in cells)

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "passed": self.passed,
            "consistent_across_primes": self.consistent,
            "modp": [r.to_dict() for r in self.reports],
            "exact": self.exact.to_dict() if self.exact else None,
        }


def pc_quotient_check(G: FiniteGroup, n_primes: int = 3, seed: int = 0) -> SubschemeQuotientReport:
    """Check that the PC scheme's eigenmatrix is an equitable quotient of the conjugacy scheme's.

    Runs over GF(p) for ``n_primes`` admissible primes; when the conjugacy
    scheme is itself integral, the exact rational check runs as well.
    """
    conj = conjugacy_classes(G)
    A = scheme_from_partition(G, conj)
    pc = pc_classes(G)
    B = scheme_from_partition(G, pc)
    cert = is_subscheme(B, A)
    EB = eigensystem_integral(B)
    reports = [equitable_quotient_check(T, EB, cert) for T in eigenmatrices_modp(G, n_primes, seed)]
    exact = None
    if conj.blocks == pc.blocks:
        exact = equitable_quotient_check(eigensystem_integral(A), EB, cert)
    return SubschemeQuotientReport(group=G.descriptor, reports=reports, exact=exact)
