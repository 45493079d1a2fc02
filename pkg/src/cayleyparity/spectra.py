"""Eigenmatrices of integral schemes, their identities and frame quotients,
and the equitable-quotient relation between a scheme and a subscheme.

Index convention: ``P[s][r]`` is the eigenvalue of class matrix ``A_r`` on
eigenspace ``s`` (rows are eigenspaces, columns are classes).  ``Q`` is
``n P^{-1}`` with rows indexed by classes.  Eigenspaces are ordered by
their ``P`` rows, lexicographically descending; the trivial eigenspace
(spanned by the all-ones vector, row equal to the valencies) comes first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg, modp
from .errors import FrameQuotientMismatch, NonIntegralScheme, NotEquitable, NotInteger
from .schemes import AssociationScheme, SubschemeCertificate, valencies

EIGEN_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class Eigensystem:
    scheme: AssociationScheme | None
    n: int
    P: tuple[tuple[int, ...], ...]
    Q: tuple[tuple[Fraction, ...], ...]
    v: tuple[int, ...]
    m: tuple[int, ...]
    spaces: tuple = field(default=(), repr=False)

    @property
    def d(self) -> int:
        return len(self.v) - 1


# -- integral eigensystem by common-eigenspace refinement ------------------------


def _neighbours(S: AssociationScheme, r: int) -> list[list[int]]:
    return [list(map(int, (S.relation[g] == r).nonzero()[0])) for g in range(S.n)]


def _apply(nb: list[list[int]], vec: Sequence[Fraction]) -> list[Fraction]:
    return [sum((vec[h] for h in row), Fraction(0)) for row in nb]


def _reduced(rows):
    R, piv = linalg.rref(rows)
    return R[: len(piv)], piv


def _split(nb, basis, pivots, r):
    """Split an invariant subspace by the integer eigenvalues of one class matrix."""
    images = [_apply(nb, b) for b in basis]
    dim = len(basis)
    # coordinates of A b_i in the reduced basis are read off at the pivots
    X = [[images[i][pivots[j]] for i in range(dim)] for j in range(dim)]
    for i in range(dim):
        recon = [Fraction(0)] * len(images[i])
        for j in range(dim):
            if X[j][i]:
                recon = [a + X[j][i] * b for a, b in zip(recon, basis[j])]
        if recon != images[i]:
            raise NonIntegralScheme(f"subspace not invariant under class {r}; input is not a scheme")
    if dim == 1:
        lam = X[0][0]
        if lam.denominator != 1:
            raise NonIntegralScheme(f"class {r} has eigenvalue {lam}")
        return [(int(lam), basis, pivots)]
    roots, rem = linalg.integer_roots(linalg.char_poly(X))
    if len(rem) > 1:
        raise NonIntegralScheme(f"class {r} has non-integer eigenvalues (leftover factor {rem})")
    pieces, total = [], 0
    for lam in sorted(set(roots)):
        shifted = [[X[i][j] - (lam if i == j else 0) for j in range(dim)] for i in range(dim)]
        ker = linalg.nullspace(shifted)
        total += len(ker)
        vecs = []
        for c in ker:
            vec = [Fraction(0)] * len(basis[0])
            for j in range(dim):
                if c[j]:
                    vec = [a + c[j] * b for a, b in zip(vec, basis[j])]
            vecs.append(vec)
        B, piv = _reduced(vecs)
        pieces.append((lam, B, piv))
    if total != dim:
        raise NonIntegralScheme(f"class {r} is not diagonalizable on a common eigenspace")
    return pieces


def eigensystem_integral(S: AssociationScheme, class_order: Sequence[int] | None = None) -> Eigensystem:
    """Full eigensystem of an integral scheme, computed exactly.

    Starting from the whole space, each class matrix splits every current
    subspace along its (integer) eigenvalues.  ``class_order`` permutes the
    processing order of classes ``1..d``; the result does not depend on it.
    """
    n, d = S.n, S.d
    order = list(range(1, d + 1)) if class_order is None else list(class_order)
    if sorted(order) != list(range(1, d + 1)):
        raise ValueError("class_order must be a permutation of 1..d")
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    spaces = [(eye, list(range(n)), {0: 1})]
    for r in order:
        nb = _neighbours(S, r)
        refined = []
        for basis, pivots, eig in spaces:
            for lam, B, piv in _split(nb, basis, pivots, r):
                refined.append((B, piv, {**eig, r: lam}))
        spaces = refined
    if len(spaces) != d + 1:
        raise NonIntegralScheme(f"found {len(spaces)} common eigenspaces, expected {d + 1}")

    entries = []
    for basis, _, eig in spaces:
        row = tuple(eig[r] for r in range(d + 1))
        entries.append((row, tuple(tuple(x for x in b) for b in basis)))
    entries.sort(key=lambda e: e[0], reverse=True)
    P = tuple(row for row, _ in entries)
    v = tuple(valencies(S))
    if P[0] != v:
        raise NonIntegralScheme("trivial eigenspace does not lead the ordering")
    m = tuple(len(b) for _, b in entries)
    Q = dual_eigenmatrix(P, n)
    return Eigensystem(scheme=S, n=n, P=P, Q=Q, v=v, m=m, spaces=tuple(b for _, b in entries))


def dual_eigenmatrix(P, n: int) -> tuple[tuple[Fraction, ...], ...]:
    """``Q = n P^{-1}``; raises Singular for a singular ``P``."""
    inv = linalg.inverse(P)
    return tuple(tuple(n * x for x in row) for row in inv)


# -- identities and frame quotient ------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    max_deviation: Fraction
    witness: tuple[int, int] | None


@dataclass
class IdentityReport:
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "max_deviation": str(c.max_deviation),
                    "witness": list(c.witness) if c.witness else None,
                }
                for c in self.checks
            ],
        }


def _compare(name, lhs, rhs) -> IdentityCheck:
    worst, where = Fraction(0), None
    for i, (a_row, b_row) in enumerate(zip(lhs, rhs)):
        for j, (a, b) in enumerate(zip(a_row, b_row)):
            dev = abs(Fraction(a) - Fraction(b))
            if dev > worst:
                worst, where = dev, (i, j)
    return IdentityCheck(name, worst == 0, worst, where)


def verify_identities(E: Eigensystem) -> IdentityReport:
    """Exact checks of ``PQ = nI``, ``D_m P = Q^T D_v`` and ``P^T D_m P = n D_v``."""
    n, D = E.n, E.d + 1
    P, Q = [list(r) for r in E.P], [list(r) for r in E.Q]
    nI = [[n * int(i == j) for j in range(D)] for i in range(D)]
    DmP = [[E.m[s] * P[s][r] for r in range(D)] for s in range(D)]
    QtDv = [[Q[r][s] * E.v[r] for r in range(D)] for s in range(D)]
    PtDmP = linalg.matmul(linalg.transpose(P), DmP)
    nDv = [[n * E.v[i] * int(i == j) for j in range(D)] for i in range(D)]
    return IdentityReport(
        [
            _compare("PQ = nI", linalg.matmul(P, Q), nI),
            _compare("D_m P = Q^T D_v", DmP, QtDv),
            _compare("P^T D_m P = n D_v", PtDmP, nDv),
        ]
    )


def frame_quotient_value(n: int, v: Sequence[int], m: Sequence[int]) -> Fraction:
    """``n^(d+1) * prod(v_j / m_j)`` as an exact rational."""
    fq = Fraction(n ** len(v))
    for vj, mj in zip(v, m):
        fq *= Fraction(vj, mj)
    return fq


def frame_quotient(E: Eigensystem) -> int:
    fq = frame_quotient_value(E.n, E.v, E.m)
    if fq.denominator != 1:
        raise NotInteger(f"frame quotient {fq} is not an integer")
    PtP = linalg.matmul(linalg.transpose(E.P), E.P)
    dt = linalg.det(PtP)
    if dt != fq:
        raise FrameQuotientMismatch(f"det(P^T P) = {dt} but n^(d+1) prod v/m = {fq}")
    return int(fq)


def eigensystem_to_dict(E: Eigensystem) -> dict:
    return {
        "format": "cayleyparity.eigensystem",
        "version": EIGEN_FORMAT_VERSION,
        "group": E.scheme.group.descriptor if E.scheme is not None else "",
        "n": E.n,
        "d": E.d,
        "P": [list(r) for r in E.P],
        "Q": [[[x.numerator, x.denominator] for x in r] for r in E.Q],
        "v": list(E.v),
        "m": list(E.m),
        "det_P": int(linalg.det(E.P)),
        "frame_quotient": frame_quotient(E),
    }


# -- equitable quotients ------------------------------------------------------------


@dataclass
class QuotientReport:
    field: str  # "Q" or "GF(p)"
    row_cells: list[list[int]]  # D_s: rows of the larger eigenmatrix fused into row s
    block_row_sums: dict  # (r, s) -> list of row sums, one per row in D_s
    equitable: bool
    multiplicities_consistent: bool | None
    alignment: list[int] | None  # B-class a is paired with B-eigenspace alignment[a]
    divides: bool | None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.equitable and self.divides is True and self.multiplicities_consistent is not False

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "passed": self.passed,
            "equitable": self.equitable,
            "row_cells": self.row_cells,
            "multiplicities_consistent": self.multiplicities_consistent,
            "alignment": self.alignment,
            "char_poly_divides": self.divides,
            "note": self.note,
        }


def _align(col_cells, row_cells):
    """Pair each column cell with a row cell of equal size, trivial cells together."""
    k = len(col_cells)
    cols = sorted(range(k), key=lambda a: (a != 0, len(col_cells[a]), a))
    rows = sorted(range(k), key=lambda s: (s != 0, len(row_cells[s]), s))
    if [len(col_cells[a]) for a in cols] != [len(row_cells[s]) for s in rows]:
        return None
    tau = [0] * k
    for a, s in zip(cols, rows):
        tau[a] = s
    return tau


def equitable_quotient_check(A_sys, B_sys: Eigensystem, cert: SubschemeCertificate) -> QuotientReport:
    """Verify that ``B_sys.P`` is an equitable quotient of the larger eigenmatrix.

    ``A_sys`` is either an exact :class:`Eigensystem` or a
    :class:`~cayleyparity.classalg.ModPEigenmatrix`; in the latter case all
    arithmetic is in GF(p).  Rows of the larger eigenmatrix are assigned to
    the subscheme eigenspace whose eigenvalues their fused row sums
    reproduce.  For the characteristic-polynomial check, rows and columns are
    ordered so that row cell ``D_tau(a)`` sits against column cell ``C_a``
    (cells of equal size), which makes the blocked matrix square-partitioned.
    """
    p = getattr(A_sys, "p", None)
    big = [list(r) for r in (A_sys.Pm if p is not None else A_sys.P)]
    red = (lambda x: int(x) % p) if p is not None else (lambda x: x)
    small = [[red(x) for x in row] for row in B_sys.P]
    cells = [list(c) for c in cert.cells]
    k, D = len(cells), len(big)
    if len(small) != k:
        raise ValueError("certificate and subscheme eigenmatrix disagree on the class count")
    if len({tuple(r) for r in small}) != k:
        raise ValueError("subscheme eigenvalue rows coincide in this field; choose a larger prime")

    lookup = {tuple(r): s for s, r in enumerate(small)}
    row_cells: list[list[int]] = [[] for _ in range(k)]
    for j, row in enumerate(big):
        fused = tuple(red(sum(row[i] for i in cell)) for cell in cells)
        s = lookup.get(fused)
        if s is None:
            raise NotEquitable(
                f"fused row sums of eigenspace {j} match no eigenvalue row of the subscheme",
                witness={"row": j, "fused_row_sums": [str(x) for x in fused]},
            )
        row_cells[s].append(j)

    blocks = {}
    equitable = all(row_cells)
    for s, rows in enumerate(row_cells):
        for r, cell in enumerate(cells):
            sums = [red(sum(big[j][i] for i in cell)) for j in rows]
            blocks[(r, s)] = sums
            if len(set(sums)) > 1:
                a, b = sorted(set(sums))[:2]
                raise NotEquitable(
                    f"block ({r},{s}) has row sums {a} and {b}",
                    witness={"block": [r, s], "row_sums": [str(a), str(b)]},
                )
            if sums and sums[0] != small[s][r]:
                equitable = False

    mcons = None
    m_big = getattr(A_sys, "m", None)
    if m_big is not None:
        mcons = all(sum(m_big[j] for j in rows) == B_sys.m[s] for s, rows in enumerate(row_cells))

    field_name = "Q" if p is None else f"GF({p})"
    tau = _align(cells, row_cells) if equitable else None
    if tau is None:
        note = "row and column cell sizes cannot be paired" if equitable else "some subscheme eigenspace received no rows"
        return QuotientReport(field_name, row_cells, blocks, equitable, mcons, None, None, note)

    col_order = [i for a in range(k) for i in cells[a]]
    row_order = [j for a in range(k) for j in row_cells[tau[a]]]
    M = [[big[j][i] for i in col_order] for j in row_order]
    N = [[small[tau[a]][b] for b in range(k)] for a in range(k)]
    if p is None:
        divides = linalg.poly_divides(linalg.char_poly(N), linalg.char_poly(M))
    else:
        cM = modp.charpoly_modp(np.array(M, dtype=np.int64), p)
        cN = modp.charpoly_modp(np.array(N, dtype=np.int64), p)
        divides = modp.poly_divides_modp(cN, cM, p)
    return QuotientReport(field_name, row_cells, blocks, equitable, mcons, tau, divides)
