"""Cayley graphs on a group and exhaustive checks of their spectral parity.

A connection set ``C`` (identity excluded) gives arcs ``(g, h)`` with
``h g^-1 in C``.  When ``C`` is a union of PC-classes the graph lies in the
integral conjugacy class scheme and its eigenvalues are the entries of
``P x`` (``x`` the indicator of the chosen classes) with multiplicities
``m``.  The harnesses below enumerate every non-empty choice of classes.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    CapExceeded,
    IdentityInConnectionSet,
    InapplicableOrder,
    SpectrumMismatch,
    TheoremViolation,
)
from .groups import FiniteGroup, conjugacy_classes, pc_classes, cyclic
from .schemes import scheme_from_partition
from .spectra import Eigensystem, eigensystem_integral

ORACLE_MAX_ORDER = 60
SIGNED_CLASS_CAP = 16
GODSIL_SPIGA_CAP = 20
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ConnectionSet:
    members: frozenset[int]
    inverse_closed: bool
    conjugacy_closed: bool

    @classmethod
    def build(cls, G: FiniteGroup, members: Iterable[int]) -> "ConnectionSet":
        mem = frozenset(int(x) for x in members)
        if 0 in mem:
            raise IdentityInConnectionSet("the identity cannot be in a connection set")
        if any(not 0 <= x < G.order for x in mem):
            raise ValueError("connection set element outside the group")
        inv_closed = all(int(G.inv[x]) in mem for x in mem)
        conj = conjugacy_classes(G)
        conj_closed = all(set(conj.blocks[conj.block_of[x]]) <= mem for x in mem)
        return cls(mem, inv_closed, conj_closed)

    @property
    def normal(self) -> bool:
        return self.conjugacy_closed


@dataclass(frozen=True)
class SignedConnectionSet:
    plus: ConnectionSet
    minus: ConnectionSet

    @classmethod
    def build(cls, G: FiniteGroup, plus: Iterable[int], minus: Iterable[int]) -> "SignedConnectionSet":
        cp, cm = ConnectionSet.build(G, plus), ConnectionSet.build(G, minus)
        if cp.members & cm.members:
            raise ValueError("positive and negative fibres overlap")
        if not (cp.inverse_closed and cm.inverse_closed):
            raise ValueError("both fibres of a signed graph must be inverse-closed")
        return cls(cp, cm)

    @property
    def normal(self) -> bool:
        return self.plus.conjugacy_closed and self.minus.conjugacy_closed


def cayley_adjacency(G: FiniteGroup, C) -> np.ndarray:
    """0/1 matrix with entry ``(g, h) = 1`` iff ``h g^-1`` lies in ``C``."""
    members = C.members if isinstance(C, ConnectionSet) else frozenset(int(x) for x in C)
    if 0 in members:
        raise IdentityInConnectionSet("the identity cannot be in a connection set")
    mask = np.zeros(G.order, dtype=np.int64)
    mask[list(members)] = 1
    return mask[G.mult[np.arange(G.order)[None, :], G.inv[:, None]]]


def signed_adjacency(G: FiniteGroup, C: SignedConnectionSet) -> np.ndarray:
    return cayley_adjacency(G, C.plus) - cayley_adjacency(G, C.minus)


def exact_spectrum(A) -> tuple[Counter, list[int]]:
    """Integer eigenvalues of ``A`` with multiplicity, plus the leftover factor."""
    roots, rest = linalg.integer_roots(linalg.char_poly(A))
    return Counter(roots), rest


def is_integral_matrix(A) -> bool:
    return len(exact_spectrum(A)[1]) == 1


def _batch_size(n: int) -> int:
    return max(1, (1 << 22) // max(1, n * n))


def exact_spectra(mats) -> list[tuple[Counter, list[int]]]:
    """:func:`exact_spectrum` for a stack of same-size integer matrices."""
    out = []
    for poly in linalg.char_poly_many(mats, chunk=_batch_size(np.shape(mats)[1])):
        roots, rest = linalg.integer_roots(poly)
        out.append((Counter(roots), rest))
    return out


# -- spectra through the scheme ------------------------------------------------------


@dataclass
class SpectrumReport:
    eigenvalues: list[tuple[int, int]]
    has_odd: bool
    source: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [list(e) for e in self.eigenvalues],
            "has_odd": self.has_odd,
            "source": self.source,
        }


def _spectrum_from_vector(E: Eigensystem, x: Sequence[int], source: dict) -> SpectrumReport:
    if len(x) != E.d + 1:
        raise ValueError(f"class vector must have {E.d + 1} entries")
    if x[0] != 0:
        raise IdentityInConnectionSet("class 0 is the identity and cannot be selected")
    vals = [sum(int(p) * int(c) for p, c in zip(row, x)) for row in E.P]
    tally: Counter = Counter()
    for val, mult in zip(vals, E.m):
        tally[val] += mult
    eig = sorted(tally.items(), key=lambda t: -t[0])
    return SpectrumReport(eig, any(v % 2 for v, _ in eig), source)


def _cross_check(E: Eigensystem, A: np.ndarray, rep: SpectrumReport):
    found, rest = exact_spectrum(A)
    if len(rest) > 1 or dict(found) != dict(rep.eigenvalues):
        raise SpectrumMismatch(
            f"scheme spectrum {rep.eigenvalues} disagrees with adjacency spectrum {sorted(found.items())}"
        )


def _member_set(E: Eigensystem, x) -> tuple[list[int], list[int]]:
    blocks = E.scheme.classes.blocks
    plus = [g for r, c in enumerate(x) if c > 0 for g in blocks[r]]
    minus = [g for r, c in enumerate(x) if c < 0 for g in blocks[r]]
    return plus, minus


def spectrum_via_scheme(E: Eigensystem, x: Sequence[int], cross_check: bool | None = None) -> SpectrumReport:
    """Spectrum of the Cayley graph on classes ``{r : x_r = 1}``, read from ``P x``.

    By default, groups of order at most 60 are cross-checked against the exact
    characteristic polynomial of the dense adjacency matrix.
    """
    if any(c not in (0, 1) for c in x):
        raise ValueError("class vector must be 0/1")
    rep = _spectrum_from_vector(E, x, {"classes": [r for r, c in enumerate(x) if c]})
    if cross_check is None:
        cross_check = E.scheme is not None and E.n <= ORACLE_MAX_ORDER
    if cross_check:
        plus, _ = _member_set(E, x)
        _cross_check(E, cayley_adjacency(E.scheme.group, plus), rep)
    return rep


def signed_spectrum_via_scheme(E: Eigensystem, x: Sequence[int], cross_check: bool | None = None) -> SpectrumReport:
    """Spectrum of the signed Cayley graph with ``C+`` / ``C-`` the classes where ``x`` is ``+1`` / ``-1``."""
    if any(c not in (-1, 0, 1) for c in x):
        raise ValueError("signed class vector must have entries in {-1, 0, 1}")
    rep = _spectrum_from_vector(
        E,
        x,
        {"plus": [r for r, c in enumerate(x) if c > 0], "minus": [r for r, c in enumerate(x) if c < 0]},
    )
    if cross_check is None:
        cross_check = E.scheme is not None and E.n <= ORACLE_MAX_ORDER
    if cross_check:
        plus, minus = _member_set(E, x)
        G = E.scheme.group
        _cross_check(E, cayley_adjacency(G, plus) - cayley_adjacency(G, minus), rep)
    return rep


# -- verification harnesses ------------------------------------------------------------


@dataclass
class VerificationReport:
    check: str
    group: str
    n: int
    status: str  # "pass" | "fail"
    classes: int
    valencies: list[int]
    subsets_checked: int
    subsets_passed: int
    counterexamples: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timing: bool = False) -> dict:
        doc = {
            "check": self.check,
            "group": self.group,
            "n": self.n,
            "status": self.status,
            "classes": self.classes,
            "valencies": self.valencies,
            "subsets_checked": self.subsets_checked,
            "subsets_passed": self.subsets_passed,
            "counterexamples": self.counterexamples,
            "details": self.details,
        }
        if timing:
            doc["elapsed_seconds"] = round(self.elapsed, 6)
        return doc

    def summary(self) -> str:
        return f"{self.check} {self.group}: {self.subsets_passed}/{self.subsets_checked} subsets pass"


def pc_eigensystem(G: FiniteGroup) -> Eigensystem:
    return eigensystem_integral(scheme_from_partition(G, pc_classes(G)))


def _vectors(k: int, signed: bool, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    if not signed:
        return (idx[:, None] >> np.arange(k)[None, :]) & 1
    digits = (idx[:, None] // (3 ** np.arange(k, dtype=np.int64))[None, :]) % 3
    return np.where(digits == 2, -1, digits)


def _parity_sweep(G: FiniteGroup, E: Eigensystem, signed: bool, check: str, strict: bool) -> VerificationReport:
    t0 = time.perf_counter()
    k = E.d
    P = np.array(E.P, dtype=np.int64)
    P2 = P[:, 1:] % 2
    detpar = linalg.det_parity(E.P)
    total = (3**k if signed else 2**k) - 1
    passed, bad, fast_ok = 0, [], True
    for start in range(1, total + 1, _CHUNK):
        X = _vectors(k, signed, start, min(total + 1, start + _CHUNK))
        vals = X @ P[:, 1:].T  # row i: eigenvalue on each eigenspace
        fast = (np.abs(X) @ P2.T) % 2  # signs vanish mod 2
        odd = (vals % 2 != 0).any(axis=1)
        if not np.array_equal(fast, vals % 2) or (detpar == "odd" and not fast.any(axis=1).all()):
            fast_ok = False
        passed += int(odd.sum())
        for i in np.flatnonzero(~odd)[:10]:
            x = [0] + [int(c) for c in X[i]]
            bad.append({"x": x, "spectrum": _spectrum_from_vector(E, x, {}).to_dict()["eigenvalues"]})
    rep = VerificationReport(
        check=check,
        group=G.descriptor,
        n=G.order,
        status="pass" if not bad and fast_ok else "fail",
        classes=k,
        valencies=list(E.v),
        subsets_checked=total,
        subsets_passed=passed,
        counterexamples=bad,
        details={"det_P": int(linalg.det(E.P)), "det_P_parity": detpar, "mod2_fast_path_consistent": fast_ok},
        elapsed=time.perf_counter() - t0,
    )
    if strict and not rep.passed:
        raise TheoremViolation(f"{check} fails for {G.descriptor}", payload=rep)
    return rep


def verify_odd_eigenvalue(G: FiniteGroup, E: Eigensystem | None = None, strict: bool = False) -> VerificationReport:
    """Every non-empty union of PC-classes of an odd-order group gives a graph with an odd eigenvalue.

    The mod-2 image ``P x (mod 2)`` is nonzero for every ``x != 0`` because
    ``det P`` is odd; both that and the exact spectra are checked.
    """
    if G.order % 2 == 0:
        raise InapplicableOrder(f"{G.descriptor or 'group'} has even order {G.order}")
    E = E or pc_eigensystem(G)
    return _parity_sweep(G, E, signed=False, check="verify-odd", strict=strict)


def verify_signed_corollary(
    G: FiniteGroup, E: Eigensystem | None = None, cap: int = SIGNED_CLASS_CAP, strict: bool = False
) -> VerificationReport:
    """Signed variant: every non-zero ``{0, +-1}`` class vector gives an odd eigenvalue."""
    if G.order % 2 == 0:
        raise InapplicableOrder(f"{G.descriptor or 'group'} has even order {G.order}")
    E = E or pc_eigensystem(G)
    if E.d > cap:
        raise CapExceeded(f"{E.d} PC-classes exceed the signed enumeration cap {cap}")
    return _parity_sweep(G, E, signed=True, check="verify-signed", strict=strict)


def verify_godsil_spiga(G: FiniteGroup, cap: int = GODSIL_SPIGA_CAP, strict: bool = False) -> VerificationReport:
    """A union of conjugacy classes gives an integral Cayley graph iff it is a union of PC-classes.

    Integrality is decided exactly from the characteristic polynomial of
    each dense adjacency matrix.
    """
    t0 = time.perf_counter()
    conj = conjugacy_classes(G)
    d = len(conj) - 1
    if d > cap:
        raise CapExceeded(f"{d} non-identity conjugacy classes exceed the cap {cap}")
    pc = pc_classes(G)
    cell_masks = {}
    for r, blk in enumerate(conj.blocks[1:], start=1):
        cell_masks[pc.block_of[blk[0]]] = cell_masks.get(pc.block_of[blk[0]], 0) | (1 << (r - 1))
    conj_block_of = np.asarray(conj.block_of)
    rel = conj_block_of[G.mult[np.arange(G.order)[None, :], G.inv[:, None]]]
    total = 2**d - 1
    agree, integral_count, bad = 0, 0, []
    step = _batch_size(G.order)
    for start in range(1, total + 1, step):
        masks = np.arange(start, min(total + 1, start + step), dtype=np.int64)
        sel = np.zeros((len(masks), d + 1), dtype=np.int64)
        sel[:, 1:] = (masks[:, None] >> np.arange(d)[None, :]) & 1
        spectra = exact_spectra(sel[:, rel])
        for mask, (_, rest) in zip(masks.tolist(), spectra):
            integral = len(rest) == 1
            pc_union = all((mask & c) in (0, c) for c in cell_masks.values())
            integral_count += integral
            if integral == pc_union:
                agree += 1
            elif len(bad) < 10:
                bad.append(
                    {
                        "classes": [r for r in range(1, d + 1) if mask >> (r - 1) & 1],
                        "integral": integral,
                        "pc_union": pc_union,
                    }
                )
    rep = VerificationReport(
        check="verify-gs",
        group=G.descriptor,
        n=G.order,
        status="pass" if agree == total else "fail",
        classes=d,
        valencies=conj.sizes(),
        subsets_checked=total,
        subsets_passed=agree,
        counterexamples=bad,
        details={"integral_unions": integral_count, "pc_classes": len(pc) - 1},
        elapsed=time.perf_counter() - t0,
    )
    if strict and not rep.passed:
        raise TheoremViolation(f"integrality characterization fails for {G.descriptor}", payload=rep)
    return rep


def oracle_agreement(E: Eigensystem) -> tuple[int, list[list[int]]]:
    """Compare scheme spectra with exact adjacency spectra for every class subset.

    Returns the number of subsets checked and those that disagree.
    """
    G = E.scheme.group
    blocks = E.scheme.classes.blocks
    mask_of = np.zeros(G.order, dtype=np.int64)
    for r, blk in enumerate(blocks):
        mask_of[list(blk)] = r
    rel = mask_of[G.mult[np.arange(G.order)[None, :], G.inv[:, None]]]
    total, bad = 2**E.d, []
    step = _batch_size(G.order)
    for start in range(0, total, step):
        masks = np.arange(start, min(total, start + step), dtype=np.int64)
        X = np.zeros((len(masks), E.d + 1), dtype=np.int64)
        X[:, 1:] = (masks[:, None] >> np.arange(E.d)[None, :]) & 1
        for x, (found, rest) in zip(X.tolist(), exact_spectra(X[:, rel])):
            rep = _spectrum_from_vector(E, x, {})
            if len(rest) > 1 or dict(found) != dict(rep.eigenvalues):
                bad.append(x)
    return total, bad


def even_order_demo() -> dict:
    """The 4-cycle: a normal integral Cayley graph of ``Z_4`` with no odd eigenvalue."""
    G = cyclic(4)
    C = ConnectionSet.build(G, [1, 3])
    A = cayley_adjacency(G, C)
    spec, rest = exact_spectrum(A)
    eigen = sorted(spec.elements(), reverse=True)
    return {
        "group": G.descriptor,
        "connection_set": sorted(C.members),
        "normal": C.normal,
        "inverse_closed": C.inverse_closed,
        "integral": len(rest) == 1,
        "spectrum": eigen,
        "has_odd": any(e % 2 for e in eigen),
    }
