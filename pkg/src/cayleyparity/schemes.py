"""Association schemes on a group, induced by partitions of its elements.

A partition ``B_0 = {e}, B_1, ..., B_d`` of ``G`` gives relations
``A_r = {(g, h) : h g^-1 in B_r}``.  The scheme is stored as the single
class-valued table ``relation[g, h] = r`` rather than ``d + 1`` dense 0/1
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotInverseCompatible, NotSubscheme
from .groups import FiniteGroup, Partition

SCHEME_FORMAT_VERSION = 1

# beyond this order the product check uses translation invariance
FULL_PRODUCT_CHECK_LIMIT = 128


@dataclass(frozen=True, eq=False)
class AssociationScheme:
    group: FiniteGroup
    classes: Partition
    relation: np.ndarray = field(repr=False)
    transpose_map: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.classes.n

    @property
    def d(self) -> int:
        return len(self.classes) - 1

    @property
    def is_symmetric(self) -> bool:
        return all(t == r for r, t in enumerate(self.transpose_map))

    def class_matrix(self, r: int) -> np.ndarray:
        return (self.relation == r).astype(np.int64)


@dataclass(frozen=True)
class IntersectionNumbers:
    """``p[r, s, t]``: entry of ``A_r A_s`` at any pair of class ``t``."""

    p: np.ndarray

    def __getitem__(self, idx):
        return self.p[idx]

    def intersection_matrix(self, r: int) -> np.ndarray:
        """``L_r[s, t] = p[r, s, t]``."""
        return self.p[r]


@dataclass
class AxiomResult:
    axiom: int
    name: str
    passed: bool
    witness: dict | None = None


@dataclass
class AxiomReport:
    results: list[AxiomResult]
    intersection: IntersectionNumbers | None
    method: str

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[int]:
        return [r.axiom for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "method": self.method,
            "axioms": [
                {"axiom": r.axiom, "name": r.name, "passed": r.passed, "witness": r.witness}
                for r in self.results
            ],
        }


@dataclass(frozen=True)
class SubschemeCertificate:
    """``cells[r]`` lists the classes of the larger scheme summing to ``B_r``."""

    cells: tuple[tuple[int, ...], ...]
    cell_of: tuple[int, ...]


def scheme_from_partition(G: FiniteGroup, part: Partition) -> AssociationScheme:
    if part.n != G.order:
        raise ValueError(f"partition of {part.n} points used for a group of order {G.order}")
    if part.blocks[0] != (0,):
        raise ValueError("block 0 of the partition must be {identity}")
    block_of = np.asarray(part.block_of, dtype=np.int64)
    tmap = []
    for r, blk in enumerate(part.blocks):
        inv_blk = sorted(int(G.inv[x]) for x in blk)
        t = part.block_of[inv_blk[0]]
        if tuple(inv_blk) != part.blocks[t]:
            raise NotInverseCompatible(
                f"inverse of block {r} {list(blk)} is {inv_blk}, which is not a block"
            )
        tmap.append(t)
    # relation[g, h] = class of h g^-1
    rel = block_of[G.mult[np.arange(G.order)[None, :], G.inv[:, None]]]
    rel.flags.writeable = False
    return AssociationScheme(group=G, classes=part, relation=rel, transpose_map=tuple(tmap))


def valencies(S: AssociationScheme) -> list[int]:
    return S.classes.sizes()


def _product_counts(rel: np.ndarray, D: int, g: int) -> np.ndarray:
    """``out[r*D + s, h]`` = number of ``k`` with ``rel[g,k] = r`` and ``rel[k,h] = s``."""
    n = rel.shape[0]
    idx = rel[g][:, None] * D + rel  # indexed (k, h)
    flat = idx * n + np.arange(n)[None, :]
    return np.bincount(flat.ravel(), minlength=D * D * n).reshape(D * D, n)


def _pair(D, rs):
    return int(rs // D), int(rs % D)


def verify_scheme_axioms(S: AssociationScheme, full: bool | None = None) -> AxiomReport:
    """Check the four scheme axioms on the relation table.

    Axiom (4) is checked by counting, for every pair ``(g, h)``, the walks
    ``g -> k -> h`` of each class pair ``(r, s)`` and confirming the count
    depends only on the class of ``(g, h)``; the counts are the
    intersection numbers.  With ``full=False`` only rows ``g = e`` are
    counted, which suffices because ``relation[ga, ha] = relation[g, h]``.
    """
    rel = S.relation
    n, D = S.n, S.d + 1
    if full is None:
        full = n <= FULL_PRODUCT_CHECK_LIMIT
    results = []

    diag = np.eye(n, dtype=bool)
    bad = np.argwhere((rel == 0) != diag)
    results.append(
        AxiomResult(
            1,
            "A_0 = I and the A_r sum to J",
            not len(bad),
            None if not len(bad) else {"pair": [int(bad[0][0]), int(bad[0][1])]},
        )
    )

    tmap = np.asarray(S.transpose_map)
    bad = np.argwhere(rel.T != tmap[rel])
    results.append(
        AxiomResult(
            2,
            "transpose closure",
            not len(bad),
            None if not len(bad) else {"pair": [int(bad[0][0]), int(bad[0][1])]},
        )
    )

    base = _product_counts(rel, D, 0)
    reps = [blk[0] for blk in S.classes.blocks]
    ptab = base[:, reps]  # (D*D, D), provisional p[r,s,t]
    span_witness = comm_witness = None
    rows = range(n) if full else [0]
    for g in rows:
        cnt = base if g == 0 else _product_counts(rel, D, g)
        if span_witness is None:
            mism = np.argwhere(cnt != ptab[:, rel[g]])
            if len(mism):
                rs, h = mism[0]
                r, s = _pair(D, rs)
                t = int(rel[g, h])
                span_witness = {
                    "r": r,
                    "s": s,
                    "pair": [g, int(h)],
                    "class": t,
                    "count": int(cnt[rs, h]),
                    "count_at_representative": int(ptab[rs, t]),
                }
        if comm_witness is None:
            c3 = cnt.reshape(D, D, n)
            mism = np.argwhere(c3 != c3.transpose(1, 0, 2))
            if len(mism):
                r, s, h = (int(x) for x in mism[0])
                comm_witness = {"r": r, "s": s, "pair": [g, h]}
        if span_witness and comm_witness:
            break
    results.append(AxiomResult(3, "A_r A_s = A_s A_r", comm_witness is None, comm_witness))
    results.append(AxiomResult(4, "A_r A_s in the span", span_witness is None, span_witness))

    inter = None
    if span_witness is None:
        inter = IntersectionNumbers(p=ptab.reshape(D, D, D).copy())
    return AxiomReport(results=results, intersection=inter, method="full" if full else "translation-reduced")


def is_subscheme(B: AssociationScheme, A: AssociationScheme) -> SubschemeCertificate:
    """Certificate that every ``B_r`` is a sum of ``A_j``; raises NotSubscheme otherwise."""
    if B.n != A.n:
        raise NotSubscheme(f"schemes on {B.n} and {A.n} vertices", witness=None)
    cell_of = []
    for j in range(A.d + 1):
        mask = A.relation == j
        found = np.unique(B.relation[mask])
        if len(found) != 1:
            pairs = np.argwhere(mask & (B.relation != found[0]))
            g, h = (int(x) for x in pairs[0])
            raise NotSubscheme(
                f"class {j} of the larger scheme meets classes {found.tolist()} of the smaller",
                witness={"pair": [g, h], "a_class": j, "b_classes": found.tolist()},
            )
        cell_of.append(int(found[0]))
    cells = tuple(tuple(j for j, c in enumerate(cell_of) if c == r) for r in range(B.d + 1))
    if any(not c for c in cells) or cells[0] != (0,):
        raise NotSubscheme("cells do not form a partition with C_0 = {0}", witness={"cells": cells})
    return SubschemeCertificate(cells=cells, cell_of=tuple(cell_of))


def scheme_to_dict(S: AssociationScheme, include_relation: bool = False) -> dict:
    doc = {
        "format": "cayleyparity.scheme",
        "version": SCHEME_FORMAT_VERSION,
        "group": S.group.descriptor,
        "n": S.n,
        "d": S.d,
        "valencies": valencies(S),
        "transpose_map": list(S.transpose_map),
        "classes": [list(b) for b in S.classes.blocks],
    }
    if include_relation:
        doc["relation"] = S.relation.tolist()
    return doc
