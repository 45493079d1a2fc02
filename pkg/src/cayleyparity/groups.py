"""Finite groups given by multiplication tables, and their element partitions.

Elements are the integers ``0..n-1`` and the identity is always ``0``.  A
group can be built from a raw Cayley table, from a family descriptor such as
``"semidirect(7,3,2)"``, or by closing a set of permutations.

Three partitions of the elements drive everything downstream:

* conjugacy classes (orbits of ``x -> g x g^-1``),
* power classes (``g ~ h`` iff ``<g> == <h>``),
* PC-classes, the join of the two.

Blocks are ordered by ``(size, min element)``, so block 0 is ``{0}``.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .errors import BadAction, BadDescriptor, NotAGroup, Overflow

DEFAULT_CAP = 2048


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group on ``0..n-1`` with identity ``0``."""

    mult: np.ndarray
    inv: np.ndarray
    elem_order: np.ndarray
    descriptor: str = ""

    @property
    def order(self) -> int:
        return int(self.mult.shape[0])

    n = order

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_abelian(self) -> bool:
        return bool((self.mult == self.mult.T).all())

    def power(self, g: int, k: int) -> int:
        k %= int(self.elem_order[g])
        x = 0
        for _ in range(k):
            x = int(self.mult[x, g])
        return x

    def __repr__(self):
        label = self.descriptor or "table"
        return f"FiniteGroup({label}, n={self.order})"


def _element_orders(mult: np.ndarray) -> np.ndarray:
    n = mult.shape[0]
    ar = np.arange(n)
    order = np.zeros(n, dtype=np.int64)
    cur = ar.copy()
    for j in range(1, n + 1):
        hit = (cur == 0) & (order == 0)
        order[hit] = j
        if (order > 0).all():
            break
        cur = mult[cur, ar]
    return order


def _inverses(mult: np.ndarray) -> np.ndarray:
    return np.argmax(mult == 0, axis=1)


def _from_trusted_table(mult, descriptor=""):
    mult = np.asarray(mult, dtype=np.int64)
    return FiniteGroup(
        mult=_frozen(mult),
        inv=_frozen(_inverses(mult)),
        elem_order=_frozen(_element_orders(mult)),
        descriptor=descriptor,
    )


def _first_associativity_failure(mult: np.ndarray):
    n = mult.shape[0]
    for a in range(n):
        # left[b, c] = (a b) c ; right[b, c] = a (b c)
        left = mult[mult[a]]
        right = mult[a][mult]
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def group_from_table(table, descriptor: str = "") -> FiniteGroup:
    """Validate a Cayley table and return the group, identity relabelled to 0.

    Raises :class:`NotAGroup` naming the first failed axiom.
    """
    try:
        mult = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotAGroup(f"table is not an integer grid: {exc}") from None
    if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
        raise NotAGroup(f"table must be a non-empty square grid, got shape {mult.shape}")
    n = mult.shape[0]
    if mult.min() < 0 or mult.max() >= n:
        raise NotAGroup(f"table entries must lie in 0..{n - 1}")

    ar = np.arange(n)
    ids = [e for e in range(n) if (mult[e] == ar).all() and (mult[:, e] == ar).all()]
    if not ids:
        raise NotAGroup("no identity element")
    e = ids[0]

    # swap labels e <-> 0 (an involution, so it is its own inverse)
    sigma = ar.copy()
    sigma[[0, e]] = sigma[[e, 0]]
    relabelled = np.empty_like(mult)
    relabelled[np.ix_(sigma, sigma)] = sigma[mult]
    mult = relabelled

    for g in range(n):
        hs = np.flatnonzero(mult[g] == 0)
        if len(hs) == 0 or mult[hs[0], g] != 0:
            raise NotAGroup(f"element {int(sigma[g])} has no inverse")

    bad = _first_associativity_failure(mult)
    if bad is not None:
        a, b, c = (int(sigma[x]) for x in bad)
        raise NotAGroup(f"associativity fails for ({a}, {b}, {c})")
    return _from_trusted_table(mult, descriptor)


# -- builtin families --------------------------------------------------------


def _check_cap(n, cap):
    if n > cap:
        raise Overflow(f"group order {n} exceeds cap {cap}")


def cyclic(n: int, cap: int = DEFAULT_CAP) -> FiniteGroup:
    if n < 1:
        raise BadDescriptor("cyclic(n) needs n >= 1")
    _check_cap(n, cap)
    ar = np.arange(n)
    return _from_trusted_table((ar[:, None] + ar[None, :]) % n, f"cyclic({n})")


def direct_product(*factors: FiniteGroup, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Direct product; element tuples numbered lexicographically (first factor most significant)."""
    if not factors:
        raise BadDescriptor("direct_product needs at least one factor")
    sizes = [G.order for G in factors]
    n = math.prod(sizes)
    _check_cap(n, cap)
    ar = np.arange(n)
    mult = np.zeros((n, n), dtype=np.int64)
    stride = n
    for G, size in zip(factors, sizes):
        stride //= size
        comp = (ar // stride) % size
        mult += G.mult[comp[:, None], comp[None, :]] * stride
    desc = "direct_product(" + ",".join(G.descriptor for G in factors) + ")"
    return _from_trusted_table(mult, desc)


def semidirect(m: int, k: int, a: int, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """``Z_m`` semidirect ``Z_k`` with ``h x h^-1 = x^a``.

    Element ``(x, y)`` means ``x h^y`` and has index ``x*k + y``.
    """
    if m < 1 or k < 1:
        raise BadDescriptor("semidirect(m,k,a) needs m, k >= 1")
    if pow(a, k, m) != 1 % m:
        raise BadAction(f"{a}^{k} is not 1 mod {m}")
    n = m * k
    _check_cap(n, cap)
    ar = np.arange(n)
    x, y = ar // k, ar % k
    apow = np.array([pow(a, j, m) for j in range(k)], dtype=np.int64)
    xs = (x[:, None] + apow[y][:, None] * x[None, :]) % m
    ys = (y[:, None] + y[None, :]) % k
    return _from_trusted_table(xs * k + ys, f"semidirect({m},{k},{a % m if m > 1 else a})")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def heisenberg(p: int, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over GF(p); ``(a, b, c)`` has index ``a p^2 + b p + c``."""
    if not _is_prime(p):
        raise BadDescriptor(f"heisenberg(p) needs a prime, got {p}")
    n = p**3
    _check_cap(n, cap)
    ar = np.arange(n)
    a, b, c = ar // (p * p), (ar // p) % p, ar % p
    na = (a[:, None] + a[None, :]) % p
    nb = (b[:, None] + b[None, :]) % p
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    return _from_trusted_table(na * p * p + nb * p + nc, f"heisenberg({p})")


def parse_descriptor(text: str):
    """Parse a family descriptor into a nested ``(name, args)`` tree."""
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise BadDescriptor(f"cannot parse descriptor {text!r}: {exc.msg}") from None

    def walk(nd):
        if isinstance(nd, ast.Constant) and isinstance(nd.value, int):
            return nd.value
        if isinstance(nd, ast.UnaryOp) and isinstance(nd.op, ast.USub):
            return -walk(nd.operand)
        if isinstance(nd, ast.Call) and isinstance(nd.func, ast.Name) and not nd.keywords:
            return (nd.func.id, tuple(walk(a) for a in nd.args))
        raise BadDescriptor(f"unsupported token in descriptor {text!r}")

    return walk(node)


def _cyclic_arg(node, what):
    if isinstance(node, int):
        return node
    if isinstance(node, tuple) and node[0] == "cyclic" and len(node[1]) == 1:
        return node[1][0]
    raise BadDescriptor(f"{what} must be an integer or cyclic(n)")


def group_builtin(spec, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Build a group from a family descriptor (string or parsed tree).

    Families: ``cyclic(n)``, ``direct_product(G, H, ...)``,
    ``semidirect(m, k, a)`` (also ``semidirect(cyclic(m), cyclic(k), a)``)
    and ``heisenberg(p)``.
    """
    node = parse_descriptor(spec) if isinstance(spec, str) else spec
    if not isinstance(node, tuple):
        raise BadDescriptor(f"not a group descriptor: {spec!r}")
    name, args = node
    if name == "cyclic" and len(args) == 1 and isinstance(args[0], int):
        return cyclic(args[0], cap)
    if name == "direct_product" and args:
        # cap applies to the product; factors are at most as large
        return direct_product(*(group_builtin(a, cap) for a in args), cap=cap)
    if name == "semidirect" and len(args) == 3 and isinstance(args[2], int):
        m = _cyclic_arg(args[0], "normal factor")
        k = _cyclic_arg(args[1], "acting factor")
        return semidirect(m, k, args[2], cap)
    if name == "heisenberg" and len(args) == 1 and isinstance(args[0], int):
        return heisenberg(args[0], cap)
    raise BadDescriptor(f"unknown or malformed family: {spec!r}")


def group_from_permutations(
    generators: Sequence[Sequence[int]],
    degree: int | None = None,
    cap: int = DEFAULT_CAP,
) -> FiniteGroup:
    """Close permutations (lists of 0-indexed images) under composition.

    Elements are numbered in breadth-first order from the identity;
    the product ``g*h`` is the composite ``x -> g(h(x))``.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise NotAGroup(f"generator {list(g)} is not a permutation of 0..{degree - 1}")

    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise Overflow(f"permutation group exceeds cap {cap}")

    perms = np.array(elements, dtype=np.int64).reshape(len(elements), degree)
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        composed = perms[i][perms]  # row j: x -> p_i(p_j(x))
        mult[i] = [index[tuple(row)] for row in composed.tolist()]
    return _from_trusted_table(mult, "permutations")


# -- partitions --------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty blocks covering ``0..n-1``."""

    n: int
    blocks: tuple[tuple[int, ...], ...]
    block_of: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        bl = tuple(tuple(sorted(int(x) for x in b)) for b in blocks)
        if n is None:
            n = sum(len(b) for b in bl)
        owner = [-1] * n
        for i, b in enumerate(bl):
            if not b:
                raise ValueError("empty block")
            for x in b:
                if not 0 <= x < n:
                    raise ValueError(f"element {x} outside 0..{n - 1}")
                if owner[x] != -1:
                    raise ValueError(f"element {x} lies in two blocks")
                owner[x] = i
        if -1 in owner:
            raise ValueError(f"element {owner.index(-1)} is not covered")
        return cls(n=n, blocks=bl, block_of=tuple(owner))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        """Canonical partition grouping equal labels, blocks ordered by (size, min)."""
        groups: dict[int, list[int]] = {}
        for x, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(x)
        blocks = sorted(groups.values(), key=lambda b: (len(b), b[0]))
        return cls.from_blocks(blocks, len(labels))

    def canonical(self) -> "Partition":
        return Partition.from_labels(self.block_of)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def __len__(self):
        return len(self.blocks)

    def refines(self, other: "Partition") -> bool:
        """True if every block of ``self`` lies inside one block of ``other``."""
        return all(len({other.block_of[x] for x in b}) == 1 for b in self.blocks)


def conjugacy_classes(G: FiniteGroup) -> Partition:
    labels = np.full(G.order, -1, dtype=np.int64)
    for x in range(G.order):
        if labels[x] < 0:
            labels[G.mult[G.mult[:, x], G.inv]] = x
    return Partition.from_labels(labels)


def power_classes(G: FiniteGroup) -> Partition:
    labels = np.full(G.order, -1, dtype=np.int64)
    for g in range(G.order):
        if labels[g] >= 0:
            continue
        o = int(G.elem_order[g])
        x = 0
        for j in range(o):
            if math.gcd(j, o) == 1:
                labels[x] = g
            x = int(G.mult[x, g])
    return Partition.from_labels(labels)


def join(a: Partition, b: Partition) -> Partition:
    """Finest common coarsening of two partitions of the same set."""
    if a.n != b.n:
        raise ValueError("partitions of different sets")
    ds = DisjointSet(range(a.n))
    for part in (a, b):
        for blk in part.blocks:
            for x in blk[1:]:
                ds.merge(blk[0], x)
    return Partition.from_labels([ds[x] for x in range(a.n)])


def pc_classes(G: FiniteGroup) -> Partition:
    conj, power = conjugacy_classes(G), power_classes(G)
    pc = join(conj, power)
    # commutation of the two relations is a claim, not an assumption
    assert conj.refines(pc) and power.refines(pc)
    assert pc.blocks[0] == (0,)
    return pc


def describe(G: FiniteGroup) -> dict:
    from .classalg import exponent

    return {
        "descriptor": G.descriptor,
        "order": G.order,
        "abelian": G.is_abelian,
        "exponent": exponent(G),
        "element_orders": [int(o) for o in G.elem_order],
    }
