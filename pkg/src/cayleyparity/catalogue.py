"""Builtin group catalogue and the group file format.

The catalogue lists, for each order, every abelian group (one per
invariant-factor decomposition) and the non-abelian groups reachable by the
builtin families: ``semidirect(m,k,a)`` for each non-trivial cyclic subgroup
of units mod ``m`` of order dividing ``k`` (smallest generator), and
``heisenberg(p)`` at ``p^3``.  For odd orders below 28 that is every group
up to isomorphism; above that it is a sample of the families.

Group files are JSON documents::

    {"format": "cayleyparity.group", "version": 1, "table": [[...], ...]}
    {"format": "cayleyparity.group", "version": 1, "permutation_generators": [[...], ...]}
    {"format": "cayleyparity.group", "version": 1, "builtin": "semidirect(7,3,2)"}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from sympy import factorint

from .errors import InputError
from .groups import DEFAULT_CAP, FiniteGroup, group_builtin, group_from_permutations, group_from_table

GROUP_FORMAT = "cayleyparity.group"
GROUP_FORMAT_VERSION = 1
EXHAUSTIVE_ODD_ORDERS = (1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27)


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def abelian_descriptors(n: int) -> list[str]:
    """One descriptor per abelian group of order ``n``, as invariant factors."""
    if n == 1:
        return ["cyclic(1)"]
    primes = sorted(factorint(n).items())
    combos = [[]]
    for p, e in primes:
        combos = [c + [(p, lam)] for c in combos for lam in _partitions(e)]
    out = []
    for combo in combos:
        length = max(len(lam) for _, lam in combo)
        factors = [1] * length
        for p, lam in combo:
            for i, part in enumerate(lam):
                factors[i] *= p**part
        if len(factors) == 1:
            out.append(f"cyclic({factors[0]})")
        else:
            out.append("direct_product(" + ",".join(f"cyclic({f})" for f in factors) + ")")
    return out


def _mult_order(a: int, m: int) -> int:
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


def nonabelian_descriptors(n: int) -> list[str]:
    out = []
    for m in range(3, n):
        if n % m:
            continue
        k = n // m
        if k < 2:
            continue
        seen = set()
        for a in range(2, m):
            if math.gcd(a, m) != 1:
                continue
            j = _mult_order(a, m)
            if j == 1 or k % j:
                continue
            sub = frozenset(pow(a, i, m) for i in range(j))
            if sub in seen:
                continue
            seen.add(sub)
            out.append(f"semidirect({m},{k},{a})")
    root = round(n ** (1 / 3))
    for p in (root - 1, root, root + 1):
        if p >= 2 and p**3 == n and all(p % q for q in range(2, p)):
            out.append(f"heisenberg({p})")
    return out


def enumerate_builtin_groups(order_range, odd_only: bool = False) -> list[str]:
    lo, hi = order_range
    out = []
    for n in range(lo, hi + 1):
        if odd_only and n % 2 == 0:
            continue
        out.extend(abelian_descriptors(n))
        out.extend(nonabelian_descriptors(n))
    return out


def odd_order_suite(max_order: int = 27) -> list[str]:
    """Every group of odd order ``3..max_order`` reachable by the catalogue."""
    return enumerate_builtin_groups((3, max_order), odd_only=True)


def parse_order_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise InputError(f"order range must look like 3..45, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise InputError(f"empty or invalid order range {text!r}")
    return lo, hi


def group_from_document(doc: dict, cap: int = DEFAULT_CAP) -> FiniteGroup:
    if not isinstance(doc, dict):
        raise InputError("group document must be a JSON object")
    if doc.get("format", GROUP_FORMAT) != GROUP_FORMAT:
        raise InputError(f"field 'format': expected {GROUP_FORMAT!r}")
    if doc.get("version", GROUP_FORMAT_VERSION) != GROUP_FORMAT_VERSION:
        raise InputError(f"field 'version': unsupported version {doc.get('version')!r}")
    keys = [k for k in ("table", "permutation_generators", "builtin") if k in doc]
    if len(keys) != 1:
        raise InputError("exactly one of 'table', 'permutation_generators', 'builtin' is required")
    key = keys[0]
    if key == "table":
        G = group_from_table(doc["table"], descriptor=doc.get("name", "table"))
        if G.order > cap:
            raise InputError(f"field 'table': order {G.order} exceeds cap {cap}")
        return G
    if key == "permutation_generators":
        G = group_from_permutations(doc["permutation_generators"], doc.get("degree"), cap=cap)
        return G
    return group_builtin(doc["builtin"], cap=cap)


def load_group(source: str, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """``builtin:<descriptor>``, a bare descriptor, or a path to a group file."""
    if source.startswith("builtin:"):
        return group_builtin(source[len("builtin:") :], cap=cap)
    path = Path(source)
    if path.exists():
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return group_from_document(doc, cap=cap)
    return group_builtin(source, cap=cap)
