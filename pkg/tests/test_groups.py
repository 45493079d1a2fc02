import itertools
from collections import Counter

import numpy as np
import pytest
from conftest import SUITE, EVEN_CONTROLS, group
from hypothesis import given
from hypothesis import strategies as st

from cayleyparity.errors import BadAction, BadDescriptor, NotAGroup, Overflow
from cayleyparity.groups import (
    Partition,
    conjugacy_classes,
    cyclic,
    direct_product,
    group_builtin,
    group_from_permutations,
    group_from_table,
    heisenberg,
    join,
    pc_classes,
    power_classes,
    semidirect,
)


def brute_conjugacy(G):
    n = G.order
    seen, out = set(), []
    for x in range(n):
        if x in seen:
            continue
        orbit = {int(G.mult[G.mult[g, x], G.inv[g]]) for g in range(n)}
        seen |= orbit
        out.append(frozenset(orbit))
    return set(out)


def closure_pc(G):
    # power class, then close under conjugation and re-take power classes
    conj = brute_conjugacy(G)
    power = {frozenset(b) for b in power_classes(G).blocks}
    blocks = []
    for start in range(G.order):
        if any(start in b for b in blocks):
            continue
        cur = {start}
        while True:
            nxt = set(cur)
            for fam in (conj, power):
                for b in fam:
                    if b & cur:
                        nxt |= b
            if nxt == cur:
                break
            cur = nxt
        blocks.append(frozenset(cur))
    return set(blocks)


def is_isomorphic_by(G, H, gens_G, gens_H):
    """Extend generator images to a bijective homomorphism or return False."""
    phi = {0: 0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for a, b in zip(gens_G, gens_H):
            y, z = int(G.mult[x, a]), int(H.mult[phi[x], b])
            if y in phi:
                if phi[y] != z:
                    return False
            else:
                phi[y] = z
                frontier.append(y)
    if len(phi) != G.order or len(set(phi.values())) != H.order:
        return False
    return all(phi[int(G.mult[x, y])] == int(H.mult[phi[x], phi[y]]) for x in range(G.order) for y in range(G.order))


def test_z3_from_table():
    G = group_from_table([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert G.order == 3
    assert list(G.elem_order) == [1, 3, 3]


def test_table_without_inverse():
    with pytest.raises(NotAGroup):
        group_from_table([[0, 1], [1, 1]])


def test_klein_four():
    G = group_from_table([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
    assert G.order == 4 and list(G.elem_order[1:]) == [2, 2, 2]


def test_table_identity_relabelled_to_zero():
    # Z_3 with the identity at input label 2
    G = group_from_table([[(a + b + 1) % 3 for b in range(3)] for a in range(3)])
    assert G.order == 3
    assert (G.mult[0] == np.arange(3)).all() and (G.mult[:, 0] == np.arange(3)).all()


def test_non_associative_table_reports_triple():
    # a Latin square with identity that is not associative (order 5 loop)
    t = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAGroup) as err:
        group_from_table(t)
    assert "associat" in str(err.value)


def test_group_builtin_examples():
    G = group_builtin("semidirect(cyclic(7),cyclic(3),2)")
    assert G.order == 21 and not G.is_abelian
    H = group_builtin("direct_product(cyclic(3),cyclic(3))")
    assert H.is_abelian and H.order == 9 and set(H.elem_order[1:]) == {3}
    K = heisenberg(3)
    assert K.order == 27 and not K.is_abelian and set(K.elem_order[1:]) == {3}


def test_group_builtin_errors():
    with pytest.raises(BadAction):
        semidirect(7, 3, 3)
    with pytest.raises(BadDescriptor):
        group_builtin("quaternion(8)")
    with pytest.raises(BadDescriptor):
        group_builtin("cyclic(")
    with pytest.raises(Overflow):
        cyclic(5000)
    with pytest.raises(Overflow):
        direct_product(cyclic(50), cyclic(50))


def test_permutation_closure_examples():
    assert group_from_permutations([[1, 2, 3, 4, 0]]).order == 5
    assert group_from_permutations([], degree=1).order == 1


def test_order21_from_permutations_matches_table():
    shift = [(x + 1) % 7 for x in range(7)]
    double = [(2 * x) % 7 for x in range(7)]
    G = group_from_permutations([shift, double])
    H = semidirect(7, 3, 2)
    assert G.order == 21
    # choose generators: any order-7 element a and order-3 element b with b a b^-1 = a^2
    a = next(x for x in range(21) if G.elem_order[x] == 7)
    b = next(x for x in range(21) if G.elem_order[x] == 3 and int(G.mult[G.mult[x, a], G.inv[x]]) == int(G.mult[a, a]))
    A, B = 3, 1  # (1,0) and (0,1) in the semidirect numbering
    assert int(H.mult[H.mult[B, A], H.inv[B]]) == int(H.mult[A, A])
    assert is_isomorphic_by(G, H, [a, b], [A, B])
    sizes_G = sorted(conjugacy_classes(G).sizes())
    sizes_H = sorted(conjugacy_classes(H).sizes())
    assert sizes_G == sizes_H == [1, 3, 3, 7, 7]


def test_cyclic_from_permutations_matches_classes():
    G = group_from_permutations([[1, 2, 3, 4, 5, 6, 7, 8, 0]])
    assert sorted(power_classes(G).sizes()) == sorted(power_classes(cyclic(9)).sizes())


def test_conjugacy_examples():
    assert conjugacy_classes(cyclic(6)).sizes() == [1] * 6
    assert sorted(conjugacy_classes(semidirect(7, 3, 2)).sizes()) == [1, 3, 3, 7, 7]
    assert sorted(conjugacy_classes(heisenberg(3)).sizes()) == [1, 1, 1] + [3] * 8


def test_power_class_examples():
    assert [list(b) for b in power_classes(cyclic(9)).blocks] == [[0], [3, 6], [1, 2, 4, 5, 7, 8]]
    assert [list(b) for b in power_classes(cyclic(3)).blocks] == [[0], [1, 2]]
    G = semidirect(7, 3, 2)
    sizes = Counter(power_classes(G).sizes())
    assert sizes == Counter({1: 1, 6: 1, 2: 7})


def test_pc_examples():
    G = cyclic(15)
    assert pc_classes(G).blocks == power_classes(G).blocks
    assert pc_classes(semidirect(7, 3, 2)).sizes() == [1, 6, 14]
    assert pc_classes(cyclic(9)).sizes() == [1, 2, 6]


@pytest.mark.parametrize("descriptor", SUITE + EVEN_CONTROLS)
def test_group_axioms_and_orders(descriptor):
    G = group(descriptor)
    n = G.order
    m = G.mult
    assert (m[0] == np.arange(n)).all() and (m[:, 0] == np.arange(n)).all()
    assert (m[np.arange(n), G.inv] == 0).all()
    assert (m[m[:, :, None], np.arange(n)[None, None, :]] == m[:, m]).all() if n <= 27 else True
    for g in range(n):
        o = int(G.elem_order[g])
        assert n % o == 0
        assert G.power(g, o) == 0 and all(G.power(g, k) != 0 for k in range(1, o))


@pytest.mark.parametrize("descriptor", SUITE + EVEN_CONTROLS)
def test_partitions_against_oracles(descriptor):
    G = group(descriptor)
    conj, power, pc = conjugacy_classes(G), power_classes(G), pc_classes(G)
    assert {frozenset(b) for b in conj.blocks} == brute_conjugacy(G)
    assert {frozenset(b) for b in pc.blocks} == closure_pc(G)
    for part in (conj, power, pc):
        assert part.blocks[0] == (0,)
        assert sum(part.sizes()) == G.order
        assert all(part.block_of[x] == i for i, b in enumerate(part.blocks) for x in b)
    for blk in power.blocks + pc.blocks:
        assert {int(G.inv[x]) for x in blk} == set(blk)
    assert conj.refines(pc) and power.refines(pc)


@pytest.mark.parametrize("descriptor", SUITE[:12])
def test_pc_is_finest_common_coarsening(descriptor):
    # splitting any PC block into two pieces breaks the coarsening property
    G = group(descriptor)
    conj, power, pc = conjugacy_classes(G), power_classes(G), pc_classes(G)
    for blk in pc.blocks:
        for k in range(1, len(blk)):
            for piece in itertools.islice(itertools.combinations(blk, k), 20):
                rest = [x for x in blk if x not in piece]
                others = [b for b in pc.blocks if b != blk]
                finer = Partition.from_blocks(others + [piece, tuple(rest)], G.order)
                assert not (conj.refines(finer) and power.refines(finer))


@st.composite
def partitions(draw):
    n = draw(st.integers(1, 12))
    return [draw(st.integers(0, 3)) for _ in range(n)]


@given(partitions(), partitions())
def test_join_is_least_upper_bound(la, lb):
    k = min(len(la), len(lb))
    a, b = Partition.from_labels(la[:k]), Partition.from_labels(lb[:k])
    j = join(a, b)
    assert a.refines(j) and b.refines(j)
    # every block of the join is connected through overlapping blocks
    for blk in j.blocks:
        reach = {blk[0]}
        changed = True
        while changed:
            changed = False
            for part in (a, b):
                for bb in part.blocks:
                    if reach & set(bb) and not set(bb) <= reach:
                        reach |= set(bb)
                        changed = True
        assert reach == set(blk)


@given(st.integers(1, 40), st.integers(1, 40))
def test_direct_product_of_cyclics(a, b):
    G = direct_product(cyclic(a), cyclic(b))
    assert G.order == a * b and G.is_abelian
    assert max(G.elem_order) == np.lcm(a, b)
