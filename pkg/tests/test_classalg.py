import math

import numpy as np
import pytest
from conftest import SUITE, EVEN_CONTROLS, group

from cayleyparity.classalg import (
    admissible_primes,
    choose_prime,
    conjugacy_eigenmatrix_modp,
    conjugacy_report,
    conjugacy_scheme,
    eigenmatrices_modp,
    exponent,
    frame_quotient_conjugacy,
    modp_identity_residual,
    multiplicities_modp,
    pc_quotient_check,
)
from cayleyparity.errors import NotInteger, NotOdd
from cayleyparity.groups import cyclic, heisenberg, semidirect
from cayleyparity.schemes import valencies


def float_multiplicities(G):
    """Degrees squared from a floating-point diagonalization of the class algebra."""
    S, nums = conjugacy_scheme(G)
    D = S.d + 1
    rng = np.random.default_rng(7)
    L = sum(rng.normal() * nums.intersection_matrix(r) for r in range(D))
    # central characters are right eigenvectors: L_r w = w_r w
    _, vecs = np.linalg.eig(L)
    v = np.array(valencies(S), dtype=float)
    star = list(S.transpose_map)
    out = []
    for j in range(D):
        w = vecs[:, j] / vecs[0, j]
        out.append(G.order / np.sum(w * w[star] / v).real)
    return sorted(int(round(x)) for x in out)


def test_exponent_examples():
    assert exponent(cyclic(9)) == 9
    assert exponent(semidirect(7, 3, 2)) == 21
    assert exponent(heisenberg(3)) == 3


def test_choose_prime_examples():
    assert choose_prime(cyclic(3)) == 13
    assert choose_prime(semidirect(7, 3, 2)) == 463
    assert choose_prime(cyclic(1)) == 2
    G = group("heisenberg(3)")
    ps = [p for _, p in zip(range(4), admissible_primes(G))]
    assert all(p % 3 == 1 and p > 27**2 for p in ps) and ps == sorted(ps)


def test_z3_table_mod13():
    S, nums = conjugacy_scheme(cyclic(3))
    T = conjugacy_eigenmatrix_modp(S, nums, 13)
    assert T.Pm == ((1, 1, 1), (1, 3, 9), (1, 9, 3))


@pytest.mark.parametrize(
    "descriptor,expected",
    [
        ("cyclic(7)", [1] * 7),
        ("semidirect(7,3,2)", [1, 1, 1, 9, 9]),
        ("heisenberg(3)", [1] * 9 + [9, 9]),
        ("semidirect(3,2,2)", [1, 1, 4]),
    ],
)
def test_multiplicity_examples(descriptor, expected):
    G = group(descriptor)
    for T in eigenmatrices_modp(G, 3):
        assert sorted(T.m) == expected
    assert float_multiplicities(G) == expected


def test_frame_quotient_examples():
    assert frame_quotient_conjugacy([1] * 3, [1] * 3, 3, 2) == 27
    assert frame_quotient_conjugacy([1] * 5, [1] * 5, 5, 4) == 3125
    fq = frame_quotient_conjugacy([1, 3, 3, 7, 7], [1, 1, 1, 9, 9], 21, 4)
    assert fq == 22235661 == 3**3 * 7**7
    assert frame_quotient_conjugacy([1, 2, 3], [1, 1, 4], 6, 2) == 324


def test_frame_quotient_errors():
    with pytest.raises(NotInteger):
        frame_quotient_conjugacy([1, 1], [1, 2], 3, 1)
    with pytest.raises(NotOdd):
        frame_quotient_conjugacy([1, 2], [1, 1], 3, 1)


def test_order21_report_across_primes():
    rep = conjugacy_report(group("semidirect(7,3,2)"), n_primes=3)
    assert rep.frame_quotient == 22235661 and rep.parity == "odd"
    assert len(set(rep.primes)) == 3 and rep.consistent_across_primes and rep.identities_hold


def test_s3_control_is_even():
    rep = conjugacy_report(group("semidirect(3,2,2)"))
    assert rep.frame_quotient == 324 and rep.parity == "even"


@pytest.mark.parametrize("descriptor", SUITE + EVEN_CONTROLS)
def test_suite_class_algebra(descriptor):
    G = group(descriptor)
    S, _ = conjugacy_scheme(G)
    v = valencies(S)
    rep = conjugacy_report(G, n_primes=3)
    assert rep.consistent_across_primes and rep.identities_hold
    m = rep.multiplicities
    assert sum(m) == G.order and len(m) == S.d + 1
    for mj in m:
        f = math.isqrt(mj)
        assert f * f == mj and G.order % f == 0
    if G.order % 2:
        assert rep.parity == "odd"
    if G.is_abelian:
        assert m == [1] * G.order and rep.frame_quotient == G.order**G.order
    for T in eigenmatrices_modp(G, 3):
        assert T.Pm[0] == tuple(x % T.p for x in v)
        assert len(set(T.Pm)) == len(T.Pm)
        assert modp_identity_residual(T, v, T.m, G.order)
        assert multiplicities_modp(T, v, G.order).m == T.m


def test_corrupted_multiplicities_break_modp_identity():
    G = group("semidirect(7,3,2)")
    S, _ = conjugacy_scheme(G)
    (T,) = eigenmatrices_modp(G, 1)
    bad = list(T.m)
    bad[-1], bad[-2] = bad[-1] + 1, bad[-2] - 1
    assert not modp_identity_residual(T, valencies(S), bad, 21)


def test_seed_does_not_change_tables():
    G = group("heisenberg(3)")
    a = eigenmatrices_modp(G, 2, seed=0)
    b = eigenmatrices_modp(G, 2, seed=12345)
    assert [(t.p, t.Pm, t.m) for t in a] == [(t.p, t.Pm, t.m) for t in b]


@pytest.mark.parametrize("descriptor", SUITE + ["semidirect(3,2,2)", "cyclic(4)"])
def test_pc_quotient_check(descriptor):
    rep = pc_quotient_check(group(descriptor), n_primes=3)
    assert rep.passed and rep.consistent and len(rep.reports) == 3
    assert rep.exact is None or rep.exact.passed


def test_exact_quotient_in_degenerate_cases():
    # conjugacy and PC classes coincide exactly when every class is rational
    for d in ("cyclic(1)", "cyclic(2)", "direct_product(cyclic(2),cyclic(2))", "semidirect(3,2,2)"):
        rep = pc_quotient_check(group(d))
        assert rep.exact is not None and rep.exact.passed and rep.exact.field == "Q"
