from fractions import Fraction

import pytest

from higgspw.exactalg import InvalidArgument, PolyRing, residue
from higgspw.intersect import (
    OUT,
    MonomialClass,
    boundary_residues,
    canonical_Q,
    closed_form_pairing,
    equivariant_integral_M,
    integrate_N,
    integrate_Z,
    integrate_Z_kalkman,
    integrate_Z_split,
    integrate_Z_topdefect,
    monomial_Z,
    rtilde_at_zero,
    truncate_degree,
    witten,
)

A, G = OUT.gen("A"), OUT.gen("G")
QA = witten({(1, 0, 0, 2): Fraction(-1, 2)})  # -A y^2 / 2
ONE = witten({(0, 0, 0, 0): 1})


def u_pow(n, y=0):
    return witten({(0, 0, n, y): 1})


def test_canonical_Q():
    assert canonical_Q() == witten({(1, 0, 0, 2): Fraction(-1, 2), (0, 1, 0, 4): Fraction(-1, 4)})


def test_integral_over_N_genus_two():
    val = integrate_N(2, ONE, QA)
    assert val == A ** 3 / 24
    assert val.coeff((2, 0)) == 0


def test_integral_over_N_with_beta_insertion():
    assert integrate_N(2, u_pow(0, 2), QA) == A * Fraction(-1, 4)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_N_backends_agree(g):
    for T in (ONE, u_pow(0, 2), witten({(1, 0, 0, 4): 1})):
        assert integrate_N(g, T, canonical_Q(), "sinh") == integrate_N(g, T, canonical_Q(), "zagier")


def test_N_genus_two_canonical_Q():
    assert integrate_N(2, ONE, canonical_Q(), "both") == A ** 3 / 24 - G * Fraction(5, 4)


def test_closed_form_examples():
    assert closed_form_pairing(2, 1, 0, 0, 0) == 1
    # (-1)^1 * 2^-2 * 3! * 0! * C(2, 0)
    assert closed_form_pairing(2, 0, 0, 0, 0) == Fraction(-3, 2)
    assert closed_form_pairing(2, 1, 2, 1, 1) == 0  # n1 + n2 > g


def test_monomial_Z_example():
    # eta^(3g-3-2k) * beta * alpha^2 at g = 2, k = 1
    assert monomial_Z(2, 1, MonomialClass(i=2, m=1)) == 1


@pytest.mark.parametrize("g,k", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_rtilde_closed_form(g, k):
    ring = PolyRing(("A", "Gt"))
    a, gt = ring.gen("A"), ring.gen("Gt")
    expect = (a + gt) ** (2 * g - 2 * k - 2) * (a + 2 * gt) ** g * Fraction(2) ** (2 * k - 1 - g)
    assert rtilde_at_zero(g, k) == expect


@pytest.mark.parametrize("g", [2, 3, 4])
def test_topdefect_reproduces_closed_form(g):
    for k in range(1, g):
        for a1 in range(k + 1):
            for n1 in range(a1 + 1):
                if a1 + n1 > k:
                    continue
                for a2 in range(k):
                    for n2 in range(a2 + 1):
                        f = MonomialClass(i=k - a1 - n1, m=a1 - n1, j=n1, n=k - a1)
                        p = MonomialClass(i=3 * g - 3 - k - a2 - n2, m=a2 - n2, j=n2, n=k - 1 - a2)
                        assert monomial_Z(g, k, f * p) == closed_form_pairing(g, a1, n1, a2, n2)


def test_topdefect_of_zero():
    assert integrate_Z_topdefect(2, 1, witten({}), canonical_Q()) == 0


def test_split_equals_topdefect_genus_two():
    assert integrate_Z_split(2, u_pow(3), QA) == integrate_Z_topdefect(2, 1, u_pow(2), QA)


@pytest.mark.parametrize("g", [2, 3])
def test_first_split_term_vanishes(g):
    for power in (2 * g - 2, g - 1):
        T = witten({(0, 0, power, 2 * g): 1})
        first, _ = integrate_Z_split(g, T, canonical_Q(), parts=True)
        assert first == 0


def test_first_split_term_nonzero_below():
    first, second = integrate_Z_split(3, ONE, canonical_Q(), parts=True)
    assert first != 0
    assert first + second == integrate_Z_split(3, ONE, canonical_Q())


def test_kalkman_equals_split_genus_two():
    assert integrate_Z_kalkman(2, ONE, QA) == integrate_Z_split(2, ONE, QA)
    assert integrate_Z_split(2, ONE, QA) == A ** 5 * Fraction(-11, 480)


@pytest.mark.parametrize("g", [2, 3])
def test_three_routes(g):
    Q = canonical_Q()
    for k in sorted({1, g - 1}):
        p = 3 * g - 3 - 2 * k
        for ue, ye in ((0, 0), (0, 2), (1, 0), (1, 2)):
            split = integrate_Z(g, u_pow(p + ue, ye), Q, "split")
            assert split == integrate_Z(g, u_pow(ue, ye), Q, "topdefect", k=k)
            kal = integrate_Z(g, u_pow(p + ue, ye), Q, "kalkman", max_degree=6)
            assert kal == truncate_degree(split, 6)


def test_boundary_residues_are_odd_partners():
    parts = boundary_residues(2, ONE, canonical_Q(), 0, max_degree=4)
    assert parts["u"] == parts["-u"]


def test_degree_zero_equivariant_coefficient():
    for g in (2, 3):
        top = 6 * g - 6
        series = equivariant_integral_M(g, ONE, QA, -top + 1, max_degree=0)
        c = series.coefficient(-top)
        split = integrate_Z_split(g, u_pow(6 * g - 7), QA)
        assert -c == split.coeff((0, 0))


def test_mismatched_degree_is_zero():
    # a class of the wrong degree (A^0 G^0 part of T = 1 over Z) integrates to 0
    assert integrate_Z_kalkman(2, ONE, witten({}), max_degree=0) == 0


def test_kalkman_residue_sign():
    s = equivariant_integral_M(2, ONE, canonical_Q(), 0, max_degree=5)
    assert -residue(s) == integrate_Z_kalkman(2, ONE, canonical_Q(), max_degree=5)


def test_validation():
    with pytest.raises(InvalidArgument):
        integrate_N(1, ONE, QA)
    with pytest.raises(InvalidArgument):
        integrate_Z_topdefect(3, 3, ONE, QA)
    with pytest.raises(InvalidArgument):
        integrate_N(2, witten({(0, 0, 0, 1): 1}), QA)
    with pytest.raises(InvalidArgument):
        integrate_N(2, ONE, witten({(1, 0, 0, 4): 1}))
    with pytest.raises(InvalidArgument):
        integrate_N(2, u_pow(1), QA)
