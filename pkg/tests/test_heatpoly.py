from fractions import Fraction

import pytest
import sympy as sp

from higgspw import heatpoly as hp
from higgspw.exactalg import InvalidArgument

X, Z = hp.X, hp.Z
SX, SZ = sp.symbols("X Z")


def sympy_pk(k):
    """Oracle: sum over i of 2^i C(X, i) C(Z - 2X, k - i), expanded by sympy."""
    expr = sum(2 ** i * sp.expand_func(sp.binomial(SX, i)) * sp.expand_func(sp.binomial(SZ - 2 * SX, k - i))
               for i in range(k + 1))
    return sp.Poly(sp.expand(expr), SX, SZ)


def as_sympy(p):
    return sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * SX ** e[0] * SZ ** e[1]
                       for e, c in p.terms.items()) if p.terms else 0, SX, SZ)


def test_small_pk():
    assert hp.pk(0) == hp.XZ.one
    assert hp.pk(1) == Z
    assert hp.pk(2) == -X + Z * Z / 2 - Z / 2


@pytest.mark.parametrize("k", range(0, 8))
def test_pk_matches_sympy(k):
    assert as_sympy(hp.pk(k)) == sympy_pk(k)


@pytest.mark.parametrize("k", range(1, 8))
def test_pk_normalization_and_vanishing(k):
    assert hp.pk_value(k, 0, k) == 1
    assert hp.gamma_vanish(k)
    assert hp.vanishing_space_dim(k) == 1
    assert hp.weighted_degree(hp.pk(k)) == k


@pytest.mark.parametrize("k", range(1, 8))
def test_pk_forms_and_heat_equation(k):
    assert hp.pk_alt_forms(k)
    assert hp.heat_equation(k)
    assert hp.diff_op(hp.pk(k), "D_Z") == hp.pk(k - 1)
    assert all(hp.pk_identities(k).values())


@pytest.mark.parametrize("k,g", [(1, 2), (2, 3), (3, 5), (4, 6)])
def test_newton_reconstruction(k, g):
    assert hp.newton_reconstruct(k, g) == hp.pk(k)


def test_shift_and_difference():
    p = X * Z + Z
    assert hp.shift(p, 1, 2) == (X + 1) * (Z + 2) + Z + 2
    assert hp.diff_op(p, "D_X") == Z
    assert hp.diff_op(p, "D_Z,-1") == hp.shift(p, dz=-1) - p
    assert hp.diff_op(p, "D_Z,-1") == -X - 1
    with pytest.raises(InvalidArgument):
        hp.diff_op(p, "D_Y")


@pytest.mark.parametrize("k,h", [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3), (5, 5)])
def test_kernel_basis_independent(k, h):
    assert hp.kernel_basis_independent(k, h)
    assert len(hp.kernel_basis_polys(k, h)) == (h + 1) * (h + 2) // 2


def test_w_small_cases():
    assert hp.W_det(1, 1) == Z
    assert hp.W_det(3, 0) == hp.pk(3)
    # the literal shifted reading collapses to zero already here
    assert hp.W_det(1, 1, form="literal") == hp.XZ.zero


def test_interpolation_matches_laplace():
    for k, h in [(2, 2), (3, 2), (2, 3)]:
        assert hp.W_det(k, h, method="interpolate") == hp.W_det(k, h, method="laplace")


@pytest.mark.parametrize("k", range(2, 7))
def test_h1_recurrence(k):
    assert hp.w_split_matches(k)
    assert hp.h1_recurrence(k)


def test_h1_positivity_sample():
    rows = hp.positivity_scan([1, 2, 3], [1], range(4, 8))
    assert all(r[4] == "positive" for r in rows)
    assert rows == hp.positivity_scan([1, 2, 3], [1], range(4, 8), jobs=2)


def test_wdet_value_consistency():
    for k, h, g in [(2, 1, 4), (3, 2, 6)]:
        p = hp.W_det(k, h)
        assert hp.wdet_at_point(k, h, g) == p.evaluate({"X": g, "Z": 3 * g - k - h - 2})


@pytest.mark.parametrize("k,h", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_det_ratios_constant(k, h):
    rep = hp.det_tildeQ_relation(k, h, range(k + h + 2, k + h + 5))
    assert rep["ratio_B_constant"] and rep["ratio_W_constant"]


def test_degenerate_tildeQ():
    rep = hp.det_tildeQ_relation(3, 3, [4])
    assert rep["samples"][0]["det_tildeQ"] == 0


def test_invalid_h():
    with pytest.raises(InvalidArgument):
        hp.kernel_basis_polys(2, 3)


@pytest.mark.parametrize("k", range(0, 9))
def test_pk_on_axis_is_binomial(k):
    assert hp.pk(k).subs({"X": 0}) == hp.cpoly(Z, k)


@pytest.mark.parametrize("k", range(0, 11))
def test_pk_at_boundary_point(k):
    assert hp.pk_value(k, k + 1, 2 * k + 1) == 2 ** (k + 1) - 1
