"""One test per acceptance criterion, with the exact parameter ranges.

Each test prints a PASS/FAIL line; the same lines are repeated in the
terminal summary.  Criteria 2 and 3 fail as literally stated and are marked
strict xfail, next to tests of the statements that do hold.
"""
import pytest

from higgspw import checks


def sub(crit, name):
    (check,) = [c for c in crit.checks if c.name == name]
    return check


def test_criterion_1(criterion):
    assert criterion(1).passed, criterion(1).line()


@pytest.mark.xfail(strict=True, reason="Q_k S_k equals M_k only after scaling row (a,n) by (k-a-n)! n!; "
                                       "first mismatch at k = 2")
def test_criterion_2(criterion):
    assert criterion(2).passed, criterion(2).line()


def test_criterion_2_row_scaled(criterion):
    crit = criterion(2)
    assert sub(crit, "diag((k-a-n)! n!) M_k = Q_k S_k").passed
    assert sub(crit, "Q_k Q_k^-1 = I").passed


@pytest.mark.xfail(strict=True, reason="the kernel line of M_k^T moves with g (k = 1: (1, -(3g-3)))")
def test_criterion_3(criterion):
    assert criterion(3).passed, criterion(3).line()


def test_criterion_3_dimension_and_generators(criterion):
    crit = criterion(3)
    assert sub(crit, "dim ker M_k^T = 1").passed
    assert sub(crit, "closed-form and Newton vectors span the kernel").passed
    assert sub(crit, "ker M_k^T maps onto the g-independent ker S_k^T (coefficients of p_k)").passed


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9])
def test_criterion(criterion, n):
    assert criterion(n).passed, criterion(n).line()


@pytest.mark.skip(reason=checks.EXCLUDED[1])
def test_criterion_10():
    pass
