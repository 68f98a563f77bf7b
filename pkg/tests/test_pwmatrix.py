from fractions import Fraction
from math import factorial

import pytest

from higgspw import linalg
from higgspw.exactalg import InvalidArgument
from higgspw.intersect import MonomialClass
from higgspw.pwmatrix import (
    DefectClass,
    PairIndex,
    annihilation_check,
    build_Mk,
    build_Mkh,
    build_Qk,
    build_Qk_inv,
    build_Sk,
    build_Skh,
    build_tildeQ,
    cols_Mk,
    gbinom,
    lowest_defect_Fk,
    nullspace,
    ratio_matrix,
    redundancy_check,
    row_count,
    rows_Mk,
    rows_Mkh,
    solve_general,
    tildeQ_zero_rows,
    vk_closed_form,
    vk_from_pk,
    vk_newton,
)

F = Fraction
BETA = MonomialClass(m=1)
ALPHA_ETA = MonomialClass(i=1, n=1)


def test_index_order():
    assert rows_Mk(2) == [PairIndex(0, 0), PairIndex(1, 0), PairIndex(1, 1), PairIndex(2, 0)]
    assert cols_Mk(2) == [PairIndex(0, 0), PairIndex(1, 0), PairIndex(1, 1)]
    with pytest.raises(InvalidArgument):
        PairIndex(0, 1)


@pytest.mark.parametrize("k", range(1, 7))
def test_shapes(k):
    assert len(cols_Mk(k)) == k * (k + 1) // 2
    for h in range(k + 1):
        assert len(rows_Mkh(k, h)) == row_count(k, h)
        assert build_Mkh(k + 2, k, h).shape == (row_count(k, h), k * (k + 1) // 2)


@pytest.mark.parametrize("g", [2, 3, 5])
def test_k1_matrices(g):
    assert build_Mk(g, 1).entries == [[3 * g - 3], [1]]
    assert build_Qk(g, 1).entries == [[-1, 3 * g - 3], [0, 1]]
    assert build_Sk(1).entries == [[0], [1]]


def test_M_entry_examples():
    m = build_Mk(3, 2)
    # C(6 - 2, 2) * C(3 - 1, 0)
    assert m.entry(PairIndex(0, 0), PairIndex(1, 1)) == 6
    # C(6, 2) * C(3, 0)
    assert m.entry(PairIndex(0, 0), PairIndex(0, 0)) == 15


@pytest.mark.parametrize("g,k", [(3, 2), (5, 3), (6, 4), (7, 5)])
def test_Q_structure(g, k):
    q = build_Qk(g, k)
    n = len(q.rows)
    assert all(q.entries[i][j] == 0 for i in range(n) for j in range(i))
    assert all(abs(q.entries[i][i]) == 1 for i in range(n))
    ident = (q @ build_Qk_inv(g, k)).entries
    assert ident == [[int(i == j) for j in range(n)] for i in range(n)]
    assert build_Sk(k).entries[-1] == [1] * len(cols_Mk(k))


@pytest.mark.parametrize("g,k", [(3, 2), (4, 3), (6, 4), (7, 5)])
def test_factorization_up_to_row_scaling(g, k):
    qs = (build_Qk(g, k) @ build_Sk(k)).entries
    m = build_Mk(g, k)
    scaled = [[factorial(k - r.a - r.n) * factorial(r.n) * x for x in row] for r, row in zip(m.rows, m.entries)]
    assert qs == scaled


def test_literal_factorization_breaks_at_k2():
    assert (build_Qk(3, 2) @ build_Sk(2)).entries != build_Mk(3, 2).entries


def test_gbinom():
    assert gbinom(5, 2) == 10
    assert gbinom(-1, 3) == -1
    assert gbinom(-2, 2) == 3
    assert gbinom(4, -1) == 0


@pytest.mark.parametrize("g", [2, 3, 4, 7])
def test_k1_kernel(g):
    assert vk_closed_form(g, 1) == [-1, 3 * g - 3]
    assert nullspace(build_Mk(g, 1)) == [[1, -(3 * g - 3)]]
    assert vk_from_pk(1) == [1, 0]


@pytest.mark.parametrize("k", range(1, 6))
def test_kernel_spans(k):
    for g in range(k + 1, k + 4):
        ker = nullspace(build_Mk(g, k))
        assert len(ker) == 1
        assert linalg.same_span(ker, [vk_closed_form(g, k)])
        assert linalg.same_span(ker, [vk_newton(g, k)])
    assert linalg.same_span(nullspace(build_Sk(k)), [vk_from_pk(k)])


def test_kernel_line_moves_with_g():
    assert nullspace(build_Mk(2, 1)) != nullspace(build_Mk(3, 1))


@pytest.mark.parametrize("g", [2, 3, 4, 9])
def test_lowest_defect_k1(g):
    cls = lowest_defect_Fk(g, 1)
    assert cls == DefectClass({BETA: F(1), ALPHA_ETA: F(2, 3 * g - 3)})


def test_lowest_defect_k2_g4():
    # t^2 coefficient of (1+2bt)^4 exp(2 eta t (alpha - 4 gamma t / (1+2bt))) over p_2(4, 8) = 24
    cls = lowest_defect_Fk(4, 2)
    assert str(cls) == "beta^2 + (2/3)*alpha*beta*eta - (1/3)*gamma*eta + (1/12)*alpha^2*eta^2"
    assert str(lowest_defect_Fk(4, 1)) == "beta + (2/9)*alpha*eta"


@pytest.mark.parametrize("k", range(1, 5))
def test_annihilation(k):
    for g in range(k + 1, k + 4):
        assert not any(annihilation_check(g, k, lowest_defect_Fk(g, k)))


@pytest.mark.parametrize("g,k", [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)])
def test_integrals_reproduce_matrix(g, k):
    assert ratio_matrix(g, k).entries == build_Mk(g, k).entries


def test_redundancy_examples():
    assert redundancy_check(4, 3, 3) is False
    assert redundancy_check(4, 3, 2) is True


@pytest.mark.parametrize("g,k", [(3, 2), (5, 3), (6, 4)])
def test_general_h0_is_lowest_defect(g, k):
    sol = solve_general(g, k, 0)
    assert sol.unique
    assert sol.solution == lowest_defect_Fk(g, k)


def test_general_solution_annihilates():
    for g, k, h in [(5, 2, 1), (6, 3, 1), (6, 3, 2)]:
        sol = solve_general(g, k, h)
        assert sol.unique
        assert not any(annihilation_check(g, k, sol.solution, h=h))


@pytest.mark.parametrize("k,h", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_tildeQ_zero_rows(k, h):
    q = build_tildeQ(k + h + 3, k, h)
    slots = [i for i, r in enumerate(q.rows) if r.a >= k]
    assert tildeQ_zero_rows(k + h + 3, k, h) == slots
    assert len(nullspace(build_Skh(k, h))) == (h + 1) * (h + 2) // 2


def test_json_roundtrip_strings():
    data = lowest_defect_Fk(4, 1).to_json()
    assert data == [[[0, 1, 0, 0], "1"], [[1, 0, 0, 1], "2/9"]]
    assert build_Mk(2, 1).to_json()["entries"] == [["3"], ["1"]]


def test_invalid():
    with pytest.raises(InvalidArgument):
        build_Mk(2, 2)
    with pytest.raises(InvalidArgument):
        build_Mkh(5, 2, 3)
