"""Exact rational linear algebra on top of sympy's DomainMatrix."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from sympy import QQ as _SQQ
from sympy.polys.matrices import DomainMatrix


def _to_dm(rows) -> DomainMatrix:
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    data = [[_SQQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows]
    return DomainMatrix(data, (nrows, ncols), _SQQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def det(rows) -> Fraction:
    if not rows:
        return Fraction(1)
    return _frac(_to_dm(rows).det())


def rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return _to_dm(rows).rank()


def matmul(a, b) -> list:
    bt = list(zip(*b))
    return [[sum((Fraction(x) * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def transpose(rows) -> list:
    return [list(c) for c in zip(*rows)]


def normalize(vec) -> list:
    """Scale to a primitive integer vector whose first nonzero entry is positive."""
    vec = [Fraction(x) for x in vec]
    nz = [x for x in vec if x]
    if not nz:
        return vec
    den = reduce(lcm, (x.denominator for x in nz), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, (abs(x) for x in ints if x), 0)
    sign = 1 if nz[0] > 0 else -1
    return [Fraction(sign * x // g) for x in ints]


def nullspace(rows, ncols: int | None = None) -> list:
    """Basis of {x : rows·x = 0}, each vector normalized.

    The basis comes from the reduced row echelon form, so it is
    deterministic given the column order.
    """
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    basis = _to_dm(rows).nullspace()
    out = []
    for r in basis.to_list():
        out.append(normalize([_frac(x) for x in r]))
    return out


def left_nullspace(rows) -> list:
    """Basis of {v : v·rows = 0}."""
    if not rows:
        return []
    if not rows[0]:
        return nullspace([[Fraction(0)] * len(rows)], len(rows))
    return nullspace(transpose(rows), len(rows))


def same_span(a, b) -> bool:
    """Whether two lists of vectors span the same subspace."""
    ra, rb = rank(a) if a else 0, rank(b) if b else 0
    if ra != rb:
        return False
    if not a:
        return True
    return rank(list(a) + list(b)) == ra
