"""Pairing matrices for the top-defect equations and their kernels.

Row and column labels are pairs (a, n).  A row (a1, n1) of M_{k,h} stands
for the class beta^(a1-n1) (4 gamma)^n1 eta^(k-a1) alpha^(k+h-a1-n1), a
column (a2, n2) for beta^(a2-n2) (4 gamma)^n2 eta^(k-1-a2) alpha^(...), and
the entries are the normalized top-defect pairings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import factorial, prod

from . import heatpoly, linalg
from .exactalg import InvalidArgument, MultiPoly, binom, rat_str
from .intersect import MonomialClass, monomial_Z


@dataclass(frozen=True, order=True)
class PairIndex:
    a: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.a < self.n:
            raise InvalidArgument(f"need 0 <= n <= a, got {self}")

    @property
    def sort_key(self):
        return (self.a + self.n, self.a)

    def __str__(self):
        return f"({self.a},{self.n})"


def canonical(indices) -> list:
    """Sort by a+n, then by a (so n decreases inside each a+n block)."""
    return sorted(indices, key=lambda p: p.sort_key)


def rows_Mk(k: int) -> list:
    return canonical(PairIndex(a, n) for a in range(k + 1) for n in range(a + 1) if a + n <= k)


def cols_Mk(k: int) -> list:
    return canonical(PairIndex(a, n) for a in range(k) for n in range(a + 1))


def cols_Sk_tilde(k: int) -> list:
    return canonical(PairIndex(a, n) for a in range(k + 1) for n in range(a + 1))


def rows_Mkh(k: int, h: int) -> list:
    rows = [PairIndex(a, n) for a in range(k) for n in range(a + 1) if a + n <= k + h]
    return canonical(rows) + [PairIndex(k, h)]


@dataclass
class PairingMatrix:
    rows: list
    cols: list
    entries: list
    name: str = ""

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    def entry(self, r: PairIndex, c: PairIndex) -> Fraction:
        return self.entries[self.rows.index(r)][self.cols.index(c)]

    def transpose_rows(self) -> list:
        return linalg.transpose(self.entries)

    def __matmul__(self, other: PairingMatrix) -> PairingMatrix:
        if self.cols != other.rows:
            raise InvalidArgument("index sets do not match for the product")
        return PairingMatrix(self.rows, other.cols, linalg.matmul(self.entries, other.entries))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rows": [[r.a, r.n] for r in self.rows],
            "cols": [[c.a, c.n] for c in self.cols],
            "entries": [[rat_str(x) for x in row] for row in self.entries],
        }


def _check_gk(g, k):
    if k < 1 or g < k + 1:
        raise InvalidArgument(f"need g >= k+1 >= 2, got g={g}, k={k}")


def _check_kh(k, h):
    if not 0 <= h <= k:
        raise InvalidArgument(f"need 0 <= h <= k, got k={k}, h={h}")


def _m_entry(g, K, r, c) -> Fraction:
    return Fraction(binom(3 * g - 3 - r.a - r.n - c.a - c.n, K - r.a - r.n) * binom(g - c.n, r.n))


def build_Mk(g: int, k: int) -> PairingMatrix:
    _check_gk(g, k)
    rows, cols = rows_Mk(k), cols_Mk(k)
    return PairingMatrix(rows, cols, [[_m_entry(g, k, r, c) for c in cols] for r in rows], f"M_{k}")


def build_Mkh(g: int, k: int, h: int) -> PairingMatrix:
    _check_gk(g, k)
    _check_kh(k, h)
    rows, cols = rows_Mkh(k, h), cols_Mk(k)
    return PairingMatrix(rows, cols, [[_m_entry(g, k + h, r, c) for c in cols] for r in rows],
                         f"M_{k},{h}")


def row_count(k: int, h: int) -> int:
    """Closed count r_{k,h}; the number of columns is k(k+1)/2."""
    return k * (k + 1) // 2 - ((k - h + 1) * (k - h - 3)) // 4


# elementary and complete symmetric functions

def esym(i: int, xs) -> int:
    """e_i(xs) with the conventions e_i = 0 for i < 0, e_i = 1 if len(xs) < i."""
    xs = list(xs)
    if i < 0:
        return 0
    if len(xs) < i:
        return 1
    return sum(prod(c) for c in combinations(xs, i))


def hsym(r: int, xs) -> int:
    if r < 0:
        return 0
    return sum(prod(c) for c in combinations_with_replacement(list(xs), r))


def build_Qk(g: int, k: int) -> PairingMatrix:
    idx = rows_Mk(k)
    ent = []
    for r in idx:
        row = []
        for c in idx:
            e1 = esym(c.a + c.n - r.a - r.n, range(3 * g - 2 - k, 3 * g - 2 - r.a - r.n))
            e2 = esym(r.n - c.n, range(g - r.n + 1, g + 1))
            row.append(Fraction((-1) ** (k + c.a) * e1 * e2))
        ent.append(row)
    return PairingMatrix(idx, idx, ent, f"Q_{k}")


def build_Qk_inv(g: int, k: int) -> PairingMatrix:
    idx = rows_Mk(k)
    ent = []
    for r in idx:
        row = []
        for c in idx:
            h1 = hsym(c.a + c.n - r.a - r.n, range(3 * g - 2 - k, 3 * g - 1 - c.a - c.n))
            h2 = hsym(r.n - c.n, range(g - c.n, g + 1))
            row.append(Fraction((-1) ** (k + c.a) * h1 * h2))
        ent.append(row)
    return PairingMatrix(idx, idx, ent, f"Q_{k}^-1")


def _s_entry(K, r, c) -> Fraction:
    # Python's 0 ** 0 == 1 is exactly the convention needed here.
    return Fraction(c.n ** r.n * (c.a + c.n) ** (K - r.a - r.n))


def build_Sk(k: int) -> PairingMatrix:
    rows, cols = rows_Mk(k), cols_Mk(k)
    return PairingMatrix(rows, cols, [[_s_entry(k, r, c) for c in cols] for r in rows], f"S_{k}")


def build_Sk_tilde(k: int) -> PairingMatrix:
    rows, cols = rows_Mk(k), cols_Sk_tilde(k)
    return PairingMatrix(rows, cols, [[_s_entry(k, r, c) for c in cols] for r in rows], f"S~_{k}")


def build_Skh(k: int, h: int) -> PairingMatrix:
    _check_kh(k, h)
    rows, cols = rows_Mk(k + h), cols_Mk(k)
    return PairingMatrix(rows, cols, [[_s_entry(k + h, r, c) for c in cols] for r in rows],
                         f"S_{k},{h}")


def nullspace(m: PairingMatrix) -> list:
    """Exact basis of the kernel of m^T (row vectors v with v·m = 0)."""
    return linalg.left_nullspace(m.entries)


# kernel vectors

def poly_to_vector(p: MultiPoly, K: int) -> list:
    """Coefficients of p = sum v_{a,n} X^n Z^(K-a-n) in the rows_Mk(K) order."""
    vec = []
    used = 0
    for r in rows_Mk(K):
        c = p.coeff({"X": r.n, "Z": K - r.a - r.n})
        vec.append(c)
        if c:
            used += 1
    if used != len(p.terms):
        raise InvalidArgument("polynomial has monomials outside the index set")
    return vec


def gbinom(top: int, r: int) -> Fraction:
    """C(top, r) for any integer top (power-series binomial), r >= 0."""
    if r < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(r):
        out = out * (top - i) / (i + 1)
    return out


def _residue_coeff(g, k, a1, n1) -> Fraction:
    # t^(a1-n1) coefficient of (1+t)^(g-k-2) (1+2t)^(g-n1)
    d = a1 - n1
    total = sum(gbinom(g - k - 2, d - s) * gbinom(g - n1, s) * 2 ** s for s in range(d + 1))
    return Fraction((-1) ** (k - a1 - n1) * total)


def vk_closed_form(g: int, k: int) -> list:
    _check_gk(g, k)
    return [_residue_coeff(g, k, r.a, r.n) for r in rows_Mk(k)]


def vk_newton(g: int, k: int) -> list:
    _check_gk(g, k)
    coeffs = heatpoly.newton_coefficients(k, g)
    return [coeffs[(r.a, r.n)] for r in rows_Mk(k)]


def vk_from_pk(k: int) -> list:
    """The kernel of S_k^T read off from the monomial coefficients of p_k."""
    return poly_to_vector(heatpoly.pk(k), k)


# classes

_NAMES = ("alpha", "beta", "gamma", "eta")


def _mono_str(c: MonomialClass) -> str:
    parts = []
    for name, e in zip(_NAMES, (c.i, c.m, c.j, c.n)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


@dataclass
class DefectClass:
    """Rational combination of alpha^i beta^m (4 gamma)^j eta^n."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {m: Fraction(c) for m, c in self.terms.items() if c}

    @property
    def defect(self) -> int | None:
        if not self.terms:
            return None
        return min(m.defect for m in self.terms)

    def coefficient(self, mono: MonomialClass) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def __add__(self, other: DefectClass) -> DefectClass:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return DefectClass(out)

    def scale(self, c) -> DefectClass:
        return DefectClass({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: DefectClass) -> DefectClass:
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return DefectClass(out)

    def __eq__(self, other):
        return isinstance(other, DefectClass) and self.terms == other.terms

    def gamma_terms(self) -> dict:
        """Coefficients with 4 gamma expanded, keyed by (i, m, j, n)."""
        return {(m.i, m.m, m.j, m.n): c * 4 ** m.j for m, c in self.terms.items()}

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda t: (t[0].n, -t[0].m, -t[0].j, -t[0].i))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for mono, c in self.sorted_items():
            c = c * 4 ** mono.j
            body = _mono_str(mono)
            mag = abs(c)
            if mag == 1 and body:
                piece = body
            else:
                num = str(mag.numerator) if mag.denominator == 1 else f"({mag})"
                piece = f"{num}*{body}" if body else num
            if not out:
                out.append(piece if c > 0 else "-" + piece)
            else:
                out.append((" + " if c > 0 else " - ") + piece)
        return "".join(out)

    def to_json(self) -> list:
        return [[[m.i, m.m, m.j, m.n], rat_str(c)] for m, c in self.sorted_items()]


def row_class(k: int, h: int, r: PairIndex) -> MonomialClass:
    return MonomialClass(i=k + h - r.a - r.n, m=r.a - r.n, j=r.n, n=k - r.a)


def col_class(g: int, k: int, h: int, c: PairIndex) -> MonomialClass:
    return MonomialClass(i=3 * g - 3 - k - h - c.a - c.n, m=c.a - c.n, j=c.n, n=k - 1 - c.a)


def class_from_vector(k: int, h: int, rows, vec) -> DefectClass:
    """Undo the row normalization of the matrix and attach the classes."""
    K = k + h
    terms = {}
    for r, v in zip(rows, vec):
        if v:
            w = Fraction(v) * Fraction(-2) ** (K - r.a) / (factorial(K - r.a - r.n) * factorial(r.n))
            terms[row_class(k, h, r)] = w
    return DefectClass(terms)


def normalized_at(cls: DefectClass, mono: MonomialClass) -> DefectClass:
    c = cls.coefficient(mono)
    if not c:
        raise ZeroDivisionError(f"distinguished coefficient of {_mono_str(mono)} is zero")
    return cls.scale(1 / c)


def lowest_defect_Fk(g: int, k: int) -> DefectClass:
    """beta^k + eta F_k from the generating function, normalized at beta^k.

    t^k coefficient of (1+beta t)^(g-k-2) (1+2 beta t)^g
    exp(2 eta t (alpha - 4 gamma t / (1 + 2 beta t))).
    """
    _check_gk(g, k)
    norm = heatpoly.pk_value(k, g, 3 * g - k - 2)
    assert norm != 0, "p_k(g, 3g-k-2) vanished inside the valid range"
    terms = {}
    # exp(...) = sum_{l,n} (2 t alpha eta)^l / l! * (-2 t^2 (4 gamma) eta / (1 + 2 beta t))^n / n!
    for l in range(k + 1):
        for n in range((k - l) // 2 + 1):
            d = k - l - 2 * n
            # t^d coefficient of (1+bt)^(g-k-2) (1+2bt)^(g-n), carried by beta^d
            c = sum(gbinom(g - k - 2, d - s) * gbinom(g - n, s) * 2 ** s for s in range(d + 1))
            w = Fraction(c * 2 ** l * (-2) ** n, factorial(l) * factorial(n))
            if w:
                terms[MonomialClass(i=l, m=d, j=n, n=l + n)] = w
    return DefectClass(terms).scale(1 / norm)


def pairing(g: int, k: int, cls: DefectClass, col: MonomialClass) -> Fraction:
    """Integral over Z of eta^(3g-3-2k) * cls * col."""
    total = Fraction(0)
    for m, c in cls.terms.items():
        total += c * monomial_Z(g, k, m * col)
    return total


def annihilation_check(g: int, k: int, cls: DefectClass, h: int = 0) -> list:
    """Pairings of cls against every column class; all zero for a solution."""
    return [pairing(g, k, cls, col_class(g, k, h, c)) for c in cols_Mk(k)]


def ratio_matrix(g: int, k: int, h: int = 0) -> PairingMatrix:
    """M_{k,h} rebuilt from integrals over Z instead of the closed form."""
    _check_gk(g, k)
    rows, cols = rows_Mkh(k, h) if h else rows_Mk(k), cols_Mk(k)
    K = k + h
    dist = PairIndex(K, 0)
    ent = []
    for r in rows:
        row = []
        for c in cols:
            num = monomial_Z(g, k, row_class(k, h, r) * col_class(g, k, h, c))
            den = monomial_Z(g, k, row_class(k, h, dist) * col_class(g, k, h, c))
            scale = Fraction(-2) ** (K - r.a) / (factorial(K - r.a - r.n) * factorial(r.n))
            row.append(scale * num / den)
        ent.append(row)
    return PairingMatrix(rows, cols, ent, f"M_{k},{h} (integrals)")


# general classes beta^(k-h) (4 gamma)^h + eta F

def redundancy_check(g: int, k: int, h: int) -> bool:
    return 3 * g >= 3 * k + h + 1


@dataclass
class GeneralSolution:
    g: int
    k: int
    h: int
    kernel_dim: int
    distinguished_entry_nonzero: bool
    solution: DefectClass | None
    in_redundancy_range: bool

    @property
    def unique(self) -> bool:
        return self.kernel_dim == 1 and self.distinguished_entry_nonzero


def solve_general(g: int, k: int, h: int) -> GeneralSolution:
    m = build_Mkh(g, k, h)
    ker = nullspace(m)
    dist = len(m.rows) - 1
    nonzero = any(v[dist] for v in ker)
    solution = None
    if len(ker) == 1 and nonzero:
        cls = class_from_vector(k, h, m.rows, ker[0])
        solution = normalized_at(cls, row_class(k, h, m.rows[dist]))
    return GeneralSolution(g, k, h, len(ker), nonzero, solution, redundancy_check(g, k, h))


def build_tildeQ(g: int, k: int, h: int) -> PairingMatrix:
    """Q_{k+h} with the rows a >= k replaced by the kernel basis of S_{k,h}^T.

    The replacement vectors are the coefficients of Z^j p_{k+h-i},
    0 <= j <= i <= h, in lexicographic order of (i, j).
    """
    _check_kh(k, h)
    K = k + h
    q = build_Qk(g, K)
    basis = [poly_to_vector(p, K) for p in heatpoly.kernel_basis_polys(k, h)]
    ent = [list(row) for row in q.entries]
    slots = [i for i, r in enumerate(q.rows) if r.a >= k]
    assert len(slots) == len(basis)
    for i, v in zip(slots, basis):
        ent[i] = list(v)
    return PairingMatrix(q.rows, q.cols, ent, f"Q~_{k},{h}")


def tildeQ_zero_rows(g: int, k: int, h: int) -> list:
    """Indices of zero rows of Q~_{k,h} S_{k,h}."""
    prod_ = build_tildeQ(g, k, h) @ build_Skh(k, h)
    return [i for i, row in enumerate(prod_.entries) if not any(row)]
