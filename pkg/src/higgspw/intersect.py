"""Intersection numbers on the stable-bundle moduli N, equivariant integrals
over the Higgs moduli M, and three routes to integrals over the divisor Z.

Insertions are encoded by "Witten polynomials": ``T`` (degree-zero part) is an
even polynomial in ``y`` whose coefficients may involve ``A``, ``G`` and the
η-channel variable ``u``; ``Q`` (degree-two part) is even in ``y``, divisible
by ``y**2`` and involves ``A`` (and optionally ``G``), e.g. the canonical
``Q = -A*y^2/2 - G*y^4/4``.  Results are polynomials in ``A`` and ``G``.

All residue formulas are weighted homogeneous for the weights
y, u -> 1, A -> -1, G -> -3.  The engines use this to drop a variable:
the N and Z routes set ``A = 1`` (so the leading coefficients of ``sinh(Q')/y``
and ``tanh(Q'/2)/y`` become units), the equivariant route sets ``u = 1`` and
works in ``QQ[A, G]`` truncated by weighted degree.  The dropped variable is
restored from the known total weight.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactalg import (
    QQ,
    InsufficientPrecision,
    InvalidArgument,
    LaurentSeries,
    MultiPoly,
    PolyRing,
    SeriesRing,
    binom,
    laurent_div,
    residue,
    sinh,
    cosh,
    tanh,
    substitute,
)

WEIGHT = {"y": 1, "u": 1, "A": -1, "G": -3}
OUT = PolyRing(("A", "G"))
WITTEN = PolyRing(("A", "G", "u", "y"))
_MAX_RETRIES = 4


def canonical_Q() -> MultiPoly:
    """Q = -A*y^2/2 - G*y^4/4."""
    return MultiPoly.from_dict(WITTEN, {
        (1, 0, 0, 2): Fraction(-1, 2),
        (0, 1, 0, 4): Fraction(-1, 4),
    })


def witten(terms, gens=("A", "G", "u", "y")) -> MultiPoly:
    """Build a Witten polynomial from {exponent tuple: coefficient}."""
    return WITTEN.convert(MultiPoly.from_dict(PolyRing(tuple(gens)), terms))


def as_witten(p) -> MultiPoly:
    if isinstance(p, (int, Fraction)):
        return WITTEN.coerce(p)
    if not isinstance(p, MultiPoly):
        raise InvalidArgument(f"expected a polynomial, got {p!r}")
    return WITTEN.convert(p)


@dataclass(frozen=True)
class MonomialClass:
    """alpha^i * beta^m * (4 gamma)^j * eta^n."""

    i: int = 0
    m: int = 0
    j: int = 0
    n: int = 0

    def __post_init__(self):
        if min(self.i, self.m, self.j, self.n) < 0:
            raise InvalidArgument("class exponents must be nonnegative")

    @property
    def defect(self) -> int:
        return 2 * (self.m + self.j + self.n)

    @property
    def degree(self) -> int:
        return 2 * self.i + 4 * self.m + 6 * self.j + 2 * self.n

    def __mul__(self, other: MonomialClass) -> MonomialClass:
        return MonomialClass(self.i + other.i, self.m + other.m, self.j + other.j, self.n + other.n)


# -- validation --------------------------------------------------------------

def _check_genus(g):
    if not isinstance(g, int) or g < 2:
        raise InvalidArgument(f"genus must be an integer >= 2, got {g!r}")


def _check_window(g, k):
    _check_genus(g)
    if not isinstance(k, int) or not 1 <= k <= g - 1:
        raise InvalidArgument(f"need 1 <= k <= g-1, got g={g}, k={k}")


def _weight(e) -> int:
    return sum(WEIGHT[v] * k for v, k in zip(WITTEN.gens, e))


def _check_T(T, allow_u=True) -> MultiPoly:
    T = as_witten(T)
    iy = WITTEN.gens.index("y")
    iu = WITTEN.gens.index("u")
    for e in T.terms:
        if e[iy] % 2:
            raise InvalidArgument("T must be even in y")
        if e[iu] and not allow_u:
            raise InvalidArgument("T may not involve u here")
    return T


def _check_Q(Q) -> MultiPoly:
    Q = as_witten(Q)
    iy = WITTEN.gens.index("y")
    for e in Q.terms:
        if e[iy] % 2 or e[iy] < 2:
            raise InvalidArgument("Q must be even in y and divisible by y^2")
        if e[WITTEN.gens.index("u")]:
            raise InvalidArgument("Q may not involve u")
        if _weight(e) != 1:
            raise InvalidArgument(
                "Q must be weighted homogeneous (y^e A^a G^b with e - a - 3b = 1)")
    return Q


def _components(T: MultiPoly) -> dict:
    """Split T into weighted-homogeneous parts, keyed by weight."""
    parts: dict = {}
    for e, c in T.terms.items():
        parts.setdefault(_weight(e), {})[e] = c
    return {w: MultiPoly(WITTEN, t) for w, t in sorted(parts.items())}


def _coef_ring(*polys, drop=("y", "u"), truncation=None):
    used = set()
    for p in polys:
        used.update(p.variables())
    gens = tuple(v for v in ("A", "G") if v in used and v not in drop)
    if truncation is None:
        return QQ if not gens else PolyRing(gens)
    max_weight, max_degree = truncation
    return PolyRing(gens, weights={"A": 1, "G": 3}, max_weight=max_weight, max_degree=max_degree)


def _into(ring, p: MultiPoly):
    if ring is QQ:
        if not p.is_constant():
            raise InvalidArgument(f"unexpected variables in {p}")
        return p.constant_term()
    return ring.convert(p)


def _ypoly(P: MultiPoly, ring, subs=None) -> dict:
    """{y-degree: coefficient in ring} after substituting ``subs``."""
    if subs:
        P = P.subs(subs)
    out = {}
    for d, c in P.coefficients_in("y").items():
        v = _into(ring, c)
        if not ring.is_zero(v):
            out[d] = v
    return out


def _tpoly(T: MultiPoly, ring, subs=None) -> dict:
    """{u-degree: {y-degree: coefficient}}."""
    if subs:
        T = T.subs(subs)
    out = {}
    for n, c in T.coefficients_in("u").items():
        yp = _ypoly(WITTEN.convert(c), ring)
        if yp:
            out[n] = yp
    return out


def _ys(coeffs: dict, ring, var="y") -> LaurentSeries:
    return LaurentSeries.from_poly(coeffs, var, ring)


def _dpoly(coeffs: dict, times=1) -> dict:
    for _ in range(times):
        coeffs = {d - 1: c * d for d, c in coeffs.items() if d}
    return coeffs


def _retry(fn, budget):
    """Run ``fn(order)``, doubling the working order on precision failure."""
    for _ in range(_MAX_RETRIES):
        try:
            return fn(budget)
        except InsufficientPrecision:
            budget *= 2
    return fn(budget)


# -- A = 1 dehomogenization ------------------------------------------------------

def _rehomogenize(val, ring, total: int) -> MultiPoly:
    """Turn a value computed at A = 1 into the homogeneous polynomial with
    a + 3b = total."""
    if ring is QQ:
        if val == 0:
            return OUT.zero
        if total < 0:
            raise ArithmeticError("nonzero value in an empty weight space")
        return OUT.coerce(val) * OUT.gen("A") ** total
    out = {}
    ig = ring.gens.index("G") if "G" in ring.gens else None
    for e, c in val.terms.items():
        b = e[ig] if ig is not None else 0
        a = total - 3 * b
        if a < 0:
            raise ArithmeticError("value is not weighted homogeneous")
        out[(a, b)] = c
    return MultiPoly(OUT, out)


def _dehomogenized(T, Q, total_of_weight, kernel, allow_u):
    """Evaluate ``kernel(Tpoly, Qpoly, ring)`` at A = 1 on each homogeneous
    component of T and restore A."""
    T = _check_T(T, allow_u=allow_u)
    Q = _check_Q(Q)
    only_A0 = False
    if Q.is_zero():
        Q = MultiPoly.from_dict(WITTEN, {(1, 0, 0, 2): Fraction(-1, 2)})
        only_A0 = True
    if Q.coeff({"A": 1, "y": 2}) == 0:
        raise InvalidArgument("Q needs a nonzero A*y^2 term for this route")
    ring = _coef_ring(T.subs({"A": 1}), Q.subs({"A": 1}))
    qpoly = _ypoly(Q, ring, {"A": 1})
    result = OUT.zero
    for w, Tw in _components(T).items():
        total = total_of_weight(w)
        if total < 0:
            continue
        val = kernel(_tpoly(Tw, ring, {"A": 1}), qpoly, ring)
        result = result + _rehomogenize(val, ring, total)
    if only_A0:
        result = MultiPoly(OUT, {e: c for e, c in result.terms.items() if e[0] == 0})
    return result


# -- the stable-bundle moduli N ------------------------------------------------

def _n_sinh(g):
    def kernel(tpoly, qpoly, ring):
        t = _ys(tpoly.get(0, {}), ring)
        p1 = _ys(_dpoly(qpoly), ring)
        p2 = _ys(_dpoly(qpoly, 2), ring)

        def run(n):
            den = (p1.exp(n) - (-p1).exp(n)).shift(2 * g - 2)
            form = laurent_div(t * p2 ** g * Fraction(1, 2), den)
            return residue(form)
        return _retry(run, 2 * g + 1)
    return kernel


def _n_zagier(g):
    """Residue in Zagier's variables f, u, w of beta = y^2, rescaled by 2^(-2g)."""
    def kernel(tpoly, qpoly, ring):
        f = {d // 2: c for d, c in tpoly.get(0, {}).items()}
        ub = {}
        wb = {}
        for e, c in qpoly.items():
            # -P''(y) and P''/y^2 - P'/y^3 as polynomials in beta = y^2
            ub[(e - 2) // 2] = ub.get((e - 2) // 2, ring.zero) - c * (e * (e - 1))
            if e >= 4:
                wb[(e - 4) // 2] = wb.get((e - 4) // 2, ring.zero) + c * (e * (e - 2))
        y = LaurentSeries.gen("y", ring)
        beta = y * y

        def at_beta(p):
            return substitute(LaurentSeries.from_poly(p, "b", ring), beta) if p else \
                LaurentSeries("y", [], 0, None, ring)

        fy, uy, wy = at_beta(f), at_beta(ub), at_beta(wb)
        arg = y * uy + y ** 3 * wy

        def run(n):
            den = sinh(arg, n).shift(2 * g - 2)
            form = laurent_div(fy * uy ** g * (-4) ** (g - 1), den)
            return residue(form) * Fraction(1, 2 ** (2 * g))
        return _retry(run, 2 * g + 1)
    return kernel


def integrate_N(g: int, T, P, backend: str = "sinh") -> MultiPoly:
    """Integral over N of T_(0) exp(P_(2)) as a polynomial in A, G.

    ``backend`` is "sinh" (the sinh(P') residue) or "zagier" (the
    residue in Zagier's f, u, w variables); "both" computes the two and
    raises ArithmeticError if they differ.
    """
    _check_genus(g)
    if backend == "both":
        a = integrate_N(g, T, P, "sinh")
        b = integrate_N(g, T, P, "zagier")
        if a != b:
            raise ArithmeticError(f"N backends disagree: {a} vs {b}")
        return a
    kernels = {"sinh": _n_sinh, "zagier": _n_zagier}
    if backend not in kernels:
        raise InvalidArgument(f"unknown backend {backend!r}")
    return _dehomogenized(T, P, lambda w: 3 * g - 3 - w, kernels[backend](g), allow_u=False)


# -- equivariant integrals over M (Kalkman route) ----------------------------------

def _kalkman_local(g, tpoly, qpoly, ring, r, n):
    """Res_{y=r} of the equivariant integrand at u = 1, via y = r + s."""
    s = LaurentSeries.gen("s", ring)
    y = s + r if r else s

    def ev(coeffs):
        if not coeffs:
            return LaurentSeries("s", [], 0, None, ring)
        return substitute(LaurentSeries.from_poly(coeffs, "y", ring), y)

    qp = ev(_dpoly(qpoly))
    qpp = ev(_dpoly(qpoly, 2))
    t = LaurentSeries("s", [], 0, None, ring)
    for deg, yp in tpoly.items():
        t = t + ev(yp)  # u = 1
    one = LaurentSeries.const(ring.one, "s", ring)
    om, op = one - y, one + y
    ratio = laurent_div(om, op, order=n)
    ratio_inv = laurent_div(op, om, order=n)
    big_d = qp.exp(n) * ratio - (-qp).exp(n) * ratio_inv
    bracket = qpp - laurent_div(one * 2, om * op, order=n)
    num = t * bracket ** g * Fraction(1, 2)
    den = big_d * y ** (2 * g - 2) * (om * op) ** (g - 1)
    return residue(laurent_div(num, den))


def _kalkman_parts(g, T, Q, u_order, max_degree=None):
    _check_genus(g)
    T = _check_T(T)
    Q = _check_Q(Q)
    parts = {0: {}, 1: {}, -1: {}}
    for w, Tw in _components(T).items():
        shift = w - (6 * g - 6)  # u-exponent = a + 3b + shift
        dmax = u_order - 1 - shift
        if dmax < 0:
            continue
        ring = _coef_ring(Tw, Q, truncation=(dmax, max_degree))
        tpoly = _tpoly(Tw, ring, {"u": 1})
        qpoly = _ypoly(Q, ring)
        if not tpoly:
            continue
        for r in (0, 1, -1):
            val = _retry(lambda n: _kalkman_local(g, tpoly, qpoly, ring, r, n), 2 * g + 2)
            for e, c in val.terms.items():
                mono = dict(zip(ring.gens, e))
                a, b = mono.get("A", 0), mono.get("G", 0)
                key = a + 3 * b + shift
                acc = parts[r].setdefault(key, OUT.zero)
                parts[r][key] = acc + MultiPoly.from_dict(OUT, {(a, b): c})
    return {r: LaurentSeries.from_poly(d, "u", OUT, order=u_order) for r, d in parts.items()}


def boundary_residues(g: int, T, Q, u_order: int, max_degree=None) -> dict:
    """The three residues of the equivariant integrand (keys "0", "u", "-u")
    as Laurent series in u."""
    parts = _kalkman_parts(g, T, Q, u_order, max_degree)
    return {"0": parts[0], "u": parts[1], "-u": parts[-1]}


def equivariant_integral_M(g: int, T, Q, u_order: int, max_degree: int | None = None) -> LaurentSeries:
    """Equivariant integral over M of T_(0) exp(Q_(2)) as a Laurent series in u.

    Coefficients are exact polynomials in A, G; ``max_degree`` optionally
    drops monomials of total (A, G)-degree above the bound.
    """
    parts = _kalkman_parts(g, T, Q, u_order, max_degree)
    return parts[0] + parts[1] + parts[-1]


def integrate_Z_kalkman(g: int, T, Q, max_degree: int | None = None) -> MultiPoly:
    """Integral over Z as minus the u-residue of the equivariant integral."""
    return -residue(equivariant_integral_M(g, T, Q, 0, max_degree))


# -- the split residue route ----------------------------------------------------

def _split_second(g, tpoly, qp, qpp, ring, n):
    y = LaurentSeries.gen("y", ring)
    th = tanh(qp * Fraction(1, 2), n)
    ch = cosh(qp * Fraction(1, 2), n)
    yth = y * th
    tsub = LaurentSeries("y", [], 0, None, ring)
    for k, yp in tpoly.items():
        tsub = tsub + _ys(yp, ring) * yth ** k
    num = tsub * ch ** (2 * g - 4) * (-(y * qpp) - sinh(qp, n)) ** g * Fraction(1, 8)
    den = th ** (g - 1)
    return residue(laurent_div(num, den).shift(-(6 * g - 6)))


def _split_first(g, tpoly, qp, qpp, ring, n):
    if all(k >= g - 1 for k in tpoly):
        return ring.zero
    inner = SeriesRing("y", ring)
    y = LaurentSeries.gen("y", ring)
    half = qp * Fraction(1, 2)
    sh_half, ch_half = sinh(half, n), cosh(half, n)
    th = laurent_div(sh_half, ch_half)
    ycoth = laurent_div(y * ch_half, sh_half)
    outer_order = g - 1
    uu = LaurentSeries.gen("u", inner)
    u_minus_yth = uu - y * th
    u_minus_ycoth = uu - ycoth
    u2_y2 = uu * uu - y * y
    t = LaurentSeries("u", [], 0, None, inner)
    for k, yp in tpoly.items():
        t = t + uu ** k * _ys(yp, ring)
    numer = t * (u2_y2 * qpp - uu * 2) ** g
    denom = (u_minus_yth.inverse(outer_order) * u_minus_ycoth.inverse(outer_order)
             * u2_y2.inverse(outer_order) ** (2 * g - 2))
    scal = laurent_div(LaurentSeries.const(Fraction(-1, 4), "y", ring), sinh(qp, n)).shift(-(2 * g - 2))
    form = (numer * denom * scal).shift(-(g - 1))
    return residue(residue(form))


def _split_kernel(g):
    def kernel(tpoly, qpoly, ring):
        qp = _ys(_dpoly(qpoly), ring)
        qpp = _ys(_dpoly(qpoly, 2), ring)
        second = _retry(lambda n: _split_second(g, tpoly, qp, qpp, ring, n), 6 * g + 2)
        first = _retry(lambda n: _split_first(g, tpoly, qp, qpp, ring, n), 10 * g + 4)
        return first + second
    return kernel


def integrate_Z_split(g: int, T, Q, parts: bool = False):
    """Integral over Z of T_(0) exp(Q_(2)) by the two-term residue formula.

    With ``parts=True`` returns (first term, second term).
    """
    _check_genus(g)
    if parts:
        first = _dehomogenized(T, Q, lambda w: 6 * g - 7 - w, _split_only(g, "first"), True)
        second = _dehomogenized(T, Q, lambda w: 6 * g - 7 - w, _split_only(g, "second"), True)
        return first, second
    return _dehomogenized(T, Q, lambda w: 6 * g - 7 - w, _split_kernel(g), allow_u=True)


def _split_only(g, which):
    def kernel(tpoly, qpoly, ring):
        qp = _ys(_dpoly(qpoly), ring)
        qpp = _ys(_dpoly(qpoly, 2), ring)
        if which == "first":
            return _retry(lambda n: _split_first(g, tpoly, qp, qpp, ring, n), 10 * g + 4)
        return _retry(lambda n: _split_second(g, tpoly, qp, qpp, ring, n), 6 * g + 2)
    return kernel


# -- the top-defect route -------------------------------------------------------

def _r_factor(g, k, qp, qpp, n):
    half = qp * Fraction(1, 2)
    a = sinh(half, n).shift(-1)
    b = cosh(half, n)
    c = qpp + sinh(qp, n).shift(-1)
    return a ** (2 * g - 2 * k - 2) * b ** (2 * k - 2) * c ** g * Fraction((-1) ** g, 8)


def integrate_Z_topdefect(g: int, k: int, T, Q) -> MultiPoly:
    """Integral over Z of eta^(3g-3-2k) T_(0) exp(Q_(2)); the u-channel of T
    is evaluated at u = y*tanh(Q'/2)."""
    _check_window(g, k)
    T = _check_T(T)
    Q = _check_Q(Q)
    if T.is_zero():
        return OUT.zero
    ring = _coef_ring(T, Q)
    tpoly = _tpoly(T, ring)
    qpoly = _ypoly(Q, ring)
    y = LaurentSeries.gen("y", ring)
    qp = _ys(_dpoly(qpoly), ring)
    qpp = _ys(_dpoly(qpoly, 2), ring)
    n = 4 * k + 1
    yth = y * tanh(qp * Fraction(1, 2), n)
    tsub = LaurentSeries("y", [], 0, None, ring)
    for d, yp in tpoly.items():
        tsub = tsub + _ys(yp, ring) * yth ** d
    val = residue((tsub * _r_factor(g, k, qp, qpp, n)).shift(-(4 * k - 1)))
    return OUT.convert(val) if ring is not QQ else OUT.coerce(val)


def rtilde_at_zero(g: int, k: int) -> MultiPoly:
    """R_{g,k} with G = Gt/y^2, evaluated at y = 0, as a polynomial in A, Gt."""
    _check_window(g, k)
    ring = PolyRing(("A", "Gt"))
    A, Gt = ring.gen("A"), ring.gen("Gt")
    y = LaurentSeries.gen("y", ring)
    # Q' = -A y - G y^3 and Q'' = -A - 3 G y^2 become -(A + Gt) y and -A - 3 Gt.
    qp = y * (-(A + Gt))
    qpp = LaurentSeries.const(-A - Gt * 3, "y", ring)
    return _r_factor(g, k, qp, qpp, 2).coefficient(0)


@lru_cache(maxsize=None)
def _topdefect_monomial(g, k, m, n) -> MultiPoly:
    T = MultiPoly.from_dict(WITTEN, {(0, 0, n, 2 * m): 1})
    return integrate_Z_topdefect(g, k, T, canonical_Q())


def monomial_Z(g: int, k: int, c: MonomialClass) -> Fraction:
    """Integral over Z of eta^(3g-3-2k) alpha^i (4 gamma)^j beta^m eta^n."""
    _check_window(g, k)
    total = Fraction(0)
    for l in range(c.j + 1):
        gen = _topdefect_monomial(g, k, c.m + l, c.n)
        coeff = gen.coeff((c.i + l, c.j - l))
        if coeff:
            total += binom(c.j, l) * (-1) ** l * factorial(c.i + l) * factorial(c.j - l) * coeff
    return total


def closed_form_pairing(g: int, a1: int, n1: int, a2: int, n2: int) -> Fraction:
    """Closed form of the top-defect pairing of F_{a1,n1} with P_{a2,n2}."""
    top = 3 * g - 3 - a1 - a2 - n1 - n2
    if top < 0 or n1 + n2 < 0:
        return Fraction(0)
    sign = (-1) ** (a1 + a2 + 1)
    return (sign * Fraction(2) ** (a1 + a2 - g) * factorial(top)
            * factorial(n1 + n2) * binom(g, n1 + n2))


def integrate_Z(g: int, T, Q, route: str = "split", k: int | None = None, max_degree=None) -> MultiPoly:
    """Dispatch to one of the Z routes ("kalkman", "split", "topdefect")."""
    if route == "kalkman":
        return integrate_Z_kalkman(g, T, Q, max_degree)
    if route == "split":
        return integrate_Z_split(g, T, Q)
    if route == "topdefect":
        if k is None:
            raise InvalidArgument("the top-defect route needs k")
        return integrate_Z_topdefect(g, k, T, Q)
    raise InvalidArgument(f"unknown route {route!r}")


def truncate_degree(p: MultiPoly, max_degree: int) -> MultiPoly:
    return MultiPoly(p.ring, {e: c for e, c in p.terms.items() if sum(e) <= max_degree})
