"""Discrete heat polynomials p_k(X, Z) and the determinants built from them.

p_k is the t^k coefficient of (1+t)^(Z-2X) (1+2t)^X.  It has weighted degree
k for deg Z = 1, deg X = 2, vanishes on the grid Gamma_k, and solves the
discrete heat equation D_{Z,-1}^2 p = -D_X p.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .exactalg import InvalidArgument, MultiPoly, PolyRing, binom

XZ = PolyRing(("X", "Z"))
X = XZ.gen("X")
Z = XZ.gen("Z")
WEIGHTS = {"X": 2, "Z": 1}

OPS = ("D_Z", "D_X", "D_Z,-1", "D_X,-1")


def cpoly(w: MultiPoly, j: int) -> MultiPoly:
    """Binomial coefficient C(w, j) as a polynomial in w."""
    if j < 0:
        return XZ.zero
    out = XZ.one
    for r in range(j):
        out = out * (w - r)
    fact = 1
    for r in range(2, j + 1):
        fact *= r
    return out / fact


@lru_cache(maxsize=None)
def pk(k: int) -> MultiPoly:
    if k < 0:
        return XZ.zero
    return sum((cpoly(X, i) * cpoly(Z - 2 * X, k - i) * 2 ** i for i in range(k + 1)), XZ.zero)


@lru_cache(maxsize=None)
def pk_alt(k: int) -> MultiPoly:
    """The t^k coefficient of (1+t)^X (1-t)^(X-Z+k-1)."""
    if k < 0:
        return XZ.zero
    m = X - Z + (k - 1)
    return sum((cpoly(X, i) * cpoly(m, k - i) * (-1) ** (k - i) for i in range(k + 1)), XZ.zero)


def pk_value(k: int, x, z) -> Fraction:
    return pk(k).evaluate({"X": x, "Z": z})


def shift(p: MultiPoly, dx=0, dz=0) -> MultiPoly:
    """p(X + dx, Z + dz)."""
    if not dx and not dz:
        return p
    return p.subs({"X": X + dx, "Z": Z + dz})


def diff_op(p: MultiPoly, op: str) -> MultiPoly:
    if op == "D_Z":
        return shift(p, dz=1) - p
    if op == "D_X":
        return shift(p, dx=1) - p
    if op == "D_Z,-1":
        return shift(p, dz=-1) - p
    if op == "D_X,-1":
        return shift(p, dx=-1) - p
    raise InvalidArgument(f"unknown difference operator {op!r}; expected one of {OPS}")


def diff_ops(p: MultiPoly, op: str, times: int = 1) -> MultiPoly:
    for _ in range(times):
        p = diff_op(p, op)
    return p


def weighted_degree(p: MultiPoly) -> int:
    return p.weighted_degree(WEIGHTS)


def gamma_grid(k: int) -> list:
    """Integer points with X >= 0 and 2X <= Z <= X+k-1."""
    return [(x, z) for x in range(max(k, 0)) for z in range(2 * x, x + k)]


def gamma_vanish(k: int) -> bool:
    p = pk(k)
    return all(p.evaluate({"X": x, "Z": z}) == 0 for x, z in gamma_grid(k))


def pk_alt_forms(k: int) -> bool:
    return pk(k) == pk_alt(k)


def heat_equation(k: int) -> bool:
    p = pk(k)
    return diff_ops(p, "D_Z,-1", 2) == -diff_op(p, "D_X")


def pk_identities(k: int) -> dict:
    """The three recurrences used for the h = 1 positivity argument."""
    p, p1, pm = pk(k), pk(k + 1), pk(k - 1)
    return {
        "raise": (k + 1) * p1 == X * shift(p, -1, -2) + (Z - X - k) * p,
        "x_shift": shift(p, dx=-1) == shift(pm, -2, -2) + shift(p, -2, -1),
        "z_shift": p == shift(p, dz=-1) + shift(pm, dz=-1),
    }


def newton_coefficients(k: int, g: int) -> dict:
    """(a1, n1) -> (-1)^l D_Z^l D_{X,-1}^n1 p_k at (g, 3g-k-2), l = k-a1-n1."""
    out = {}
    x0, z0 = g, 3 * g - k - 2
    for n1 in range(k // 2 + 1):
        base = diff_ops(pk(k), "D_X,-1", n1)
        for a1 in range(n1, k - n1 + 1):
            l = k - a1 - n1
            val = diff_ops(base, "D_Z", l).evaluate({"X": x0, "Z": z0})
            out[(a1, n1)] = (-1) ** l * val
    return out


def newton_reconstruct(k: int, g: int) -> MultiPoly:
    """Rebuild p_k from its differences at (g, 3g-k-2)."""
    total = XZ.zero
    for (a1, n1), c in newton_coefficients(k, g).items():
        l = k - a1 - n1
        total = total + cpoly((3 * g - 3 + l - k) - Z, l) * cpoly(g - X, n1) * c
    return total


def vanishing_space_dim(k: int) -> int:
    """Dimension of weighted-degree <= k polynomials vanishing on Gamma_k."""
    monos = [(a, b) for a in range(k // 2 + 1) for b in range(k - 2 * a + 1)]
    rows = [[Fraction(x) ** a * Fraction(z) ** b for a, b in monos] for x, z in gamma_grid(k)]
    return len(monos) - (linalg.rank(rows) if rows else 0)


# Kernel bases for S_{k,h}

def kernel_pairs(h: int) -> list:
    """(i, j) with 0 <= j <= i <= h in lexicographic order."""
    return [(i, j) for i in range(h + 1) for j in range(i + 1)]


def kernel_basis_polys(k: int, h: int) -> list:
    if not 0 <= h <= k:
        raise InvalidArgument(f"need 0 <= h <= k, got k={k}, h={h}")
    return [Z ** j * pk(k + h - i) for i, j in kernel_pairs(h)]


def column_grid(k: int) -> list:
    """Evaluation points (n2, a2+n2) of the columns 0 <= n2 <= a2 <= k-1."""
    return [(n2, a2 + n2) for a2 in range(k) for n2 in range(a2 + 1)]


def t_matrix(k: int, h: int) -> list:
    """Evaluation matrix certifying independence of the kernel basis."""
    rows = []
    for i, j in kernel_pairs(h):
        p = cpoly(Z - (h + k - j), j) * pk(k + h - i)
        rows.append([p.evaluate({"X": h - b, "Z": h + k - b + a})
                     for b in range(h + 1) for a in range(b + 1)])
    return rows


def kernel_basis_independent(k: int, h: int) -> bool:
    return linalg.det(t_matrix(k, h)) != 0


# Determinants W_{k,h}

def _laplace(mat) -> MultiPoly:
    n = len(mat)
    memo = {}

    def minor(r, cols):
        if r == n:
            return XZ.one
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = XZ.zero
        sign = 1
        for c in cols:
            entry = mat[r][c]
            if not entry.is_zero():
                rest = tuple(x for x in cols if x != c)
                term = entry * minor(r + 1, rest)
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def w_matrix(k: int, h: int, form: str = "heat") -> list:
    """Entries of W_{k,h}.

    ``heat``: p_{k+j}(X-i, Z).  ``literal``: p_k(X-h+i, Z+j), which by
    p_k(X, Z+1) - p_k(X, Z) = p_{k-1}(X, Z) equals det p_{k-j}(X-h+i, Z)
    and degenerates already at k = h = 1.
    """
    if form == "heat":
        return [[shift(pk(k + j), dx=-i) for j in range(h + 1)] for i in range(h + 1)]
    if form == "literal":
        return [[shift(pk(k), i - h, j) for j in range(h + 1)] for i in range(h + 1)]
    raise InvalidArgument(f"unknown determinant form {form!r}")


def _w_entry(k, h, i, j, x, z, form):
    if form == "heat":
        return pk_value(k + j, x - i, z)
    return pk_value(k, x - h + i, z + j)


def w_value(k: int, h: int, x, z, form: str = "heat") -> Fraction:
    """W_{k,h}(x, z) by evaluating the entries first."""
    if form not in ("heat", "literal"):
        raise InvalidArgument(f"unknown determinant form {form!r}")
    return linalg.det([[_w_entry(k, h, i, j, x, z, form) for j in range(h + 1)]
                       for i in range(h + 1)])


def interpolate(values, dx: int, dz: int) -> MultiPoly:
    """Newton interpolation from f(x, z) on the box [0, dx] x [0, dz]."""
    table = [[Fraction(values(x, z)) for z in range(dz + 1)] for x in range(dx + 1)]
    for x in range(dx + 1):
        row = table[x]
        for level in range(1, dz + 1):
            for z in range(dz, level - 1, -1):
                row[z] -= row[z - 1]
    for z in range(dz + 1):
        for level in range(1, dx + 1):
            for x in range(dx, level - 1, -1):
                table[x][z] -= table[x - 1][z]
    total = XZ.zero
    bx = [cpoly(X, a) for a in range(dx + 1)]
    bz = [cpoly(Z, b) for b in range(dz + 1)]
    for a in range(dx + 1):
        for b in range(dz + 1):
            if table[a][b]:
                total = total + bx[a] * bz[b] * table[a][b]
    return total


@lru_cache(maxsize=None)
def W_det(k: int, h: int, method: str = "auto", form: str = "heat") -> MultiPoly:
    """The (h+1) x (h+1) determinant W_{k,h} as a polynomial in X, Z."""
    if h < 0:
        raise InvalidArgument("h must be nonnegative")
    if method == "auto":
        method = "laplace" if h <= 4 else "interpolate"
    if method == "laplace":
        return _laplace(w_matrix(k, h, form))
    if method == "interpolate":
        # each entry has weighted degree at most k + h, so X-degree <= (k+h)/2
        deg = (h + 1) * (k + h)
        return interpolate(lambda x, z: w_value(k, h, x, z, form), deg // 2, deg)
    raise InvalidArgument(f"unknown method {method!r}")


def W0(k: int) -> MultiPoly:
    return shift(pk(k), dx=-1) * shift(pk(k - 1), -1, -2)


def W1(k: int) -> MultiPoly:
    return shift(pk(k + 1), dx=-1) * shift(pk(k - 2), -1, -2)


def h1_recurrence(k: int) -> bool:
    if k < 2:
        raise InvalidArgument("the recurrence needs k >= 2")
    lhs = (k - 1) * W0(k) - (k + 1) * W1(k)
    return lhs == 2 * (X - 1) * shift(W_det(k - 1, 1), -1, -2)


def w_split_matches(k: int) -> bool:
    """W_{k,1} equals W0 - W1."""
    return W_det(k, 1) == W0(k) - W1(k)


def sign(q: Fraction) -> str:
    return "positive" if q > 0 else "negative" if q < 0 else "zero"


def wdet_at_point(k: int, h: int, g: int) -> Fraction:
    return w_value(k, h, g, 3 * g - k - h - 2)


def positivity_scan(k_values, h_values, g_values, jobs: int = 1) -> list:
    """Exact W_{k,h}(g, 3g-k-h-2) with signs; rows (k, h, g, value, sign)."""
    tasks = [(k, h, g) for k in k_values for h in h_values for g in g_values if h <= k]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_scan_one, tasks, chunksize=4))
    else:
        values = [_scan_one(t) for t in tasks]
    return [(k, h, g, v, sign(v)) for (k, h, g), v in zip(tasks, values)]


def _scan_one(task) -> Fraction:
    return wdet_at_point(*task)


def b_matrix(k: int, h: int, x, z) -> list:
    """B_{k,h} at (x, z): rows (i, j), columns 0 <= n <= m <= h.

    Row (i, j) evaluates (Z-m)^j p_{k+h-i}(X-n, Z-m), i.e. the row
    polynomial Z^j p_{k+h-i} at the shifted point (X-n, Z-m).
    """
    cols = [(n, m) for m in range(h + 1) for n in range(m + 1)]
    rows = []
    for i, j in kernel_pairs(h):
        p = pk(k + h - i)
        rows.append([Fraction(z - m) ** j * p.evaluate({"X": x - n, "Z": z - m}) for n, m in cols])
    return rows


def det_tildeQ_relation(k: int, h: int, g_samples) -> dict:
    """Compare det Q~_{k,h} with det B_{k,h} and with a product of W's.

    Returns the raw determinants and the two ratios per g, plus whether each
    ratio is the same at every sample where it is defined.
    """
    from .pwmatrix import build_tildeQ

    rows = []
    for g in g_samples:
        dq = linalg.det(build_tildeQ(g, k, h).entries)
        db = linalg.det(b_matrix(k, h, g, 3 * g - 2 - k))
        prod = Fraction(1)
        for i in range(h + 1):
            prod *= w_value(k, i, g, 3 * g - k - i - 2)
        rows.append({
            "g": g,
            "det_tildeQ": dq,
            "det_B": db,
            "prod_W": prod,
            "ratio_B": dq / db if db else None,
            "ratio_W": dq / prod if prod else None,
        })
    report = {"k": k, "h": h, "samples": rows}
    for key in ("ratio_B", "ratio_W"):
        vals = [r[key] for r in rows]
        report[key + "_constant"] = None not in vals and len(set(vals)) == 1
    return report
