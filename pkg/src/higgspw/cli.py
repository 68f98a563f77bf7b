"""Command-line front end.

Every command prints a JSON report (or CSV for ``wdet-scan``) with exact
rational strings.  Exit status: 0 when all checks pass, 1 when a check
fails, 2 for usage or precision errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import checks as checks_mod
from . import heatpoly as hp
from . import intersect as ix
from . import linalg
from . import pwmatrix as pw
from .exactalg import InsufficientPrecision, InvalidArgument, MultiPoly, rat_str

OUTPUT_ENV = "HIGGSPW_OUTPUT_DIR"


class UsageError(Exception):
    pass


# -- parsing ------------------------------------------------------------------

def parse_poly(text: str) -> MultiPoly:
    """Parse a polynomial in A, G, u, y with exact rational coefficients."""
    import sympy
    from sympy.parsing.sympy_parser import parse_expr, standard_transformations

    names = {v: sympy.Symbol(v) for v in ix.WITTEN.gens}
    try:
        expr = parse_expr(text.replace("^", "**"), local_dict=names,
                          transformations=standard_transformations, evaluate=True)
    except Exception as exc:  # sympy raises a zoo of exception types here
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None
    if expr.has(sympy.Float):
        raise UsageError(f"floating-point coefficients are not allowed: {text!r}")
    extra = expr.free_symbols - set(names.values())
    if extra:
        raise UsageError(f"unknown variables {sorted(map(str, extra))} (allowed: A, G, u, y)")
    try:
        p = sympy.Poly(expr, *[names[v] for v in ix.WITTEN.gens])
    except sympy.PolynomialError:
        raise UsageError(f"not a polynomial: {text!r}") from None
    terms = {}
    for mono, c in p.terms():
        c = sympy.Rational(c)
        terms[tuple(mono)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(ix.WITTEN, terms)


def _poly_value(p: MultiPoly) -> dict:
    return {"text": str(p), "terms": p.to_json()["terms"], "gens": list(p.ring.gens)}


def _result(name, value, provenance) -> dict:
    if isinstance(value, MultiPoly):
        value = _poly_value(value)
    elif isinstance(value, Fraction):
        value = rat_str(value)
    return {"name": name, "value": value, "provenance": provenance}


def _check(name, passed, detail="") -> dict:
    return {"name": name, "status": "pass" if passed else "fail", "detail": detail}


# -- commands -----------------------------------------------------------------

def _q(args):
    return parse_poly(args.Q) if args.Q else ix.canonical_Q()


def cmd_intersect_n(args):
    T = parse_poly(args.T)
    val = ix.integrate_N(args.g, T, _q(args), args.backend)
    return [_result("integral_N", val, f"integrate_N/{args.backend}")], []


def cmd_intersect_z(args):
    results, chk = [], []
    if args.cls:
        if args.k is None:
            raise UsageError("--class needs --k (the eta^(3g-3-2k) prefactor)")
        c = ix.MonomialClass(*args.cls)
        results.append(_result("integral_Z", ix.monomial_Z(args.g, args.k, c), "monomial_Z"))
        return results, chk
    T = parse_poly(args.T)
    Q = _q(args)
    routes = ["split", "kalkman", "topdefect"] if args.route == "all" else [args.route]
    vals = {}
    for route in routes:
        if route == "topdefect" and args.k is None:
            raise UsageError("route topdefect needs --k")
        if route == "kalkman":
            vals[route] = ix.integrate_Z_kalkman(args.g, T, Q, args.max_degree)
        elif route == "topdefect":
            # this route integrates eta^(3g-3-2k) times its argument
            power = 3 * args.g - 3 - 2 * args.k
            if T.is_zero() or any(e[ix.WITTEN.gens.index("u")] < power for e in T.terms):
                raise UsageError(f"route topdefect needs T divisible by u^{power}")
            vals[route] = ix.integrate_Z_topdefect(args.g, args.k, T.div_monomial("u", power), Q)
        else:
            vals[route] = ix.integrate_Z(args.g, T, Q, route, args.k)
        results.append(_result(f"integral_Z[{route}]", vals[route], f"integrate_Z/{route}"))
    if len(vals) > 1:
        ref = vals["split"]
        if args.max_degree is not None:
            ref = ix.truncate_degree(ref, args.max_degree)
        for route, v in vals.items():
            if route == "kalkman":
                chk.append(_check("kalkman == split", v == ref))
            elif route == "topdefect":
                chk.append(_check("topdefect == split", v == vals["split"]))
    return results, chk


def cmd_equiv_m(args):
    T = parse_poly(args.T)
    series = ix.equivariant_integral_M(args.g, T, _q(args), args.u_order, args.max_degree)
    coeffs = [[n, _poly_value(ix.OUT.coerce(c) if not isinstance(c, MultiPoly) else c)]
              for n, c in series.items()]
    value = {"var": "u", "order": series.order, "coefficients": coeffs, "text": str(series)}
    return [_result("equivariant_integral_M", value, "equivariant_integral_M")], []


def _build(which, g, k, h):
    if which == "M":
        return pw.build_Mkh(g, k, h) if h else pw.build_Mk(g, k)
    if which == "Q":
        return pw.build_Qk(g, k + h)
    if which == "Qinv":
        return pw.build_Qk_inv(g, k + h)
    if which == "S":
        return pw.build_Skh(k, h) if h else pw.build_Sk(k)
    if which == "Stilde":
        return pw.build_Sk_tilde(k)
    if which == "tildeQ":
        return pw.build_tildeQ(g, k, h)
    if which == "ratio":
        return pw.ratio_matrix(g, k, h)
    raise UsageError(f"unknown matrix {which!r}")


def _need_g(args):
    if args.g is None:
        raise UsageError("this command needs --g")


def cmd_matrix(args):
    if args.which not in ("S", "Stilde"):
        _need_g(args)
    m = _build(args.which, args.g, args.k, args.h)
    results = [_result(m.name, m.to_json(), f"build/{args.which}")]
    chk = []
    if args.which == "M" and not args.h:
        from math import factorial
        qs = pw.build_Qk(args.g, args.k) @ pw.build_Sk(args.k)
        dm = [[x * factorial(args.k - r.a - r.n) * factorial(r.n) for x in row]
              for r, row in zip(m.rows, m.entries)]
        chk.append(_check("diag((k-a-n)! n!) M_k = Q_k S_k", qs.entries == dm))
    return results, chk


def cmd_kernel(args):
    _need_g(args)
    m = pw.build_Mkh(args.g, args.k, args.h) if args.h else pw.build_Mk(args.g, args.k)
    ker = pw.nullspace(m)
    results = [_result("kernel_basis", [[rat_str(x) for x in v] for v in ker], "nullspace"),
               _result("rows", [[r.a, r.n] for r in m.rows], "index")]
    chk = []
    if not args.h:
        chk.append(_check("dim ker M_k^T = 1", len(ker) == 1, f"dim={len(ker)}"))
        chk.append(_check("closed-form v_k spans the kernel",
                          linalg.same_span(ker, [pw.vk_closed_form(args.g, args.k)])))
        chk.append(_check("Newton v_k spans the kernel",
                          linalg.same_span(ker, [pw.vk_newton(args.g, args.k)])))
    return results, chk


def cmd_solve(args):
    _need_g(args)
    sol = pw.solve_general(args.g, args.k, args.h)
    results = [
        _result("kernel_dim", sol.kernel_dim, "solve_general"),
        _result("distinguished_entry_nonzero", sol.distinguished_entry_nonzero, "solve_general"),
        _result("in_redundancy_range", sol.in_redundancy_range, "redundancy_check"),
    ]
    if sol.solution is not None:
        results.append(_result("solution", {"text": str(sol.solution), "terms": sol.solution.to_json()},
                               "solve_general"))
    chk = []
    if args.h == 0:
        f = pw.lowest_defect_Fk(args.g, args.k)
        results.append(_result("lowest_defect", {"text": str(f), "terms": f.to_json()}, "lowest_defect_Fk"))
        chk.append(_check("kernel solution = generating-function solution", sol.solution == f))
    if sol.in_redundancy_range:
        dq = linalg.det(pw.build_tildeQ(args.g, args.k, args.h).entries)
        results.append(_result("det_tildeQ", dq, "build_tildeQ"))
        if dq != 0:
            chk.append(_check("unique solution when det Q~ != 0", sol.unique))
    return results, chk


def cmd_heat(args):
    results, chk = [], []
    for k in range(args.k_max + 1):
        results.append(_result(f"p_{k}", hp.pk(k), "pk"))
        chk.append(_check(f"heat equation k={k}", hp.heat_equation(k)))
        chk.append(_check(f"alternate form k={k}", hp.pk_alt_forms(k)))
        if k >= 1:
            chk.append(_check(f"vanishes on Gamma_{k}", hp.gamma_vanish(k)))
            chk.append(_check(f"recurrences k={k}", all(hp.pk_identities(k).values())))
    return results, chk


def cmd_wdet_scan(args):
    g_min = args.g_min
    rows = hp.positivity_scan(range(args.k_min, args.k_max + 1), args.h,
                              range(g_min, args.g_max + 1), jobs=args.jobs)
    rows = [r for r in rows if r[2] >= r[0] + 1]
    return rows


def cmd_verify_all(args):
    only = set(args.only) if args.only else None
    crits = checks_mod.run_all(quick=args.quick, only=only)
    results = [_result(f"criterion_{c.number}", c.to_json(), "checks") for c in crits]
    chk = [_check(f"criterion {c.number}: {c.title}", c.passed,
                  "; ".join(x.name for x in c.failures)) for c in crits]
    n, reason = checks_mod.EXCLUDED
    chk.append({"name": f"criterion {n}", "status": "skipped", "detail": reason})
    return results, chk


COMMANDS = {
    "intersect-n": cmd_intersect_n,
    "intersect-z": cmd_intersect_z,
    "equiv-m": cmd_equiv_m,
    "matrix": cmd_matrix,
    "kernel": cmd_kernel,
    "solve": cmd_solve,
    "heat": cmd_heat,
    "wdet-scan": cmd_wdet_scan,
    "verify-all": cmd_verify_all,
}


# -- argument parsing ---------------------------------------------------------

def _common(p):
    p.add_argument("--output", "-o", help="write the report here (relative paths go under $%s)" % OUTPUT_ENV)
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="higgspw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"higgspw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("intersect-n", help="integral over N of T exp(Q)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--T", default="1", help="polynomial in A, G, y (default 1)")
    p.add_argument("--Q", help="polynomial in A, G, y (default -A*y^2/2 - G*y^4/4)")
    p.add_argument("--backend", choices=["sinh", "zagier", "both"], default="sinh")
    _common(p)

    p = sub.add_parser("intersect-z", help="integral over Z")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--T", default="1", help="polynomial in A, G, u, y")
    p.add_argument("--Q")
    p.add_argument("--route", choices=["split", "kalkman", "topdefect", "all"], default="split")
    p.add_argument("--max-degree", type=int, help="total (A,G)-degree cap for the Kalkman route")
    p.add_argument("--class", dest="cls", type=int, nargs=4, metavar=("I", "M", "J", "N"),
                   help="integrate eta^(3g-3-2k) alpha^I beta^M (4 gamma)^J eta^N instead of T")
    _common(p)

    p = sub.add_parser("equiv-m", help="equivariant integral over M as a Laurent series in u")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--T", default="1")
    p.add_argument("--Q")
    p.add_argument("--u-order", type=int, default=0, help="known up to O(u^ORDER)")
    p.add_argument("--max-degree", type=int)
    _common(p)

    p = sub.add_parser("matrix", help="build a pairing or factorization matrix")
    p.add_argument("--which", choices=["M", "Q", "Qinv", "S", "Stilde", "tildeQ", "ratio"], default="M")
    p.add_argument("--g", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, default=0)
    _common(p)

    for name, helptext in (("kernel", "kernel of M^T"), ("solve", "solve for beta^(k-h)(4 gamma)^h + eta F")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--h", type=int, default=0)
        _common(p)

    p = sub.add_parser("heat", help="heat-polynomial checks")
    p.add_argument("--k-max", type=int, default=6)
    _common(p)

    p = sub.add_parser("wdet-scan", help="signs of W_{k,h}(g, 3g-k-h-2)")
    p.add_argument("--h", type=int, nargs="+", default=[1])
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--g-min", type=int, default=2)
    p.add_argument("--g-max", type=int, default=12)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _common(p)

    p = sub.add_parser("verify-all", help="run the acceptance criteria")
    p.add_argument("--quick", action="store_true", help="smaller parameter ranges")
    p.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    _common(p)
    return parser


def _validate(args):
    for name in ("g", "k", "h", "k_max", "g_max", "jobs", "u_order"):
        v = getattr(args, name, None)
        if isinstance(v, int) and name != "u_order" and v < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be nonnegative")
    if getattr(args, "jobs", 1) < 1:
        raise UsageError("--jobs must be at least 1")
    if args.command in ("kernel", "solve", "matrix"):
        if args.k < 1:
            raise UsageError("need k >= 1")
        if not 0 <= args.h <= args.k:
            raise UsageError(f"need 0 <= h <= k, got k={args.k}, h={args.h}")
        if args.g is not None and args.g < args.k + 1:
            raise UsageError(f"need g >= k+1, got g={args.g}, k={args.k}")
    if args.command in ("intersect-n", "intersect-z", "equiv-m") and args.g < 2:
        raise UsageError("need g >= 2")


def _emit(text: str, args):
    if args.output:
        path = args.output
        base = os.environ.get(OUTPUT_ENV)
        if base and not os.path.isabs(path):
            os.makedirs(base, exist_ok=True)
            path = os.path.join(base, path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _query(args) -> dict:
    q = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "timing")}
    return json.loads(json.dumps(q, default=str))


def _scan_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "h", "g", "value", "sign"])
    for k, h, g, v, s in rows:
        w.writerow([k, h, g, rat_str(v), s])
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        _validate(args)
        if args.command == "wdet-scan":
            rows = cmd_wdet_scan(args)
            if args.format == "csv":
                _emit(_scan_csv(rows), args)
                return 0
            results = [_result(f"W[{k},{h}]({g})", v, "positivity_scan") for k, h, g, v, _ in rows]
            chks = []
        else:
            results, chks = COMMANDS[args.command](args)
    except (UsageError, InvalidArgument) as exc:
        print(f"higgspw: error: {exc}", file=sys.stderr)
        return 2
    except InsufficientPrecision as exc:
        print(f"higgspw: insufficient precision: {exc}", file=sys.stderr)
        return 2
    report = {"tool": "higgspw", "version": __version__, "query": _query(args),
              "results": results, "checks": chks}
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    _emit(json.dumps(report, indent=2) + "\n", args)
    return 1 if any(c["status"] == "fail" for c in chks) else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
