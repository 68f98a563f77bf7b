"""Exact scalars, sparse polynomials and truncated Laurent series.

Everything here is exact.  Scalars are :class:`fractions.Fraction`
(``Rational`` below), polynomials are sparse maps from exponent vectors to
rationals, and series carry an explicit truncation order so that a
coefficient outside the known range raises :class:`InsufficientPrecision`
instead of being silently read as zero.

Series coefficients are generic: any element of a *coefficient ring*
(:data:`QQ`, a :class:`PolyRing`, or a :class:`SeriesRing` for nested
expansions) can be used.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Rational = Fraction

# Canonical variable order used for term ordering and serialization.  Names
# not listed here sort after these, alphabetically.
VAR_ORDER = ("alpha", "beta", "gamma", "gamma4", "eta", "A", "G", "Gt", "B", "u")


class ExactAlgError(Exception):
    """Base class for errors raised by the exact algebra layer."""


class RingMismatchError(ExactAlgError, TypeError):
    pass


class NotInvertibleError(ExactAlgError, ZeroDivisionError):
    pass


class InsufficientPrecision(ExactAlgError, ArithmeticError):
    pass


class InvalidArgument(ExactAlgError, ValueError):
    pass


# -- rationals ---------------------------------------------------------------

def rat(x) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise InvalidArgument(f"cannot interpret {x!r} as an exact rational")


def rat_str(q) -> str:
    """Serialize a rational as "num/den", omitting "/1"."""
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(s: str) -> Fraction:
    s = s.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgument(f"not an exact rational: {s!r}") from exc


def binom(n: int, r: int) -> int:
    """Binomial coefficient with the vanishing convention (0 unless 0 <= r <= n)."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def var_key(name: str):
    if name in VAR_ORDER:
        return (0, VAR_ORDER.index(name), "")
    return (1, 0, name)


# -- coefficient rings -------------------------------------------------------

class _Rationals:
    """The field of rationals as a coefficient ring."""

    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise RingMismatchError(f"{x!r} is not a rational")

    def is_zero(self, x) -> bool:
        return x == 0

    def inverse(self, x):
        if x == 0:
            raise NotInvertibleError("division by zero")
        return 1 / Fraction(x)

    def exp(self, x):
        if x != 0:
            raise InvalidArgument("exp of a nonzero rational is not rational")
        return self.one


QQ = _Rationals()


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring over QQ in named variables, optionally truncated.

    ``weights``/``max_weight`` discard every monomial whose weighted degree
    exceeds the bound, and ``max_degree`` does the same for total degree.
    Truncated rings make every polynomial with nonzero constant term a unit.
    """

    gens: tuple
    weights: tuple | None = None
    max_weight: int | None = None
    max_degree: int | None = None

    def __post_init__(self):
        gens = tuple(self.gens)
        if len(set(gens)) != len(gens):
            raise InvalidArgument(f"repeated variable in {gens}")
        order = sorted(range(len(gens)), key=lambda i: var_key(gens[i]))
        object.__setattr__(self, "gens", tuple(gens[i] for i in order))
        if self.weights is not None:
            w = self.weights
            if isinstance(w, Mapping):
                w = tuple(w[g] for g in gens)
            w = tuple(w[i] for i in order)
            if self.max_weight is not None and any(x <= 0 for x in w):
                raise InvalidArgument("truncation weights must be positive")
            object.__setattr__(self, "weights", w)
        elif self.max_weight is not None:
            object.__setattr__(self, "weights", (1,) * len(gens))

    @classmethod
    def of(cls, *names: str) -> PolyRing:
        return cls(tuple(names))

    @property
    def nvars(self) -> int:
        return len(self.gens)

    @property
    def truncated(self) -> bool:
        return self.max_weight is not None or self.max_degree is not None

    @property
    def zero(self) -> MultiPoly:
        return MultiPoly(self, {})

    @property
    def one(self) -> MultiPoly:
        return MultiPoly(self, {(0,) * self.nvars: Fraction(1)})

    def gen(self, name: str) -> MultiPoly:
        try:
            i = self.gens.index(name)
        except ValueError:
            raise InvalidArgument(f"{name!r} is not a variable of {self.gens}") from None
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): Fraction(1)})

    def __call__(self, x) -> MultiPoly:
        return self.coerce(x)

    def coerce(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            if x.ring == self:
                return x
            raise RingMismatchError(f"polynomial over {x.ring.gens} used in ring {self.gens}")
        if isinstance(x, (int, Fraction)):
            if x == 0:
                return self.zero
            return MultiPoly(self, {(0,) * self.nvars: Fraction(x)})
        raise RingMismatchError(f"cannot coerce {x!r} into {self}")

    def convert(self, p: MultiPoly) -> MultiPoly:
        """Re-express ``p`` in this ring, matching variables by name."""
        if isinstance(p, (int, Fraction)):
            return self.coerce(p)
        if p.ring == self:
            return p
        idx = []
        for name in p.ring.gens:
            if name in self.gens:
                idx.append(self.gens.index(name))
            else:
                idx.append(None)
        terms = {}
        for e, c in p.terms.items():
            ne = [0] * self.nvars
            for k, ek in enumerate(e):
                if ek:
                    if idx[k] is None:
                        raise RingMismatchError(
                            f"variable {p.ring.gens[k]!r} is not in ring {self.gens}")
                    ne[idx[k]] = ek
            ne = tuple(ne)
            if self._keep(ne):
                terms[ne] = c
        return MultiPoly(self, terms)

    def _weight(self, e) -> int:
        return sum(map(operator.mul, e, self.weights))

    def _keep(self, e) -> bool:
        if self.max_weight is not None and self._weight(e) > self.max_weight:
            return False
        if self.max_degree is not None and sum(e) > self.max_degree:
            return False
        return True

    def is_zero(self, x) -> bool:
        return not x.terms

    def inverse(self, p: MultiPoly) -> MultiPoly:
        c = p.constant_term()
        if c == 0:
            raise NotInvertibleError(f"{p} has zero constant term")
        if p.is_constant():
            return self.coerce(1 / c)
        if not self.truncated:
            raise NotInvertibleError(f"{p} is not a unit in {self.gens}")
        # p = c(1 + n) with n nilpotent: geometric series terminates.
        n = p * (1 / c) - 1
        term = self.one
        total = self.one
        while term.terms:
            term = -(term * n)
            total = total + term
        return total * (1 / c)

    def exp(self, p: MultiPoly) -> MultiPoly:
        if p.constant_term() != 0:
            raise InvalidArgument("exp needs a nilpotent argument")
        if not p.terms:
            return self.one
        if not self.truncated:
            raise InvalidArgument("exp of a polynomial is only finite in a truncated ring")
        term = self.one
        total = self.one
        i = 0
        while term.terms:
            i += 1
            term = term * p * Fraction(1, i)
            total = total + term
        return total


class MultiPoly:
    """Sparse polynomial with rational coefficients over a :class:`PolyRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict | None = None):
        self.ring = ring
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def _raw(cls, ring, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    @classmethod
    def from_dict(cls, ring: PolyRing, data: Mapping) -> MultiPoly:
        """Build from {exponent tuple or {var: exp} dict: coefficient}."""
        terms = {}
        for key, c in data.items():
            if isinstance(key, Mapping):
                e = [0] * ring.nvars
                for name, k in key.items():
                    e[ring.gens.index(name)] = k
                key = tuple(e)
            key = tuple(key)
            if ring._keep(key):
                terms[key] = terms.get(key, 0) + rat(c)
        return cls(ring, terms)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        z = (0,) * self.ring.nvars
        return all(e == z for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def coeff(self, monomial) -> Fraction:
        if isinstance(monomial, Mapping):
            e = [0] * self.ring.nvars
            for name, k in monomial.items():
                if name not in self.ring.gens:
                    if k:
                        return Fraction(0)
                    continue
                e[self.ring.gens.index(name)] = k
            monomial = tuple(e)
        return self.terms.get(tuple(monomial), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.ring.gens:
            return 0
        i = self.ring.gens.index(var)
        return max(e[i] for e in self.terms)

    def weighted_degree(self, weights: Mapping[str, int]) -> int:
        if not self.terms:
            return -1
        w = [weights.get(g, 0) for g in self.ring.gens]
        return max(sum(map(operator.mul, e, w)) for e in self.terms)

    def variables(self) -> tuple:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.ring.gens[i] for i in sorted(used))

    def sorted_terms(self):
        """Terms in canonical order: lexicographically descending exponents."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"ring mismatch: {self.ring.gens} vs {other.ring.gens}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly._raw(self.ring, {})
            return MultiPoly._raw(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        terms: dict = {}
        add = operator.add
        if ring.max_weight is None and ring.max_degree is None:
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(map(add, e1, e2))
                    s = terms.get(e, 0) + c1 * c2
                    terms[e] = s
        else:
            keep = ring._keep
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(map(add, e1, e2))
                    if keep(e):
                        terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly._raw(ring, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise NotInvertibleError("division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * self.ring.inverse(other)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.ring.inverse(self) ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def div_monomial(self, var: str, k: int = 1) -> MultiPoly:
        """Exact division by ``var**k``; raises if some term is not divisible."""
        i = self.ring.gens.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] < k:
                raise NotInvertibleError(f"{self} is not divisible by {var}^{k}")
            ne = list(e)
            ne[i] -= k
            terms[tuple(ne)] = c
        return MultiPoly._raw(self.ring, terms)

    # -- calculus and substitution ---------------------------------------------

    def diff(self, var: str) -> MultiPoly:
        if var not in self.ring.gens:
            return self.ring.zero
        i = self.ring.gens.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MultiPoly._raw(self.ring, terms)

    def subs(self, mapping: Mapping[str, object], ring: PolyRing | None = None) -> MultiPoly:
        """Substitute polynomials or rationals for variables.

        Values and the result live in ``ring`` (default: this ring); the
        remaining variables are carried over by name.
        """
        target = ring or self.ring
        vals = {}
        for name, v in mapping.items():
            if name not in self.ring.gens:
                continue
            vals[self.ring.gens.index(name)] = target.convert(v) if isinstance(v, MultiPoly) else target.coerce(rat(v))
        keep_idx = [i for i in range(self.ring.nvars) if i not in vals]
        monos = {}
        for i in keep_idx:
            monos[i] = target.gen(self.ring.gens[i]) if self.ring.gens[i] in target.gens else None
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                base = vals[i] if i in vals else monos[i]
                if base is None:
                    raise RingMismatchError(f"variable {self.ring.gens[i]!r} missing in target ring")
                powers[key] = base ** k
            return powers[key]

        total = target.zero
        for e, c in self.terms.items():
            term = target.coerce(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Evaluate at rational values for every variable that occurs."""
        total = Fraction(0)
        idx = []
        for name in self.ring.gens:
            idx.append(rat(point[name]) if name in point else None)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise InvalidArgument(f"no value given for {self.ring.gens[i]!r}")
                    term *= idx[i] ** k
            total += term
        return total

    def __call__(self, **point) -> Fraction:
        return self.evaluate(point)

    def coefficients_in(self, var: str, ring: PolyRing | None = None) -> dict:
        """View as a polynomial in ``var``: {degree: coefficient in ``ring``}.

        ``ring`` defaults to this ring with ``var`` removed.
        """
        if ring is None:
            ring = PolyRing(tuple(g for g in self.ring.gens if g != var))
        if var not in self.ring.gens:
            return {0: ring.convert(self)} if self.terms else {}
        i = self.ring.gens.index(var)
        others = [j for j in range(self.ring.nvars) if j != i]
        sub_ring = PolyRing(tuple(self.ring.gens[j] for j in others))
        parts: dict = {}
        for e, c in self.terms.items():
            parts.setdefault(e[i], {})[tuple(e[j] for j in others)] = c
        return {d: ring.convert(MultiPoly(sub_ring, t)) for d, t in sorted(parts.items())}

    # -- display -------------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                g if k == 1 else f"{g}^{k}" for g, k in zip(self.ring.gens, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = rat_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{rat_str(a)}*{mono}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> dict:
        return {
            "gens": list(self.ring.gens),
            "terms": [[list(e), rat_str(c)] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultiPoly:
        ring = PolyRing(tuple(data["gens"]))
        if tuple(data["gens"]) != ring.gens:
            raise InvalidArgument("serialized variables are not in canonical order")
        return cls(ring, {tuple(e): parse_rat(c) for e, c in data["terms"]})


def poly(expr: Mapping, gens: Iterable[str]) -> MultiPoly:
    """Shorthand constructor: ``poly({(2, 1): -1}, ("A", "y"))``."""
    return MultiPoly.from_dict(PolyRing(tuple(gens)), expr)


# -- truncated Laurent series ------------------------------------------------

_INF = math.inf


class LaurentSeries:
    """Laurent series in one variable with an explicit truncation order.

    The series is ``sum(coeffs[i] * var**(start + i)) + O(var**order)``;
    ``order=None`` marks an exact (finite) expansion.  Stored coefficients
    never have a zero at either end, so ``start`` is the valuation whenever
    the series is nonzero.
    """

    __slots__ = ("var", "ring", "start", "coeffs", "order")

    def __init__(self, var: str, coeffs: Iterable = (), start: int = 0,
                 order: int | None = None, ring=QQ):
        coeffs = [ring.coerce(c) for c in coeffs]
        self._set(var, ring, start, coeffs, order)

    def _set(self, var, ring, start, coeffs, order):
        if order is not None and start + len(coeffs) > order:
            coeffs = coeffs[: max(0, order - start)]
        is_zero = ring.is_zero
        lo = 0
        while lo < len(coeffs) and is_zero(coeffs[lo]):
            lo += 1
        hi = len(coeffs)
        while hi > lo and is_zero(coeffs[hi - 1]):
            hi -= 1
        self.var = var
        self.ring = ring
        self.coeffs = tuple(coeffs[lo:hi])
        self.start = start + lo if self.coeffs else 0
        self.order = order

    @classmethod
    def _make(cls, var, ring, start, coeffs, order):
        s = object.__new__(cls)
        s._set(var, ring, start, coeffs, order)
        return s

    # -- constructors --------------------------------------------------------

    @classmethod
    def gen(cls, var: str, ring=QQ) -> LaurentSeries:
        return cls(var, [ring.one], 1, None, ring)

    @classmethod
    def const(cls, c, var: str, ring=QQ, order: int | None = None) -> LaurentSeries:
        return cls(var, [ring.coerce(c)], 0, order, ring)

    @classmethod
    def from_poly(cls, coeffs: Mapping[int, object], var: str, ring=QQ,
                  order: int | None = None) -> LaurentSeries:
        """Exact series from a sparse {exponent: coefficient} map."""
        if not coeffs:
            return cls(var, [], 0, order, ring)
        lo, hi = min(coeffs), max(coeffs)
        dense = [ring.zero] * (hi - lo + 1)
        for k, c in coeffs.items():
            dense[k - lo] = ring.coerce(c)
        return cls(var, dense, lo, order, ring)

    # -- inspection ----------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.order is None

    def valuation(self):
        """Exponent of the leading term; ``order`` if no term is known; None for exact 0."""
        if self.coeffs:
            return self.start
        return self.order

    def _low(self):
        v = self.valuation()
        return _INF if v is None else v

    def _ord(self):
        return _INF if self.order is None else self.order

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, n: int):
        if self.order is not None and n >= self.order:
            raise InsufficientPrecision(
                f"coefficient of {self.var}^{n} needed but series is only known to "
                f"O({self.var}^{self.order})")
        i = n - self.start
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    __getitem__ = coefficient

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                yield self.start + i, c

    def _check(self, other):
        if not isinstance(other, LaurentSeries) or other.var != self.var:
            raise RingMismatchError("series in different variables")
        if other.ring != self.ring:
            raise RingMismatchError(f"series over {self.ring} and {other.ring}")

    def _is_series_operand(self, other) -> bool:
        return isinstance(other, LaurentSeries) and other.var == self.var

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not self._is_series_operand(other):
            try:
                other = LaurentSeries.const(self.ring.coerce(other), self.var, self.ring)
            except RingMismatchError:
                return NotImplemented
        self._check(other)
        order = min(self._ord(), other._ord())
        order = None if order == _INF else order
        if not other.coeffs:
            return LaurentSeries._make(self.var, self.ring, self.start, list(self.coeffs), order)
        if not self.coeffs:
            return LaurentSeries._make(self.var, self.ring, other.start, list(other.coeffs), order)
        lo = min(self.start, other.start)
        hi = max(self.start + len(self.coeffs), other.start + len(other.coeffs))
        if order is not None:
            hi = min(hi, order)
        zero = self.ring.zero
        out = [zero] * max(0, hi - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.start + i - lo
                if k < len(out):
                    out[k] = out[k] + c
        return LaurentSeries._make(self.var, self.ring, lo, out, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._make(self.var, self.ring, self.start, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not self._is_series_operand(other):
            try:
                other = LaurentSeries.const(self.ring.coerce(other), self.var, self.ring)
            except RingMismatchError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scale(self, c):
        if self.ring.is_zero(c):
            return LaurentSeries._make(self.var, self.ring, 0, [], self.order)
        return LaurentSeries._make(self.var, self.ring, self.start, [x * c for x in self.coeffs], self.order)

    def __mul__(self, other):
        if not self._is_series_operand(other):
            try:
                c = self.ring.coerce(other)
            except RingMismatchError:
                return NotImplemented
            return self._scale(c)
        self._check(other)
        order = min(self._ord() + other._low(), other._ord() + self._low())
        order = None if order == _INF else int(order)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries._make(self.var, self.ring, 0, [], order)
        start = self.start + other.start
        n = len(self.coeffs) + len(other.coeffs) - 1
        if order is not None:
            n = min(n, order - start)
        if n <= 0:
            return LaurentSeries._make(self.var, self.ring, 0, [], order)
        a, b = self.coeffs, other.coeffs
        is_zero = self.ring.is_zero
        out = [self.ring.zero] * n
        lb = len(b)
        for i in range(min(len(a), n)):
            x = a[i]
            if is_zero(x):
                continue
            for j in range(min(lb, n - i)):
                out[i + j] = out[i + j] + x * b[j]
        return LaurentSeries._make(self.var, self.ring, start, out, order)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if not self._is_series_operand(other):
            try:
                c = self.ring.coerce(other)
            except RingMismatchError:
                return NotImplemented
            return self._scale(self.ring.inverse(c))
        return laurent_div(self, other)

    def __rtruediv__(self, other):
        return LaurentSeries.const(self.ring.coerce(other), self.var, self.ring) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.const(self.ring.one, self.var, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self, order: int | None = None) -> LaurentSeries:
        """Multiplicative inverse; the leading coefficient must be a unit.

        For an exact non-monomial input the absolute ``order`` of the result
        must be given.  Otherwise the result is known to ``order - 2*val``.
        """
        if not self.coeffs:
            raise NotInvertibleError("inverse of a series with no known nonzero term")
        v = self.start
        inv_lead = self.ring.inverse(self.coeffs[0])
        if self.order is None:
            if len(self.coeffs) == 1:
                return LaurentSeries._make(self.var, self.ring, -v, [inv_lead], None)
            if order is None:
                raise InvalidArgument("inverse of an exact polynomial needs an explicit order")
            res_order = order
        else:
            res_order = self.order - 2 * v
            if order is not None:
                res_order = min(res_order, order)
        p = res_order + v  # number of coefficients to produce
        a = self.coeffs
        out = []
        is_zero = self.ring.is_zero
        for k in range(max(0, p)):
            if k == 0:
                out.append(inv_lead)
                continue
            acc = self.ring.zero
            for i in range(1, min(k, len(a) - 1) + 1):
                if not is_zero(a[i]):
                    acc = acc + a[i] * out[k - i]
            out.append(-(acc * inv_lead))
        return LaurentSeries._make(self.var, self.ring, -v, out, res_order)

    def exp(self, order: int | None = None) -> LaurentSeries:
        """exp of a series with no negative terms.

        A nonzero constant term is allowed only if the coefficient ring can
        exponentiate it exactly (a nilpotent element of a truncated ring).
        """
        if self.coeffs and self.start < 0:
            raise InvalidArgument("exp of a series with a principal part")
        c0 = self.coefficient(0) if (self.order is None or self.order > 0) else self.ring.zero
        if not self.ring.is_zero(c0):
            try:
                e0 = self.ring.exp(c0)
            except InvalidArgument:
                raise InvalidArgument("exp needs a series with zero constant term") from None
            return (self - c0).exp(order) * e0
        if self.order is None:
            if not self.coeffs:
                return LaurentSeries.const(self.ring.one, self.var, self.ring)
            if order is None:
                raise InvalidArgument("exp of an exact polynomial needs an explicit order")
            res_order = order
        else:
            res_order = self.order if order is None else min(order, self.order)
        n = max(0, res_order)
        a = [self.coefficient(i) if i < self._ord() else self.ring.zero for i in range(n)]
        is_zero = self.ring.is_zero
        out = [self.ring.one] if n else []
        for k in range(1, n):
            acc = self.ring.zero
            for i in range(1, k + 1):
                if not is_zero(a[i]):
                    acc = acc + a[i] * out[k - i] * i
            out.append(acc * Fraction(1, k))
        return LaurentSeries._make(self.var, self.ring, 0, out, res_order)

    def diff(self) -> LaurentSeries:
        out = [c * (self.start + i) for i, c in enumerate(self.coeffs)]
        order = None if self.order is None else self.order - 1
        return LaurentSeries._make(self.var, self.ring, self.start - 1, out, order)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by ``var**k``."""
        order = None if self.order is None else self.order + k
        return LaurentSeries._make(self.var, self.ring, self.start + k, list(self.coeffs), order)

    def truncate(self, order: int) -> LaurentSeries:
        if self.order is not None:
            order = min(order, self.order)
        return LaurentSeries._make(self.var, self.ring, self.start, list(self.coeffs), order)

    def map_coefficients(self, f, ring) -> LaurentSeries:
        return LaurentSeries._make(self.var, ring, self.start, [f(c) for c in self.coeffs], self.order)

    def residue(self):
        return residue(self)

    # -- comparison and display ------------------------------------------------

    def __eq__(self, other):
        """Equality on the range where both sides are known."""
        if not self._is_series_operand(other):
            try:
                other = LaurentSeries.const(self.ring.coerce(other), self.var, self.ring)
            except RingMismatchError:
                return NotImplemented
        if other.ring != self.ring:
            return False
        d = self - other
        return not d.coeffs

    __hash__ = None

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        parts = []
        for k, c in self.items():
            cs = str(c)
            if k == 0:
                parts.append(cs)
                continue
            mono = self.var if k == 1 else f"{self.var}^{k}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        if self.order is not None:
            parts.append(f"O({self.var}^{self.order})")
        return " + ".join(parts) if parts else "0"


TruncSeries = LaurentSeries


class SeriesRing:
    """Laurent series in ``var`` over ``base``, used as a coefficient ring."""

    def __init__(self, var: str, base=QQ):
        self.var = var
        self.base = base

    def __eq__(self, other):
        return isinstance(other, SeriesRing) and (self.var, self.base) == (other.var, other.base)

    def __hash__(self):
        return hash(("SeriesRing", self.var, self.base))

    def __repr__(self):
        return f"SeriesRing({self.var!r}, {self.base!r})"

    @property
    def zero(self):
        return LaurentSeries(self.var, [], 0, None, self.base)

    @property
    def one(self):
        return LaurentSeries.const(self.base.one, self.var, self.base)

    def coerce(self, x):
        if isinstance(x, LaurentSeries):
            if x.var == self.var and x.ring == self.base:
                return x
            raise RingMismatchError(f"series in {x.var} over {x.ring} is not in {self}")
        return LaurentSeries.const(self.base.coerce(x), self.var, self.base)

    def is_zero(self, x) -> bool:
        return not x.coeffs

    def inverse(self, x):
        return x.inverse()

    def exp(self, x):
        return x.exp()


# -- functional interface ------------------------------------------------------

def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a._check(b)
    return a * b


def series_inv(a, order: int | None = None):
    if not isinstance(a, LaurentSeries):
        return QQ.inverse(a) if isinstance(a, (int, Fraction)) else a.ring.inverse(a)
    return a.inverse(order)


def series_exp(a: LaurentSeries, order: int | None = None) -> LaurentSeries:
    return a.exp(order)


def series_hyp(a: LaurentSeries, kind: str, order: int | None = None) -> LaurentSeries:
    """sinh, cosh or tanh of a series with zero constant term."""
    if kind not in ("sinh", "cosh", "tanh"):
        raise InvalidArgument(f"unknown hyperbolic function {kind!r}")
    e = a.exp(order)
    em = (-a).exp(order)
    if kind == "sinh":
        return (e - em) * Fraction(1, 2)
    if kind == "cosh":
        return (e + em) * Fraction(1, 2)
    return laurent_div(e - em, e + em)


def sinh(a, order=None):
    return series_hyp(a, "sinh", order)


def cosh(a, order=None):
    return series_hyp(a, "cosh", order)


def tanh(a, order=None):
    return series_hyp(a, "tanh", order)


def laurent_div(a: LaurentSeries, b: LaurentSeries, order: int | None = None) -> LaurentSeries:
    """a / b, where b has a unit leading coefficient (poles are allowed).

    ``order`` optionally caps the absolute order of the quotient; it is
    required only when both operands are exact and b is not a monomial.
    """
    a._check(b)
    if not b.coeffs:
        raise NotInvertibleError("division by a series with no known nonzero term")
    inv_order = None
    if b.order is None and len(b.coeffs) > 1:
        target = order
        if target is None:
            if a.order is None:
                raise InvalidArgument("quotient of exact polynomials needs an explicit order")
            target = a.order - b.start
        va = a._low()
        inv_order = target - (int(va) if va != _INF else target)
    q = a * b.inverse(inv_order)
    return q if order is None else q.truncate(order)


def substitute(a: LaurentSeries, replacement):
    """Compose: replace the variable of ``a`` by ``replacement``.

    ``replacement`` is either a ring element (evaluation; ``a`` must then be
    a finite polynomial, or the element must be zero) or a series.  A
    truncated ``a`` requires a replacement of positive valuation.
    """
    if not isinstance(replacement, LaurentSeries):
        r = a.ring.coerce(replacement)
        if a.ring.is_zero(r):
            if a.coeffs and a.start < 0:
                raise InvalidArgument("cannot evaluate a pole at zero")
            return a.coefficient(0)
        if a.order is not None:
            raise InvalidArgument("evaluating a truncated series at a nonzero point")
        if a.coeffs and a.start < 0:
            raise InvalidArgument("evaluating a principal part needs a series replacement")
        total = a.ring.zero
        for c in reversed(a.coeffs):
            total = total * r + c
        for _ in range(a.start):
            total = total * r
        return total
    if replacement.ring != a.ring:
        raise RingMismatchError("replacement series over a different coefficient ring")
    r = replacement
    vr = r._low()
    if a.order is not None and not (vr >= 1):
        raise InvalidArgument("composition needs a replacement with zero constant term")
    zero_series = LaurentSeries(r.var, [], 0, None, r.ring)
    if not a.coeffs:
        if a.order is None:
            return zero_series
        bound = a.order * vr
        return LaurentSeries(r.var, [], 0, None if bound == _INF else int(bound), r.ring)
    total = zero_series
    lo = a.start
    hi = a.start + len(a.coeffs)
    pos = LaurentSeries.const(r.ring.one, r.var, r.ring)
    powers = {}
    if lo < 0:
        rinv = r.inverse()
        p = LaurentSeries.const(r.ring.one, r.var, r.ring)
        for k in range(1, -lo + 1):
            p = p * rinv
            powers[-k] = p
    p = pos
    for k in range(0, hi):
        if k > 0:
            p = p * r
        powers[k] = p
    for k, c in a.items():
        total = total + powers[k] * c
    if a.order is not None:
        bound = a.order * vr
        if bound != _INF:
            total = total.truncate(int(bound))
    return total


def residue(a: LaurentSeries):
    """Coefficient of var^-1; raises if the series is not known that far."""
    if a.order is not None and a.order <= -1:
        raise InsufficientPrecision(
            f"residue needs the {a.var}^-1 coefficient but the series is only known "
            f"to O({a.var}^{a.order})")
    return a.coefficient(-1)
