"""Exact sparse polynomial arithmetic over the rationals.

A polynomial lives in the Laurent ring Q[s^-1, s, t^-1, t][X1, X2, X3, X4]:
exponents of s and t may be negative, X-exponents never are.  Terms are stored
as a dict mapping exponent tuples (one slot per variable, in the fixed order
``VARS``) to nonzero ``Fraction`` coefficients.  The zero polynomial is the
empty dict.

The canonical term order is graded lexicographic over the fixed variable
order; it drives printing, normalization and exact division.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import DegenerateInput, NotDivisible, UnsupportedVariables

VARS = ("s", "t", "X1", "X2", "X3", "X4")
NVARS = len(VARS)
VAR_INDEX = {name: i for i, name in enumerate(VARS)}
PARAM_VARS = (0, 1)      # s, t
X_VARS = (2, 3, 4, 5)    # X1..X4

Exponents = tuple  # one int per variable in VARS order

_ZERO_EXP = (0,) * NVARS


def _canon_key(exps: Exponents):
    """Graded-lex sort key; bigger key = later in ascending sort."""
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponents, Fraction] | None = None):
        # callers must not pass zero coefficients; constructors below do the
        # cleaning so arithmetic stays allocation-light
        self.terms: dict = dict(terms) if terms else {}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def constant(value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return Polynomial()
        return Polynomial({_ZERO_EXP: c})

    @staticmethod
    def variable(name: str, power: int = 1) -> "Polynomial":
        idx = VAR_INDEX[name]
        if idx in X_VARS and power < 0:
            raise ValueError(f"negative exponent on {name}")
        e = [0] * NVARS
        e[idx] = power
        return Polynomial({tuple(e): Fraction(1)})

    @staticmethod
    def from_terms(pairs: Iterable) -> "Polynomial":
        acc: dict = {}
        for exps, coeff in pairs:
            c = Fraction(coeff)
            if c == 0:
                continue
            key = tuple(exps)
            c += acc.get(key, 0)
            if c == 0:
                acc.pop(key, None)
            else:
                acc[key] = c
        return Polynomial(acc)

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXP in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise DegenerateInput("polynomial is not constant")
        return self.terms[_ZERO_EXP]

    def variables(self) -> set:
        out = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    out.add(i)
        return out

    def uses_params(self) -> bool:
        return any(exps[0] or exps[1] for exps in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def x_degree(self) -> int:
        if not self.terms:
            return 0
        return max(e[2] + e[3] + e[4] + e[5] for e in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return 0
        return max(e[var] for e in self.terms)

    def min_degree_in(self, var: int) -> int:
        if not self.terms:
            return 0
        return min(e[var] for e in self.terms)

    def leading(self):
        """(exponents, coefficient) of the graded-lex largest term."""
        if not self.terms:
            raise DegenerateInput("zero polynomial has no leading term")
        key = max(self.terms, key=_canon_key)
        return key, self.terms[key]

    def sorted_terms(self):
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self.terms.items(), key=lambda kv: _canon_key(kv[0]),
                      reverse=True)

    def support(self, vars_pair=PARAM_VARS) -> set:
        """Exponent pairs of the chosen two variables across all terms."""
        i, j = vars_pair
        return {(e[i], e[j]) for e in self.terms}

    def coefficient_at(self, st_point) -> "Polynomial":
        """Coefficient of s^a*t^b as a polynomial in the remaining variables."""
        a, b = st_point
        acc = {}
        for exps, c in self.terms.items():
            if exps[0] == a and exps[1] == b:
                key = (0, 0) + exps[2:]
                acc[key] = c
        return Polynomial(acc)

    # -- ring operations -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "Polynomial":
        return Polynomial({e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.constant(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if c == 0:
                return Polynomial()
            return Polynomial({e: v * c for e, v in self.terms.items()})
        if not self.terms or not other.terms:
            return Polynomial()
        if len(self.terms) > len(other.terms):
            big, small = self.terms, other.terms
        else:
            big, small = other.terms, self.terms
        out: dict = {}
        for e2, c2 in small.items():
            for e1, c1 in big.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(key)
                if v is None:
                    out[key] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v == 0:
                        del out[key]
                    else:
                        out[key] = v
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial()
        return Polynomial({e: v * c for e, v in self.terms.items()})

    def shift(self, ds: int, dt: int) -> "Polynomial":
        """Multiply by s^ds * t^dt (Laurent translation)."""
        if ds == 0 and dt == 0:
            return self
        return Polynomial({(e[0] + ds, e[1] + dt) + e[2:]: c
                           for e, c in self.terms.items()})

    # -- calculus and substitution -------------------------------------------

    def derivative(self, var) -> "Polynomial":
        idx = var if isinstance(var, int) else VAR_INDEX[var]
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            if k == 0:
                continue
            ne = e[:idx] + (k - 1,) + e[idx + 1:]
            v = out.get(ne, Fraction(0)) + c * k
            if v == 0:
                out.pop(ne, None)
            else:
                out[ne] = v
        return Polynomial(out)

    def evaluate(self, binding: Mapping) -> "Polynomial":
        """Substitute rational values for some variables; exact.

        Raises ZeroDivisionError when a negative exponent meets a zero value.
        """
        idx_binding = {}
        for k, v in binding.items():
            idx = k if isinstance(k, int) else VAR_INDEX[k]
            idx_binding[idx] = Fraction(v)
        out: dict = {}
        for e, c in self.terms.items():
            coeff = c
            ne = list(e)
            for idx, val in idx_binding.items():
                k = e[idx]
                if k == 0:
                    continue
                if val == 0 and k < 0:
                    raise ZeroDivisionError(
                        f"zero substituted for {VARS[idx]}^{k}")
                coeff *= val ** k
                ne[idx] = 0
            if coeff == 0:
                continue
            key = tuple(ne)
            v = out.get(key, Fraction(0)) + coeff
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
        return Polynomial(out)

    def substitute_polys(self, binding: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for X-variables (exponents are nonnegative)."""
        idx_binding = {}
        for k, v in binding.items():
            idx = k if isinstance(k, int) else VAR_INDEX[k]
            if idx in PARAM_VARS:
                raise UnsupportedVariables("only X-variables can take polynomial values")
            idx_binding[idx] = v
        power_cache: dict = {}

        def powered(idx, k):
            key = (idx, k)
            if key not in power_cache:
                power_cache[key] = idx_binding[idx] ** k
            return power_cache[key]

        total = Polynomial()
        for e, c in self.terms.items():
            ne = list(e)
            factor = None
            for idx in idx_binding:
                k = e[idx]
                if k == 0:
                    continue
                ne[idx] = 0
                p = powered(idx, k)
                factor = p if factor is None else factor * p
            term = Polynomial({tuple(ne): c})
            total = total + (term * factor if factor is not None else term)
        return total

    # -- division, content, gcd ----------------------------------------------

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Exact quotient self/divisor; raises NotDivisible otherwise."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Polynomial()
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        # translate Laurent supports to nonnegative s,t exponents
        smin_a, tmin_a = self.min_degree_in(0), self.min_degree_in(1)
        smin_b, tmin_b = divisor.min_degree_in(0), divisor.min_degree_in(1)
        a = self.shift(-smin_a, -tmin_a) if (smin_a or tmin_a) else self
        b = divisor.shift(-smin_b, -tmin_b) if (smin_b or tmin_b) else divisor
        lead_b, lc_b = b.leading()
        quot: dict = {}
        rem = dict(a.terms)
        while rem:
            key = max(rem, key=_canon_key)
            qe = tuple(x - y for x, y in zip(key, lead_b))
            if any(qe[i] < 0 for i in X_VARS) or qe[0] < 0 or qe[1] < 0:
                raise NotDivisible("no exact quotient exists")
            qc = rem[key] / lc_b
            quot[qe] = qc
            for e, c in b.terms.items():
                ke = tuple(x + y for x, y in zip(qe, e))
                v = rem.get(ke, Fraction(0)) - qc * c
                if v == 0:
                    rem.pop(ke, None)
                else:
                    rem[ke] = v
        q = Polynomial(quot)
        ds, dt = smin_a - smin_b, tmin_a - tmin_b
        return q.shift(ds, dt) if (ds or dt) else q

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def normalized(self) -> "Polynomial":
        """Integer-primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.rational_content()
        _, lead = self.leading()
        if lead < 0:
            c = -c
        return self.scale(1 / c)

    def monomial_content(self):
        """(smin, tmin): the largest monomial s^a*t^b dividing self."""
        if not self.terms:
            return (0, 0)
        return (self.min_degree_in(0), self.min_degree_in(1))

    def __repr__(self):
        return f"Polynomial({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


ZERO = Polynomial.zero()
ONE = Polynomial.constant(1)
S = Polynomial.variable("s")
T = Polynomial.variable("t")
X = tuple(Polynomial.variable(f"X{i}") for i in (1, 2, 3, 4))


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Dispatch form of the ring operations, mostly for spec surface parity."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# -- multivariate gcd over the X-variables ------------------------------------

def _check_x_only(p: Polynomial):
    if p.uses_params():
        raise UnsupportedVariables("gcd is defined over X1..X4 only")


def _to_univariate(p: Polynomial, var: int):
    """Dense coefficient list in ``var``, entries polynomials without ``var``."""
    deg = p.degree_in(var)
    coeffs = [dict() for _ in range(deg + 1)]
    for e, c in p.terms.items():
        k = e[var]
        ne = e[:var] + (0,) + e[var + 1:]
        coeffs[k][ne] = c
    return [Polynomial(d) for d in coeffs]


def _from_univariate(coeffs, var: int) -> Polynomial:
    acc = {}
    for k, p in enumerate(coeffs):
        for e, c in p.terms.items():
            key = e[:var] + (k,) + e[var + 1:]
            acc[key] = c
    return Polynomial(acc)


def _uni_degree(coeffs):
    for k in range(len(coeffs) - 1, -1, -1):
        if not coeffs[k].is_zero():
            return k
    return -1


def _uni_trim(coeffs):
    d = _uni_degree(coeffs)
    return coeffs[: d + 1]


def _uni_prem(a, b):
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r, returns r."""
    a = _uni_trim(list(a))
    b = _uni_trim(list(b))
    da, db = len(a) - 1, len(b) - 1
    lc_b = b[db]
    r = list(a)
    e = da - db + 1
    while True:
        dr = _uni_degree(r)
        if dr < db:
            break
        lead = r[dr]
        r = [c * lc_b for c in r]
        for j in range(db + 1):
            r[dr - db + j] = r[dr - db + j] - lead * b[j]
        r = _uni_trim(r)
        e -= 1
    if e > 0:
        f = lc_b ** e
        r = [c * f for c in r]
    return r


def _uni_content(coeffs) -> Polynomial:
    g = ZERO
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            break
    return g if not g.is_zero() else ONE


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """GCD over Q[X1..X4], normalized integer-primitive with positive lead.

    Subresultant polynomial remainder sequence with content/primitive-part
    recursion; the first X-variable present serves as the main variable.
    """
    _check_x_only(a)
    _check_x_only(b)
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    if a.is_constant() or b.is_constant():
        return ONE
    main = None
    avars = a.variables() | b.variables()
    for idx in X_VARS:
        if idx in avars:
            main = idx
            break
    ua = _uni_trim(_to_univariate(a, main))
    ub = _uni_trim(_to_univariate(b, main))
    cont_a = _uni_content(ua)
    cont_b = _uni_content(ub)
    cont = poly_gcd(cont_a, cont_b)
    A = [c.exact_div(cont_a) for c in ua]
    B = [c.exact_div(cont_b) for c in ub]
    if len(A) < len(B):
        A, B = B, A
    # subresultant PRS on the primitive parts
    g = ONE
    h = ONE
    while True:
        delta = (len(A) - 1) - (len(B) - 1)
        R = _uni_prem(A, B)
        if _uni_degree(R) < 0:
            result_coeffs = B
            break
        if _uni_degree(R) == 0:
            result_coeffs = None
            break
        divisor = g * (h ** delta)
        A = B
        B = [c.exact_div(divisor) for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g ** delta).exact_div(h ** (delta - 1))
    if result_coeffs is None:
        return cont.normalized()
    prim_c = _uni_content(result_coeffs)
    result = _from_univariate([c.exact_div(prim_c) for c in result_coeffs], main)
    return (cont * result).normalized()


def poly_power_root(p: Polynomial, hint: int | None = None):
    """Write p ~ c * P^d (P squarefree) and return (P normalized, d).

    Iterates P <- P / gcd(P, dP/dXj) for an X-variable present until the gcd
    is constant; d = deg(p) / deg(P) when that ratio is integral, else 1.
    """
    _check_x_only(p)
    if p.is_zero() or p.is_constant():
        raise DegenerateInput("power root of a constant")
    current = p
    while True:
        var = next((idx for idx in X_VARS if idx in current.variables()), None)
        if var is None:
            raise DegenerateInput("no X-variable present")
        g = poly_gcd(current, current.derivative(var))
        if g.is_constant():
            break
        current = current.exact_div(g)
    root = current.normalized()
    droot = root.total_degree()
    dp = p.total_degree()
    if droot > 0 and dp % droot == 0:
        d = dp // droot
        if hint is not None and hint != d:
            d = hint if _is_power_of(p, root, hint) else d
        if _is_power_of(p, root, d):
            return root, d
    return root, 1


def _is_power_of(p: Polynomial, root: Polynomial, d: int) -> bool:
    try:
        q = p.exact_div(root ** d)
    except NotDivisible:
        return False
    return q.is_constant()


# -- canonical text form -------------------------------------------------------

def format_poly(p: Polynomial, order=None) -> str:
    """Canonical text form: `2*X1^2*X2 - 1/3*X3`, descending graded-lex."""
    if p.is_zero():
        return "0"
    pieces = []
    for exps, coeff in p.sorted_terms():
        mono = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            mono.append(VARS[i] if e == 1 else f"{VARS[i]}^{e}")
        body = "*".join(mono)
        c = coeff
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not body:
            text = str(c)
        elif c == 1:
            text = body
        else:
            text = f"{c}*{body}"
        pieces.append((sign, text))
    first_sign, first_text = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out
