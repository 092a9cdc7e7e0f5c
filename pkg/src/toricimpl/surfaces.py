"""Surface input: the four-polynomial text format and its normalization.

Grammar (whitespace-insensitive, `#` comments):

    x1 = s^3 + t^2
    x2 = 2*s^2 - 1/3*t
    x3 = s^-1*t + s t     # juxtaposition and Laurent exponents allowed
    x4 = 1

Each line defines one of x1..x4 as a signed sum of terms; a term is an
optional rational coefficient times a product of s/t powers.  Parse errors
carry line and column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MissingComponent, ParseError, WrongVariable
from .polynomials import Polynomial, format_poly


def prepare_parameterization(xs):
    """Remove the common monomial content of the four polynomials.

    Returns (translated polynomials, (ds, dt)) where s^ds * t^dt was the
    content; afterwards the union of supports has componentwise minimum 0.
    """
    xs = list(xs)
    if len(xs) != 4:
        raise ValueError("a parameterization needs exactly four polynomials")
    if any(p.is_zero() for p in xs):
        raise ValueError("parameterization components must be nonzero")
    ds = min(p.min_degree_in(0) for p in xs)
    dt = min(p.min_degree_in(1) for p in xs)
    if ds or dt:
        xs = [p.shift(-ds, -dt) for p in xs]
    return xs, (ds, dt)


@dataclass
class SurfaceInput:
    components: tuple          # x1..x4, translated
    shift: tuple               # removed monomial content (ds, dt)
    method: str | None = None
    edge_override: tuple | None = None
    seed: int = 0

    def __iter__(self):
        return iter(self.components)


class _Scanner:
    def __init__(self, text: str, line: int, col0: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.col0 = col0

    def col(self, offset: int = 0) -> int:
        return self.col0 + self.pos + offset

    def error(self, message: str, offset: int = 0):
        raise ParseError(self.line, self.col(offset), message)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def integer(self, signed: bool = False) -> int:
        self.skip_ws()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.error("expected an integer")
        return int(self.text[start:self.pos])


def _parse_term(sc: _Scanner) -> Polynomial:
    coeff = Fraction(1)
    have_coeff = False
    ch = sc.peek()
    if ch.isdigit():
        num = sc.integer()
        if sc.peek() == "/":
            sc.take()
            den = sc.integer()
            if den == 0:
                sc.error("zero denominator")
            coeff = Fraction(num, den)
        else:
            coeff = Fraction(num)
        have_coeff = True
        if sc.peek() == "*":
            sc.take()
    exponents = {"s": 0, "t": 0}
    have_var = False
    while True:
        ch = sc.peek()
        if ch in ("s", "t"):
            sc.take()
            power = 1
            if sc.peek() == "^":
                sc.take()
                power = sc.integer(signed=True)
            exponents[ch] += power
            have_var = True
            if sc.peek() == "*":
                sc.take()
                nxt = sc.peek()
                if nxt not in ("s", "t"):
                    if nxt.isalpha():
                        raise WrongVariable(sc.line, sc.col(),
                                            f"unknown variable {nxt!r}")
                    sc.error("expected a variable after '*'")
            continue
        if ch.isalpha():
            raise WrongVariable(sc.line, sc.col(), f"unknown variable {ch!r}")
        if ch.isdigit():
            sc.error("unexpected number (missing '+', '-' or '*')")
        break
    if not have_coeff and not have_var:
        sc.error("expected a term")
    term = Polynomial.constant(coeff)
    if exponents["s"] or exponents["t"]:
        term = term.shift(exponents["s"], exponents["t"])
    return term


def _parse_expr(sc: _Scanner) -> Polynomial:
    total = Polynomial.zero()
    sign = 1
    ch = sc.peek()
    if ch == "+":
        sc.take()
    elif ch == "-":
        sc.take()
        sign = -1
    while True:
        term = _parse_term(sc)
        total = total + (term if sign > 0 else -term)
        ch = sc.peek()
        if ch == "+":
            sc.take()
            sign = 1
        elif ch == "-":
            sc.take()
            sign = -1
        elif ch == "":
            return total
        else:
            sc.error(f"unexpected {ch!r}")


def parse_input(text: str) -> SurfaceInput:
    """Parse the four-line surface format into a normalized SurfaceInput."""
    components: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        if len(stripped) < 2 or stripped[0] != "x" or not stripped[1].isdigit():
            raise ParseError(lineno, indent + 1, "expected `x<k> = <expr>`")
        k = int(stripped[1])
        if k not in (1, 2, 3, 4):
            raise ParseError(lineno, indent + 2, "component index must be 1..4")
        rest = stripped[2:].lstrip()
        eq_col = indent + 2 + (len(stripped[2:]) - len(rest))
        if not rest.startswith("="):
            raise ParseError(lineno, eq_col + 1, "expected '='")
        if k in components:
            raise ParseError(lineno, indent + 1, f"duplicate definition of x{k}")
        body = rest[1:]
        sc = _Scanner(body, lineno, eq_col + 2)
        poly = _parse_expr(sc)
        if poly.is_zero():
            raise ParseError(lineno, eq_col + 2, f"x{k} must be nonzero")
        components[k] = poly
    for k in (1, 2, 3, 4):
        if k not in components:
            raise MissingComponent(f"x{k}")
    ordered = [components[k] for k in (1, 2, 3, 4)]
    translated, shift = prepare_parameterization(ordered)
    return SurfaceInput(components=tuple(translated), shift=shift)


def format_surface(inp: SurfaceInput) -> str:
    """Inverse of parse_input up to normalization (round-trip stable)."""
    lines = []
    for k, p in enumerate(inp.components, start=1):
        lines.append(f"x{k} = {format_poly(p)}")
    return "\n".join(lines) + "\n"
