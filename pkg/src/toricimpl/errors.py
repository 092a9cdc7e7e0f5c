"""Exception types shared across the package."""


class ToricImplError(Exception):
    """Base class for all package errors."""


class NotDivisible(ToricImplError):
    """Exact polynomial division has no polynomial quotient."""


class UnsupportedVariables(ToricImplError):
    """An operation restricted to X-variables received s or t."""


class DegenerateInput(ToricImplError):
    """Input is constant or otherwise carries no usable structure."""


class DegenerateSupport(ToricImplError):
    """The union of supports does not span a 2-dimensional polygon."""


class AssumptionViolated(ToricImplError):
    """An edge-set override breaks connectivity or the B >= 2*B_I bound."""


class SupportOverflow(ToricImplError):
    """A matrix entry would be silently dropped outside its index polytope."""


class NoSuchMinor(ToricImplError):
    """No nonsingular maximal minor contains the required rows/columns."""


class NotImplicitizable(ToricImplError):
    """Every candidate determinant vanished; should not happen for gcd-1 input."""


class InjectivityFailure(ToricImplError):
    """Products of moving planes with coordinates are linearly dependent."""


class VerificationFailed(ToricImplError):
    """A candidate implicit equation does not vanish on the parameterization."""


class EliminationCollapse(ToricImplError):
    """Iterated resultants vanished identically even after reparameterization."""


class SamplingExhausted(ToricImplError):
    """Could not find enough parameter points avoiding the denominator locus."""


class ParseError(ToricImplError):
    """Surface input text is malformed; carries line/column information."""

    def __init__(self, line, col, message):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class MissingComponent(ParseError):
    """One of x1..x4 is absent from the input."""

    def __init__(self, name):
        ParseError.__init__(self, 0, 0, f"missing definition of {name}")


class WrongVariable(ParseError):
    """A parameter variable other than s or t appeared."""
