"""Exception types shared across the package.

Every failure that carries mathematical meaning gets its own class so that
callers (and the CLI) can distinguish "you asked a malformed question" from
"the computation refused for a principled reason" and report a witness.
"""


class WittforgeError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatch(WittforgeError):
    """Two operands live over different field specifications."""


class NotAField(WittforgeError):
    """A field specification is invalid (composite p, reducible modulus, ...)."""


class UnsupportedCharacteristic(WittforgeError):
    """Characteristic 2 is outside the scope of every quadratic-form routine."""


class BoundsExceeded(WittforgeError):
    """A tower degree, enumeration size, or search cap was exceeded."""


class FactorizationUnsupported(WittforgeError):
    """The requested factorization lies outside the feasible regime."""


class DegenerateForm(WittforgeError):
    """A Gram matrix is singular where a nondegenerate form is required."""


class DegenerateTraceForm(WittforgeError):
    """The trace form of an extension is degenerate (inseparable data)."""


class UnsupportedField(WittforgeError):
    """The operation has no decision procedure over the given field."""


class Inconclusive(WittforgeError):
    """A bounded search exhausted its cap without certifying either answer."""


class RingMismatch(WittforgeError):
    """Complexes or maps over different coefficient rings were combined."""


class GradingInconsistent(WittforgeError):
    """No internal grading makes every differential entry homogeneous."""


class NotHomogeneous(WittforgeError):
    """A polynomial entry is not homogeneous where the grading needs it."""


class NotAChainComplex(WittforgeError):
    """Differentials fail d · d = 0 or have mismatched shapes."""


class NotAChainMap(WittforgeError):
    """Components fail to commute with the differentials."""


class NotRegularSequence(WittforgeError):
    """A section is not regular; carries a nonzero-homology witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParityError(WittforgeError):
    """The requested construction only exists for the other parity."""
