"""Error types shared across the package.

Everything raised on purpose derives from HlfError so callers can catch one
thing at the CLI boundary.  ParseError carries the offset of the offending
character.
"""


class HlfError(Exception):
    pass


class FieldMismatchError(HlfError):
    """Operands live over different field descriptors."""


class ParseError(HlfError):
    def __init__(self, message, text=None, pos=None):
        if pos is not None:
            message = "%s (at position %d)" % (message, pos)
        super().__init__(message)
        self.text = text
        self.pos = pos


class UnknownParameterError(ParseError):
    pass


class ZeroElementError(HlfError):
    """Valuation or decomposition of the zero element was requested."""


class NotIntegralError(HlfError):
    """Residue or reduction applied to an element outside the integer ring."""


class PrecisionExhaustedError(HlfError):
    """A p-adic computation ran out of certified digits."""


class UnsupportedFieldError(HlfError):
    """Descriptor outside the supported constructions."""


class UnsupportedScalarError(HlfError):
    """scale_open got a scalar outside the monomial-times-coefficient class."""


class UnsupportedOpenError(HlfError):
    """Combination of open descriptors with no finitely presented result."""


class UnsupportedFamilyError(HlfError):
    """Sequence family outside the decidable fragment of an operation."""


class ArityMismatchError(HlfError):
    """Point or map arity does not match the presentation."""


class TargetViolationError(HlfError):
    """A designated limit or target fails its own membership constraints."""


class NotFreeError(HlfError):
    """Restriction of scalars needs a free module presentation."""
