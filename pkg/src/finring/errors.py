"""Exception types. Every error carries a machine-readable ``code``."""


class RingError(Exception):
    code = "RING_ERROR"

    def __init__(self, message="", code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class CapExceeded(RingError):
    code = "CAP_EXCEEDED"


class NotPrime(RingError):
    code = "NOT_PRIME"


class RingNotFinite(RingError):
    code = "RING_NOT_FINITE"


class BadCoefficientRing(RingError):
    code = "BAD_COEFFICIENT_RING"


class NotAnIdeal(RingError):
    code = "NOT_AN_IDEAL"


class RingMismatch(RingError):
    code = "RING_MISMATCH"


class NotLocal(RingError):
    code = "NOT_LOCAL"


class ImproperExtension(RingError):
    code = "IMPROPER_EXTENSION"


class NotMinimal(RingError):
    code = "NOT_MINIMAL"


class ClassificationFailed(RingError):
    code = "CLASSIFICATION_FAILED"


class EmptySupport(RingError):
    code = "EMPTY_SUPPORT"


class LatticeCapExceeded(RingError):
    code = "LATTICE_CAP_EXCEEDED"

    def __init__(self, message="", partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class UnknownCheck(RingError):
    code = "UNKNOWN_CHECK"


class UnknownFixture(RingError):
    code = "UNKNOWN_FIXTURE"


class UndefinedName(RingError):
    code = "UNDEFINED_NAME"


class ElementNotInRing(RingError):
    code = "ELEMENT_NOT_IN_RING"


class RingSpecSyntaxError(RingError):
    code = "PARSE_ERROR"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
