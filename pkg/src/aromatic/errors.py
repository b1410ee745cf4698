"""Exception hierarchy shared by all modules."""


class AromaticError(Exception):
    pass


class StructureError(AromaticError, ValueError):
    """Malformed parent/successor map or unparsable serialization."""


class DomainError(AromaticError, ValueError):
    """Input outside the domain of an operation (empty label set, label clash, ...)."""


class ColourError(AromaticError, ValueError):
    """Operadic composition into a slot of the wrong colour."""


class BasisMismatchError(AromaticError, KeyError):
    pass


class ComplexInvalidError(AromaticError):
    """Consecutive differentials do not compose to zero."""

    def __init__(self, message, witness=None, degree=None):
        super().__init__(message)
        self.witness = witness
        self.degree = degree


class UnsupportedInputError(AromaticError, ValueError):
    pass


class IncompleteCoefficientsError(AromaticError, KeyError):
    pass


class CapExceededError(AromaticError):
    pass
