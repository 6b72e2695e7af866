"""Exception types shared across the package."""


class M2tError(Exception):
    """Base class for all errors raised by m2tlwe."""


class NotInCycle(M2tError, ValueError):
    """An element is outside the cycle a discrete logarithm was requested in."""


class ParamsTooLarge(M2tError, ValueError):
    pass


class InvalidParams(M2tError, ValueError):
    pass


class DimensionMismatch(M2tError, ValueError):
    pass


class EmptySubset(M2tError, ValueError):
    pass


class IndexOutOfRange(M2tError, IndexError):
    pass


class ModulusMismatch(M2tError, ValueError):
    pass


class SearchExhausted(M2tError, RuntimeError):
    pass


class NotInSubgroup(M2tError, ValueError):
    pass


class DlogFailure(M2tError, ValueError):
    pass


class EmptySample(M2tError, ValueError):
    pass


class DocumentError(M2tError, ValueError):
    """A serialized key or ciphertext document could not be parsed."""
