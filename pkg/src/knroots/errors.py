"""
Exception hierarchy for knroots.

Library code raises these; verification failures are report entries, never
exceptions.
"""


class Error(Exception):
    """Base exception for knroots errors."""

    pass


class InvalidInputError(Error):
    """Malformed matrices, vectors, JSON documents or parameters."""

    pass


class MonoidSpecError(InvalidInputError):
    """A monoid spec string or file could not be parsed."""

    pass


class NotAHomomorphismError(InvalidInputError):
    """Point data that is not multiplicative on the monoid relations."""

    pass


class ConfigurationError(Error):
    """Bad settings or environment values."""

    pass


class ComputationError(Error):
    """Error raised while carrying out a computation."""

    pass


class ResourceLimitError(ComputationError):
    """A desk-scale resource guard was exceeded."""

    pass


class NotPointedError(ComputationError):
    """The cone contains a line."""

    pass


class NotSharpError(ComputationError):
    """The monoid has nonzero units."""

    pass


class TorsionError(ComputationError):
    """A lattice quotient that should be free has torsion."""

    pass


class NotInMonoidError(ComputationError):
    """An element was expected to lie in the monoid but does not."""

    pass


class MonoidMismatchError(ComputationError):
    """Two points or group elements live over different monoids."""

    pass


class GroupMismatchError(ComputationError):
    """A root-of-unity group element and a point of different (P, n)."""

    pass


class NonDivisorError(ComputationError):
    """Tower projection between levels where n does not divide m."""

    pass
