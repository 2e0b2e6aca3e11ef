from __future__ import annotations


class HeilbronnError(Exception):
    pass


class InvalidArgumentError(HeilbronnError, ValueError):
    """
    Raised for malformed input: unparsable polynomials or numbers,
    unsupported output formats.
    """


class PreconditionError(HeilbronnError, ValueError):
    """
    Raised when an operation is called outside of its domain,
    e.g. with a composite modulus or a polynomial that is not Eisenstein.
    """


class ConfigError(InvalidArgumentError):
    pass
