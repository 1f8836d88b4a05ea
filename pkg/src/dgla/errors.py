"""Exception types.

``InputError`` covers malformed or precondition-violating input (CLI exit
code 2).  ``VerificationError`` is a verified-false mathematical assertion
(exit code 1).  Both carry an optional JSON-friendly ``witness``.
"""


class DglaError(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(DglaError, ValueError):
    pass


class NotAComplexError(InputError):
    pass


class NotSurjectiveError(InputError):
    pass


class WeightCapError(InputError):
    pass


class VerificationError(DglaError):
    pass


class ExtensionError(VerificationError):
    """A claimed free/semifree extension is contradicted by the data."""


class LiftingError(VerificationError):
    """The lifting linear systems have no solution inside the realized window."""
