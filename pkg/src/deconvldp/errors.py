"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: ParameterError -> 2, DataError -> 3,
NumericalError -> 4.
"""


class DeconvLdpError(Exception):
    pass


class ParameterError(DeconvLdpError, ValueError):
    """An argument violates a precondition (bad epsilon, bandwidth, shape...)."""


class DataError(DeconvLdpError, ValueError):
    """Input data is malformed or inconsistent with its declared support."""


class NumericalError(DeconvLdpError, ArithmeticError):
    """A computation failed numerically (rank deficiency, degenerate CV...)."""
