"""Exception hierarchy shared by every module.

The CLI maps these to exit codes: input problems exit with 2, numerical
failures with 3.
"""


class FtcutError(Exception):
    """Base class for all library errors."""

    stage = "ftcut"


class GraphParseError(FtcutError, ValueError):
    stage = "parse"


class GraphValidationError(FtcutError, ValueError):
    stage = "validate"


class CapExceededError(FtcutError, ValueError):
    """An enumeration would exceed its configured cap."""

    stage = "enumerate"


class NumericalError(FtcutError, ArithmeticError):
    """LP / ellipsoid failure: cycling, lost conditioning, bad input numbers."""

    stage = "numerics"


class InvariantViolation(FtcutError, RuntimeError):
    """A property the algorithms guarantee did not hold.

    Raised instead of patching around the situation, since it means either a
    bug or a counterexample to the guarantee being relied on.
    """

    stage = "invariant"
