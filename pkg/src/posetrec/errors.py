"""Exception types shared across the package.

Each class carries the process exit code the CLI maps it to.
"""


class PosetrecError(Exception):
    exit_code = 1


class ParseError(PosetrecError, ValueError):
    exit_code = 2


class InvalidParameterError(PosetrecError, ValueError):
    exit_code = 2


class IllegalMoveError(PosetrecError, ValueError):
    exit_code = 3


class InvalidPositionError(PosetrecError, ValueError):
    exit_code = 3


class ResourceLimitError(PosetrecError, MemoryError):
    """Raised when a memo table would grow past its configured cap.

    ``stats`` holds the RunStats accumulated before the abort.
    """

    exit_code = 4

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class NotApplicableError(PosetrecError):
    exit_code = 5


class ValuationMismatchError(PosetrecError, TypeError):
    exit_code = 1
