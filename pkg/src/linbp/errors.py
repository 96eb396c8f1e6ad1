"""Exception hierarchy shared by all modules."""


class LinBPError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(LinBPError, ValueError):
    """Operands live in spaces of different (or unsupported) dimension."""


class BudgetExceeded(LinBPError):
    """An exhaustive enumeration would exceed the configured work budget."""


class BPError(LinBPError):
    """A branching program is malformed or violates a required property."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ProofError(LinBPError):
    """A Res[+] proof line failed to check."""

    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
