"""Exception hierarchy shared by every module."""


class DiffamError(Exception):
    """Base class for all library errors."""


class InputError(DiffamError, ValueError):
    """Malformed or out-of-range input (bad modulus, element not in group, ...)."""


class PreconditionError(DiffamError, ValueError):
    """Input is well-formed but a mathematical precondition does not hold."""


class BudgetExceeded(InputError):
    """A combinatorial enumeration would exceed the configured budget."""

    def __init__(self, count, budget, what="blocks"):
        self.count = count
        self.budget = budget
        super().__init__(f"enumeration of {count} {what} exceeds budget {budget}")


class VerificationFailed(DiffamError):
    """A constructed object failed its own brute-force certification."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"{report.kind} verification failed: {report.failure}")


class ConstructionRejected(DiffamError):
    """A construction whose defining condition is an iff did not hold.

    This is a legitimate mathematical outcome, not a bug; ``details`` is a
    JSON-serializable description of what failed.
    """

    def __init__(self, reason, details=None):
        self.reason = reason
        self.details = details or {}
        super().__init__(reason)
