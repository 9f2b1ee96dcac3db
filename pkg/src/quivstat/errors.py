"""Error taxonomy shared by all modules."""


class QuivstatError(Exception):
    """Base class for package errors."""


class UsageError(QuivstatError):
    """Malformed input, mismatched algebras, bad CLI arguments.  CLI exit code 3."""


class AdmissibilityError(QuivstatError):
    """The relation ideal is not admissible for the declared nilpotency cutoff."""


class UndecidedError(QuivstatError):
    """A bounded search or enumeration exhausted its budget without a verdict.

    Raised instead of guessing.  CLI exit code 2.
    """

    def __init__(self, message, *, context=None):
        super().__init__(message)
        self.context = context or {}


class CapExceededError(UndecidedError):
    """An exact enumeration would exceed the configured element cap.

    Over F_p the fix is usually a smaller prime or a smaller module.
    """


class InternalCheckError(QuivstatError):
    """Cross-checked computations disagree.  Always an implementation bug."""
