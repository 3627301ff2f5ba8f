"""Exception hierarchy.  The CLI maps each class to an exit code."""


class MultinormError(Exception):
    pass


class StructureError(MultinormError, ValueError):
    """Mismatched sources/targets, ambients or malformed element vectors."""


class InputError(MultinormError, ValueError):
    """A document or argument could not be parsed."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class InvariantViolation(MultinormError, ValueError):
    """Well-formed input that breaks a mathematical precondition."""

    def __init__(self, check, message=""):
        self.check = check
        super().__init__(f"[{check}] {message}" if message else f"[{check}]")


class InternalCheckError(MultinormError, AssertionError):
    """A verification that the theory guarantees has failed: a bug."""

    def __init__(self, check, message=""):
        self.check = check
        super().__init__(f"[{check}] {message}" if message else f"[{check}]")
