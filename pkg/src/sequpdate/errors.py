"""Exception hierarchy. The CLI maps each family onto a distinct exit status."""


class SeqUpdateError(Exception):
    """Base class for all errors raised by this package."""


class LogFormatError(SeqUpdateError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LogOrderError(SeqUpdateError, ValueError):
    """Two logs (or a log and a deletion prefix) are not in the required time order."""


class StateFormatError(SeqUpdateError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StateValidationError(SeqUpdateError, ValueError):
    """A mining state violates one of its invariants, or does not match its inputs."""


class StateVersionError(StateValidationError):
    pass


class ParamsMismatchError(StateValidationError):
    pass


class ConsistencyError(SeqUpdateError, RuntimeError):
    """An update produced a result that the maintenance theory rules out.

    Seeing this means a stored state was not exact or a counter is broken;
    it is never a user input problem.
    """
