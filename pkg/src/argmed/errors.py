"""Exception hierarchy shared by every argmed module."""

from __future__ import annotations


class ArgmedError(Exception):
    """Base class for all argmed errors."""


# framework construction

class DuplicateId(ArgmedError, ValueError):
    pass


class UnknownArgument(ArgmedError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its arg; keep the plain message
        return str(self.args[0]) if self.args else ""


class ForbiddenAttack(ArgmedError, ValueError):
    pass


class InvalidFramework(ArgmedError, ValueError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class FormatError(ArgmedError, ValueError):
    """Input file could not be parsed. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


# solving

class TooLarge(ArgmedError, ValueError):
    pass


class ConsistencyError(ArgmedError, AssertionError):
    pass


# schemes

class DuplicateScheme(ArgmedError, ValueError):
    pass


class MalformedTemplate(ArgmedError, ValueError):
    pass


class UnknownScheme(ArgmedError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class IncompleteBinding(ArgmedError, ValueError):
    pass


# dialogue

class InvalidConfig(ArgmedError, ValueError):
    pass


class IllegalMove(ArgmedError, ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class IllegalMoveAt(IllegalMove):
    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index}: {reason}")
        self.index = index
        self.reason = reason


class SessionTerminated(ArgmedError, RuntimeError):
    pass


class SessionActive(ArgmedError, RuntimeError):
    pass


# agents

class BackendFailure(ArgmedError, RuntimeError):
    """A backend could not produce a completion.

    The orchestrator attaches the partial ``SessionOutcome`` as ``outcome``
    before re-raising, so callers can still persist what was accepted.
    """

    outcome = None


class BackendTimeout(BackendFailure):
    pass


class ParseFailure(ArgmedError, ValueError):
    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class ProtocolViolation(ArgmedError, RuntimeError):
    pass
