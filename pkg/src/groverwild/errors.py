"""Shared exception types."""


class GroverWildError(Exception):
    """Base class for all package errors."""


class InputError(GroverWildError, ValueError):
    """Invalid user-supplied data: dataset, term, codec, expression, or file."""


class ParseError(InputError):
    """Syntax error in expression text, carrying the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
