"""Exception hierarchy shared by every module."""


class MultihypError(Exception):
    pass


class TermSyntaxError(MultihypError, ValueError):
    """Malformed term text; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownSymbolError(TermSyntaxError):
    pass


class ArityError(TermSyntaxError):
    pass


class SignatureError(MultihypError, ValueError):
    pass


class InvalidAddressError(MultihypError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class FormatError(MultihypError, ValueError):
    """A file or spec string does not follow its declared format."""


class BoundsExceeded(MultihypError):
    """A configured resource bound (universe size, pool size, ...) was hit."""


class PreconditionFailed(MultihypError, ValueError):
    """An input violates an operation's stated precondition."""
