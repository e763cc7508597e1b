"""Exception types shared across the package.

Anything deriving from InputError means the caller handed us bad input
(files, config, arguments); everything else is an internal failure.
The CLI maps InputError to exit code 2 and the service maps it to a
4xx response.
"""


class RoomLensError(Exception):
    """Base class for all roomlens errors."""


class InputError(RoomLensError):
    """Invalid input: bad files, bad config, out-of-contract arguments."""


class ParseError(InputError):
    """A file failed to parse; carries the path and (if known) line number."""

    def __init__(self, path, line, message):
        location = str(path) if line is None else f"{path}:{line}"
        super().__init__(f"{location}: {message}")
        self.path = str(path)
        self.line = line


class DimensionMismatchError(InputError):
    """Vector lengths disagree."""


class DegenerateVectorError(InputError):
    """A zero-norm vector has no direction; similarity is undefined."""


class TokenNotFoundError(InputError):
    """A required token is absent from the room vocabulary."""

    def __init__(self, token):
        super().__init__(f"token not in vocabulary: {token!r}")
        self.token = token


class BenchmarkOOVError(InputError):
    """Benchmark words are missing from the room under the strict policy."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        listed = ", ".join(self.missing)
        super().__init__(f"benchmark words missing from room: {listed}")


class DegenerateProfileError(InputError):
    """A profile with no scored tokens (or no positive mass) cannot be normalized."""


class EmptyGroupError(InputError):
    """An aggregate over zero profiles is undefined."""
