"""Exception types shared across the package."""


class NcupError(Exception):
    """Base class for every error raised by this package."""


class InputError(NcupError, ValueError):
    """Malformed or inconsistent caller input: shapes, indices, payloads."""


class SingularOperatorError(NcupError):
    """A module operator that must be invertible is numerically singular."""


class NotAFrameError(NcupError):
    """A vector family whose frame operator is singular (does not span)."""


class NonParsevalFrameError(NcupError):
    """A frame required to be Parseval fails the frame-operator check."""


class GenerationError(NcupError):
    """Random instance generation failed after bounded retries."""
