"""Exception types shared across the package."""

from __future__ import annotations


class ForgeError(Exception):
    """Base class for all package errors."""


class LimitExceeded(ForgeError):
    """An exact solver was asked to work beyond its configured size limit."""


class DegenerateParams(ForgeError):
    """Construction parameters fall outside the usable regime."""


class CouplingViolation(ForgeError):
    """Edge probability too large for the thinning coupling (p > m^-1/2)."""


class MonochromaticTriangle(ForgeError):
    """An overlay input was not triangle-free."""


class ResidualTriangle(ForgeError):
    """Minority-edge resolution left a triangle behind (internal bug)."""


class InvalidPairing(ForgeError):
    """Pairing repeats a vertex or references a vertex outside the host."""


class PreconditionFailed(ForgeError):
    """An operation's documented precondition does not hold."""


class ImpossibleState(ForgeError):
    """A state the surrounding argument rules out was reached."""


class HypothesisViolated(ForgeError):
    """A probe was called outside the hypothesis of the bound it samples."""


class UnknownTarget(ForgeError):
    """No experiment is registered under the requested name."""


class MalformedInput(ForgeError):
    """A codec could not parse its input.

    ``offset`` is the byte (or line) position where parsing failed.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class ConfigError(ForgeError):
    """Configuration file rejected."""
