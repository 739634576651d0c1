"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class GpcoverError(Exception):
    exit_code = 1


class InputError(GpcoverError, ValueError):
    """Malformed input: bad cycles, bad JSON, empty subsets, unknown family."""

    exit_code = 2


class ValidationError(InputError):
    """A Cayley table that is not a group. ``witness`` names the failing entries."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class EmptySubsetError(InputError):
    pass


class ResourceCapError(GpcoverError):
    exit_code = 3


class GroupTooLarge(ResourceCapError):
    pass


class MetadataError(GpcoverError):
    """The group carries no (rank, field size) metadata."""


class MindegUnavailable(GpcoverError):
    pass


class PreconditionError(GpcoverError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class CoverError(GpcoverError):
    """The pipeline could not produce a certificate.

    ``phase`` is one of ``mass``, ``simple``, ``small``, ``growth``, ``gowers``;
    ``log`` holds the round-by-round data that led to the failure.
    """

    def __init__(self, phase: str, message: str, log: list | None = None):
        super().__init__(message)
        self.phase = phase
        self.log = log or []

    def to_dict(self) -> dict:
        return {"phase": self.phase, "reason": str(self), "log": self.log}
