"""Exception hierarchy shared by the library and the CLI.

Each class maps onto one CLI exit code, so the front end can translate
failures without inspecting messages.
"""

from __future__ import annotations


class StardecError(Exception):
    exit_code = 4


class InputError(StardecError, ValueError):
    """Malformed or out-of-contract input (exit code 2)."""

    exit_code = 2


class DomainError(InputError):
    """A value lies outside the domain an operation is defined on."""


class StructuralError(InputError):
    """An object refers to vertices or sizes inconsistent with its host."""


class ThresholdExceeded(InputError):
    """The instance is above the constructive bound; use attempt mode."""


class Infeasible(StardecError):
    """No packing/decomposition exists (or none was found); carries a certificate."""

    exit_code = 1

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class Refused(StardecError):
    """An exhaustive oracle declined an instance above its caps (exit code 3)."""

    exit_code = 3


class InvariantBreach(StardecError, AssertionError):
    """An internal guarantee failed. Always a bug (exit code 4)."""

    exit_code = 4
