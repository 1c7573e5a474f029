"""Failure types shared by the closed forms, the oracle and the CLI."""

from __future__ import annotations


class InconsistentModelError(RuntimeError):
    """A structural self-check failed; a closed form is inconsistent."""


class DisagreementError(RuntimeError):
    """A closed form and the rank oracle returned different counts.

    Carries the replay instance so the offending case can be re-run
    verbatim.
    """

    def __init__(self, message: str, replay: dict):
        super().__init__(message)
        self.replay = replay


class ResourceCapError(RuntimeError):
    """The requested computation exceeds a documented size cap."""
