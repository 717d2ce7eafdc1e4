"""Exception types shared across the library.

Input problems raise `InputError` subclasses; a verified mathematical
property failing on concrete data raises `PropertyViolation` (the CLI maps
the former to exit code 1 and the latter to exit code 2).
"""


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class CapacityError(InputError):
    """Input exceeds a configured size limit."""


class ValidationError(InputError):
    """A structural invariant of a value fails."""


class DisconnectedError(InputError):
    """An operation requiring connectivity received a disconnected value."""


class InvalidSplitError(InputError):
    """A vertex split does not produce a valid construct."""


class NotConvexError(InputError):
    """A game required to be strictly convex is not."""


class InfeasibleError(InputError):
    """An exact linear system that should be solvable is not."""


class CompatibilityError(InputError):
    """Graph-tree leg/flag compatibility is violated."""


class PropertyViolation(AssertionError):
    """A theorem-level property failed on a concrete instance."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
