"""Exception hierarchy shared by the numerical layers and the CLI."""

from __future__ import annotations


class SingBSError(Exception):
    """Base class for all computational errors raised by this package."""


class DomainError(SingBSError, ValueError):
    """Argument outside the supported domain of a special function."""


class SymmetrizationError(SingBSError, ValueError):
    """A tridiagonal matrix is not similar to a real symmetric one."""


class StepTooCoarseError(SingBSError):
    """Phase increments between grid points are too large to unwrap safely."""


class GraphStructureError(SingBSError, ValueError):
    """A reduced graph violates its structural invariants."""


class ModelError(SingBSError, ValueError):
    """Invalid model parameters (ordering of coefficients, quantum numbers)."""


class PairingError(SingBSError):
    """Quantum and semiclassical lists cannot be paired inside a window."""


class QuadratureError(SingBSError):
    """A regularized integral failed to converge under extrapolation."""
