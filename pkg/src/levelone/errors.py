"""Exception and warning types raised by the library."""

from __future__ import annotations


class LevelOneError(Exception):
    """Base class for every validation error raised by the library."""


class InvalidInvolution(LevelOneError):
    """The involution type violates the order-2 condition k * sum(a_i s_i) = 2."""


class UnsupportedType(LevelOneError):
    """The Lie type or (type, involution) pair has no shipped table."""


class ChartMismatch(LevelOneError):
    """A weight and a Weyl group element live on different coordinate charts."""


class CapExceeded(LevelOneError):
    """An enumeration produced more elements than the configured cap."""


class NotApplicable(LevelOneError):
    """The requested construction does not exist for this datum."""


class NotHermitian(LevelOneError):
    """A Hermitian-only operation was called on a datum whose k is semisimple."""


class HasCenter(LevelOneError):
    """A semisimple-only operation was called on a Hermitian datum."""


class NotDominant(LevelOneError):
    """A weight is not dominant integral for the affine algebra k-hat."""


class DepthTooSmallWarning(UserWarning):
    """Fewer than two delta-shells take part in a character comparison."""
