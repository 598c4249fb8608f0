"""Exception hierarchy.

Every error raised by the library derives from MoikitError. Shape/labeling
problems (mismatched dimensions, spectra, chain orientation) share the
ShapeError base so callers can map them to a single failure class.
"""


class MoikitError(Exception):
    """Base class for all library errors."""


class ShapeError(MoikitError, ValueError):
    """Base for dimension / spectrum / chaining mismatches."""


class NonSquare(ShapeError):
    """A square matrix was required."""


class NotNormal(MoikitError, ValueError):
    """Matrix failed the normality test ||AA* - A*A|| <= tol * max(1, ||A||^2)."""


class DimensionMismatch(ShapeError):
    """Matrix or table dimensions are incompatible."""


class ChainMismatch(ShapeError):
    """Kernel domains/codomains do not chain along the symbol's spectra."""


class OrderMismatch(ShapeError):
    """Wrong number of kernels/operators for the symbol's order."""


class SpectrumMismatch(ShapeError):
    """Spectra differ (atoms and weights must match exactly, order included)."""


class NotInCommutant(MoikitError, ValueError):
    """Matrix does not commute with the relevant spectral projections."""


class MultiplicityNotOne(MoikitError, ValueError):
    """Operation requires every spectral projection to have rank one."""


class RankTooLarge(ShapeError):
    """Requested truncation rank exceeds a factor's dimension."""


class RankTooSmall(ShapeError):
    """Ranks must be >= 1; empty factorizations are not representable."""


class RankInsufficient(MoikitError, RuntimeError):
    """Factorization search could not fit the symbol at the given ranks."""


class NotBilinear(MoikitError, ValueError):
    """The exact oracle only handles order-2 symbols."""


class ParseError(MoikitError, ValueError):
    """Input file is not valid JSON for the expected schema."""
