"""Exception types shared across the package."""


class CpsurfError(Exception):
    """Base class for all package errors."""


class PoleAtPoint(CpsurfError):
    """Evaluation requested at (or too close to) a zero of a denominator."""


class PoleOnContour(PoleAtPoint):
    """An integration contour passes through a denominator zero."""


class ZeroVector(CpsurfError):
    """An operation received an identically-zero vector."""


class DimensionTooSmall(CpsurfError):
    """Target dimension below the minimum of 2."""


class IndexOutOfRange(CpsurfError):
    """Tower/projector index outside 0..N-1."""


class DuplicateIndex(CpsurfError):
    """Repeated index in a projector composition."""


class TowerDegenerate(CpsurfError):
    """The raising-operator tower truncated before level N-1."""

    def __init__(self, level, msg=None):
        self.level = level
        super().__init__(msg or f"tower vanished at level {level}")


class RankOutOfRange(CpsurfError):
    """Requested rank outside 1..N-1."""


class RankMismatch(CpsurfError):
    """Projector trace does not match the chart rank."""


class InconsistentRow(CpsurfError):
    """First row fails the rank-1 normalization sum |P_1j|^2 = P_11."""


class ZeroLeadingEntry(CpsurfError):
    """P_11 = 0: the rank-1 first-row chart is singular here."""


class LeadingEntryOne(CpsurfError):
    """Q_11 = 1: the rank-(N-1) first-row chart is singular here."""


class NotReducedCase(CpsurfError):
    """Reduced-projector relations requested for a non-middle index or even N."""


class NonContiguousIndices(CpsurfError):
    """Closed-form metric constant requires a contiguous 0..k index block."""


class DegenerateMetric(CpsurfError):
    """Metric component identically zero; curvature undefined."""


class NonHarmonicProjector(CpsurfError):
    """Projector fails the harmonic-map equation; line integral path-dependent."""


class ConfigError(CpsurfError):
    """Invalid CLI/job configuration."""
