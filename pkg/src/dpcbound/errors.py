"""Exception hierarchy shared by all dpcbound modules."""

from __future__ import annotations

from dataclasses import dataclass


class DpcError(ValueError):
    """Base class for every error raised by dpcbound."""


@dataclass(frozen=True)
class Violation:
    code: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} at {self.field}: {self.message}"


class ValidationError(DpcError):
    """A scenario (or stats record) breaks one or more invariants.

    ``violations`` lists every problem found, not just the first.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


class PreconditionError(DpcError):
    """An operation was called outside its documented preconditions."""


class UnsupportedSampling(DpcError):
    """The scenario cannot be sampled (e.g. unbounded-variance interference)."""


class DegenerateColumn(DpcError):
    """A sample column has zero variance, so correlations are undefined."""


class DegenerateSample(DpcError):
    """Entropy estimation input is constant or otherwise unusable."""


class NonPositiveVariance(DpcError):
    pass


class SingularCovariance(DpcError):
    """The Gaussian joint law makes a mutual information undefined."""
