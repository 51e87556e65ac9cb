"""
Integer-supported distributions: exact pmfs, empirical histograms and the
Gaussian reference they are compared against.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from combinatorics.domain import MomentSummary
from core.exceptions import DomainError, ValidationFailure

FLOAT_MASS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GaussianRef:
    mean: float
    stddev: float

    def __post_init__(self):
        if not np.isfinite(self.stddev) or self.stddev <= 0:
            raise DomainError(f"Gaussian stddev must be positive, got {self.stddev}")
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "stddev", float(self.stddev))

    @classmethod
    def from_moments(cls, moments: MomentSummary) -> "GaussianRef":
        return cls(mean=float(moments.mean), stddev=moments.stddev)

    def pdf(self, x):
        return norm.pdf(x, loc=self.mean, scale=self.stddev)

    def cdf(self, x):
        return norm.cdf(x, loc=self.mean, scale=self.stddev)


@dataclass(frozen=True, eq=False)
class IntegerPmf:
    """
    Probability mass function on support_min, support_min + 1, ...

    Exact pmfs hold Fractions summing to exactly 1; float pmfs hold float64
    masses summing to 1 within FLOAT_MASS_TOLERANCE.
    """

    support_min: int
    probabilities: Tuple
    exact: bool = True

    def __post_init__(self):
        if len(self.probabilities) == 0:
            raise DomainError("Distribution is empty")
        if self.exact:
            values = tuple(Fraction(v) for v in self.probabilities)
            if any(v < 0 for v in values):
                raise ValidationFailure("Negative probability in exact pmf")
            if sum(values, Fraction(0)) != 1:
                raise ValidationFailure("Exact pmf does not sum to 1")
        else:
            values = tuple(float(v) for v in self.probabilities)
            if any(v < 0 for v in values):
                raise ValidationFailure("Negative probability in float pmf")
            if abs(sum(values) - 1.0) > FLOAT_MASS_TOLERANCE:
                raise ValidationFailure(f"Float pmf mass {sum(values)} differs from 1")
        object.__setattr__(self, "probabilities", values)
        object.__setattr__(self, "support_min", int(self.support_min))

    @classmethod
    def from_counts(cls, support_min: int, counts: Sequence[int], total: Optional[int] = None) -> "IntegerPmf":
        total = sum(int(c) for c in counts) if total is None else int(total)
        return cls(
            support_min=support_min,
            probabilities=tuple(Fraction(int(c), total) for c in counts),
        )

    @property
    def support_max(self) -> int:
        return self.support_min + len(self.probabilities) - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.support_min, self.support_max + 1)

    @property
    def total_mass(self):
        return sum(self.probabilities, Fraction(0) if self.exact else 0.0)

    def probability(self, x: int):
        index = int(x) - self.support_min
        if 0 <= index < len(self.probabilities):
            return self.probabilities[index]
        return Fraction(0) if self.exact else 0.0

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.probabilities], dtype=np.float64)

    def moments(self) -> MomentSummary:
        if self.exact:
            zero = Fraction(0)
            mean = sum((p * x for x, p in zip(range(self.support_min, self.support_max + 1), self.probabilities)), zero)
            second = sum((p * (x - mean) ** 2 for x, p in zip(range(self.support_min, self.support_max + 1), self.probabilities)), zero)
            return MomentSummary(mean=mean, variance=second)
        masses = self.as_float()
        support = self.support.astype(np.float64)
        mean = float(np.dot(masses, support))
        variance = float(np.dot(masses, (support - mean) ** 2))
        return MomentSummary(mean=mean, variance=max(variance, 0.0), exact=False)

    def gaussian(self) -> GaussianRef:
        """Moment-matched Gaussian reference."""
        return GaussianRef.from_moments(self.moments())

    def float_view(self) -> "IntegerPmf":
        if not self.exact:
            return self
        masses = self.as_float()
        # Renormalise rounding drift so the float invariant holds
        return IntegerPmf(self.support_min, tuple(masses / masses.sum()), exact=False)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerPmf)
            and self.exact == other.exact
            and self.support_min == other.support_min
            and self.probabilities == other.probabilities
        )

    def __hash__(self):
        return hash((self.support_min, self.probabilities, self.exact))


@dataclass(frozen=True)
class Provenance:
    seed: int
    stream_ids: Tuple[int, ...]
    chunks: int
    config_hash: str = ""


@dataclass(frozen=True, eq=False)
class EmpiricalDist:
    """
    Monte Carlo histogram on consecutive integer bins.

    Bin i holds value support_min + i; when binned, it holds the interval
    [(support_min + i) * bin_width, (support_min + i + 1) * bin_width).
    """

    support_min: int
    counts: np.ndarray
    sample_size: int
    provenance: Optional[Provenance] = None
    bin_width: float = 1.0
    binned: bool = False
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.size == 0:
            raise DomainError("Distribution is empty")
        if np.any(counts < 0):
            raise ValidationFailure("Negative histogram count")
        if int(counts.sum()) != int(self.sample_size):
            raise ValidationFailure(
                f"Histogram counts sum to {int(counts.sum())}, expected {self.sample_size}"
            )
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_values(cls, values: np.ndarray, **kwargs) -> "EmpiricalDist":
        values = np.asarray(values, dtype=np.int64)
        low = int(values.min())
        counts = np.bincount(values - low)
        return cls(support_min=low, counts=counts, sample_size=int(values.size), **kwargs)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.support_min, self.support_min + self.counts.size)

    @property
    def bin_points(self) -> np.ndarray:
        """Bin values, or bin left edges when binned."""
        return self.support * self.bin_width if self.binned else self.support.astype(np.float64)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / float(self.sample_size)

    def moments(self) -> MomentSummary:
        points = self.bin_points + (0.5 * self.bin_width if self.binned else 0.0)
        freq = self.frequencies
        mean = float(np.dot(freq, points))
        variance = float(np.dot(freq, (points - mean) ** 2))
        return MomentSummary(mean=mean, variance=max(variance, 0.0), exact=False)

    def gaussian(self) -> GaussianRef:
        return GaussianRef.from_moments(self.moments())

    def to_pmf(self) -> IntegerPmf:
        if self.binned:
            raise DomainError("Binned continuous histogram has no integer pmf")
        return IntegerPmf.from_counts(self.support_min, self.counts, self.sample_size)

    def merge(self, other: "EmpiricalDist") -> "EmpiricalDist":
        """Associative, commutative merge of two histograms of one statistic."""
        if self.binned != other.binned or self.bin_width != other.bin_width:
            raise ValidationFailure("Cannot merge histograms with different binning")
        low = min(self.support_min, other.support_min)
        high = max(self.support_min + self.counts.size, other.support_min + other.counts.size)
        counts = np.zeros(high - low, dtype=np.int64)
        counts[self.support_min - low : self.support_min - low + self.counts.size] += self.counts
        counts[other.support_min - low : other.support_min - low + other.counts.size] += other.counts
        provenance = self.provenance
        if self.provenance and other.provenance:
            provenance = Provenance(
                seed=self.provenance.seed,
                stream_ids=tuple(sorted(set(self.provenance.stream_ids) | set(other.provenance.stream_ids))),
                chunks=self.provenance.chunks + other.provenance.chunks,
                config_hash=self.provenance.config_hash,
            )
        return EmpiricalDist(
            support_min=low,
            counts=counts,
            sample_size=self.sample_size + other.sample_size,
            provenance=provenance,
            bin_width=self.bin_width,
            binned=self.binned,
        )
