"""
Value types for exact closed-form results.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

from core.exceptions import ValidationFailure
from core.utils import binom


@dataclass(frozen=True)
class MomentSummary:
    """Mean/variance pair; exact values are Fractions."""

    mean: Fraction
    variance: Fraction
    exact: bool = True
    extras: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.variance < 0:
            raise ValidationFailure(
                f"Negative variance {self.variance}", code="negative_variance"
            )

    @property
    def stddev(self) -> float:
        return float(self.variance) ** 0.5


@dataclass(frozen=True)
class IntersectionTable:
    """
    Ordered pairs (L1, L2) of canonical progressions mod n, bucketed by
    |L1 ∩ L2| = 0..3. The diagonal L1 = L2 sits in the i = 3 cell.
    """

    n: int
    counts: Tuple[int, int, int, int]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def is_consistent(self) -> bool:
        return self.total == binom(self.n, 2) ** 2 and all(c >= 0 for c in self.counts)


@dataclass(frozen=True)
class FourierLevel:
    name: str
    set_size: int
    count: int
    squared_coefficient: Fraction

    @property
    def energy(self) -> Fraction:
        return self.count * self.squared_coefficient


@dataclass(frozen=True)
class FourierSpectrum:
    """p-biased Fourier weight of the progression count, grouped by level."""

    n: int
    p: Fraction
    levels: Tuple[FourierLevel, ...]

    @property
    def parseval_variance(self) -> Fraction:
        return sum((level.energy for level in self.levels if level.set_size > 0), Fraction(0))


@dataclass(frozen=True)
class ContinuousVarianceReport:
    """
    Variance of the weighted progression count under i.i.d. uniform weights.

    closed_form is (1/64) C(n,2) (n - 25/54); oracle uses the uniform moments
    E[x] = 1/2, E[x^2] = 1/3; bernoulli_moment_sum replaces E[x^2] by E[x]
    as if the weights were 0/1.
    """

    n: int
    mean: Fraction
    closed_form: Fraction
    oracle: Fraction
    bernoulli_moment_sum: Fraction

    @property
    def discrepancy(self) -> Fraction:
        return self.closed_form - self.oracle

    @property
    def ratio(self) -> Fraction:
        return self.closed_form / self.oracle

    def summary(self, which: str = "oracle") -> MomentSummary:
        return MomentSummary(mean=self.mean, variance=getattr(self, which))
