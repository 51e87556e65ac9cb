"""
Reports produced by the Stein-method and non-LLT diagnostics.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from core.exceptions import ValidationFailure


@dataclass(frozen=True)
class DependencyGraphSummary:
    n: int
    vertex_count: int
    max_degree: int
    min_degree: int
    degree_bound: Fraction

    def __post_init__(self):
        if self.max_degree > self.degree_bound:
            raise ValidationFailure(
                f"Dependency degree {self.max_degree} exceeds bound {self.degree_bound} at n={self.n}"
            )

    @property
    def D(self) -> int:
        return self.max_degree + 1


@dataclass(frozen=True)
class ChatterjeeBound:
    n: int
    p: Fraction
    variance: Fraction
    D: int
    third_moment: Fraction
    fourth_moment: Fraction
    wasserstein: float
    kolmogorov: float
    relaxed_wasserstein: float
    relaxed_kolmogorov: float
    D_exact: Optional[int] = None
    graph_wasserstein: Optional[float] = None
    graph_kolmogorov: Optional[float] = None


@dataclass(frozen=True)
class ExchangeableReport:
    """
    E[A' - A | S] against -lambda (A(S) - mu_{n,k}) for the member/non-member
    swap. Residuals are exact maxima over the subsets examined.
    """

    n: int
    k: int
    mode: str
    subsets: int
    mean: Fraction
    lambda_stated: Fraction
    lambda_swap: Optional[Fraction]
    lambda_unordered: Fraction
    lambda_fitted: Optional[Fraction]
    max_residual_stated: Fraction
    max_residual_swap: Fraction


@dataclass(frozen=True)
class SpacingProfile:
    n: int
    k_values: Tuple[int, ...]
    gaps: Tuple[Fraction, ...]
    sigmas: Tuple[float, ...]
    ratios: Tuple[float, ...]

    def __post_init__(self):
        if not len(self.k_values) == len(self.gaps) == len(self.sigmas) == len(self.ratios):
            raise ValidationFailure("SpacingProfile sequences differ in length")
        if any(sigma <= 0 for sigma in self.sigmas):
            raise ValidationFailure("Conditional stddev must be positive on the interior k range")

    @property
    def coefficient_of_variation(self) -> float:
        mean = sum(self.ratios) / len(self.ratios)
        spread = sum((r - mean) ** 2 for r in self.ratios) / len(self.ratios)
        return spread**0.5 / mean


@dataclass(frozen=True)
class GapDiagnostic:
    n: int
    x: int
    chebyshev: float
    gaussian_tail: float
    gaussian_height: float
    exact_probability: Optional[Fraction] = None


@dataclass(frozen=True)
class PeakHeightReport:
    n: int
    k: int
    x: int
    mode: str
    probability: float
    ci_low: float
    ci_high: float
    samples: int
    undersampled: bool
    scaled: float
    peak_constant: float
    gaussian_constant: float

    @property
    def closer_to_peak(self) -> bool:
        return abs(self.scaled - self.peak_constant) < abs(self.scaled - self.gaussian_constant)
