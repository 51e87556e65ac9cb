"""
JSON schemas for Stein-method reports; every intermediate quantity is kept
for audit.
"""

from typing import List, Optional

from pydantic import ConfigDict

from core.serializers import RationalValue, ReportSchema


class AttributeSchema(ReportSchema):
    model_config = ConfigDict(from_attributes=True, frozen=True, arbitrary_types_allowed=True)


class DependencyGraphSchema(AttributeSchema):
    n: int
    vertex_count: int
    max_degree: int
    min_degree: int
    D: int
    degree_bound: RationalValue


class ChatterjeeBoundSchema(AttributeSchema):
    n: int
    p: RationalValue
    variance: RationalValue
    D: int
    third_moment: RationalValue
    fourth_moment: RationalValue
    wasserstein: float
    kolmogorov: float
    relaxed_wasserstein: float
    relaxed_kolmogorov: float
    D_exact: Optional[int] = None
    graph_wasserstein: Optional[float] = None
    graph_kolmogorov: Optional[float] = None


class ExchangeableReportSchema(AttributeSchema):
    n: int
    k: int
    mode: str
    subsets: int
    mean: RationalValue
    lambda_stated: RationalValue
    lambda_swap: Optional[RationalValue] = None
    lambda_unordered: RationalValue
    lambda_fitted: Optional[RationalValue] = None
    max_residual_stated: RationalValue
    max_residual_swap: RationalValue


class SpacingProfileSchema(AttributeSchema):
    n: int
    k_values: List[int]
    gaps: List[RationalValue]
    sigmas: List[float]
    ratios: List[float]
    coefficient_of_variation: float


class GapDiagnosticSchema(AttributeSchema):
    n: int
    x: int
    chebyshev: float
    gaussian_tail: float
    gaussian_height: float
    exact_probability: Optional[RationalValue] = None


class PeakHeightSchema(AttributeSchema):
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
    closer_to_peak: bool
