"""
JSON schemas for closed-form results.
"""

from typing import List, Optional

from pydantic import ConfigDict

from core.serializers import RationalValue, ReportSchema


class MomentSummarySchema(ReportSchema):
    mean: RationalValue
    variance: RationalValue
    mean_float: float
    variance_float: float
    exact: bool
    leading_variance: Optional[RationalValue] = None
    formula_unsafe: bool = False

    @classmethod
    def from_summary(cls, summary):
        return cls(
            mean=summary.mean,
            variance=summary.variance,
            mean_float=float(summary.mean),
            variance_float=float(summary.variance),
            exact=summary.exact,
            leading_variance=summary.extras.get("leading_variance"),
            formula_unsafe=summary.extras.get("formula_unsafe", False),
        )


class IntersectionTableSchema(ReportSchema):
    model_config = ConfigDict(from_attributes=True, frozen=True)

    n: int
    counts: List[int]
    total: int


class ContinuousVarianceSchema(ReportSchema):
    model_config = ConfigDict(from_attributes=True, frozen=True, arbitrary_types_allowed=True)

    n: int
    mean: RationalValue
    closed_form: RationalValue
    oracle: RationalValue
    bernoulli_moment_sum: RationalValue
    discrepancy: RationalValue
    ratio: RationalValue


class FourierLevelSchema(ReportSchema):
    model_config = ConfigDict(from_attributes=True, frozen=True, arbitrary_types_allowed=True)

    name: str
    set_size: int
    count: int
    squared_coefficient: RationalValue
    energy: RationalValue


class FourierSpectrumSchema(ReportSchema):
    model_config = ConfigDict(from_attributes=True, frozen=True, arbitrary_types_allowed=True)

    n: int
    p: RationalValue
    levels: List[FourierLevelSchema]
    parseval_variance: RationalValue
