"""
JSON schemas for metric reports.
"""

from typing import Dict, List, Optional

from pydantic import ConfigDict

from core.serializers import ReportSchema


class AttributeSchema(ReportSchema):
    model_config = ConfigDict(from_attributes=True, frozen=True, arbitrary_types_allowed=True)


class LltErrorSchema(AttributeSchema):
    raw: float
    scaled: float
    argmax: int
    stddev: float


class DistanceReportSchema(ReportSchema):
    kolmogorov: float
    wasserstein: float
    standardized_wasserstein: float
    bound: float
    bound_density_form: float
    holds: bool
    reference_constant: Optional[float] = None


class ScanPointSchema(ReportSchema):
    n: int
    metric: float
    noise_floor: float


class ScanResultSchema(ReportSchema):
    metric: str
    slope: Optional[float]
    slope_stderr: Optional[float]
    intercept: Optional[float]
    points: List[ScanPointSchema]
    failures: Dict[int, str] = {}

    @classmethod
    def from_result(cls, result):
        def finite(value):
            return value if value == value else None

        return cls(
            metric=result.metric,
            slope=finite(result.slope),
            slope_stderr=finite(result.slope_stderr),
            intercept=finite(result.intercept),
            points=[ScanPointSchema(n=n, metric=v, noise_floor=f) for n, v, f in result.rows()],
            failures=result.failures,
        )


class InversionErrorBoundSchema(AttributeSchema):
    split: float
    near_term: float
    middle_term: float
    gaussian_tail: float
    bound: float
    observed: float
    holds: bool
