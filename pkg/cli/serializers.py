"""
Schemas for run manifests and generic harness outputs.
"""

from datetime import timedelta
from fractions import Fraction
from typing import Any, Dict, List, Optional

from core.serializers import RationalValue, ReportSchema
from core.utils import rational_dict


class OutputFile(ReportSchema):
    path: str
    sha256: str
    format: str


class RunManifest(ReportSchema):
    """Everything needed to reproduce a data file bit for bit."""

    command_line: str
    command: str
    action: Optional[str] = None
    seed: int
    stream_ids: List[int]
    config_hash: str
    artifact_version: str
    wall_time: timedelta
    outputs: List[OutputFile]
    notes: Dict[str, Any] = {}


class PmfSchema(ReportSchema):
    support_min: int
    probabilities: List[RationalValue]
    mean: RationalValue
    variance: RationalValue

    @classmethod
    def from_pmf(cls, pmf):
        moments = pmf.moments()
        return cls(
            support_min=pmf.support_min,
            probabilities=list(pmf.probabilities),
            mean=moments.mean,
            variance=moments.variance,
        )


class HistogramSchema(ReportSchema):
    support_min: int
    counts: List[int]
    sample_size: int
    bin_width: float
    binned: bool
    seed: int
    stream_ids: List[int]
    config_hash: str
    mean: float
    variance: float

    @classmethod
    def from_histogram(cls, hist):
        moments = hist.moments()
        return cls(
            support_min=hist.support_min,
            counts=hist.counts.tolist(),
            sample_size=hist.sample_size,
            bin_width=hist.bin_width,
            binned=hist.binned,
            seed=hist.provenance.seed,
            stream_ids=list(hist.provenance.stream_ids),
            config_hash=hist.provenance.config_hash,
            mean=moments.mean,
            variance=moments.variance,
        )


def json_cell(value):
    if isinstance(value, Fraction):
        return rational_dict(value)
    return value


class TableSchema(ReportSchema):
    columns: List[str]
    rows: List[List[Any]]

    @classmethod
    def from_table(cls, table):
        return cls(
            columns=list(table.header),
            rows=[[json_cell(cell) for cell in row] for row in table.rows],
        )


class CheckSchema(ReportSchema):
    suite: str
    check: str
    status: str
    detail: str


class VerifyReportSchema(ReportSchema):
    suite: str
    passed: int
    failed: int
    resource_limited: int
    checks: List[CheckSchema]
