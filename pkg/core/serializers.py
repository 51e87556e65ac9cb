"""
Shared pydantic field types for JSON reports and manifests.
"""

from fractions import Fraction
from typing import Annotated

from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator

from core.utils import rational_dict


def _parse_rational(value) -> Fraction:
    if isinstance(value, dict):
        return Fraction(int(value["num"]), int(value["den"]))
    return Fraction(value)


# Exact rationals travel as {"num": "<int>", "den": "<int>"} strings
RationalValue = Annotated[
    Fraction,
    PlainValidator(_parse_rational),
    PlainSerializer(rational_dict, return_type=dict),
]


class ReportSchema(BaseModel):
    """Base class for report schemas"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
