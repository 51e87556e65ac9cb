"""
Result types for characteristic functions, error bounds and scaling scans.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from core.exceptions import DomainError, ValidationFailure

MODULUS_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class CharProfile:
    """
    phi(t) = E[exp(i t Y)] on a grid, where Y = (X - center) / scale.
    Unstandardized profiles have center 0 and scale 1.
    """

    t_grid: np.ndarray
    phi: np.ndarray
    gauss_ref: np.ndarray
    abs_diff: np.ndarray
    center: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        lengths = {len(self.t_grid), len(self.phi), len(self.gauss_ref), len(self.abs_diff)}
        if len(lengths) != 1:
            raise ValidationFailure("CharProfile sequences differ in length")
        if len(self.t_grid) == 0:
            raise DomainError("Empty t grid")
        if np.any(np.abs(self.phi) > 1 + MODULUS_TOLERANCE):
            raise ValidationFailure("|phi(t)| exceeds 1")
        at_zero = np.flatnonzero(self.t_grid == 0)
        if at_zero.size and abs(self.phi[at_zero[0]] - 1) > MODULUS_TOLERANCE:
            raise ValidationFailure("phi(0) differs from 1")

    @property
    def step(self) -> float:
        return float(np.max(np.diff(self.t_grid))) if len(self.t_grid) > 1 else 0.0

    def rows(self):
        for t, phi, gauss, diff in zip(self.t_grid, self.phi, self.gauss_ref, self.abs_diff):
            yield float(t), float(phi.real), float(phi.imag), float(gauss), float(diff)


@dataclass(frozen=True)
class LltError:
    raw: float
    scaled: float
    argmax: int
    stddev: float


@dataclass(frozen=True)
class ScanResult:
    metric: str
    n_values: Tuple[int, ...]
    metric_values: Tuple[float, ...]
    slope: float
    slope_stderr: float
    intercept: float = float("nan")
    noise_floors: Tuple[float, ...] = ()
    failures: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.n_values) != len(self.metric_values):
            raise ValidationFailure("ScanResult sequences differ in length")

    def rows(self):
        floors = self.noise_floors or (0.0,) * len(self.n_values)
        return list(zip(self.n_values, self.metric_values, floors))


@dataclass(frozen=True, eq=False)
class SmallTEnvelope:
    n: int
    t_grid: np.ndarray
    abs_diff: np.ndarray
    envelope_basis: np.ndarray
    constant: float


@dataclass(frozen=True, eq=False)
class BernoulliCheck:
    p: float
    theta: np.ndarray
    modulus: np.ndarray
    bound: np.ndarray
    bound_nearest_integer: np.ndarray

    @property
    def holds(self) -> bool:
        return bool(np.all(self.modulus <= self.bound_nearest_integer + MODULUS_TOLERANCE))


@dataclass(frozen=True, eq=False)
class DescentCharBound:
    n: int
    t_grid: np.ndarray
    theta: np.ndarray
    modulus: np.ndarray
    bound: np.ndarray

    @property
    def holds(self) -> bool:
        return bool(np.all(self.modulus <= self.bound + MODULUS_TOLERANCE))


@dataclass(frozen=True)
class InversionErrorBound:
    split: float
    near_term: float
    middle_term: float
    gaussian_tail: float
    bound: float
    observed: float

    @property
    def holds(self) -> bool:
        return self.observed <= self.bound + MODULUS_TOLERANCE


@dataclass(frozen=True)
class KolmogorovWassersteinCheck:
    """Kolm(W, Z) against sqrt((2/pi) Wass) and the (2/pi)^(1/4) sqrt(Wass) form."""

    kolmogorov: float
    wasserstein: float
    bound: float
    bound_density_form: float

    @property
    def holds(self) -> bool:
        return self.kolmogorov <= self.bound + MODULUS_TOLERANCE
