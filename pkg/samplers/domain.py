"""
Random states and the seeded stream that produces them.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.exceptions import DomainError, ValidationFailure

UINT64_MAX = 2**64 - 1


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class RngStream:
    """
    A (seed, stream_id) pair naming an independent random stream.

    Streams are split further by chunk index, so a partition of a Monte Carlo
    run is fully determined by (seed, stream_id, chunk) regardless of which
    worker draws it. Generator: numpy Philox (counter-based) keyed through
    SeedSequence(seed, spawn_key=(stream_id, chunk)).
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"{name} must be an integer", field=name)
            if not 0 <= int(value) <= UINT64_MAX:
                raise DomainError(f"{name} must fit in 64 unsigned bits", field=name)

    def generator(self, chunk: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(
            entropy=int(self.seed), spawn_key=(int(self.stream_id), int(chunk))
        )
        return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True, eq=False)
class LehmerCode:
    """a_j in 1..n-j+1 (1-based positions j); a[j-1] holds a_j."""

    n: int
    a: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if len(self.a) != self.n:
            raise ValidationFailure(f"Lehmer code length {len(self.a)} != n={self.n}")
        for j, value in enumerate(self.a, start=1):
            if not 1 <= value <= self.n - j + 1:
                raise ValidationFailure(
                    f"Lehmer digit a_{j}={value} outside 1..{self.n - j + 1}"
                )

    def __eq__(self, other):
        return isinstance(other, LehmerCode) and self.a == other.a

    def __hash__(self):
        return hash(self.a)


@dataclass(frozen=True, eq=False)
class SubsetState:
    """Membership bit vector of a subset of Z/nZ."""

    n: int
    membership: np.ndarray

    def __post_init__(self):
        membership = np.asarray(self.membership, dtype=bool)
        if membership.shape != (self.n,):
            raise ValidationFailure(
                f"Membership vector shape {membership.shape} != ({self.n},)"
            )
        object.__setattr__(self, "membership", _frozen(membership))

    @classmethod
    def from_elements(cls, n: int, elements) -> "SubsetState":
        membership = np.zeros(n, dtype=bool)
        membership[[int(e) % n for e in elements]] = True
        return cls(n=n, membership=membership)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SubsetState":
        return cls(n=n, membership=[(mask >> j) & 1 for j in range(n)])

    @property
    def size(self) -> int:
        return int(self.membership.sum())

    def elements(self) -> Tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.membership))

    def complement(self) -> "SubsetState":
        return SubsetState(n=self.n, membership=~self.membership)

    def __eq__(self, other):
        return (
            isinstance(other, SubsetState)
            and self.n == other.n
            and np.array_equal(self.membership, other.membership)
        )

    def __hash__(self):
        return hash((self.n, self.membership.tobytes()))


@dataclass(frozen=True, eq=False)
class ContinuousState:
    """Weights in [0, 1] on the elements of Z/nZ."""

    n: int
    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (self.n,):
            raise ValidationFailure(f"Weight vector shape {weights.shape} != ({self.n},)")
        if np.any(weights < 0) or np.any(weights > 1) or not np.all(np.isfinite(weights)):
            raise ValidationFailure("Weights must lie in [0, 1]")
        object.__setattr__(self, "weights", _frozen(weights))

    def __eq__(self, other):
        return (
            isinstance(other, ContinuousState)
            and self.n == other.n
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return hash((self.n, self.weights.tobytes()))
