from dataclasses import dataclass
from typing import Tuple

from core.exceptions import DomainError


@dataclass(frozen=True, order=True)
class ApTriple:
    """
    Canonical 3-term progression {a, a+d, a+2d} in Z/nZ, 1 <= d <= (n-1)/2.

    (a, d) and (a+2d, -d) name the same progression; canonical() picks the
    representative with the small difference.
    """

    n: int
    start: int
    difference: int

    def __post_init__(self):
        if self.n % 2 == 0 or self.n < 3:
            raise DomainError(f"Progressions need odd n >= 3, got {self.n}")
        if not 0 <= self.start < self.n:
            raise DomainError(f"start {self.start} not reduced mod {self.n}")
        if not 1 <= self.difference <= (self.n - 1) // 2:
            raise DomainError(f"difference {self.difference} not canonical mod {self.n}")

    @classmethod
    def canonical(cls, n: int, start: int, difference: int) -> "ApTriple":
        start %= n
        difference %= n
        if difference == 0:
            raise DomainError("Progression difference must be nonzero")
        if difference > (n - 1) // 2:
            start = (start + 2 * difference) % n
            difference = n - difference
        return cls(n=n, start=start, difference=difference)

    @property
    def elements(self) -> Tuple[int, int, int]:
        return (
            self.start,
            (self.start + self.difference) % self.n,
            (self.start + 2 * self.difference) % self.n,
        )

    @property
    def mask(self) -> int:
        value = 0
        for element in self.elements:
            value |= 1 << element
        return value
