"""
Seeded samplers for permutations, subsets and weighted sets.

Single-state samplers draw from RngStream.generator(call_index); batch
samplers draw a whole chunk of states from one generator and are what the
Monte Carlo histograms use. numpy's Generator.integers is unbiased (Lemire
rejection) and Generator.random uses the 53-bit mantissa construction.
"""

from typing import List, Union
import logging

import numpy as np

from core.validators import NumericValidator
from samplers.domain import ContinuousState, LehmerCode, RngStream, SubsetState

logger = logging.getLogger(__name__)

RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike, call_index: int = 0) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return rng.generator(call_index)


def _probability(p) -> float:
    return float(NumericValidator.require_probability(p))


def lehmer_bounds(n: int) -> np.ndarray:
    """Inclusive upper bounds n-j+1 for j = 1..n."""
    return np.arange(n, 0, -1, dtype=np.int64)


# Lehmer codes


def sample_lehmer(n: int, rng: RngLike, call_index: int = 0) -> LehmerCode:
    n = NumericValidator.require_at_least(n, 1, "n")
    generator = as_generator(rng, call_index)
    digits = generator.integers(1, lehmer_bounds(n) + 1)
    return LehmerCode(n=n, a=tuple(int(v) for v in digits))


def sample_lehmer_batch(n: int, size: int, generator: np.random.Generator) -> np.ndarray:
    """(size, n) array of Lehmer digits, row-wise independent codes."""
    n = NumericValidator.require_at_least(n, 1, "n")
    return generator.integers(1, lehmer_bounds(n) + 1, size=(size, n))


def lehmer_to_permutation(code: LehmerCode) -> List[int]:
    """pi(j) is the a_j-th smallest element not yet used."""
    remaining = list(range(1, code.n + 1))
    return [remaining.pop(digit - 1) for digit in code.a]


def permutation_to_lehmer(permutation) -> LehmerCode:
    remaining = sorted(int(v) for v in permutation)
    digits = []
    for value in permutation:
        index = remaining.index(int(value))
        digits.append(index + 1)
        remaining.pop(index)
    return LehmerCode(n=len(digits), a=tuple(digits))


# Bernoulli subsets


def sample_subset(n: int, p, rng: RngLike, call_index: int = 0) -> SubsetState:
    n = NumericValidator.require_at_least(n, 1, "n")
    p = _probability(p)
    generator = as_generator(rng, call_index)
    return SubsetState(n=n, membership=generator.random(n) < p)


def sample_subset_batch(n: int, p, size: int, generator: np.random.Generator) -> np.ndarray:
    n = NumericValidator.require_at_least(n, 1, "n")
    return generator.random((size, n)) < _probability(p)


# Fixed-size subsets


def _partial_fisher_yates(n: int, k: int, size: int, generator: np.random.Generator) -> np.ndarray:
    """First k columns of a partially shuffled index array, one row per draw."""
    index = np.tile(np.arange(n, dtype=np.int64), (size, 1))
    rows = np.arange(size)
    for i in range(k):
        j = generator.integers(i, n, size=size)
        chosen = index[rows, j]
        index[rows, j] = index[rows, i]
        index[rows, i] = chosen
    return index[:, :k]


def sample_subset_fixed_k(n: int, k: int, rng: RngLike, call_index: int = 0) -> SubsetState:
    n = NumericValidator.require_at_least(n, 1, "n")
    k = NumericValidator.require_in_range(k, 0, n, "k")
    generator = as_generator(rng, call_index)
    membership = np.zeros(n, dtype=bool)
    membership[_partial_fisher_yates(n, k, 1, generator)[0]] = True
    return SubsetState(n=n, membership=membership)


def sample_subset_fixed_k_batch(
    n: int, k: int, size: int, generator: np.random.Generator
) -> np.ndarray:
    n = NumericValidator.require_at_least(n, 1, "n")
    k = NumericValidator.require_in_range(k, 0, n, "k")
    membership = np.zeros((size, n), dtype=bool)
    if k:
        chosen = _partial_fisher_yates(n, k, size, generator)
        membership[np.arange(size)[:, None], chosen] = True
    return membership


# Continuous weights


def sample_continuous(n: int, rng: RngLike, call_index: int = 0) -> ContinuousState:
    n = NumericValidator.require_at_least(n, 1, "n")
    generator = as_generator(rng, call_index)
    return ContinuousState(n=n, weights=generator.random(n))


def sample_continuous_batch(n: int, size: int, generator: np.random.Generator) -> np.ndarray:
    n = NumericValidator.require_at_least(n, 1, "n")
    return generator.random((size, n))
