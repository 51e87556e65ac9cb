"""
Descent counts of permutations and 3-term progression counts of subsets.
"""

from collections import Counter
from functools import lru_cache
from typing import Dict, List, Set, Tuple, Union
import logging

import numpy as np

from core.config import Config
from core.exceptions import ResourceLimitError, ValidationFailure
from core.validators import NumericValidator
from counters.domain import ApTriple
from samplers.domain import ContinuousState, LehmerCode, SubsetState

logger = logging.getLogger(__name__)


# Descents


def count_descents(perm_or_code: Union[LehmerCode, List[int]]) -> int:
    """
    Number of j with pi(j) > pi(j+1).

    A LehmerCode is counted on its digits: pi(j) > pi(j+1) iff a_j > a_{j+1}.
    """
    if isinstance(perm_or_code, LehmerCode):
        values = np.asarray(perm_or_code.a, dtype=np.int64)
    else:
        values = np.asarray(list(perm_or_code), dtype=np.int64)
        n = values.size
        if n < 1 or not np.array_equal(np.sort(values), np.arange(1, n + 1)):
            raise ValidationFailure(
                f"Not a permutation of 1..{n}: {values.tolist()}", code="not_permutation"
            )
    return int(np.count_nonzero(values[:-1] > values[1:]))


def count_descents_batch(codes: np.ndarray) -> np.ndarray:
    """Descents per row of a (size, n) array of Lehmer digits or permutations."""
    codes = np.asarray(codes)
    return np.count_nonzero(codes[:, :-1] > codes[:, 1:], axis=1)


# Progressions


@lru_cache(maxsize=64)
def _enumerate_aps(n: int) -> Tuple[ApTriple, ...]:
    return tuple(
        ApTriple(n=n, start=a, difference=d)
        for d in range(1, (n - 1) // 2 + 1)
        for a in range(n)
    )


def enumerate_aps(n: int) -> List[ApTriple]:
    """All C(n,2) canonical progressions of Z/nZ, ordered by (difference, start)."""
    n = NumericValidator.require_odd(n, "n")
    return list(_enumerate_aps(n))


@lru_cache(maxsize=64)
def ap_masks(n: int) -> np.ndarray:
    masks = np.array([triple.mask for triple in _enumerate_aps(n)], dtype=np.int64)
    masks.setflags(write=False)
    return masks


def count_aps_batch(membership: np.ndarray) -> np.ndarray:
    """
    Progression counts per row of a (size, n) boolean array.
    Evaluates sum_d sum_a x_a x_{a+d} x_{a+2d} for canonical d.
    """
    membership = np.asarray(membership, dtype=bool)
    n = membership.shape[1]
    NumericValidator.require_odd(n, "n")
    counts = np.zeros(membership.shape[0], dtype=np.int64)
    for d in range(1, (n - 1) // 2 + 1):
        hit = membership & np.roll(membership, -d, axis=1) & np.roll(membership, -2 * d, axis=1)
        counts += np.count_nonzero(hit, axis=1)
    return counts


def count_aps(s: SubsetState) -> int:
    NumericValidator.require_odd(s.n, "n")
    return int(count_aps_batch(s.membership[None, :])[0])


def count_aps_continuous_batch(weights: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    n = weights.shape[1]
    NumericValidator.require_odd(n, "n")
    totals = np.zeros(weights.shape[0], dtype=np.float64)
    for d in range(1, (n - 1) // 2 + 1):
        totals += np.sum(weights * np.roll(weights, -d, axis=1) * np.roll(weights, -2 * d, axis=1), axis=1)
    return totals


def count_aps_continuous(s: ContinuousState) -> float:
    NumericValidator.require_odd(s.n, "n")
    return float(count_aps_continuous_batch(s.weights[None, :])[0])


def count_aps_by_enumeration(s: SubsetState) -> int:
    """Membership count over enumerate_aps; oracle for the roll-based sum."""
    members = set(s.elements())
    return sum(1 for triple in enumerate_aps(s.n) if members.issuperset(triple.elements))


def ap_counts_for_masks(n: int, masks: np.ndarray) -> np.ndarray:
    """
    Progression counts of the subsets encoded by integer bitmasks.

    Args:
        n: Odd modulus (bit j set means j is in the subset)
        masks: int64 array of bitmasks

    Returns:
        int64 array of counts aligned with masks
    """
    n = NumericValidator.require_odd(n, "n")
    masks = np.asarray(masks, dtype=np.int64)
    counts = np.zeros(masks.shape, dtype=np.int64)
    for ap_mask in ap_masks(n):
        counts += (masks & ap_mask) == ap_mask
    return counts


def brute_force_intersections(n: int) -> Tuple[int, int, int, int]:
    """Ordered progression pairs bucketed by intersection size 0..3."""
    sets = [frozenset(triple.elements) for triple in enumerate_aps(n)]
    tally = Counter(len(first & second) for first in sets for second in sets)
    return tuple(tally.get(i, 0) for i in range(4))


def brute_force_extension_count(n: int, fixed: Tuple[int, ...]) -> int:
    """Number of canonical progressions containing every element of fixed."""
    wanted = {int(v) % n for v in fixed}
    return sum(1 for triple in enumerate_aps(n) if wanted.issubset(triple.elements))


def brute_force_complement_sums(n: int) -> Dict[int, Set[int]]:
    """Observed values of A(S) + A(S^c) over all 2^n subsets, keyed by |S|."""
    n = NumericValidator.require_odd(n, "n")
    if n > Config.EXHAUSTIVE_MAX_N:
        raise ResourceLimitError(
            f"Exhaustive enumeration limited to n <= {Config.EXHAUSTIVE_MAX_N}, got {n}", n=n
        )
    masks = np.arange(1 << n, dtype=np.int64)
    counts = ap_counts_for_masks(n, masks)
    sums = counts + counts[masks ^ ((1 << n) - 1)]
    sizes = np.bitwise_count(masks)
    return {k: set(np.unique(sums[sizes == k]).tolist()) for k in range(n + 1)}
