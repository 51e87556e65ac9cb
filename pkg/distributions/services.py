"""
Exact and Monte Carlo distributions of descent and progression counts.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Optional, Tuple
import itertools
import logging

import numpy as np

from core.config import Config
from core.exceptions import DomainError, OracleMismatchError, ResourceLimitError
from core.parallel import run_partitioned
from core.utils import binom, config_hash
from core.validators import NumericValidator, PrimeValidator
from counters.services import (
    ap_counts_for_masks,
    count_aps_batch,
    count_aps_continuous_batch,
    count_descents_batch,
)
from distributions.domain import EmpiricalDist, GaussianRef, IntegerPmf, Provenance
from samplers.domain import RngStream
from samplers.services import (
    sample_continuous_batch,
    sample_lehmer_batch,
    sample_subset_batch,
    sample_subset_fixed_k_batch,
)

logger = logging.getLogger(__name__)

# Bitmask enumeration partition size (masks per task)
MASK_CHUNK_BITS = 18
# Every RECOUNT_STRIDE-th mask is recounted with the direct double sum
RECOUNT_STRIDE = 100


# Descents


def eulerian_numbers(n: int) -> Tuple[int, ...]:
    """Row n of the Eulerian triangle: A(n, k) for k = 0..n-1."""
    row = [1]
    for m in range(2, n + 1):
        previous = row + [0]
        row = [
            (k + 1) * previous[k] + (m - k) * (previous[k - 1] if k else 0)
            for k in range(m)
        ]
    return tuple(row)


def eulerian_pmf(n: int) -> IntegerPmf:
    """Exact distribution of the descent count of a uniform permutation of 1..n."""
    n = NumericValidator.require_at_least(n, 1, "n")
    if n > Config.EULERIAN_MAX_N:
        raise ResourceLimitError(
            f"Eulerian DP limited to n <= {Config.EULERIAN_MAX_N}, got {n}", n=n
        )
    return IntegerPmf.from_counts(0, eulerian_numbers(n), factorial(n))


def conditional_descent_table(n: int = 4, j: int = 2) -> Dict[Tuple[int, int], Fraction]:
    """
    P(X_j = 1 | X_{j-1}, X_{j+1}) by enumeration of S_n, keyed by
    (X_{j-1}, X_{j+1}); j is 1-based with 2 <= j <= n-2.
    """
    n = NumericValidator.require_in_range(n, 4, 8, "n")
    j = NumericValidator.require_in_range(j, 2, n - 2, "j")
    hits = {key: 0 for key in itertools.product((0, 1), repeat=2)}
    totals = dict(hits)
    for perm in itertools.permutations(range(n)):
        descents = [int(perm[i] > perm[i + 1]) for i in range(n - 1)]
        key = (descents[j - 2], descents[j])
        totals[key] += 1
        hits[key] += descents[j - 1]
    return {key: Fraction(hits[key], totals[key]) for key in hits}


def one_sided_descent_table(n: int = 3) -> Dict[int, Fraction]:
    """P(X_2 = 1 | X_1) by enumeration of S_n, keyed by X_1."""
    n = NumericValidator.require_in_range(n, 3, 8, "n")
    hits = {0: 0, 1: 0}
    totals = {0: 0, 1: 0}
    for perm in itertools.permutations(range(n)):
        first = int(perm[0] > perm[1])
        totals[first] += 1
        hits[first] += int(perm[1] > perm[2])
    return {key: Fraction(hits[key], totals[key]) for key in hits}


# Exhaustive progression counts

_size_tables: Dict[int, np.ndarray] = {}


def _size_table_chunk(task) -> np.ndarray:
    n, start, stop = task
    masks = np.arange(start, stop, dtype=np.int64)
    counts = ap_counts_for_masks(n, masks)

    sample = slice(0, None, RECOUNT_STRIDE)
    bits = ((masks[sample, None] >> np.arange(n)) & 1).astype(bool)
    if not np.array_equal(count_aps_batch(bits), counts[sample]):
        raise OracleMismatchError(
            f"Bitmask progression counts disagree with direct recount on [{start}, {stop})"
        )

    popcount = np.bitwise_count(masks).astype(np.int64)
    width = n + 1
    flat = np.bincount(counts * width + popcount, minlength=(binom(n, 2) + 1) * width)
    return flat.reshape(binom(n, 2) + 1, width)


def ap_size_table(n: int, workers=None) -> np.ndarray:
    """
    Joint counts over all 2^n subsets: table[a, s] = #{S : A(S) = a, |S| = s}.
    Bitmask ranges are partitioned across workers and summed.
    """
    n = NumericValidator.require_odd(n, "n")
    if n > Config.EXHAUSTIVE_MAX_N:
        raise ResourceLimitError(
            f"Exhaustive enumeration limited to n <= {Config.EXHAUSTIVE_MAX_N}, got {n}; use Monte Carlo",
            n=n,
        )
    if n in _size_tables:
        return _size_tables[n]

    total = 1 << n
    step = 1 << min(n, MASK_CHUNK_BITS)
    tasks = [(n, start, min(start + step, total)) for start in range(0, total, step)]
    logger.info(f"Enumerating 2^{n} subsets in {len(tasks)} partitions")
    table = sum(run_partitioned(_size_table_chunk, tasks, workers))
    table.setflags(write=False)
    _size_tables[n] = table
    return table


def exhaustive_ap_pmf(n: int, p, allow_composite: bool = False, workers=None) -> IntegerPmf:
    """Exact pmf of the progression count of a p-random subset of Z/nZ."""
    n = PrimeValidator.require_odd_prime(n, minimum=3, allow_composite=allow_composite)
    p = NumericValidator.require_probability(p)
    table = ap_size_table(n, workers)
    weights = [p**s * (1 - p) ** (n - s) for s in range(n + 1)]
    probabilities = [
        sum((int(table[a, s]) * weights[s] for s in range(n + 1) if table[a, s]), Fraction(0))
        for a in range(table.shape[0])
    ]
    return IntegerPmf(support_min=0, probabilities=tuple(probabilities))


def _combination_chunk(task) -> np.ndarray:
    n, k, start, stop = task
    combos = itertools.islice(itertools.combinations(range(n), k), start, stop)
    chosen = np.fromiter(itertools.chain.from_iterable(combos), dtype=np.int64).reshape(-1, k)
    membership = np.zeros((chosen.shape[0], n), dtype=bool)
    membership[np.arange(chosen.shape[0])[:, None], chosen] = True
    return np.bincount(count_aps_batch(membership), minlength=binom(n, 2) + 1)


def exhaustive_conditional_pmf(n: int, k: int, allow_composite: bool = False, workers=None) -> IntegerPmf:
    """
    Exact pmf of the progression count of a uniform k-subset of Z/nZ.

    Uses the joint size table when 2^n is enumerable, otherwise walks the
    C(n, k) combinations directly.
    """
    n = PrimeValidator.require_odd_prime(n, minimum=3, allow_composite=allow_composite)
    k = NumericValidator.require_in_range(k, 0, n, "k")
    subsets = binom(n, k)

    if n <= Config.EXHAUSTIVE_MAX_N:
        column = ap_size_table(n, workers)[:, k]
        return IntegerPmf.from_counts(0, [int(c) for c in column], subsets)

    if k == 0:
        return IntegerPmf(support_min=0, probabilities=(Fraction(1),))
    if subsets > Config.CONDITIONAL_MAX_SUBSETS:
        raise ResourceLimitError(
            f"C({n},{k}) = {subsets} exceeds {Config.CONDITIONAL_MAX_SUBSETS} subsets",
            n=n,
            k=k,
        )
    step = Config.MC_CHUNK
    tasks = [(n, k, start, min(start + step, subsets)) for start in range(0, subsets, step)]
    counts = sum(run_partitioned(_combination_chunk, tasks, workers))
    return IntegerPmf.from_counts(0, [int(c) for c in counts], subsets)


# Monte Carlo


@dataclass(frozen=True)
class Statistic:
    """
    A sampled statistic: descents(n), aps(n, p), aps_fixed_k(n, k) or
    aps_continuous_binned(n, bin_width).
    """

    kind: str
    n: int
    p: Optional[float] = None
    k: Optional[int] = None
    bin_width: float = 1.0

    KINDS = ("descents", "aps", "aps_fixed_k", "aps_continuous_binned")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"Unknown statistic '{self.kind}'", choices=list(self.KINDS))
        if self.kind == "descents":
            NumericValidator.require_at_least(self.n, 1, "n")
        else:
            NumericValidator.require_odd(self.n, "n")
        if self.kind == "aps":
            object.__setattr__(self, "p", float(NumericValidator.require_probability(self.p)))
        if self.kind == "aps_fixed_k":
            NumericValidator.require_in_range(self.k, 0, self.n, "k")
        if self.kind == "aps_continuous_binned" and not self.bin_width > 0:
            raise DomainError(f"bin_width must be positive, got {self.bin_width}")

    @property
    def binned(self) -> bool:
        return self.kind == "aps_continuous_binned"

    def draw(self, size: int, generator: np.random.Generator) -> np.ndarray:
        """Integer values (bin indices when binned) of size fresh samples."""
        if self.kind == "descents":
            return count_descents_batch(sample_lehmer_batch(self.n, size, generator))
        if self.kind == "aps":
            return count_aps_batch(sample_subset_batch(self.n, self.p, size, generator))
        if self.kind == "aps_fixed_k":
            return count_aps_batch(sample_subset_fixed_k_batch(self.n, self.k, size, generator))
        values = count_aps_continuous_batch(sample_continuous_batch(self.n, size, generator))
        return np.floor(values / self.bin_width).astype(np.int64)


def _histogram_chunk(task) -> Dict[int, int]:
    statistic, seed, stream_id, chunk, size = task
    generator = RngStream(seed=seed, stream_id=stream_id).generator(chunk)
    values, counts = np.unique(statistic.draw(size, generator), return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))


def mc_histogram(
    statistic: Statistic,
    samples: int,
    rng: RngStream,
    workers=None,
    chunk_size=None,
    run_hash: Optional[str] = None,
) -> EmpiricalDist:
    """
    Histogram of samples draws of statistic.

    Chunk c draws from rng.generator(c); chunks are fixed by chunk_size
    (default MC_CHUNK), so the histogram does not depend on workers.
    run_hash is recorded in the provenance; without one, the sampling
    configuration itself is hashed.
    """
    samples = NumericValidator.require_at_least(samples, 1, "samples")
    chunk_size = chunk_size or Config.MC_CHUNK
    if run_hash is None:
        run_hash = config_hash(
            {
                "statistic": statistic.kind,
                "n": statistic.n,
                "p": statistic.p,
                "k": statistic.k,
                "bin_width": statistic.bin_width,
                "samples": samples,
                "seed": rng.seed,
                "stream": rng.stream_id,
                "chunk_size": chunk_size,
            }
        )
    tasks = [
        (statistic, rng.seed, rng.stream_id, chunk, min(chunk_size, samples - start))
        for chunk, start in enumerate(range(0, samples, chunk_size))
    ]
    merged: Dict[int, int] = {}
    for partial in run_partitioned(_histogram_chunk, tasks, workers):
        for value, count in partial.items():
            merged[value] = merged.get(value, 0) + count

    low, high = min(merged), max(merged)
    counts = np.zeros(high - low + 1, dtype=np.int64)
    for value, count in merged.items():
        counts[value - low] = count
    logger.info(f"Sampled {samples} draws of {statistic.kind}(n={statistic.n}) in {len(tasks)} chunks")
    return EmpiricalDist(
        support_min=low,
        counts=counts,
        sample_size=samples,
        provenance=Provenance(
            seed=rng.seed, stream_ids=(rng.stream_id,), chunks=len(tasks), config_hash=run_hash
        ),
        bin_width=statistic.bin_width if statistic.binned else 1.0,
        binned=statistic.binned,
    )


def gaussian_height(ref: GaussianRef, x) -> float:
    """Normal density at x; evaluated at integer points without continuity correction."""
    return float(ref.pdf(x))


def noise_floor(samples: int) -> float:
    """Per-bin Monte Carlo noise scale sqrt(1/samples)."""
    samples = NumericValidator.require_at_least(samples, 1, "samples")
    return (1.0 / samples) ** 0.5
