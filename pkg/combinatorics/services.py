"""
Exact closed forms for descents and 3-term progressions mod n.
All values are Fractions or ints; float conversion happens at output.
"""

from fractions import Fraction
import logging

import numpy as np

from combinatorics.domain import (
    ContinuousVarianceReport,
    FourierLevel,
    FourierSpectrum,
    IntersectionTable,
    MomentSummary,
)
from core.exceptions import DomainError, FormulaDomainError, OracleMismatchError
from core.utils import binom
from core.validators import NumericValidator, PrimeValidator

logger = logging.getLogger(__name__)


def descent_moments(n: int) -> MomentSummary:
    """Mean (n-1)/2 and variance (n+1)/12 of the descent count on S_n."""
    n = NumericValidator.require_at_least(n, 2, "n")
    return MomentSummary(mean=Fraction(n - 1, 2), variance=Fraction(n + 1, 12))


def ap_total(n: int) -> int:
    """Number of canonical 3-term progressions in Z/nZ."""
    n = NumericValidator.require_at_least(n, 3, "n")
    return n * (n - 1) // 2


def ap_moments_unconditional(n: int, p, allow_composite: bool = False) -> MomentSummary:
    """
    Mean and Parseval variance of the progression count of a p-random subset.

    Args:
        n: Odd prime modulus (>= 5)
        p: Inclusion probability in (0, 1)
        allow_composite: Evaluate for odd composite n (formula-unsafe)

    Returns:
        Exact MomentSummary
    """
    n = PrimeValidator.require_odd_prime(n, minimum=5, allow_composite=allow_composite)
    p = NumericValidator.require_probability(p)
    q = 1 - p
    pairs = binom(n, 2)
    variance = (
        Fraction(9, 4) * n * (n - 1) ** 2 * p**5 * q
        + 9 * pairs * p**4 * q**2
        + pairs * p**3 * q**3
    )
    return MomentSummary(
        mean=p**3 * pairs,
        variance=variance,
        extras={"formula_unsafe": not PrimeValidator.is_prime(n)},
    )


def conditional_mean(n: int, k: int) -> Fraction:
    """C(n,2) C(k,3) / C(n,3), which simplifies to 3 C(k,3) / (n-2)."""
    return Fraction(3 * binom(k, 3), n - 2)


def conditional_variance(n: int, k: int) -> Fraction:
    numerator = -(k - 2) * (k - 1) * k * (
        k**3
        - 3 * k**2 * (n - 1)
        - n * (n**2 - 3 * n + 2)
        + k * (3 * n**2 - 6 * n + 2)
    )
    denominator = 2 * (n - 4) * (n - 3) * (n - 2) ** 2
    return Fraction(numerator, denominator)


def ap_moments_conditional(n: int, k: int, allow_composite: bool = False) -> MomentSummary:
    """
    Mean and variance of the progression count of a uniform k-subset.

    The variance closed form has (n-4)(n-3)(n-2)^2 in its denominator; it is
    evaluated for n >= 5, where it agrees with enumeration (at n = 5 it is 0
    for every k). The leading approximation k^3 (n-k)^3 / (2 n^4) is returned
    in extras.
    """
    n = PrimeValidator.require_odd_prime(n, minimum=3, allow_composite=allow_composite)
    if n <= 4:
        raise DomainError(
            f"Conditional variance closed form needs n >= 5, got {n}; use the enumeration oracle",
            n=n,
        )
    k = NumericValidator.require_in_range(k, 0, n, "k")
    return MomentSummary(
        mean=conditional_mean(n, k),
        variance=conditional_variance(n, k),
        extras={
            "leading_variance": Fraction(k**3 * (n - k) ** 3, 2 * n**4),
            "formula_unsafe": not PrimeValidator.is_prime(n),
        },
    )


def intersection_table(n: int, allow_composite: bool = False) -> IntersectionTable:
    """
    Ordered-pair intersection counts of canonical progressions.

    Raises:
        FormulaDomainError: a closed-form count is negative at this n
    """
    n = PrimeValidator.require_odd_prime(n, minimum=3, allow_composite=allow_composite)
    pairs = binom(n, 2)
    doubled = (
        pairs * (n**2 - 10 * n + 25),
        pairs * (9 * n - 39),
        12 * pairs,
        2 * pairs,
    )
    counts = tuple(value // 2 for value in doubled)
    negative = [i for i, value in enumerate(counts) if value < 0]
    if negative:
        raise FormulaDomainError(
            f"Intersection count formula negative at n={n} for i={negative}",
            n=n,
            cells=negative,
        )
    table = IntersectionTable(n=n, counts=counts)
    if not table.is_consistent():
        raise OracleMismatchError(
            f"Intersection counts at n={n} sum to {table.total}, expected {pairs**2}"
        )
    return table


def extension_count(n: int, i: int, allow_composite: bool = False) -> int:
    """Number of progressions containing a fixed i-element subset of a progression."""
    n = PrimeValidator.require_odd_prime(n, minimum=3, allow_composite=allow_composite)
    i = NumericValidator.require_in_range(i, 0, 3, "i")
    if i == 0:
        return binom(n, 2)
    if i == 1:
        return 3 * (n - 1) // 2
    if i == 2:
        return 3
    return 1


def complement_identity(n: int, k: int) -> int:
    """A(S) + A(S^c) for any |S| = k; depends only on n and k."""
    n = NumericValidator.require_odd(n, "n")
    if n <= 3:
        raise DomainError(f"n must exceed 3, got {n}", field="n")
    k = NumericValidator.require_in_range(k, 0, n, "k")
    value = Fraction(
        3 * k * (k - 1) + 3 * (n - k) * (n - k - 1) - n * (n - 1), 4
    )
    if value.denominator != 1:
        raise OracleMismatchError(f"Complement identity not integral at n={n}, k={k}")
    return int(value)


def ap_moments_continuous(n: int, allow_composite: bool = False) -> ContinuousVarianceReport:
    """
    Variance of the weighted progression count with i.i.d. uniform weights.

    The oracle sums covariances over the intersection table using
    E[prod] = (1/2)^(6-2i) (1/3)^i for an overlap of size i.
    """
    table = intersection_table(n, allow_composite=allow_composite)
    n = table.n
    pairs = binom(n, 2)
    mean_product = Fraction(1, 64)
    oracle = Fraction(0)
    bernoulli = Fraction(0)
    for i, count in enumerate(table.counts):
        uniform_moment = Fraction(1, 2) ** (6 - 2 * i) * Fraction(1, 3) ** i
        oracle += count * (uniform_moment - mean_product)
        bernoulli += count * (Fraction(1, 2) ** (6 - i) - mean_product)

    report = ContinuousVarianceReport(
        n=n,
        mean=Fraction(pairs, 8),
        closed_form=Fraction(1, 64) * pairs * (n - Fraction(25, 54)),
        oracle=oracle,
        bernoulli_moment_sum=bernoulli,
    )
    if report.discrepancy != 0:
        logger.warning(
            f"Continuous variance at n={n}: closed form {report.closed_form} "
            f"differs from uniform-moment oracle {report.oracle}"
        )
    return report


def conditional_second_moment_oracle(n: int, k: int, allow_composite: bool = False) -> Fraction:
    """E[A_{n,k}^2] from the intersection table: sum_i N_i C(k,6-i)/C(n,6-i)."""
    table = intersection_table(n, allow_composite=allow_composite)
    k = NumericValidator.require_in_range(k, 0, table.n, "k")
    return sum(
        (
            Fraction(count * binom(k, 6 - i), binom(table.n, 6 - i))
            for i, count in enumerate(table.counts)
        ),
        Fraction(0),
    )


def ap_fourier_spectrum(n: int, p, allow_composite: bool = False) -> FourierSpectrum:
    """
    Squared p-biased Fourier coefficients of the progression count by level.

    Nonzero levels: the empty set, singletons, pairs (each pair lies in
    exactly 3 progressions) and the progressions themselves.
    """
    n = PrimeValidator.require_odd_prime(n, minimum=5, allow_composite=allow_composite)
    p = NumericValidator.require_probability(p)
    q = 1 - p
    pairs = binom(n, 2)
    levels = (
        FourierLevel("empty", 0, 1, p**6 * pairs**2),
        FourierLevel("singleton", 1, n, Fraction(9, 4) * (n - 1) ** 2 * p**5 * q),
        FourierLevel("pair", 2, pairs, 9 * p**4 * q**2),
        FourierLevel("progression", 3, pairs, p**3 * q**3),
    )
    return FourierSpectrum(n=n, p=p, levels=levels)


def brute_force_fourier(n: int, p, max_n: int = 9) -> dict:
    """
    Numeric p-biased Fourier transform of the progression count over all
    2^n points.

    Returns:
        dict with "coefficients" (tuple of elements -> float, nonzero only),
        "level_energy" (set size -> sum of squared coefficients) and
        "gram_max_error" (max |Gram - I| of the character basis)
    """
    from counters.services import ap_counts_for_masks

    n = NumericValidator.require_odd(n, "n")
    if n > max_n:
        raise DomainError(f"Brute-force transform limited to n <= {max_n}, got {n}", n=n)
    p = float(NumericValidator.require_probability(p))

    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(np.float64)
    popcount = bits.sum(axis=1)
    weights = p**popcount * (1 - p) ** (n - popcount)
    single = (bits - p) / np.sqrt(p * (1 - p))

    basis = np.ones((size, size))
    for subset in range(1, size):
        low = (subset & -subset).bit_length() - 1
        basis[:, subset] = basis[:, subset & (subset - 1)] * single[:, low]

    values = ap_counts_for_masks(n, masks).astype(np.float64)
    coefficients = basis.T @ (weights * values)
    gram = basis.T @ (basis * weights[:, None])
    gram_error = float(np.max(np.abs(gram - np.eye(size))))

    nonzero = {}
    level_energy = {}
    for subset in range(size):
        value = float(coefficients[subset])
        if abs(value) <= 1e-12:
            continue
        members = tuple(j for j in range(n) if subset >> j & 1)
        nonzero[members] = value
        level_energy[len(members)] = level_energy.get(len(members), 0.0) + value**2
    return {
        "coefficients": nonzero,
        "level_energy": level_energy,
        "gram_max_error": gram_error,
    }
