"""
Stein-method quantities for the progression count and the numerical
diagnostics for its missing local limit theorem.
"""

from collections import Counter
from fractions import Fraction
from typing import Iterable, Optional
import logging
import math

import numpy as np
from scipy.stats import norm

from combinatorics.services import (
    ap_moments_unconditional,
    conditional_mean,
    conditional_variance,
)
from core.config import Config
from core.exceptions import DomainError, ResourceLimitError
from core.utils import binom
from core.validators import NumericValidator, PrimeValidator
from counters.services import ap_counts_for_masks, count_aps_batch, enumerate_aps
from samplers.domain import RngStream
from samplers.services import sample_subset_fixed_k_batch
from steinlab.domain import (
    ChatterjeeBound,
    DependencyGraphSummary,
    ExchangeableReport,
    GapDiagnostic,
    PeakHeightReport,
    SpacingProfile,
)

logger = logging.getLogger(__name__)

PEAK_CONSTANT = 8 * math.sqrt(2) / math.pi
GAUSSIAN_PEAK_CONSTANT = math.sqrt(2 / math.pi) / 3
MIN_EXPECTED_HITS = 100


def degree_bound(n: int) -> Fraction:
    return Fraction(9, 2) * (n - 1)


# Dependency graph


def dependency_graph(n: int, allow_composite: bool = False) -> DependencyGraphSummary:
    """
    Degrees of the graph on progression indicators, edges between progressions
    that share an element.

    Raises:
        ResourceLimitError: n above GRAPH_MAX_N; fallback is the closed-form D bound
    """
    n = PrimeValidator.require_odd_prime(n, minimum=7, allow_composite=allow_composite)
    if n > Config.GRAPH_MAX_N:
        raise ResourceLimitError(
            f"Dependency graph brute force limited to n <= {Config.GRAPH_MAX_N}",
            fallback=degree_bound(n) + 1,
            n=n,
        )
    triples = enumerate_aps(n)
    containing = [[] for _ in range(n)]
    for index, triple in enumerate(triples):
        for element in triple.elements:
            containing[element].append(index)

    degrees = [
        len(set(containing[a]) | set(containing[b]) | set(containing[c])) - 1
        for a, b, c in (triple.elements for triple in triples)
    ]
    summary = DependencyGraphSummary(
        n=n,
        vertex_count=len(triples),
        max_degree=max(degrees),
        min_degree=min(degrees),
        degree_bound=degree_bound(n),
    )
    logger.info(f"Dependency graph n={n}: max degree {summary.max_degree}, bound {summary.degree_bound}")
    return summary


# Chatterjee bound


def indicator_abs_moment(p, m: int) -> Fraction:
    """E|1_L - p^3|^m = p^3 (1 - p^3)^m + (1 - p^3) p^(3m)."""
    cube = Fraction(p) ** 3
    return cube * (1 - cube) ** m + (1 - cube) * cube**m


def chatterjee_bound(n: int, p=Fraction(1, 2), allow_composite: bool = False) -> ChatterjeeBound:
    """
    Wasserstein bound (4 / (sqrt(pi) sigma^2)) sqrt(D^3 sum E|X|^4) + (D^2 / sigma^3) sum E|X|^3
    for the centred indicators X_L = 1_L - p^3, with its Kolmogorov conversion
    sqrt((2/pi) W). The relaxed variant uses E|X|^m <= 1.

    D is the degree-lemma value (9/2)(n - 1) + 1. The same bound with the
    brute-force graph D is reported alongside while the graph fits under
    GRAPH_MAX_N.
    """
    n = PrimeValidator.require_odd_prime(n, minimum=7, allow_composite=allow_composite)
    p = NumericValidator.require_probability(p)
    variance = ap_moments_unconditional(n, p, allow_composite=allow_composite).variance
    D = int(degree_bound(n)) + 1
    try:
        D_exact = dependency_graph(n, allow_composite=allow_composite).D
    except ResourceLimitError:
        logger.warning(f"Dependency graph skipped at n={n}; reporting the degree-lemma bound only")
        D_exact = None
    vertices = binom(n, 2)
    third = indicator_abs_moment(p, 3)
    fourth = indicator_abs_moment(p, 4)

    def wasserstein(degree, third_sum, fourth_sum):
        sigma2 = float(variance)
        return (
            4 / (math.sqrt(math.pi) * sigma2) * math.sqrt(degree**3 * fourth_sum)
            + degree**2 / sigma2**1.5 * third_sum
        )

    exact = wasserstein(D, float(vertices * third), float(vertices * fourth))
    relaxed = wasserstein(D, float(vertices), float(vertices))
    graph = None if D_exact is None else wasserstein(D_exact, float(vertices * third), float(vertices * fourth))
    return ChatterjeeBound(
        n=n,
        p=p,
        variance=variance,
        D=D,
        third_moment=third,
        fourth_moment=fourth,
        wasserstein=exact,
        kolmogorov=math.sqrt(2 / math.pi * exact),
        relaxed_wasserstein=relaxed,
        relaxed_kolmogorov=math.sqrt(2 / math.pi * relaxed),
        D_exact=D_exact,
        graph_wasserstein=graph,
        graph_kolmogorov=None if graph is None else math.sqrt(2 / math.pi * graph),
    )


# Exchangeable pair


def _swap_sums_for_masks(n: int, masks: np.ndarray, lookup: np.ndarray) -> np.ndarray:
    """sum over member i, non-member j of A(S ^ {i, j}) - A(S), per mask."""
    base = lookup[masks]
    totals = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        member = (masks >> i) & 1 == 1
        for j in range(n):
            if i == j:
                continue
            valid = member & ((masks >> j) & 1 == 0)
            swapped = masks ^ ((1 << i) | (1 << j))
            totals += np.where(valid, lookup[swapped] - base, 0)
    return totals


def _swap_sums_for_states(membership: np.ndarray) -> tuple:
    """(A(S), swap sums) for rows of a boolean membership array."""
    base = count_aps_batch(membership)
    totals = np.zeros(membership.shape[0], dtype=np.int64)
    for row, state in enumerate(membership):
        members = np.flatnonzero(state)
        outsiders = np.flatnonzero(~state)
        swapped = np.repeat(state[None, :], members.size * outsiders.size, axis=0)
        pairs = np.array([(i, j) for i in members for j in outsiders])
        swapped[np.arange(pairs.shape[0]), pairs[:, 0]] = False
        swapped[np.arange(pairs.shape[0]), pairs[:, 1]] = True
        totals[row] = int(count_aps_batch(swapped).sum() - base[row] * pairs.shape[0])
    return base, totals


def exchangeable_verify(
    n: int,
    k: int,
    mode: str = "exact",
    samples: int = 200,
    rng: Optional[RngStream] = None,
    allow_composite: bool = False,
) -> ExchangeableReport:
    """
    Check E[A' - A | S] = -lambda (A(S) - mu_{n,k}) where S' swaps one uniform
    member of S with one uniform non-member.

    Residuals are reported against the stated lambda = 3(n-k)/C(n,2) and
    the swap-implied lambda = 3(n-2)/(k(n-k)); the exactly fitted lambda is
    returned as well. Exact mode covers all C(n,k) subsets (n <= 13).
    """
    n = PrimeValidator.require_odd_prime(n, minimum=5, allow_composite=allow_composite)
    k = NumericValidator.require_in_range(k, 0, n, "k")
    mean = conditional_mean(n, k)
    lambda_stated = Fraction(3 * (n - k), binom(n, 2))
    lambda_unordered = Fraction(3 * (n - 2), binom(n, 2))

    if k in (0, n):
        return ExchangeableReport(
            n=n, k=k, mode=mode, subsets=1, mean=mean,
            lambda_stated=lambda_stated, lambda_swap=None,
            lambda_unordered=lambda_unordered, lambda_fitted=None,
            max_residual_stated=Fraction(0), max_residual_swap=Fraction(0),
        )

    swaps = k * (n - k)
    lambda_swap = Fraction(3 * (n - 2), swaps)
    if mode == "exact":
        if n > 13:
            raise ResourceLimitError(f"Exact exchangeable check limited to n <= 13, got {n}", n=n)
        all_masks = np.arange(1 << n, dtype=np.int64)
        lookup = ap_counts_for_masks(n, all_masks)
        masks = all_masks[np.bitwise_count(all_masks) == k]
        values = lookup[masks]
        sums = _swap_sums_for_masks(n, masks, lookup)
    elif mode == "mc":
        samples = NumericValidator.require_at_least(samples, 1, "samples")
        generator = (rng or RngStream(seed=Config.SEED)).generator(0)
        values, sums = _swap_sums_for_states(sample_subset_fixed_k_batch(n, k, samples, generator))
    else:
        raise DomainError(f"Unknown mode '{mode}'", choices=["exact", "mc"])

    max_stated = Fraction(0)
    max_swap = Fraction(0)
    cross = Fraction(0)
    square = Fraction(0)
    for (value, total), multiplicity in Counter(zip(values.tolist(), sums.tolist())).items():
        drift = Fraction(total, swaps)
        centred = value - mean
        max_stated = max(max_stated, abs(drift + lambda_stated * centred))
        max_swap = max(max_swap, abs(drift + lambda_swap * centred))
        cross += multiplicity * drift * centred
        square += multiplicity * centred * centred
    fitted = -cross / square if square else None

    if max_stated:
        logger.warning(
            f"Exchangeable pair n={n} k={k}: stated lambda leaves residual {max_stated}; "
            f"swap-implied lambda {lambda_swap} leaves {max_swap}"
        )
    return ExchangeableReport(
        n=n,
        k=k,
        mode=mode,
        subsets=int(values.size),
        mean=mean,
        lambda_stated=lambda_stated,
        lambda_swap=lambda_swap,
        lambda_unordered=lambda_unordered,
        lambda_fitted=fitted,
        max_residual_stated=max_stated,
        max_residual_swap=max_swap,
    )


# Spacing and gap diagnostics


def spacing_profile(n: int, k_range: Iterable[int] = None, allow_composite: bool = False) -> SpacingProfile:
    """Gaps mu_{n,k+1} - mu_{n,k} = 3 C(k,2) / (n-2) against sigma_{n,k}."""
    n = PrimeValidator.require_odd_prime(n, minimum=7, allow_composite=allow_composite)
    k_values = tuple(range(3, n - 2)) if k_range is None else tuple(int(k) for k in k_range)
    if not k_values:
        raise DomainError("Empty k range")
    for k in k_values:
        NumericValidator.require_in_range(k, 3, n - 3, "k")
    gaps = tuple(Fraction(3 * binom(k, 2), n - 2) for k in k_values)
    sigmas = tuple(math.sqrt(conditional_variance(n, k)) for k in k_values)
    return SpacingProfile(
        n=n,
        k_values=k_values,
        gaps=gaps,
        sigmas=sigmas,
        ratios=tuple(float(gap) / sigma for gap, sigma in zip(gaps, sigmas)),
    )


def gap_diagnostic(n: int, x: int, include_exact: bool = False, allow_composite: bool = False) -> GapDiagnostic:
    """
    Upper bounds on P(A_n = x) from the size decomposition with binomial
    weights: Chebyshev sum_k min(1, sigma_k^2 / (x - mu_k)^2) w_k, and the
    Gaussian-tail form sum_k min(1, 2 Phi-bar(|x - mu_k| / sigma_k)) w_k.
    A term with mu_k = x is capped at w_k.
    """
    n = PrimeValidator.require_odd_prime(n, minimum=5, allow_composite=allow_composite)
    x = int(x)
    chebyshev = Fraction(0)
    gaussian_tail = 0.0
    for k in range(n + 1):
        weight = Fraction(binom(n, k), 2**n)
        distance = x - conditional_mean(n, k)
        variance = conditional_variance(n, k)
        if distance == 0:
            chebyshev += weight
            gaussian_tail += float(weight)
            continue
        chebyshev += min(Fraction(1), variance / distance**2) * weight
        if variance > 0:
            tail = 2 * norm.sf(abs(float(distance)) / math.sqrt(variance))
            gaussian_tail += min(1.0, tail) * float(weight)

    unconditional = ap_moments_unconditional(n, Fraction(1, 2), allow_composite=allow_composite)
    exact = None
    if include_exact:
        from distributions.services import exhaustive_ap_pmf

        exact = exhaustive_ap_pmf(n, Fraction(1, 2), allow_composite=allow_composite).probability(x)
    return GapDiagnostic(
        n=n,
        x=x,
        chebyshev=float(chebyshev),
        gaussian_tail=gaussian_tail,
        gaussian_height=1 / (math.sqrt(2 * math.pi) * unconditional.stddev),
        exact_probability=exact,
    )


def _wilson_interval(hits: int, samples: int, z: float) -> tuple:
    phat = hits / samples
    denominator = 1 + z**2 / samples
    centre = (phat + z**2 / (2 * samples)) / denominator
    half = z * math.sqrt(phat * (1 - phat) / samples + z**2 / (4 * samples**2)) / denominator
    return max(0.0, centre - half), min(1.0, centre + half)


def peak_height_check(
    n: int,
    samples: int = 100000,
    rng: Optional[RngStream] = None,
    mode: str = "mc",
    workers=None,
) -> PeakHeightReport:
    """
    P(A_n = round(mu_{n,k})) at k = (n+1)/2, scaled by n^(3/2), against the
    peak constant 8 sqrt(2)/pi and the Gaussian ceiling (1/3) sqrt(2/pi).
    """
    from distributions.services import Statistic, exhaustive_ap_pmf, mc_histogram

    n = PrimeValidator.require_odd_prime(n, minimum=5)
    k = (n + 1) // 2
    x = round(conditional_mean(n, k))
    scale = n**1.5

    if mode == "exact":
        probability = float(exhaustive_ap_pmf(n, Fraction(1, 2), workers=workers).probability(x))
        low = high = probability
        samples = 0
        undersampled = False
    elif mode == "mc":
        samples = NumericValidator.require_at_least(samples, 1, "samples")
        hist = mc_histogram(Statistic(kind="aps", n=n, p=0.5), samples, rng or RngStream(seed=Config.SEED), workers)
        index = x - hist.support_min
        hits = int(hist.counts[index]) if 0 <= index < hist.counts.size else 0
        probability = hits / samples
        expected = PEAK_CONSTANT / scale * samples
        undersampled = expected < MIN_EXPECTED_HITS
        z = 1.96
        if undersampled:
            z = 3.29
            logger.warning(
                f"Peak check n={n}: expected hits {expected:.1f} < {MIN_EXPECTED_HITS}; widening interval"
            )
        low, high = _wilson_interval(hits, samples, z)
    else:
        raise DomainError(f"Unknown mode '{mode}'", choices=["exact", "mc"])

    return PeakHeightReport(
        n=n,
        k=k,
        x=x,
        mode=mode,
        probability=probability,
        ci_low=low,
        ci_high=high,
        samples=samples,
        undersampled=undersampled,
        scaled=probability * scale,
        peak_constant=PEAK_CONSTANT,
        gaussian_constant=GAUSSIAN_PEAK_CONSTANT,
    )
