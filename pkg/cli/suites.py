"""
Cross-module oracle suites run by `verify`.

Each check returns (passed, detail); passed None marks a value that is
reported without being asserted.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple
import logging
import math

import numpy as np

from combinatorics.services import (
    ap_fourier_spectrum,
    ap_moments_conditional,
    ap_moments_continuous,
    ap_moments_unconditional,
    complement_identity,
    conditional_second_moment_oracle,
    descent_moments,
    extension_count,
    intersection_table,
)
from core.exceptions import LimitLabError, ResourceLimitError
from counters.services import (
    brute_force_complement_sums,
    brute_force_extension_count,
    brute_force_intersections,
)
from distributions.domain import GaussianRef
from distributions.services import (
    Statistic,
    conditional_descent_table,
    eulerian_pmf,
    exhaustive_ap_pmf,
    exhaustive_conditional_pmf,
    mc_histogram,
    noise_floor,
)
from limitmetrics.services import (
    bernoulli_char_check,
    char_fn,
    descent_char_bound,
    inversion_grid,
    kolmogorov,
    kolmogorov_lattice,
    kolmogorov_wasserstein_check,
    llt_error,
    recover_masses,
    scaling_scan,
    small_t_envelope,
)
from samplers.domain import RngStream
from steinlab.services import degree_bound, dependency_graph, exchangeable_verify, gap_diagnostic

logger = logging.getLogger(__name__)

CheckFunc = Callable[["SuiteContext"], Tuple[Optional[bool], str]]
SUITES: Dict[str, List[Tuple[str, CheckFunc]]] = {
    "identities": [],
    "moments": [],
    "stein": [],
    "metrics": [],
}


@dataclass(frozen=True)
class SuiteContext:
    seed: int
    workers: Optional[int] = None


@dataclass(frozen=True)
class CheckOutcome:
    suite: str
    check: str
    status: str
    detail: str


def check(suite: str):
    def register(func: CheckFunc) -> CheckFunc:
        SUITES[suite].append((func.__name__, func))
        return func

    return register


def suite_names(name: str) -> List[str]:
    return list(SUITES) if name == "all" else [name]


def run_suite(name: str, context: SuiteContext) -> List[CheckOutcome]:
    """Run every check of suite name ("all" for every suite), collecting outcomes."""
    outcomes = []
    for suite in suite_names(name):
        for check_name, func in SUITES[suite]:
            try:
                passed, detail = func(context)
                status = "reported" if passed is None else ("pass" if passed else "fail")
            except ResourceLimitError as e:
                status, detail = "resource_limit", str(e.detail)
            except LimitLabError as e:
                status, detail = "fail", str(e.detail)
            if status in ("fail", "resource_limit"):
                logger.warning(f"verify {suite}.{check_name}: {status}: {detail}")
            else:
                logger.info(f"verify {suite}.{check_name}: {status}")
            outcomes.append(CheckOutcome(suite, check_name, status, detail))
    return outcomes


# Identities


@check("identities")
def complement_identity_exhaustive(context):
    mismatches = []
    for n in (5, 7, 9, 11, 13):
        observed = brute_force_complement_sums(n)
        mismatches += [(n, k) for k in range(n + 1) if observed[k] != {complement_identity(n, k)}]
    return not mismatches, f"mismatched (n, k): {mismatches}" if mismatches else "n in 5..13, every subset"


@check("identities")
def intersection_table_brute_force(context):
    mismatches = [n for n in (7, 11, 13) if intersection_table(n).counts != brute_force_intersections(n)]
    return not mismatches, f"mismatched n: {mismatches}" if mismatches else "n in 7, 11, 13"


@check("identities")
def extension_counts_brute_force(context):
    mismatches = [
        (n, i)
        for n in (7, 11, 13)
        for i in range(4)
        if extension_count(n, i) != brute_force_extension_count(n, tuple(range(i)))
    ]
    return not mismatches, f"mismatched (n, i): {mismatches}" if mismatches else "n in 7, 11, 13"


# Moments


@check("moments")
def eulerian_moments(context):
    mismatches = []
    for n in range(2, 201):
        exact = eulerian_pmf(n).moments()
        expected = descent_moments(n)
        if (exact.mean, exact.variance) != (expected.mean, expected.variance):
            mismatches.append(n)
    return not mismatches, f"mismatched n: {mismatches}" if mismatches else "2 <= n <= 200"


@check("moments")
def parseval_variance(context):
    cases = [(n, Fraction(1, 2)) for n in (5, 7, 11, 13, 17, 19)]
    cases += [(n, Fraction(1, 4)) for n in (5, 7, 11, 13)]
    mismatches = []
    for n, p in cases:
        exhaustive = exhaustive_ap_pmf(n, p, workers=context.workers).moments()
        closed = ap_moments_unconditional(n, p)
        spectrum = ap_fourier_spectrum(n, p)
        if not exhaustive.variance == closed.variance == spectrum.parseval_variance:
            mismatches.append((n, str(p)))
        elif exhaustive.mean != closed.mean:
            mismatches.append((n, str(p)))
    return not mismatches, f"mismatched (n, p): {mismatches}" if mismatches else f"{len(cases)} cases"


@check("moments")
def conditional_moments(context):
    mismatches = []
    for n in (7, 11, 13):
        for k in range(n + 1):
            exhaustive = exhaustive_conditional_pmf(n, k, workers=context.workers).moments()
            closed = ap_moments_conditional(n, k)
            second = conditional_second_moment_oracle(n, k)
            if (exhaustive.mean, exhaustive.variance) != (closed.mean, closed.variance):
                mismatches.append((n, k))
            elif second != closed.variance + closed.mean**2:
                mismatches.append((n, k))
    degenerate = exhaustive_conditional_pmf(5, 3, workers=context.workers).moments().variance
    if degenerate != 0:
        mismatches.append((5, 3))
    return not mismatches, f"mismatched (n, k): {mismatches}" if mismatches else "n in 7, 11, 13; sigma(5,3) = 0"


@check("moments")
def continuous_variance_report(context):
    report = ap_moments_continuous(23)
    return None, (
        f"n=23 closed form {report.closed_form} ({float(report.closed_form):.6g}), "
        f"uniform-moment oracle {report.oracle} ({float(report.oracle):.6g}), "
        f"0/1-moment sum {report.bernoulli_moment_sum}"
    )


# Stein


@check("stein")
def exchangeable_residual(context):
    stated = []
    failures = []
    for n in (5, 7, 11, 13):
        for k in range(n + 1):
            report = exchangeable_verify(n, k, mode="exact")
            if report.max_residual_swap != 0:
                failures.append((n, k))
            if report.max_residual_stated != 0:
                stated.append((n, k))
    detail = f"swap-implied lambda exact for n in 5, 7, 11, 13; stated lambda nonzero at {len(stated)} (n, k)"
    return not failures, f"residual nonzero at {failures}" if failures else detail


@check("stein")
def dependency_degree(context):
    primes = (7, 11, 13, 17, 19, 23, 29, 31)
    over = [n for n in primes if dependency_graph(n).max_degree > degree_bound(n)]
    return not over, f"degree bound exceeded at {over}" if over else "primes 7..31"


@check("stein")
def kolmogorov_wasserstein_bound(context):
    dists = [("descents", n, eulerian_pmf(n)) for n in (10, 50, 100)]
    dists += [("aps", n, exhaustive_ap_pmf(n, Fraction(1, 2), workers=context.workers)) for n in (7, 11, 13)]
    dists.append(("conditional", 13, exhaustive_conditional_pmf(13, 6, workers=context.workers)))
    failures = [(name, n) for name, n, pmf in dists if not kolmogorov_wasserstein_check(pmf).holds]
    return not failures, f"bound fails for {failures}" if failures else f"{len(dists)} standardized pairs"


@check("stein")
def chatterjee_slope(context):
    primes = [n for n in range(11, 102) if all(n % d for d in range(2, int(math.isqrt(n)) + 1))]
    scan = scaling_scan("chatterjee_kolmogorov", primes, workers=context.workers)
    passed = abs(scan.slope + 0.25) <= 0.10
    return passed, f"degree-lemma D: slope {scan.slope:.4f} +/- {scan.slope_stderr:.4f} over primes 11..101"


@check("stein")
def gap_chebyshev_covers_exact(context):
    failures = []
    for n in (7, 11, 13):
        x = round(ap_moments_unconditional(n, Fraction(1, 2)).mean)
        diagnostic = gap_diagnostic(n, x, include_exact=True)
        if diagnostic.chebyshev < diagnostic.exact_probability:
            failures.append(n)
    return not failures, f"Chebyshev below exact at {failures}" if failures else "n in 7, 11, 13"


# Metrics


@check("metrics")
def descent_lemma(context):
    expected = {
        (1, 1): Fraction(1, 6),
        (0, 1): Fraction(1, 2),
        (1, 0): Fraction(1, 2),
        (0, 0): Fraction(5, 6),
    }
    table = conditional_descent_table(4, 2)
    return table == expected, f"S_4 table {dict((k, str(v)) for k, v in sorted(table.items()))}"


@check("metrics")
def characteristic_bounds(context):
    bernoulli = [p for p in (Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)) if not bernoulli_char_check(p).holds]
    descents = [n for n in (10, 50, 200) if not descent_char_bound(n).holds]
    failures = bernoulli + descents
    return not failures, f"bound fails at {failures}" if failures else "Bernoulli p in 1/6, 1/2, 5/6; descents n in 10, 50, 200"


@check("metrics")
def fourier_round_trip(context):
    pmf = eulerian_pmf(20)
    profile = char_fn(pmf, standardize=True, t_grid=inversion_grid(pmf))
    error = float(np.max(np.abs(recover_masses(profile, pmf.support) - pmf.as_float())))
    return error <= 1e-8, f"max mass error {error:.3e} at n=20"


@check("metrics")
def descents_llt_scaling(context):
    sizes = (50, 100, 200, 400)
    scaled = scaling_scan("descents_llt_scaled", sizes, workers=context.workers)
    raw = scaling_scan("descents_llt_raw", sizes, workers=context.workers)
    passed = scaled.slope <= -0.4 and raw.slope <= -0.9 and max(scaled.slope_stderr, raw.slope_stderr) <= 0.1
    return passed, (
        f"scaled slope {scaled.slope:.4f} +/- {scaled.slope_stderr:.4f}, "
        f"raw slope {raw.slope:.4f} +/- {raw.slope_stderr:.4f}"
    )


@check("metrics")
def aps_scaled_llt_persists(context):
    values = []
    for n in (11, 13, 17, 19):
        pmf = exhaustive_ap_pmf(n, Fraction(1, 2), workers=context.workers)
        values.append(llt_error(pmf, pmf.gaussian()).scaled)
    passed = min(values) >= 0.5 * max(values)
    return passed, "sigma * llt error at n = 11, 13, 17, 19: " + ", ".join(f"{v:.4f}" for v in values)


@check("metrics")
def aps_monte_carlo_peaks(context):
    n, samples = 101, 100000
    hist = mc_histogram(Statistic(kind="aps", n=n, p=0.5), samples, RngStream(seed=context.seed, stream_id=n), context.workers)
    sigma = ap_moments_unconditional(n, Fraction(1, 2)).stddev
    height = sigma * float(hist.frequencies.max())
    threshold = 1.5 / math.sqrt(2 * math.pi)
    return height > threshold, f"sigma * max frequency {height:.4f} against {threshold:.4f}"


@check("metrics")
def conditional_near_gaussian(context):
    n, samples = 53, 10000
    floor = noise_floor(samples)
    distances = {}
    corrected = {}
    for k in range(20, 34):
        hist = mc_histogram(
            Statistic(kind="aps_fixed_k", n=n, k=k), samples, RngStream(seed=context.seed, stream_id=k), context.workers
        )
        ref = GaussianRef.from_moments(ap_moments_conditional(n, k))
        distances[k] = kolmogorov(hist, ref)
        corrected[k] = kolmogorov_lattice(hist, ref)
    worst = max(distances, key=distances.get)
    passed = distances[worst] < 0.05 + floor
    return passed, (
        f"largest Kolmogorov distance {distances[worst]:.4f} at k={worst}, floor {floor:.4f}; "
        f"continuity-corrected max {max(corrected.values()):.4f}"
    )


@check("metrics")
def continuous_near_gaussian(context):
    n, samples = 23, 100000
    hist = mc_histogram(
        Statistic(kind="aps_continuous_binned", n=n, bin_width=1.0), samples, RngStream(seed=context.seed, stream_id=n), context.workers
    )
    report = ap_moments_continuous(n)
    ref = GaussianRef(mean=float(report.mean), stddev=math.sqrt(report.oracle))
    distance = kolmogorov(hist, ref)
    floor = noise_floor(samples)
    return distance < 0.05 + floor, f"distance {distance:.4f}, floor {floor:.4f}"


@check("metrics")
def small_t_envelope_stable(context):
    constants = [small_t_envelope(n, workers=context.workers).constant for n in (11, 19)]
    return constants[1] <= 1.5 * constants[0], f"constants {constants[0]:.4f}, {constants[1]:.4f}"
