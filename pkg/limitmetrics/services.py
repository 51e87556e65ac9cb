"""
Distances, characteristic functions and scaling scans for CLT/LLT checks.

Distributions enter as IntegerPmf, EmpiricalDist or GaussianRef. Binned
continuous histograms are compared at their bin edges (Kolmogorov) or
treated as atoms at bin centres (Wasserstein, LLT densities).
"""

from fractions import Fraction
from typing import Callable, Dict, Sequence, Union
import logging
import math

import numpy as np
from scipy import integrate, stats
from scipy.stats import norm

from core.config import Config
from core.exceptions import DomainError, LimitLabError, PartialResultError, ResourceLimitError
from core.parallel import run_partitioned
from core.validators import NumericValidator, PrimeValidator
from distributions.domain import EmpiricalDist, GaussianRef, IntegerPmf
from limitmetrics.domain import (
    BernoulliCheck,
    CharProfile,
    DescentCharBound,
    InversionErrorBound,
    KolmogorovWassersteinCheck,
    LltError,
    ScanResult,
    SmallTEnvelope,
)

logger = logging.getLogger(__name__)

Distribution = Union[IntegerPmf, EmpiricalDist, GaussianRef]


def _atoms(dist) -> tuple:
    """(points, masses) of a discrete distribution; bin centres when binned."""
    if isinstance(dist, IntegerPmf):
        return dist.support.astype(np.float64), dist.as_float()
    if isinstance(dist, EmpiricalDist):
        points = dist.bin_points + (0.5 * dist.bin_width if dist.binned else 0.0)
        return points, dist.frequencies
    raise DomainError(f"Expected a discrete distribution, got {type(dist).__name__}")


def _cdf_points(dist) -> tuple:
    """
    (points, cdf, left) for step-CDF comparisons. left holds F just below
    each point, or None when only the evaluations at points are exact.
    """
    if isinstance(dist, EmpiricalDist) and dist.binned:
        edges = np.concatenate(([dist.bin_points[0]], dist.bin_points + dist.bin_width))
        cdf = np.concatenate(([0.0], np.cumsum(dist.frequencies)))
        return edges, cdf, None
    points, masses = _atoms(dist)
    cdf = np.cumsum(masses)
    left = np.concatenate(([0.0], cdf[:-1]))
    return points, cdf, left


# Pointwise LLT error


def llt_error(dist, ref: GaussianRef) -> LltError:
    """
    sup_k |P(X = k) - density(k)| over the support widened by 3 sigma on each
    side; scaled = sigma * raw. Binned histograms compare frequency / width
    with the density at bin centres.
    """
    points, masses = _atoms(dist)
    if points.size == 0:
        raise DomainError("Distribution is empty")
    width = dist.bin_width if isinstance(dist, EmpiricalDist) and dist.binned else 1.0
    pad = int(math.ceil(3 * ref.stddev / width))
    grid = np.concatenate(
        (
            points[0] - width * np.arange(pad, 0, -1),
            points,
            points[-1] + width * np.arange(1, pad + 1),
        )
    )
    observed = np.concatenate((np.zeros(pad), masses / width, np.zeros(pad)))
    differences = np.abs(observed - ref.pdf(grid))
    index = int(np.argmax(differences))
    raw = float(differences[index])
    return LltError(raw=raw, scaled=raw * ref.stddev, argmax=int(round(grid[index])), stddev=ref.stddev)


# Kolmogorov and Wasserstein


def kolmogorov(d1: Distribution, d2: Distribution) -> float:
    """sup_x |F1(x) - F2(x)|."""
    if isinstance(d1, GaussianRef) and isinstance(d2, GaussianRef):
        low = min(d1.mean - 12 * d1.stddev, d2.mean - 12 * d2.stddev)
        high = max(d1.mean + 12 * d1.stddev, d2.mean + 12 * d2.stddev)
        grid = np.linspace(low, high, 200001)
        return float(np.max(np.abs(d1.cdf(grid) - d2.cdf(grid))))
    if isinstance(d1, GaussianRef):
        d1, d2 = d2, d1

    points, cdf, left = _cdf_points(d1)
    if isinstance(d2, GaussianRef):
        target = d2.cdf(points)
        distance = np.max(np.abs(cdf - target))
        if left is not None:
            distance = max(distance, np.max(np.abs(left - target)))
        return float(min(distance, 1.0))

    other_points, other_cdf, _ = _cdf_points(d2)
    union = np.union1d(points, other_points)

    def evaluate(at, xs, fs):
        index = np.searchsorted(xs, at, side="right") - 1
        return np.where(index >= 0, fs[np.clip(index, 0, None)], 0.0)

    return float(np.max(np.abs(evaluate(union, points, cdf) - evaluate(union, other_points, other_cdf))))


def kolmogorov_lattice(dist, ref: GaussianRef) -> float:
    """
    Continuity-corrected distance max_k |F(k) - Phi((k + 1/2 - mu) / sigma)|
    for integer-valued distributions. The plain sup distance of a lattice
    variable never falls below half its largest atom.
    """
    if isinstance(dist, EmpiricalDist) and dist.binned:
        raise DomainError("Continuity correction applies to integer-valued distributions only")
    points, masses = _atoms(dist)
    cdf = np.cumsum(masses)
    return float(np.max(np.abs(cdf - ref.cdf(points + 0.5))))


def _normal_partial(z):
    """Antiderivative of Phi: z Phi(z) + phi(z)."""
    return z * norm.cdf(z) + norm.pdf(z)


def _normal_upper(z):
    """Integral of 1 - Phi over [z, inf)."""
    return norm.pdf(z) - z * norm.sf(z)


def _wasserstein_to_gaussian(dist, ref: GaussianRef) -> float:
    points, masses = _atoms(dist)
    z = (points - ref.mean) / ref.stddev
    cdf = np.clip(np.cumsum(masses), 0.0, 1.0)
    a, b, level = z[:-1], z[1:], cdf[:-1]
    crossing = np.clip(norm.ppf(level), a, b)
    pieces = (
        level * (crossing - a)
        - (_normal_partial(crossing) - _normal_partial(a))
        + (_normal_partial(b) - _normal_partial(crossing))
        - level * (b - crossing)
    )
    total = _normal_partial(z[0]) + np.sum(pieces) + _normal_upper(z[-1])
    return float(ref.stddev * total)


def wasserstein_integer(d1: Distribution, d2: Distribution) -> float:
    """L1 distance between the CDFs (1-Lipschitz dual form)."""
    for dist in (d1, d2):
        if not isinstance(dist, GaussianRef):
            mean = float(dist.moments().mean)
            if not math.isfinite(mean):
                raise DomainError("Distribution mean is not finite")
    if isinstance(d1, GaussianRef) and isinstance(d2, GaussianRef):
        value, _ = integrate.quad(lambda x: abs(d1.cdf(x) - d2.cdf(x)), -np.inf, np.inf, limit=200)
        return float(value)
    if isinstance(d1, GaussianRef):
        d1, d2 = d2, d1
    if isinstance(d2, GaussianRef):
        return _wasserstein_to_gaussian(d1, d2)
    points1, masses1 = _atoms(d1)
    points2, masses2 = _atoms(d2)
    return float(stats.wasserstein_distance(points1, points2, masses1, masses2))


def kolmogorov_wasserstein_check(dist) -> KolmogorovWassersteinCheck:
    """Compare the standardized distances of dist to its matched Gaussian."""
    ref = dist.gaussian()
    kolm = kolmogorov(dist, ref)
    wass = wasserstein_integer(dist, ref) / ref.stddev
    return KolmogorovWassersteinCheck(
        kolmogorov=kolm,
        wasserstein=wass,
        bound=math.sqrt(2 / math.pi * wass),
        bound_density_form=(2 / math.pi) ** 0.25 * math.sqrt(wass),
    )


# Characteristic functions


def char_fn(dist, standardize: bool = True, t_grid: Sequence[float] = None) -> CharProfile:
    """phi(t) = sum_k P(k) exp(i t (k - mu) / sigma), or exp(i t k) unstandardized."""
    if t_grid is None or len(t_grid) == 0:
        raise DomainError("Empty t grid")
    t_grid = np.asarray(t_grid, dtype=np.float64)
    points, masses = _atoms(dist)
    center, scale = 0.0, 1.0
    if standardize:
        moments = dist.moments()
        center, scale = float(moments.mean), moments.stddev
        if not scale > 0:
            raise DomainError("Cannot standardize a distribution with zero variance")
    y = (points - center) / scale
    phi = np.exp(1j * np.outer(t_grid, y)) @ masses
    gauss = np.exp(-(t_grid**2) / 2)
    return CharProfile(
        t_grid=t_grid,
        phi=phi,
        gauss_ref=gauss,
        abs_diff=np.abs(phi - gauss),
        center=center,
        scale=scale,
    )


def inversion_grid(dist, standardize: bool = True, rule: str = "period", tolerance: float = 1e-9) -> np.ndarray:
    """
    Uniform grid on [-pi b, pi b] for fourier_invert.

    rule="period": max(256, 2 * span + 2) intervals; the trapezoid rule is
    exact for the lattice trigonometric polynomial once intervals exceed the
    support span. rule="curvature": step^2 * max|phi''| < tolerance, with
    max|phi''| bounded by E[Y^2].
    """
    points, masses = _atoms(dist)
    scale = dist.moments().stddev if standardize else 1.0
    if rule == "period":
        intervals = max(256, 2 * (points.size - 1) + 2)
    elif rule == "curvature":
        center = float(dist.moments().mean) if standardize else 0.0
        second = float(np.dot(masses, ((points - center) / scale) ** 2)) or 1.0
        step = math.sqrt(tolerance / second)
        intervals = int(math.ceil(2 * math.pi * scale / step))
    else:
        raise DomainError(f"Unknown grid rule '{rule}'")
    return np.linspace(-math.pi * scale, math.pi * scale, intervals + 1)


def fourier_invert(profile: CharProfile, lattice_params: tuple, y: float) -> float:
    """
    P(Y = y) = (1 / 2 pi b) int_{-pi b}^{pi b} exp(-i t y) phi(t) dt for
    Y supported on (Z - a) / b, by the trapezoid rule.
    """
    _, b = lattice_params
    half_width = math.pi * b
    t = profile.t_grid
    slack = 1e-9 * max(1.0, half_width)
    if abs(t[0] + half_width) > slack or abs(t[-1] - half_width) > slack:
        raise DomainError(
            f"Grid [{t[0]}, {t[-1]}] does not span the inversion interval [-{half_width}, {half_width}]"
        )
    integrand = np.exp(-1j * t * y) * profile.phi
    return float(integrate.trapezoid(integrand, t).real / (2 * math.pi * b))


def recover_masses(profile: CharProfile, support: Sequence[int]) -> np.ndarray:
    """Invert profile at each integer k of support (lattice a = center, b = scale)."""
    params = (profile.center, profile.scale)
    return np.array([fourier_invert(profile, params, (k - profile.center) / profile.scale) for k in support])


def small_t_envelope(n: int, t_grid: Sequence[float] = None, workers=None) -> SmallTEnvelope:
    """
    Smallest C with |phi_Z(t) - exp(-t^2/2)| <= C (t^3 exp(-t^2/3) + t) / sqrt(n)
    on t in (0, sqrt(n)/4], from the exact pmf at p = 1/2.
    """
    from distributions.services import exhaustive_ap_pmf

    n = PrimeValidator.require_odd_prime(n, minimum=5)
    if n > Config.SMALL_T_MAX_N:
        raise ResourceLimitError(
            f"Small-t envelope needs the exact pmf; limited to n <= {Config.SMALL_T_MAX_N}", n=n
        )
    t_max = math.sqrt(n) / 4
    if t_grid is None:
        t_grid = np.linspace(t_max / 64, t_max, 64)
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0 or np.any(t_grid <= 0) or np.any(t_grid > t_max * (1 + 1e-12)):
        raise DomainError(f"t grid must lie in (0, {t_max}]")

    profile = char_fn(exhaustive_ap_pmf(n, Fraction(1, 2), workers=workers), True, t_grid)
    basis = (t_grid**3 * np.exp(-(t_grid**2) / 3) + t_grid) / math.sqrt(n)
    constant = float(np.max(profile.abs_diff / basis))
    return SmallTEnvelope(n=n, t_grid=t_grid, abs_diff=profile.abs_diff, envelope_basis=basis, constant=constant)


def bernoulli_char_check(p, theta: Sequence[float] = None) -> BernoulliCheck:
    """|E exp(i theta B)| against 1 - 8 p (1-p) (theta / 2 pi)^2 for B ~ Bernoulli(p)."""
    p = float(NumericValidator.require_probability(p))
    if theta is None:
        theta = np.linspace(-math.pi, math.pi, 401)[1:-1]
    theta = np.asarray(theta, dtype=np.float64)
    if np.any(np.abs(theta) >= math.pi):
        raise DomainError("theta must lie in (-pi, pi)")
    scaled = theta / (2 * math.pi)
    nearest = np.abs(scaled - np.round(scaled))
    return BernoulliCheck(
        p=p,
        theta=theta,
        modulus=np.abs(1 - p + p * np.exp(1j * theta)),
        bound=1 - 8 * p * (1 - p) * scaled**2,
        bound_nearest_integer=1 - 8 * p * (1 - p) * nearest**2,
    )


def descent_char_bound(n: int, t_grid: Sequence[float] = None) -> DescentCharBound:
    """
    (1 - 8 (5/36) (theta / 2 pi)^2)^floor((n-1)/2), theta = t / sigma_n, against
    the exact |phi_D(theta)| from the Eulerian pmf.
    """
    from distributions.services import eulerian_pmf

    n = NumericValidator.require_at_least(n, 2, "n")
    sigma = math.sqrt((n + 1) / 12)
    if t_grid is None:
        t_grid = np.linspace(-math.pi * sigma, math.pi * sigma, 201)[1:-1]
    t_grid = np.asarray(t_grid, dtype=np.float64)
    theta = t_grid / sigma
    if np.any(np.abs(theta) >= math.pi):
        raise DomainError("t / sigma_n must lie in (-pi, pi)")
    profile = char_fn(eulerian_pmf(n), standardize=False, t_grid=theta)
    # every conditioned indicator has p (1 - p) >= 5/36
    factor = 1 - 8 * (5 / 36) * (theta / (2 * math.pi)) ** 2
    return DescentCharBound(
        n=n,
        t_grid=t_grid,
        theta=theta,
        modulus=np.abs(profile.phi),
        bound=factor ** ((n - 1) // 2),
    )


def inversion_error_bound(pmf: IntegerPmf, split: float = None, points: int = 4001) -> InversionErrorBound:
    """
    Integral-splitting bound on sup_k |sigma P(X = k) - N((k - mu) / sigma)|:
    (1 / 2 pi) [int_{|t|<A} |phi - g| + int_{A<|t|<pi sigma} (|phi| + g) + 2 int_{pi sigma}^inf g].
    """
    ref = pmf.gaussian()
    sigma = ref.stddev
    limit = math.pi * sigma
    split = limit / 2 if split is None else float(split)
    if not 0 < split <= limit:
        raise DomainError(f"split must lie in (0, {limit}]")

    near = np.linspace(-split, split, points)
    near_profile = char_fn(pmf, True, near)
    near_term = float(integrate.trapezoid(near_profile.abs_diff, near))

    far = np.linspace(split, limit, points)
    far_profile = char_fn(pmf, True, far)
    middle_term = float(2 * integrate.trapezoid(np.abs(far_profile.phi) + far_profile.gauss_ref, far))

    gaussian_tail = float(2 * math.sqrt(2 * math.pi) * norm.sf(limit))
    return InversionErrorBound(
        split=split,
        near_term=near_term,
        middle_term=middle_term,
        gaussian_tail=gaussian_tail,
        bound=(near_term + middle_term + gaussian_tail) / (2 * math.pi),
        observed=llt_error(pmf, ref).scaled,
    )


def fulman_reference(n: int) -> float:
    """sqrt(12 / n), reference Kolmogorov scale for descents."""
    n = NumericValidator.require_at_least(n, 1, "n")
    return math.sqrt(12 / n)


# Scaling scans


def _descents_llt(n, config, scaled=True):
    from distributions.services import eulerian_pmf

    pmf = eulerian_pmf(n)
    error = llt_error(pmf, pmf.gaussian())
    return error.scaled if scaled else error.raw


def _descents_kolmogorov(n, config):
    from distributions.services import eulerian_pmf

    pmf = eulerian_pmf(n)
    return kolmogorov(pmf, pmf.gaussian())


def _aps_exact(n, config):
    from distributions.services import exhaustive_ap_pmf

    return exhaustive_ap_pmf(n, config.get("p", Fraction(1, 2)), workers=1)


def _aps_kolmogorov(n, config):
    pmf = _aps_exact(n, config)
    return kolmogorov(pmf, pmf.gaussian())


def _aps_llt_scaled(n, config):
    pmf = _aps_exact(n, config)
    return llt_error(pmf, pmf.gaussian()).scaled


def _aps_mc_kolmogorov(n, config):
    from distributions.services import Statistic, mc_histogram
    from samplers.domain import RngStream

    statistic = Statistic(kind="aps", n=n, p=float(config.get("p", 0.5)))
    rng = RngStream(seed=config.get("seed", Config.SEED), stream_id=n)
    hist = mc_histogram(statistic, config.get("samples", 10000), rng, workers=1)
    return kolmogorov(hist, hist.gaussian())


def _chatterjee_kolmogorov(n, config):
    from steinlab.services import chatterjee_bound

    return chatterjee_bound(n, config.get("p", Fraction(1, 2))).kolmogorov


METRICS: Dict[str, Callable] = {
    "descents_llt_scaled": lambda n, config: _descents_llt(n, config, scaled=True),
    "descents_llt_raw": lambda n, config: _descents_llt(n, config, scaled=False),
    "descents_kolmogorov": _descents_kolmogorov,
    "aps_kolmogorov": _aps_kolmogorov,
    "aps_llt_scaled": _aps_llt_scaled,
    "aps_mc_kolmogorov": _aps_mc_kolmogorov,
    "chatterjee_kolmogorov": _chatterjee_kolmogorov,
}

MONTE_CARLO_METRICS = {"aps_mc_kolmogorov"}


def _scan_point(task):
    metric, n, config = task
    func = METRICS[metric] if isinstance(metric, str) else metric
    try:
        return n, float(func(n, config)), None
    except LimitLabError as e:
        logger.warning(f"Scan point n={n} failed: {e.detail}")
        return n, None, str(e.detail)
    except (ArithmeticError, ValueError) as e:
        logger.warning(f"Scan point n={n} failed: {e}")
        return n, None, str(e)


def scaling_scan(metric, n_list: Sequence[int], config: dict = None, workers=None) -> ScanResult:
    """
    Evaluate metric at each n and fit log(metric) = slope * log(n) + c by OLS.

    Args:
        metric: Registered metric name or callable (n, config) -> float
        n_list: At least 3 sizes
        config: Per-n options (p, samples, seed)
        workers: Process cap; callables run serially

    Raises:
        PartialResultError: some points failed; carries the completed ScanResult
    """
    config = dict(config or {})
    n_values = [int(n) for n in n_list]
    if len(n_values) < 3:
        raise DomainError(f"Scaling scan needs at least 3 values of n, got {len(n_values)}")
    if isinstance(metric, str) and metric not in METRICS:
        raise DomainError(f"Unknown metric '{metric}'", choices=sorted(METRICS))

    tasks = [(metric, n, config) for n in n_values]
    outcomes = run_partitioned(_scan_point, tasks, workers if isinstance(metric, str) else 1)

    done = [(n, value) for n, value, error in outcomes if error is None]
    failures = {n: error for n, _, error in outcomes if error is not None}
    name = metric if isinstance(metric, str) else getattr(metric, "__name__", "custom")
    floors = ()
    if name in MONTE_CARLO_METRICS:
        samples = config.get("samples", 10000)
        floors = tuple(math.sqrt(1 / samples) for _ in done)

    slope = stderr = intercept = float("nan")
    usable = [(n, v) for n, v in done if v > 0]
    if len(usable) >= 3:
        fit = stats.linregress(np.log([n for n, _ in usable]), np.log([v for _, v in usable]))
        slope, stderr, intercept = float(fit.slope), float(fit.stderr), float(fit.intercept)
    elif done:
        logger.warning(f"Scan '{name}': fewer than 3 positive points, slope not fitted")

    result = ScanResult(
        metric=name,
        n_values=tuple(n for n, _ in done),
        metric_values=tuple(v for _, v in done),
        slope=slope,
        slope_stderr=stderr,
        intercept=intercept,
        noise_floors=floors,
        failures=failures,
    )
    if failures:
        raise PartialResultError(
            f"Scan '{name}' failed at n={sorted(failures)}", partial=result, failures=failures
        )
    logger.info(f"Scan '{name}' slope {slope:.4f} +/- {stderr:.4f}")
    return result
