"""
Tests for the dependency graph, Stein bounds and peak diagnostics
"""

from fractions import Fraction
import math

from django.test import SimpleTestCase

from combinatorics.services import conditional_mean
from core.exceptions import DomainError, PrimalityError, ResourceLimitError
from distributions.services import exhaustive_ap_pmf
from limitmetrics.services import scaling_scan
from samplers.domain import RngStream
from steinlab.serializers import DependencyGraphSchema, ExchangeableReportSchema, PeakHeightSchema
from steinlab.services import (
    GAUSSIAN_PEAK_CONSTANT,
    PEAK_CONSTANT,
    chatterjee_bound,
    degree_bound,
    dependency_graph,
    exchangeable_verify,
    gap_diagnostic,
    indicator_abs_moment,
    peak_height_check,
    spacing_profile,
)


class DependencyGraphTests(SimpleTestCase):
    """Test degrees of the progression dependency graph"""

    def test_n7(self):
        """Test 21 vertices of degree 18 at n=7"""
        summary = dependency_graph(7)
        self.assertEqual(summary.vertex_count, 21)
        self.assertEqual(summary.max_degree, 18)
        self.assertEqual(summary.D, 19)

    def test_regular_below_bound(self):
        """Test every vertex has degree (9n - 27)/2, under (9/2)(n - 1)"""
        for n in (11, 13, 31):
            summary = dependency_graph(n)
            self.assertEqual(summary.max_degree, (9 * n - 27) // 2)
            self.assertEqual(summary.min_degree, summary.max_degree)
            self.assertLess(summary.max_degree, degree_bound(n))

    def test_guards(self):
        """Test small, composite and oversized moduli"""
        with self.assertRaises(DomainError):
            dependency_graph(5)
        with self.assertRaises(PrimalityError):
            dependency_graph(15)
        with self.assertRaises(ResourceLimitError) as caught:
            dependency_graph(211)
        self.assertEqual(caught.exception.fallback, degree_bound(211) + 1)

    def test_schema(self):
        """Test the schema carries D and the exact bound"""
        data = DependencyGraphSchema.model_validate(dependency_graph(7)).model_dump(mode="json")
        self.assertEqual(data["D"], 19)
        self.assertEqual(data["degree_bound"], {"num": "27", "den": "1"})


class ChatterjeeBoundTests(SimpleTestCase):
    """Test the dependency-graph normal approximation bound"""

    def test_indicator_moments(self):
        """Test E|1_L - 1/8|^m at p = 1/2"""
        for m in (3, 4):
            expected = Fraction(1, 8) * Fraction(7, 8) ** m + Fraction(7, 8) * Fraction(1, 8) ** m
            self.assertEqual(indicator_abs_moment(Fraction(1, 2), m), expected)

    def test_bound_structure(self):
        """Test the Kolmogorov conversion, the relaxed variant and the graph variant"""
        bound = chatterjee_bound(11)
        self.assertEqual(bound.D, 46)
        self.assertEqual(bound.D_exact, 37)
        self.assertAlmostEqual(bound.kolmogorov, math.sqrt(2 / math.pi * bound.wasserstein))
        self.assertGreater(bound.relaxed_wasserstein, bound.wasserstein)
        self.assertLess(bound.graph_kolmogorov, bound.kolmogorov)

    def test_bound_decreases(self):
        """Test the bound shrinks as n grows"""
        self.assertLess(chatterjee_bound(101).kolmogorov, chatterjee_bound(23).kolmogorov)

    def test_quarter_power_slope(self):
        """Test the Kolmogorov bound over primes 11..101 decays like n^(-1/4)"""
        primes = [n for n in range(11, 102) if all(n % d for d in range(2, math.isqrt(n) + 1))]
        scan = scaling_scan("chatterjee_kolmogorov", primes, workers=1)
        self.assertLessEqual(abs(scan.slope + 0.25), 0.10)

    def test_graph_skipped_above_limit(self):
        """Test only the degree-lemma bound is reported above the graph limit"""
        with self.assertLogs("steinlab.services", level="WARNING"):
            bound = chatterjee_bound(211)
        self.assertEqual(bound.D, 946)
        self.assertIsNone(bound.D_exact)
        self.assertIsNone(bound.graph_kolmogorov)


class ExchangeablePairTests(SimpleTestCase):
    """Test the linearity condition of the swap pair"""

    def test_swap_lambda_exact(self):
        """Test lambda = 3(n-2)/(k(n-k)) leaves no residual over all k-subsets"""
        for n, k in ((7, 3), (7, 4), (11, 5)):
            report = exchangeable_verify(n, k)
            self.assertEqual(report.max_residual_swap, 0)
            self.assertEqual(report.lambda_fitted, report.lambda_swap)

    def test_stated_lambda_residual_reported(self):
        """Test the stated lambda leaves a nonzero residual and logs it"""
        with self.assertLogs("steinlab.services", level="WARNING"):
            report = exchangeable_verify(7, 3)
        self.assertEqual(report.lambda_stated, Fraction(4, 7))
        self.assertEqual(report.lambda_swap, Fraction(5, 4))
        self.assertGreater(report.max_residual_stated, 0)
        self.assertEqual(report.subsets, 35)

    def test_degenerate_n5(self):
        """Test n=5, k=3 has zero variance and no fitted lambda"""
        report = exchangeable_verify(5, 3)
        self.assertEqual(report.lambda_stated, Fraction(3, 5))
        self.assertEqual(report.max_residual_stated, 0)
        self.assertIsNone(report.lambda_fitted)

    def test_boundary_k(self):
        """Test k=0 has no swap"""
        report = exchangeable_verify(7, 0)
        self.assertIsNone(report.lambda_swap)
        self.assertEqual(report.subsets, 1)

    def test_monte_carlo(self):
        """Test the identity holds on sampled subsets beyond the exact range"""
        report = exchangeable_verify(17, 8, mode="mc", samples=40, rng=RngStream(seed=8))
        self.assertEqual(report.max_residual_swap, 0)
        self.assertEqual(report.subsets, 40)

    def test_limits(self):
        """Test exact mode size limit and unknown modes"""
        with self.assertRaises(ResourceLimitError):
            exchangeable_verify(17, 8)
        with self.assertRaises(DomainError):
            exchangeable_verify(7, 3, mode="approximate")

    def test_schema(self):
        """Test lambdas serialize as rationals"""
        data = ExchangeableReportSchema.model_validate(exchangeable_verify(5, 3)).model_dump(mode="json")
        self.assertEqual(data["lambda_stated"], {"num": "3", "den": "5"})
        self.assertIsNone(data["lambda_fitted"])


class SpacingAndGapTests(SimpleTestCase):
    """Test mean spacing and Chebyshev gap diagnostics"""

    def test_gaps_are_mean_differences(self):
        """Test gap_k = mu_(k+1) - mu_k"""
        profile = spacing_profile(11)
        self.assertEqual(profile.k_values, tuple(range(3, 9)))
        for k, gap in zip(profile.k_values, profile.gaps):
            self.assertEqual(gap, conditional_mean(11, k + 1) - conditional_mean(11, k))
        self.assertGreater(profile.coefficient_of_variation, 0)

    def test_k_range_validated(self):
        """Test k outside 3..n-3 is refused"""
        with self.assertRaises(DomainError):
            spacing_profile(11, [2])
        with self.assertRaises(DomainError):
            spacing_profile(11, [])

    def test_chebyshev_covers_exact(self):
        """Test the Chebyshev sum bounds every exact point mass at n=7"""
        pmf = exhaustive_ap_pmf(7, Fraction(1, 2), workers=1)
        for x in pmf.support:
            diagnostic = gap_diagnostic(7, int(x), include_exact=True)
            self.assertEqual(diagnostic.exact_probability, pmf.probability(x))
            self.assertGreaterEqual(diagnostic.chebyshev, float(diagnostic.exact_probability))

    def test_bound_falls_toward_gap_midpoint(self):
        """Test the Chebyshev sum decreases moving from mu_(19,10) toward the next mean and beyond the top mean"""
        midpoint = (conditional_mean(19, 10) + conditional_mean(19, 11)) / 2
        inside = [gap_diagnostic(19, x).chebyshev for x in range(22, math.floor(midpoint) + 1)]
        self.assertEqual(len(inside), 4)
        self.assertEqual(inside, sorted(inside, reverse=True))
        beyond = [gap_diagnostic(19, x).chebyshev for x in range(172, 180)]
        self.assertEqual(beyond, sorted(beyond, reverse=True))

    def test_gap_midpoint_n19(self):
        """Test the exact mass at the midpoint between mu_(19,10) and mu_(19,11) sits under the bound and in a dip"""
        midpoint = round((conditional_mean(19, 10) + conditional_mean(19, 11)) / 2)
        self.assertEqual(midpoint, 25)
        diagnostic = gap_diagnostic(19, midpoint, include_exact=True)
        exact = float(diagnostic.exact_probability)
        self.assertGreaterEqual(diagnostic.chebyshev, exact)
        self.assertLessEqual(diagnostic.chebyshev, 1.0)
        peak = float(exhaustive_ap_pmf(19, Fraction(1, 2), workers=1).probability(21))
        self.assertLess(exact, peak / 10)

    def test_gaussian_height(self):
        """Test the reference height 1/(sqrt(2 pi) sigma)"""
        diagnostic = gap_diagnostic(11, 20)
        self.assertIsNone(diagnostic.exact_probability)
        self.assertGreater(diagnostic.gaussian_height, 0)
        self.assertLessEqual(diagnostic.chebyshev, 1.0)


class PeakHeightTests(SimpleTestCase):
    """Test the scaled central point mass"""

    def test_constants(self):
        """Test 8 sqrt(2)/pi and (1/3) sqrt(2/pi)"""
        self.assertAlmostEqual(PEAK_CONSTANT, 3.601, places=3)
        self.assertAlmostEqual(GAUSSIAN_PEAK_CONSTANT, 0.266, places=3)

    def test_target_value(self):
        """Test x = round(mu_(n,(n+1)/2)) at n=19"""
        report = peak_height_check(19, samples=2000, rng=RngStream(seed=1), workers=1)
        self.assertEqual((report.k, report.x), (10, 21))

    def test_exact_mode(self):
        """Test exact mode reads the exhaustive pmf"""
        report = peak_height_check(7, mode="exact", workers=1)
        expected = float(exhaustive_ap_pmf(7, Fraction(1, 2), workers=1).probability(report.x))
        self.assertEqual(report.probability, expected)
        self.assertEqual(report.ci_low, report.ci_high)
        self.assertEqual(report.samples, 0)

    def test_exact_peak_n19(self):
        """Test the exact scaled mass at n=19 lies closer to the peak constant than the Gaussian ceiling"""
        report = peak_height_check(19, mode="exact", workers=1)
        self.assertEqual(report.x, 21)
        self.assertAlmostEqual(report.scaled, 2.70, delta=0.02)
        self.assertTrue(report.closer_to_peak)

    def test_undersampled_interval(self):
        """Test few expected hits widen the interval and log a warning"""
        with self.assertLogs("steinlab.services", level="WARNING"):
            report = peak_height_check(19, samples=2000, rng=RngStream(seed=2), workers=1)
        self.assertTrue(report.undersampled)
        self.assertLessEqual(report.ci_low, report.probability)
        self.assertGreaterEqual(report.ci_high, report.probability)

    def test_schema(self):
        """Test the schema exposes which constant the estimate sits closer to"""
        report = peak_height_check(7, mode="exact", workers=1)
        data = PeakHeightSchema.model_validate(report).model_dump()
        self.assertEqual(data["closer_to_peak"], report.closer_to_peak)
