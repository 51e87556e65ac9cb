"""
Tests for exact pmfs, Monte Carlo histograms and the Gaussian reference
"""

from fractions import Fraction
from itertools import permutations
from math import comb, sqrt

import numpy as np
from django.test import SimpleTestCase

from combinatorics.services import ap_moments_conditional, ap_moments_unconditional, descent_moments
from core.exceptions import DomainError, ResourceLimitError, ValidationFailure
from counters.services import count_descents_batch
from distributions.domain import EmpiricalDist, GaussianRef, IntegerPmf
from distributions.services import (
    Statistic,
    conditional_descent_table,
    eulerian_numbers,
    eulerian_pmf,
    exhaustive_ap_pmf,
    exhaustive_conditional_pmf,
    gaussian_height,
    mc_histogram,
    noise_floor,
    one_sided_descent_table,
)
from samplers.domain import RngStream


class IntegerPmfTests(SimpleTestCase):
    """Test pmf invariants"""

    def test_exact_mass(self):
        """Test exact pmfs must sum to exactly 1"""
        with self.assertRaises(ValidationFailure):
            IntegerPmf(support_min=0, probabilities=(Fraction(1, 3), Fraction(1, 3)))
        with self.assertRaises(ValidationFailure):
            IntegerPmf(support_min=0, probabilities=(Fraction(3, 2), Fraction(-1, 2)))
        with self.assertRaises(DomainError):
            IntegerPmf(support_min=0, probabilities=())

    def test_float_tolerance(self):
        """Test float pmfs tolerate rounding drift only"""
        IntegerPmf(support_min=0, probabilities=(0.1, 0.2, 0.7), exact=False)
        with self.assertRaises(ValidationFailure):
            IntegerPmf(support_min=0, probabilities=(0.1, 0.2, 0.6), exact=False)

    def test_probability_outside_support(self):
        """Test mass outside the support is zero"""
        pmf = eulerian_pmf(3)
        self.assertEqual(pmf.probability(5), 0)
        self.assertEqual(pmf.probability(-1), 0)
        self.assertEqual(pmf.support.tolist(), [0, 1, 2])

    def test_float_view(self):
        """Test the float view keeps unit mass"""
        view = eulerian_pmf(30).float_view()
        self.assertFalse(view.exact)
        self.assertAlmostEqual(view.total_mass, 1.0, places=12)


class EulerianTests(SimpleTestCase):
    """Test the exact descent distribution"""

    def test_small_rows(self):
        """Test Eulerian rows for n=3 and n=4"""
        self.assertEqual(eulerian_numbers(3), (1, 4, 1))
        self.assertEqual(eulerian_numbers(4), (1, 11, 11, 1))
        self.assertEqual(eulerian_pmf(3).probabilities, (Fraction(1, 6), Fraction(2, 3), Fraction(1, 6)))

    def test_rows_match_brute_force(self):
        """Test Eulerian rows against descent counts over all of S_n, n <= 8"""
        for n in range(1, 9):
            perms = np.array(list(permutations(range(1, n + 1))))
            tally = np.bincount(count_descents_batch(perms), minlength=n)
            self.assertEqual(tuple(tally.tolist()), eulerian_numbers(n))

    def test_moments_match_closed_form(self):
        """Test pmf moments equal (n-1)/2 and (n+1)/12"""
        for n in (2, 5, 12, 40):
            summary = eulerian_pmf(n).moments()
            expected = descent_moments(n)
            self.assertEqual(summary.mean, expected.mean)
            self.assertEqual(summary.variance, expected.variance)

    def test_resource_limit(self):
        """Test n above the DP limit raises ResourceLimitError"""
        with self.assertRaises(ResourceLimitError):
            eulerian_pmf(5000)


class DescentTableTests(SimpleTestCase):
    """Test conditional descent probabilities by enumeration"""

    def test_two_sided(self):
        """Test P(X_2 = 1 | X_1, X_3) on S_4"""
        table = conditional_descent_table(4, 2)
        self.assertEqual(table[(1, 1)], Fraction(1, 6))
        self.assertEqual(table[(0, 1)], Fraction(1, 2))
        self.assertEqual(table[(1, 0)], Fraction(1, 2))
        self.assertEqual(table[(0, 0)], Fraction(5, 6))

    def test_one_sided(self):
        """Test P(X_2 = 1 | X_1) on S_3"""
        self.assertEqual(one_sided_descent_table(3), {1: Fraction(1, 3), 0: Fraction(2, 3)})

    def test_position_range(self):
        """Test j must leave both neighbours inside the permutation"""
        with self.assertRaises(DomainError):
            conditional_descent_table(4, 3)


class ExhaustiveProgressionTests(SimpleTestCase):
    """Test exact progression-count pmfs against closed-form moments"""

    def test_unconditional_moments(self):
        """Test the exhaustive pmf reproduces the closed-form moments"""
        for n, p in ((5, Fraction(1, 2)), (7, Fraction(1, 3)), (11, Fraction(2, 5))):
            summary = exhaustive_ap_pmf(n, p, workers=1).moments()
            expected = ap_moments_unconditional(n, p)
            self.assertEqual(summary.mean, expected.mean)
            self.assertEqual(summary.variance, expected.variance)

    def test_conditional_moments(self):
        """Test fixed-size pmfs reproduce the conditional moments"""
        for n, k in ((7, 4), (11, 5), (13, 9)):
            summary = exhaustive_conditional_pmf(n, k, workers=1).moments()
            expected = ap_moments_conditional(n, k)
            self.assertEqual(summary.mean, expected.mean)
            self.assertEqual(summary.variance, expected.variance)

    def test_mixture_over_sizes(self):
        """Test binomial mixtures of fixed-size pmfs give the unconditional pmf exactly"""
        for n, p in ((5, Fraction(1, 2)), (7, Fraction(1, 2)), (11, Fraction(1, 3))):
            mixture = {}
            for k in range(n + 1):
                weight = comb(n, k) * p**k * (1 - p) ** (n - k)
                conditional = exhaustive_conditional_pmf(n, k, workers=1)
                for value, mass in zip(conditional.support.tolist(), conditional.probabilities):
                    mixture[value] = mixture.get(value, 0) + weight * mass
            unconditional = exhaustive_ap_pmf(n, p, workers=1)
            for value in set(mixture) | set(unconditional.support.tolist()):
                self.assertEqual(mixture.get(value, 0), unconditional.probability(value))

    def test_degenerate_n5(self):
        """Test every 3-subset of Z/5Z holds exactly one progression"""
        pmf = exhaustive_conditional_pmf(5, 3, workers=1)
        self.assertEqual(pmf.probability(1), 1)

    def test_combination_walk(self):
        """Test the combination walk beyond the bitmask limit"""
        pmf = exhaustive_conditional_pmf(29, 3, workers=1)
        self.assertEqual(pmf.probability(1), Fraction(1, 9))
        self.assertEqual(exhaustive_conditional_pmf(29, 0, workers=1).probabilities, (Fraction(1),))

    def test_bitmask_limit(self):
        """Test the unconditional enumeration refuses n above the limit"""
        with self.assertRaises(ResourceLimitError):
            exhaustive_ap_pmf(29, Fraction(1, 2))


class MonteCarloTests(SimpleTestCase):
    """Test seeded histograms"""

    def test_independent_of_workers(self):
        """Test the histogram depends on the seed and chunking, never on workers"""
        statistic = Statistic(kind="aps", n=11, p=0.5)
        rng = RngStream(seed=42, stream_id=1)
        serial = mc_histogram(statistic, 5000, rng, workers=1, chunk_size=1000)
        pooled = mc_histogram(statistic, 5000, rng, workers=2, chunk_size=1000)
        np.testing.assert_array_equal(serial.counts, pooled.counts)
        self.assertEqual(serial.support_min, pooled.support_min)
        self.assertEqual(serial.provenance.chunks, 5)
        self.assertEqual(serial.provenance.config_hash, pooled.provenance.config_hash)
        self.assertEqual(len(serial.provenance.config_hash), 64)

    def test_descent_mean(self):
        """Test the sampled descent mean is within 4 sigma of (n-1)/2"""
        samples = 20000
        hist = mc_histogram(Statistic(kind="descents", n=10), samples, RngStream(seed=3), workers=1)
        band = 4 * sqrt(11 / 12 / samples)
        self.assertLess(abs(hist.moments().mean - 4.5), band)

    def test_fixed_k_matches_exact(self):
        """Test fixed-size frequencies track the exact pmf"""
        samples = 20000
        hist = mc_histogram(Statistic(kind="aps_fixed_k", n=7, k=4), samples, RngStream(seed=5), workers=1)
        exact = exhaustive_conditional_pmf(7, 4, workers=1)
        for value, frequency in zip(hist.support, hist.frequencies):
            p = float(exact.probability(value))
            self.assertLess(abs(frequency - p), 4 * sqrt(p * (1 - p) / samples) + 1e-12)

    def test_run_hash(self):
        """Test a supplied run hash is recorded and the default hash follows the seed"""
        statistic = Statistic(kind="descents", n=6)
        supplied = mc_histogram(statistic, 100, RngStream(seed=1), workers=1, run_hash="abc")
        self.assertEqual(supplied.provenance.config_hash, "abc")
        first = mc_histogram(statistic, 100, RngStream(seed=1), workers=1)
        second = mc_histogram(statistic, 100, RngStream(seed=2), workers=1)
        self.assertNotEqual(first.provenance.config_hash, second.provenance.config_hash)

    def test_total_variation_to_exact(self):
        """Test 10^6 draws sit within 3 sqrt(support / samples) of the exact pmf in total variation"""
        samples = 10**6
        cases = (
            (Statistic(kind="aps", n=13, p=0.5), exhaustive_ap_pmf(13, Fraction(1, 2), workers=1)),
            (Statistic(kind="descents", n=12), eulerian_pmf(12)),
        )
        for statistic, exact in cases:
            hist = mc_histogram(statistic, samples, RngStream(seed=17), workers=1)
            observed = dict(zip(hist.support.tolist(), hist.frequencies.tolist()))
            values = set(observed) | set(exact.support.tolist())
            distance = 0.5 * sum(abs(observed.get(v, 0.0) - float(exact.probability(v))) for v in values)
            self.assertLess(distance, 3 * sqrt(len(exact.probabilities) / samples))

    def test_binned_continuous(self):
        """Test continuous sums are binned and refuse an integer pmf"""
        hist = mc_histogram(
            Statistic(kind="aps_continuous_binned", n=11, bin_width=0.5), 2000, RngStream(seed=1), workers=1
        )
        self.assertTrue(hist.binned)
        self.assertEqual(hist.bin_width, 0.5)
        with self.assertRaises(DomainError):
            hist.to_pmf()

    def test_unknown_statistic(self):
        """Test unknown statistic kinds are rejected"""
        with self.assertRaises(DomainError):
            Statistic(kind="inversions", n=5)
        with self.assertRaises(DomainError):
            Statistic(kind="aps", n=8, p=0.5)


class EmpiricalDistTests(SimpleTestCase):
    """Test histogram invariants and merging"""

    def test_count_mismatch(self):
        """Test counts must sum to the sample size"""
        with self.assertRaises(ValidationFailure):
            EmpiricalDist(support_min=0, counts=[1, 2], sample_size=4)

    def test_merge(self):
        """Test merging aligns supports and adds counts"""
        first = EmpiricalDist.from_values(np.array([1, 1, 2]))
        second = EmpiricalDist.from_values(np.array([3, 0]))
        merged = first.merge(second)
        self.assertEqual(merged.support_min, 0)
        self.assertEqual(merged.counts.tolist(), [1, 2, 1, 1])
        self.assertEqual(second.merge(first).counts.tolist(), merged.counts.tolist())

    def test_merge_binning_mismatch(self):
        """Test histograms with different bins do not merge"""
        first = EmpiricalDist(support_min=0, counts=[1], sample_size=1, bin_width=0.5, binned=True)
        second = EmpiricalDist(support_min=0, counts=[1], sample_size=1)
        with self.assertRaises(ValidationFailure):
            first.merge(second)

    def test_to_pmf(self):
        """Test an integer histogram converts to an exact pmf"""
        pmf = EmpiricalDist.from_values(np.array([2, 2, 3, 5])).to_pmf()
        self.assertEqual(pmf.support_min, 2)
        self.assertEqual(pmf.probability(2), Fraction(1, 2))
        self.assertEqual(pmf.probability(4), 0)


class GaussianReferenceTests(SimpleTestCase):
    """Test the normal reference helpers"""

    def test_height(self):
        """Test the standard normal density at 0"""
        self.assertAlmostEqual(gaussian_height(GaussianRef(0, 1), 0), 0.3989422804014327, places=15)

    def test_invalid_stddev(self):
        """Test non-positive scales are rejected"""
        with self.assertRaises(DomainError):
            GaussianRef(0, 0)

    def test_moment_matched(self):
        """Test the moment-matched reference of the Eulerian pmf"""
        ref = eulerian_pmf(11).gaussian()
        self.assertEqual(ref.mean, 5.0)
        self.assertAlmostEqual(ref.stddev, 1.0)

    def test_noise_floor(self):
        """Test sqrt(1/samples)"""
        self.assertAlmostEqual(noise_floor(10000), 0.01)
