"""
Tests for distances, characteristic functions, inversion and scaling scans
"""

from fractions import Fraction
import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DomainError, PartialResultError, PrimalityError, ResourceLimitError, ValidationFailure
from distributions.domain import EmpiricalDist, GaussianRef, IntegerPmf
from distributions.services import eulerian_pmf, exhaustive_ap_pmf
from limitmetrics.domain import CharProfile, ScanResult
from limitmetrics.serializers import ScanResultSchema
from limitmetrics.services import (
    bernoulli_char_check,
    char_fn,
    descent_char_bound,
    fourier_invert,
    fulman_reference,
    inversion_error_bound,
    inversion_grid,
    kolmogorov,
    kolmogorov_lattice,
    kolmogorov_wasserstein_check,
    llt_error,
    recover_masses,
    scaling_scan,
    small_t_envelope,
    wasserstein_integer,
)

HALF = IntegerPmf(support_min=0, probabilities=(Fraction(1, 2), Fraction(1, 2)))
QUARTER = IntegerPmf(support_min=0, probabilities=(Fraction(1, 4), Fraction(3, 4)))


def power_law(n, config):
    return n**-0.5


def fails_at_seven(n, config):
    if n == 7:
        raise ValueError("no value at 7")
    return 1.0 / n


class KolmogorovTests(SimpleTestCase):
    """Test sup-CDF distances"""

    def test_shifted_gaussians(self):
        """Test N(0,1) against N(1,1) gives 2 Phi(1/2) - 1"""
        distance = kolmogorov(GaussianRef(0, 1), GaussianRef(1, 1))
        self.assertAlmostEqual(distance, 0.38292492254802624, places=6)

    def test_two_pmfs(self):
        """Test step CDFs compared on the union of supports"""
        self.assertAlmostEqual(kolmogorov(HALF, QUARTER), 0.25)
        self.assertEqual(kolmogorov(HALF, HALF), 0.0)

    def test_symmetric_in_arguments(self):
        """Test the Gaussian may come first or second"""
        pmf = eulerian_pmf(12)
        ref = pmf.gaussian()
        self.assertEqual(kolmogorov(pmf, ref), kolmogorov(ref, pmf))

    def test_lattice_floor(self):
        """Test the plain distance is at least half the largest atom"""
        pmf = eulerian_pmf(53)
        largest = float(max(pmf.probabilities))
        self.assertGreaterEqual(kolmogorov(pmf, pmf.gaussian()), largest / 2 - 1e-12)

    def test_continuity_corrected(self):
        """Test the continuity-corrected distance falls well below the lattice floor"""
        pmf = eulerian_pmf(53)
        ref = pmf.gaussian()
        corrected = kolmogorov_lattice(pmf, ref)
        self.assertLess(corrected, 0.01)
        self.assertLess(corrected, kolmogorov(pmf, ref))

    def test_continuity_correction_needs_integers(self):
        """Test binned histograms are refused"""
        hist = EmpiricalDist(support_min=0, counts=[2, 2], sample_size=4, bin_width=0.5, binned=True)
        with self.assertRaises(DomainError):
            kolmogorov_lattice(hist, GaussianRef(0.5, 0.3))


class WassersteinTests(SimpleTestCase):
    """Test L1-CDF distances"""

    def test_two_pmfs(self):
        """Test the CDF gap 1/4 over [0, 1]"""
        self.assertAlmostEqual(wasserstein_integer(HALF, QUARTER), 0.25)

    def test_point_mass_to_gaussian(self):
        """Test W(delta_0, N(0,1)) = E|Z| = sqrt(2/pi)"""
        point = IntegerPmf(support_min=0, probabilities=(Fraction(1),))
        expected = math.sqrt(2 / math.pi)
        self.assertAlmostEqual(wasserstein_integer(point, GaussianRef(0, 1)), expected, places=12)
        self.assertAlmostEqual(wasserstein_integer(GaussianRef(0, 1), point), expected, places=12)

    def test_shifted_gaussians(self):
        """Test W(N(0,1), N(1,1)) = 1"""
        self.assertAlmostEqual(wasserstein_integer(GaussianRef(0, 1), GaussianRef(1, 1)), 1.0, places=6)

    def test_kolmogorov_wasserstein(self):
        """Test the standardized distances satisfy the square-root bound"""
        check = kolmogorov_wasserstein_check(eulerian_pmf(30))
        self.assertTrue(check.holds)
        self.assertAlmostEqual(check.bound, math.sqrt(2 / math.pi * check.wasserstein))
        self.assertGreater(check.bound_density_form, check.bound)


class LltErrorTests(SimpleTestCase):
    """Test pointwise local-limit errors"""

    def test_scaled_is_sigma_times_raw(self):
        """Test the scaled error multiplies by the reference stddev"""
        pmf = eulerian_pmf(25)
        error = llt_error(pmf, pmf.gaussian())
        self.assertAlmostEqual(error.scaled, error.raw * error.stddev)
        self.assertGreater(error.raw, 0)

    def test_padding_catches_missing_mass(self):
        """Test a point mass far from the reference shows the full density gap"""
        point = IntegerPmf(support_min=0, probabilities=(Fraction(1),))
        error = llt_error(point, GaussianRef(0, 1))
        self.assertAlmostEqual(error.raw, 1 - 0.3989422804014327)
        self.assertEqual(error.argmax, 0)


class CharacteristicFunctionTests(SimpleTestCase):
    """Test characteristic functions and their inversion"""

    def test_unit_at_zero(self):
        """Test phi(0) = 1 and |phi| <= 1"""
        profile = char_fn(eulerian_pmf(15), True, np.linspace(-3, 3, 61))
        self.assertAlmostEqual(profile.phi[30], 1.0)
        self.assertTrue(np.all(np.abs(profile.phi) <= 1 + 1e-12))

    def test_bernoulli(self):
        """Test the unstandardized transform of a Bernoulli pmf"""
        t = np.array([0.3, 1.7])
        profile = char_fn(QUARTER, standardize=False, t_grid=t)
        np.testing.assert_allclose(profile.phi, 0.25 + 0.75 * np.exp(1j * t))

    def test_conjugate_symmetry(self):
        """Test phi(-t) is the complex conjugate of phi(t)"""
        t = np.linspace(0.1, 3.0, 30)
        pmf = exhaustive_ap_pmf(11, Fraction(1, 3), workers=1)
        forward = char_fn(pmf, True, t)
        backward = char_fn(pmf, True, -t)
        np.testing.assert_allclose(backward.phi, np.conj(forward.phi), atol=1e-12)

    def test_symmetric_pmf_is_real(self):
        """Test the standardized Eulerian transform has no imaginary part"""
        profile = char_fn(eulerian_pmf(15), True, np.linspace(-4, 4, 81))
        np.testing.assert_allclose(profile.phi.imag, 0.0, atol=1e-12)

    def test_rejected_inputs(self):
        """Test empty grids and zero-variance standardization"""
        with self.assertRaises(DomainError):
            char_fn(HALF, True, [])
        point = IntegerPmf(support_min=3, probabilities=(Fraction(1),))
        with self.assertRaises(DomainError):
            char_fn(point, True, [0.5])

    def test_profile_lengths(self):
        """Test CharProfile refuses mismatched sequences"""
        profile = char_fn(HALF, False, [0.0, 1.0])
        with self.assertRaises(ValidationFailure):
            CharProfile(
                t_grid=profile.t_grid, phi=profile.phi[:1], gauss_ref=profile.gauss_ref, abs_diff=profile.abs_diff
            )

    def test_round_trip_standardized(self):
        """Test inverting the standardized transform recovers the Eulerian pmf"""
        pmf = eulerian_pmf(20)
        profile = char_fn(pmf, True, inversion_grid(pmf, True))
        recovered = recover_masses(profile, pmf.support)
        np.testing.assert_allclose(recovered, pmf.as_float(), atol=1e-8)

    def test_round_trip_unstandardized(self):
        """Test inversion on [-pi, pi] for the raw lattice"""
        pmf = eulerian_pmf(9)
        profile = char_fn(pmf, False, inversion_grid(pmf, False))
        self.assertAlmostEqual(fourier_invert(profile, (0.0, 1.0), 4), float(pmf.probability(4)), places=10)

    def test_grid_must_span_interval(self):
        """Test a short grid is refused"""
        profile = char_fn(HALF, False, np.linspace(-1, 1, 11))
        with self.assertRaises(DomainError):
            fourier_invert(profile, (0.0, 1.0), 0)

    def test_grid_rules(self):
        """Test the curvature rule refines the period rule and unknown rules fail"""
        pmf = eulerian_pmf(20)
        self.assertEqual(inversion_grid(pmf, True).size, 257)
        self.assertGreater(inversion_grid(pmf, True, rule="curvature").size, 257)
        with self.assertRaises(DomainError):
            inversion_grid(pmf, True, rule="simpson")


class CharacteristicBoundTests(SimpleTestCase):
    """Test the characteristic-function decay bounds"""

    def test_bernoulli_bound(self):
        """Test |E exp(i theta B)| under the quadratic bound"""
        for p in (0.1, 0.5, Fraction(5, 6)):
            self.assertTrue(bernoulli_char_check(p).holds)

    def test_bernoulli_theta_range(self):
        """Test theta must stay inside (-pi, pi)"""
        with self.assertRaises(DomainError):
            bernoulli_char_check(0.5, [math.pi])

    def test_descent_bound(self):
        """Test the exact descent transform under the product bound"""
        for n in (10, 30, 60):
            self.assertTrue(descent_char_bound(n).holds)

    def test_inversion_error_bound(self):
        """Test the split-integral bound covers the observed scaled error"""
        check = inversion_error_bound(eulerian_pmf(40))
        self.assertTrue(check.holds)
        self.assertGreater(check.near_term, 0)
        with self.assertRaises(DomainError):
            inversion_error_bound(eulerian_pmf(40), split=0)

    def test_fulman_reference(self):
        """Test sqrt(12 / n)"""
        self.assertEqual(fulman_reference(12), 1.0)


class SmallTEnvelopeTests(SimpleTestCase):
    """Test the small-t envelope constant"""

    def test_constant(self):
        """Test the fitted constant is finite and dominates the ratios"""
        envelope = small_t_envelope(7, workers=1)
        self.assertTrue(math.isfinite(envelope.constant))
        self.assertTrue(np.all(envelope.abs_diff <= envelope.constant * envelope.envelope_basis + 1e-12))

    def test_constant_stable_in_n(self):
        """Test the constant at n=19 stays within 1.5 times the constant at n=11"""
        small = small_t_envelope(11, workers=1).constant
        large = small_t_envelope(19, workers=1).constant
        self.assertLessEqual(large, 1.5 * small)

    def test_limits(self):
        """Test size, primality and grid guards"""
        with self.assertRaises(ResourceLimitError):
            small_t_envelope(23)
        with self.assertRaises(PrimalityError):
            small_t_envelope(9)
        with self.assertRaises(DomainError):
            small_t_envelope(7, t_grid=[1.0])


class ScalingScanTests(SimpleTestCase):
    """Test log-log scaling fits"""

    def test_exact_power_law(self):
        """Test a pure power law fits its exponent"""
        result = scaling_scan(power_law, [10, 20, 40, 80])
        self.assertAlmostEqual(result.slope, -0.5)
        self.assertEqual(result.metric, "power_law")
        self.assertEqual(result.n_values, (10, 20, 40, 80))

    def test_descent_llt_decays(self):
        """Test the registered descent metric decays faster than n^(-0.4)"""
        result = scaling_scan("descents_llt_scaled", [50, 100, 200, 400], workers=1)
        self.assertLess(result.slope, -0.4)

    def test_too_few_points(self):
        """Test fewer than 3 sizes are refused"""
        with self.assertRaises(DomainError):
            scaling_scan(power_law, [10, 20])
        with self.assertRaises(DomainError):
            scaling_scan("no_such_metric", [10, 20, 40])

    def test_partial_result(self):
        """Test failed points raise PartialResultError carrying the rest"""
        with self.assertRaises(PartialResultError) as caught:
            scaling_scan(fails_at_seven, [5, 7, 11, 13, 17])
        partial = caught.exception.partial
        self.assertEqual(partial.n_values, (5, 11, 13, 17))
        self.assertIn(7, partial.failures)
        self.assertAlmostEqual(partial.slope, -1.0)

    def test_schema_maps_nan(self):
        """Test unfitted slopes serialize as null"""
        result = ScanResult(metric="m", n_values=(5,), metric_values=(0.1,), slope=float("nan"), slope_stderr=float("nan"))
        data = ScanResultSchema.from_result(result).model_dump(mode="json")
        self.assertIsNone(data["slope"])
        self.assertEqual(data["points"], [{"n": 5, "metric": 0.1, "noise_floor": 0.0}])

    def test_length_mismatch(self):
        """Test ScanResult refuses misaligned sequences"""
        with self.assertRaises(ValidationFailure):
            ScanResult(metric="m", n_values=(5, 7), metric_values=(0.1,), slope=0.0, slope_stderr=0.0)
