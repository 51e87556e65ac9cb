"""
Tests for closed-form moments, identities and Fourier levels
"""

from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from combinatorics.domain import MomentSummary
from combinatorics.serializers import ContinuousVarianceSchema, MomentSummarySchema
from combinatorics.services import (
    ap_fourier_spectrum,
    ap_moments_conditional,
    ap_moments_continuous,
    ap_moments_unconditional,
    ap_total,
    brute_force_fourier,
    complement_identity,
    conditional_second_moment_oracle,
    descent_moments,
    extension_count,
    intersection_table,
)
from core.exceptions import DomainError, FormulaDomainError, PrimalityError, ValidationFailure

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23]


class DescentMomentTests(SimpleTestCase):
    """Test descent mean and variance"""

    def test_known_values(self):
        """Test mean (n-1)/2 and variance (n+1)/12"""
        self.assertEqual(descent_moments(10).mean, Fraction(9, 2))
        self.assertEqual(descent_moments(11).variance, 1)
        self.assertEqual(descent_moments(2).mean, Fraction(1, 2))
        self.assertEqual(descent_moments(2).variance, Fraction(1, 4))

    def test_small_n_rejected(self):
        """Test n below 2 raises DomainError"""
        with self.assertRaises(DomainError):
            descent_moments(1)

    def test_negative_variance_rejected(self):
        """Test MomentSummary refuses a negative variance"""
        with self.assertRaises(ValidationFailure):
            MomentSummary(mean=Fraction(0), variance=Fraction(-1))


class UnconditionalMomentTests(SimpleTestCase):
    """Test progression-count moments for p-random subsets"""

    def test_total(self):
        """Test C(n,2) progressions"""
        self.assertEqual(ap_total(5), 10)
        self.assertEqual(ap_total(3), 3)
        self.assertEqual(ap_total(101), 5050)

    def test_n5_half(self):
        """Test exact mean and variance at n=5, p=1/2"""
        summary = ap_moments_unconditional(5, Fraction(1, 2))
        self.assertEqual(summary.mean, Fraction(5, 4))
        self.assertEqual(summary.variance, Fraction(35, 8))
        self.assertFalse(summary.extras["formula_unsafe"])

    def test_n7_mean(self):
        """Test mean p^3 C(n,2) at n=7"""
        self.assertEqual(ap_moments_unconditional(7, 0.5).mean, Fraction(21, 8))

    def test_composite_guard(self):
        """Test composite moduli need allow_composite"""
        with self.assertRaises(PrimalityError):
            ap_moments_unconditional(9, Fraction(1, 2))
        summary = ap_moments_unconditional(9, Fraction(1, 2), allow_composite=True)
        self.assertTrue(summary.extras["formula_unsafe"])

    def test_bad_probability(self):
        """Test p outside (0, 1) raises DomainError"""
        with self.assertRaises(DomainError):
            ap_moments_unconditional(7, 1)

    @given(n=st.sampled_from(SMALL_PRIMES), num=st.integers(1, 9))
    @settings(max_examples=30, deadline=None)
    def test_parseval_matches_closed_form(self, n, num):
        """Test the Fourier level energies sum to the closed-form variance"""
        p = Fraction(num, 10)
        spectrum = ap_fourier_spectrum(n, p)
        self.assertEqual(spectrum.parseval_variance, ap_moments_unconditional(n, p).variance)
        self.assertEqual(spectrum.levels[0].energy, ap_moments_unconditional(n, p).mean ** 2)


class ConditionalMomentTests(SimpleTestCase):
    """Test moments for uniform k-subsets"""

    def test_degenerate_n5(self):
        """Test n=5, k=3: every 3-subset holds exactly one progression"""
        summary = ap_moments_conditional(5, 3)
        self.assertEqual(summary.mean, 1)
        self.assertEqual(summary.variance, 0)

    def test_n7_k4(self):
        """Test exact moments at n=7, k=4"""
        summary = ap_moments_conditional(7, 4)
        self.assertEqual(summary.mean, Fraction(12, 5))
        self.assertEqual(summary.variance, Fraction(6, 25))

    def test_boundary_k(self):
        """Test k=0 and k=n are point masses"""
        self.assertEqual(ap_moments_conditional(11, 0).variance, 0)
        full = ap_moments_conditional(11, 11)
        self.assertEqual(full.mean, 55)
        self.assertEqual(full.variance, 0)

    def test_small_n_rejected(self):
        """Test the closed form refuses n=3"""
        with self.assertRaises(DomainError):
            ap_moments_conditional(3, 1)

    def test_leading_variance_reported(self):
        """Test the leading approximation is returned alongside"""
        summary = ap_moments_conditional(13, 6)
        self.assertEqual(summary.extras["leading_variance"], Fraction(6**3 * 7**3, 2 * 13**4))

    @given(n=st.sampled_from([7, 11, 13, 17]), data=st.data())
    @settings(max_examples=25, deadline=None)
    def test_second_moment_oracle(self, n, data):
        """Test E[A^2] from the intersection table equals variance + mean^2"""
        k = data.draw(st.integers(0, n))
        summary = ap_moments_conditional(n, k)
        self.assertEqual(conditional_second_moment_oracle(n, k), summary.variance + summary.mean**2)


class IdentityTests(SimpleTestCase):
    """Test intersection, extension and complement identities"""

    def test_intersection_table_n7(self):
        """Test ordered-pair intersection counts at n=7"""
        table = intersection_table(7)
        self.assertEqual(table.counts, (42, 252, 126, 21))
        self.assertEqual(table.total, 21**2)

    def test_intersection_table_n5(self):
        """Test the table at n=5 has no disjoint pairs"""
        self.assertEqual(intersection_table(5).counts, (0, 30, 60, 10))

    def test_intersection_table_n3_out_of_domain(self):
        """Test negative closed-form counts raise FormulaDomainError"""
        with self.assertRaises(FormulaDomainError):
            intersection_table(3)

    def test_extension_counts(self):
        """Test extension counts at n=7"""
        self.assertEqual([extension_count(7, i) for i in range(4)], [21, 9, 3, 1])

    def test_complement_identity(self):
        """Test A(S) + A(S^c) closed form"""
        self.assertEqual(complement_identity(5, 2), 1)
        self.assertEqual(complement_identity(7, 4), 3)
        self.assertEqual(complement_identity(5, 0), 10)
        self.assertEqual(complement_identity(9, 0), 36)

    def test_complement_identity_symmetric(self):
        """Test the identity is unchanged under k -> n - k"""
        for n in (5, 7, 9, 11, 13):
            for k in range(n + 1):
                self.assertEqual(complement_identity(n, k), complement_identity(n, n - k))

    def test_conditional_variance_symmetric(self):
        """Test sigma^2_(n,k) = sigma^2_(n,n-k), since A(S^c) = const - A(S)"""
        for n in (7, 11, 13):
            for k in range(n + 1):
                self.assertEqual(ap_moments_conditional(n, k).variance, ap_moments_conditional(n, n - k).variance)

    def test_complement_identity_small_n(self):
        """Test n=3 is rejected"""
        with self.assertRaises(DomainError):
            complement_identity(3, 1)


class ContinuousVarianceTests(SimpleTestCase):
    """Test the continuous-weight variance report"""

    def test_three_values_n7(self):
        """Test the closed form, oracle and 0/1-moment sum at n=7"""
        report = ap_moments_continuous(7)
        self.assertEqual(report.mean, Fraction(21, 8))
        self.assertEqual(report.oracle, Fraction(1897, 576))
        self.assertEqual(report.closed_form, Fraction(2471, 1152))
        self.assertEqual(report.bernoulli_moment_sum, Fraction(777, 64))

    def test_oracle_formula(self):
        """Test oracle = (81n - 25) C(n,2) / 3456"""
        for n in (7, 11, 13, 23):
            report = ap_moments_continuous(n)
            self.assertEqual(report.oracle, Fraction((81 * n - 25) * n * (n - 1) // 2, 3456))

    def test_discrepancy_logged(self):
        """Test the discrepancy is logged, not raised"""
        with self.assertLogs("combinatorics.services", level="WARNING"):
            report = ap_moments_continuous(11)
        self.assertNotEqual(report.discrepancy, 0)
        self.assertEqual(report.summary("closed_form").variance, report.closed_form)

    def test_schema(self):
        """Test the report serializes every value as a rational"""
        data = ContinuousVarianceSchema.model_validate(ap_moments_continuous(7)).model_dump(mode="json")
        self.assertEqual(data["oracle"], {"num": "1897", "den": "576"})
        self.assertIn("discrepancy", data)


class FourierTests(SimpleTestCase):
    """Test the p-biased Fourier spectrum against brute force"""

    def test_brute_force_levels(self):
        """Test numeric level energies match the closed forms at n=7"""
        p = Fraction(1, 3)
        numeric = brute_force_fourier(7, p)
        self.assertLess(numeric["gram_max_error"], 1e-10)
        for level in ap_fourier_spectrum(7, p).levels:
            self.assertAlmostEqual(numeric["level_energy"][level.set_size], float(level.energy), places=9)

    def test_brute_force_support(self):
        """Test only progressions carry level-3 coefficients"""
        numeric = brute_force_fourier(7, Fraction(1, 2))
        triples = [s for s in numeric["coefficients"] if len(s) == 3]
        self.assertEqual(len(triples), 21)
        self.assertFalse([s for s in numeric["coefficients"] if len(s) > 3])

    def test_brute_force_limit(self):
        """Test the brute-force transform refuses large n"""
        with self.assertRaises(DomainError):
            brute_force_fourier(11, Fraction(1, 2))

    def test_moment_schema(self):
        """Test MomentSummarySchema keeps exact values and floats"""
        schema = MomentSummarySchema.from_summary(ap_moments_unconditional(5, Fraction(1, 2)))
        self.assertEqual(schema.variance, Fraction(35, 8))
        self.assertEqual(schema.variance_float, 4.375)
