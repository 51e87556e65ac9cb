"""
Tests for seeded streams and state samplers
"""

from collections import Counter
from itertools import product
from math import factorial, sqrt

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import DomainError, ValidationFailure
from samplers.domain import ContinuousState, LehmerCode, RngStream, SubsetState
from samplers.services import (
    lehmer_to_permutation,
    permutation_to_lehmer,
    sample_continuous,
    sample_continuous_batch,
    sample_lehmer,
    sample_lehmer_batch,
    sample_subset,
    sample_subset_batch,
    sample_subset_fixed_k,
    sample_subset_fixed_k_batch,
)

# First four random_raw outputs of Generator(Philox(SeedSequence(seed, spawn_key=(stream, chunk))))
PHILOX_VECTORS = {
    (0, 0, 0): [14946354705293191919, 10074248136150883599, 8885816920511359030, 8508543339082433438],
    (0, 1, 0): [16146580426485601214, 15144175059968440162, 11743552852272198163, 6877017684042565602],
    (0, 0, 1): [13892645269283452634, 7755488146763019042, 1300623743932339720, 14823593499445825047],
}


class RngStreamTests(SimpleTestCase):
    """Test stream identity and validation"""

    def test_same_key_same_draws(self):
        """Test (seed, stream, chunk) fixes the draws"""
        first = RngStream(seed=7, stream_id=3).generator(2).random(5)
        second = RngStream(seed=7, stream_id=3).generator(2).random(5)
        np.testing.assert_array_equal(first, second)

    def test_streams_and_chunks_differ(self):
        """Test different streams or chunks give different draws"""
        base = RngStream(seed=7, stream_id=0).generator(0).random(5)
        other_stream = RngStream(seed=7, stream_id=1).generator(0).random(5)
        other_chunk = RngStream(seed=7, stream_id=0).generator(1).random(5)
        self.assertFalse(np.array_equal(base, other_stream))
        self.assertFalse(np.array_equal(base, other_chunk))

    def test_committed_vectors(self):
        """Test the first raw Philox outputs for pinned (seed, stream, chunk) keys"""
        for (seed, stream_id, chunk), expected in PHILOX_VECTORS.items():
            raw = RngStream(seed=seed, stream_id=stream_id).generator(chunk).bit_generator.random_raw(4)
            self.assertEqual(raw.tolist(), expected)

    def test_stream_cross_correlation(self):
        """Test paired uniforms from neighbouring streams are uncorrelated, |r| < 0.01"""
        draws = 10**6
        first = RngStream(seed=0, stream_id=0).generator().random(draws)
        second = RngStream(seed=0, stream_id=1).generator().random(draws)
        self.assertLess(abs(np.corrcoef(first, second)[0, 1]), 0.01)

    def test_invalid_seed(self):
        """Test seeds must be unsigned 64-bit integers"""
        with self.assertRaises(DomainError):
            RngStream(seed=-1)
        with self.assertRaises(DomainError):
            RngStream(seed=2**64)
        with self.assertRaises(DomainError):
            RngStream(seed=True)
        with self.assertRaises(DomainError):
            RngStream(seed=1.5)


class LehmerTests(SimpleTestCase):
    """Test Lehmer-code sampling and decoding"""

    def test_digit_ranges(self):
        """Test a_j lies in 1..n-j+1"""
        digits = sample_lehmer_batch(8, 2000, RngStream(seed=1).generator())
        self.assertTrue(np.all(digits >= 1))
        self.assertTrue(np.all(digits <= np.arange(8, 0, -1)))
        self.assertTrue(np.all(digits[:, -1] == 1))

    def test_invalid_code(self):
        """Test out-of-range digits are rejected"""
        with self.assertRaises(ValidationFailure):
            LehmerCode(n=3, a=(1, 3, 1))
        with self.assertRaises(ValidationFailure):
            LehmerCode(n=3, a=(1, 1))

    def test_decode(self):
        """Test decoding picks the a_j-th smallest unused value"""
        self.assertEqual(lehmer_to_permutation(LehmerCode(n=4, a=(3, 1, 2, 1))), [3, 1, 4, 2])

    def test_bijection_exhaustive(self):
        """Test every code decodes to a distinct permutation for n <= 7"""
        for n in range(1, 8):
            digit_ranges = [range(1, n - j + 1) for j in range(n)]
            images = {tuple(lehmer_to_permutation(LehmerCode(n=n, a=a))) for a in product(*digit_ranges)}
            self.assertEqual(len(images), factorial(n))
            self.assertTrue(all(sorted(image) == list(range(1, n + 1)) for image in images))

    @given(st.permutations(list(range(1, 8))))
    @settings(max_examples=50, deadline=None)
    def test_encoding_inverts_decoding(self, permutation):
        """Test permutation_to_lehmer inverts lehmer_to_permutation"""
        self.assertEqual(lehmer_to_permutation(permutation_to_lehmer(permutation)), permutation)

    def test_uniform_on_s3(self):
        """Test all 6 permutations of S_3 appear within 4 sigma of 1/6"""
        draws = 60000
        digits = sample_lehmer_batch(3, draws, RngStream(seed=11).generator())
        tally = Counter(map(tuple, digits.tolist()))
        self.assertEqual(len(tally), 6)
        band = 4 * sqrt(draws * (1 / 6) * (5 / 6))
        for count in tally.values():
            self.assertLess(abs(count - draws / 6), band)

    def test_single_draw_matches_stream(self):
        """Test single-state sampling is reproducible from the stream"""
        rng = RngStream(seed=5, stream_id=2)
        self.assertEqual(sample_lehmer(6, rng, call_index=3), sample_lehmer(6, rng, call_index=3))


class SubsetSamplerTests(SimpleTestCase):
    """Test Bernoulli and fixed-size subset samplers"""

    def test_bernoulli_density(self):
        """Test the membership frequency is p within 4 sigma"""
        membership = sample_subset_batch(11, 0.3, 20000, RngStream(seed=3).generator())
        band = 4 * sqrt(0.3 * 0.7 / membership.size)
        self.assertLess(abs(membership.mean() - 0.3), band)

    def test_single_subset(self):
        """Test single subset sampling returns a frozen state"""
        state = sample_subset(7, "1/2", RngStream(seed=3))
        self.assertEqual(state.n, 7)
        self.assertFalse(state.membership.flags.writeable)

    def test_fixed_k_sizes(self):
        """Test every fixed-size draw has exactly k elements"""
        membership = sample_subset_fixed_k_batch(13, 5, 5000, RngStream(seed=4).generator())
        self.assertTrue(np.all(membership.sum(axis=1) == 5))
        self.assertEqual(sample_subset_fixed_k(13, 5, RngStream(seed=4)).size, 5)

    def test_fixed_k_marginals(self):
        """Test each element is included with probability k/n"""
        draws = 20000
        membership = sample_subset_fixed_k_batch(11, 4, draws, RngStream(seed=9).generator())
        p = 4 / 11
        band = 4 * sqrt(p * (1 - p) / draws)
        for frequency in membership.mean(axis=0):
            self.assertLess(abs(frequency - p), band)

    def test_fixed_k_boundaries(self):
        """Test k=0 and k=n give the empty and full sets"""
        generator = RngStream(seed=1).generator()
        self.assertFalse(sample_subset_fixed_k_batch(7, 0, 3, generator).any())
        self.assertTrue(sample_subset_fixed_k_batch(7, 7, 3, generator).all())
        with self.assertRaises(DomainError):
            sample_subset_fixed_k_batch(7, 8, 3, generator)

    def test_subset_state(self):
        """Test SubsetState construction and complement"""
        state = SubsetState.from_mask(5, 0b00111)
        self.assertEqual(state.elements(), (0, 1, 2))
        self.assertEqual(state.complement(), SubsetState.from_elements(5, [3, 4]))
        self.assertEqual(SubsetState.from_elements(5, [7]).elements(), (2,))
        with self.assertRaises(ValidationFailure):
            SubsetState(n=5, membership=[True, False])


class ContinuousSamplerTests(SimpleTestCase):
    """Test uniform weight sampling"""

    def test_weights_in_unit_interval(self):
        """Test weights lie in [0, 1) with mean 1/2 within 4 sigma"""
        weights = sample_continuous_batch(23, 5000, RngStream(seed=2).generator())
        self.assertTrue(np.all((weights >= 0) & (weights < 1)))
        band = 4 * sqrt(1 / 12 / weights.size)
        self.assertLess(abs(weights.mean() - 0.5), band)

    def test_state_validation(self):
        """Test ContinuousState rejects weights outside [0, 1]"""
        self.assertEqual(sample_continuous(5, RngStream(seed=2)).n, 5)
        with self.assertRaises(ValidationFailure):
            ContinuousState(n=2, weights=[0.5, 1.5])
