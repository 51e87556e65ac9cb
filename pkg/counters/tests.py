"""
Tests for descent and progression counters
"""

from itertools import permutations

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from combinatorics.services import complement_identity, extension_count, intersection_table
from core.exceptions import DomainError, ResourceLimitError, ValidationFailure
from counters.domain import ApTriple
from counters.services import (
    ap_counts_for_masks,
    brute_force_complement_sums,
    brute_force_extension_count,
    brute_force_intersections,
    count_aps,
    count_aps_batch,
    count_aps_by_enumeration,
    count_aps_continuous,
    count_descents,
    count_descents_batch,
    enumerate_aps,
)
from samplers.domain import ContinuousState, SubsetState
from samplers.services import permutation_to_lehmer


class DescentCounterTests(SimpleTestCase):
    """Test descent counting on permutations and Lehmer codes"""

    def test_permutation(self):
        """Test descents of explicit permutations"""
        self.assertEqual(count_descents([1, 2, 3, 4]), 0)
        self.assertEqual(count_descents([4, 3, 2, 1]), 3)
        self.assertEqual(count_descents([2, 1, 4, 3]), 2)
        self.assertEqual(count_descents([1]), 0)

    def test_not_a_permutation(self):
        """Test repeated or out-of-range values are rejected"""
        with self.assertRaises(ValidationFailure):
            count_descents([1, 1, 2])
        with self.assertRaises(ValidationFailure):
            count_descents([0, 1, 2])

    def test_eulerian_numbers_n4(self):
        """Test descent counts over S_4 give the Eulerian numbers 1, 11, 11, 1"""
        tally = np.bincount([count_descents(p) for p in permutations(range(1, 5))], minlength=4)
        self.assertEqual(tally.tolist(), [1, 11, 11, 1])

    @given(st.permutations(list(range(1, 10))))
    @settings(max_examples=60, deadline=None)
    def test_lehmer_descents_agree(self, permutation):
        """Test a_j > a_(j+1) exactly where pi(j) > pi(j+1)"""
        code = permutation_to_lehmer(permutation)
        self.assertEqual(count_descents(code), count_descents(permutation))

    def test_batch(self):
        """Test row-wise batch counting"""
        rows = np.array([[1, 2, 3], [3, 2, 1], [2, 3, 1]])
        self.assertEqual(count_descents_batch(rows).tolist(), [0, 2, 1])


class ApTripleTests(SimpleTestCase):
    """Test canonical progression representatives"""

    def test_canonical_flip(self):
        """Test a large difference maps to start+2d with difference n-d"""
        triple = ApTriple.canonical(7, 1, 5)
        self.assertEqual((triple.start, triple.difference), (4, 2))
        self.assertEqual(set(triple.elements), {1, 6, 4})

    def test_invalid(self):
        """Test even n, zero difference and non-canonical difference are rejected"""
        with self.assertRaises(DomainError):
            ApTriple(n=6, start=0, difference=1)
        with self.assertRaises(DomainError):
            ApTriple.canonical(7, 0, 7)
        with self.assertRaises(DomainError):
            ApTriple(n=7, start=0, difference=4)

    def test_enumeration_size(self):
        """Test C(n,2) progressions for odd n"""
        self.assertEqual(len(enumerate_aps(3)), 3)
        self.assertEqual(len(enumerate_aps(5)), 10)
        self.assertEqual(len(set(enumerate_aps(11))), 55)
        with self.assertRaises(DomainError):
            enumerate_aps(8)

    def test_distinct_element_sets(self):
        """Test canonical progressions name distinct 3-sets for prime n"""
        sets = {frozenset(t.elements) for t in enumerate_aps(13)}
        self.assertEqual(len(sets), 78)


class ApCounterTests(SimpleTestCase):
    """Test progression counts of subsets"""

    def test_small_subsets(self):
        """Test {0,1,2} and {0,1,3} at n=5 each hold one progression"""
        self.assertEqual(count_aps(SubsetState.from_elements(5, [0, 1, 2])), 1)
        self.assertEqual(count_aps(SubsetState.from_elements(5, [0, 1, 3])), 1)
        self.assertEqual(count_aps(SubsetState.from_elements(5, [])), 0)
        self.assertEqual(count_aps(SubsetState.from_elements(7, range(7))), 21)

    @given(n=st.sampled_from([5, 7, 9, 11]), data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_roll_sum_matches_enumeration(self, n, data):
        """Test the vectorized count against direct enumeration"""
        elements = data.draw(st.sets(st.integers(0, n - 1)))
        state = SubsetState.from_elements(n, elements)
        self.assertEqual(count_aps(state), count_aps_by_enumeration(state))

    def test_masks_match_batch(self):
        """Test bitmask counting agrees with membership counting"""
        n = 7
        masks = np.arange(1 << n, dtype=np.int64)
        membership = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
        np.testing.assert_array_equal(ap_counts_for_masks(n, masks), count_aps_batch(membership))

    def test_continuous_matches_indicator(self):
        """Test 0/1 weights reproduce the subset count"""
        state = SubsetState.from_elements(9, [0, 1, 2, 4, 6])
        weights = ContinuousState(n=9, weights=state.membership.astype(float))
        self.assertEqual(count_aps_continuous(weights), count_aps(state))

    def test_continuous_full_weight(self):
        """Test constant weight w gives w^3 C(n,2)"""
        weights = ContinuousState(n=7, weights=np.full(7, 0.5))
        self.assertAlmostEqual(count_aps_continuous(weights), 21 / 8)


class BruteForceOracleTests(SimpleTestCase):
    """Test exhaustive counts against the closed forms"""

    def test_intersections(self):
        """Test brute-force intersection tables at n=5, 7, 11"""
        for n in (5, 7, 11):
            self.assertEqual(brute_force_intersections(n), intersection_table(n).counts)

    def test_extensions(self):
        """Test extension counts for fixed sets of size 0..3"""
        fixed = {0: (), 1: (0,), 2: (0, 3), 3: (0, 2, 4)}
        for i, elements in fixed.items():
            self.assertEqual(brute_force_extension_count(11, elements), extension_count(11, i))

    def test_complement_sums_single_valued(self):
        """Test A(S) + A(S^c) depends only on |S| for prime n"""
        for n in (5, 7, 11):
            sums = brute_force_complement_sums(n)
            for k, observed in sums.items():
                self.assertEqual(observed, {complement_identity(n, k)})

    def test_complement_sums_limit(self):
        """Test exhaustive enumeration refuses n above the configured limit"""
        with self.assertRaises(ResourceLimitError):
            brute_force_complement_sums(101)
