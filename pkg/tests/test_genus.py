# Copyright 2026 Justin Cook
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import itertools
import unittest

import numpy as np

from matchgate_net import genus
from matchgate_net.errors import EmbeddingError, InvalidInputError, SizeLimitError
from matchgate_net.generators import random_matchgate
from matchgate_net.genus import PairingGraph
from matchgate_net.matchgate import to_dense
from matchgate_net.models import CanonicalMatchgate, DenseTensor


def random_pairing(m, rng):
    slots = rng.permutation(2 * m)
    return [(int(slots[2 * p]), int(slots[2 * p + 1])) for p in range(m)]


def all_pairings(points):
    if not points:
        yield []
        return
    for i in range(1, len(points)):
        rest = points[1:i] + points[i + 1:]
        for tail in all_pairings(rest):
            yield [(points[0], points[i])] + tail


class TestPairingGraph(unittest.TestCase):

    def test_normalizes_pairs(self):
        pairing = PairingGraph([(3, 1), (0, 2)])
        self.assertEqual(pairing.pairs, [(1, 3), (0, 2)])
        self.assertEqual(pairing.m, 2)

    def test_rejects_overlap(self):
        with self.assertRaises(InvalidInputError):
            PairingGraph([(0, 1), (1, 2)])

    def test_rejects_gaps(self):
        with self.assertRaises(InvalidInputError):
            PairingGraph([(0, 3)])

    def test_rejects_malformed_chord(self):
        with self.assertRaises(InvalidInputError):
            PairingGraph([(0, 1, 2)])

    def test_intersection_matrix(self):
        np.testing.assert_array_equal(genus.intersection_matrix([(0, 2), (1, 3)]), [[0, 1], [1, 0]])
        np.testing.assert_array_equal(genus.intersection_matrix([(0, 1), (2, 3)]), np.zeros((2, 2)))
        np.testing.assert_array_equal(genus.intersection_matrix([(0, 3), (1, 2)]), np.zeros((2, 2)))


class TestFourierSupport(unittest.TestCase):

    def test_empty(self):
        self.assertEqual(genus.fourier_support(np.zeros((0, 0), dtype=int)), [("", 1.0)])

    def test_non_crossing(self):
        self.assertEqual(genus.fourier_support(np.zeros((3, 3), dtype=int)), [("000", 1.0)])

    def test_crossing_pair(self):
        support = genus.fourier_support([[0, 1], [1, 0]])
        self.assertEqual([z for z, _ in support], ["00", "01", "10", "11"])
        np.testing.assert_allclose([f for _, f in support], [0.5, 0.5, 0.5, -0.5])

    def test_reconstructs_quadratic_character(self):
        rng = np.random.default_rng(10)
        for m in (3, 5, 7):
            upper = np.triu(rng.integers(0, 2, size=(m, m)), 1)
            N = upper + upper.T
            support = genus.fourier_support(N)
            for y in itertools.product((0, 1), repeat=m):
                y = np.array(y)
                expected = (-1) ** (int(y @ np.triu(N, 1) @ y) % 2)
                value = sum(f * (-1) ** int(sum(int(c) * b for c, b in zip(z, y))) for z, f in support)
                self.assertAlmostEqual(value, expected)


class TestGenusContraction(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(29)

    def test_single_chord(self):
        """One chord: T(00) + T(11)."""
        T = DenseTensor.from_components(2, {"00": 1, "11": 0.7})
        self.assertTrue(np.isclose(genus.contract_single_vertex(T, [(0, 1)]), 1.7))

    def test_two_crossing_chords(self):
        # T(1111) = T(1100) T(0011) - T(1010) T(0101) = 0
        T = DenseTensor.from_components(4, {"0000": 1, "1100": 0.5, "0011": 2,
                                             "1010": 0.25, "0101": 4})
        result = genus.genus_contraction(T, [(0, 2), (1, 3)])
        self.assertEqual(result.rank, 2)
        self.assertEqual(result.terms, 4)
        expected = genus.contract_single_vertex_bruteforce(T, [(0, 2), (1, 3)])
        self.assertTrue(np.isclose(result.value, expected))
        self.assertTrue(np.isclose(expected, 1 + 0.25 + 4))

    def test_matches_bruteforce(self):
        for trial in range(30):
            m = int(self.rng.integers(1, 6))
            pairs = random_pairing(m, self.rng)
            k = 2 * int(self.rng.integers(0, m + 1))
            M = random_matchgate(2 * m, self.rng, k=k)
            expected = genus.contract_single_vertex_bruteforce(M, pairs)
            actual = genus.contract_single_vertex(M, pairs)
            self.assertTrue(np.isclose(actual, expected, rtol=1e-8, atol=1e-10),
                            f"trial {trial}: pairs={pairs}, k={k}")

    def test_every_pairing_up_to_four_chords(self):
        for m in range(1, 5):
            pairings = list(all_pairings(list(range(2 * m))))
            for trial in range(20):
                M = random_matchgate(2 * m, self.rng, k=2 * int(self.rng.integers(0, m + 1)))
                T = to_dense(M)
                for pairs in pairings:
                    expected = genus.contract_single_vertex_bruteforce(T, pairs)
                    result = genus.genus_contraction(M, pairs)
                    self.assertLessEqual(result.terms, 1 << (m - m % 2))
                    self.assertTrue(np.isclose(result.value, expected, rtol=1e-8, atol=1e-10 * T.scale()),
                                    f"m={m}, trial {trial}, pairs={pairs}")

    def test_non_crossing_needs_one_pfaffian(self):
        M = random_matchgate(6, self.rng, k=0)
        result = genus.genus_contraction(M, [(0, 5), (1, 2), (3, 4)], genus=0)
        self.assertEqual(result.terms, 1)
        self.assertTrue(np.isclose(result.value, genus.contract_single_vertex_bruteforce(M, [(0, 5), (1, 2), (3, 4)])))

    def test_odd_tensor_is_zero(self):
        M = random_matchgate(4, self.rng, k=1)
        result = genus.genus_contraction(M, [(0, 2), (1, 3)])
        self.assertEqual(result.value, 0)
        self.assertEqual(result.terms, 0)

    def test_zero_tensor(self):
        self.assertEqual(genus.contract_single_vertex(CanonicalMatchgate.zero(2), [(0, 1)]), 0)

    def test_genus_bound(self):
        M = random_matchgate(4, self.rng, k=0)
        with self.assertRaises(EmbeddingError):
            genus.genus_contraction(M, [(0, 2), (1, 3)], genus=0)
        self.assertEqual(genus.genus_contraction(M, [(0, 2), (1, 3)], genus=1).terms, 4)

    def test_rank_mismatch(self):
        with self.assertRaises(InvalidInputError):
            genus.genus_contraction(random_matchgate(4, self.rng), [(0, 1)])
        with self.assertRaises(InvalidInputError):
            genus.contract_single_vertex_bruteforce(random_matchgate(4, self.rng), [(0, 1)])

    def test_bruteforce_limit(self):
        m = genus.MAX_BRUTEFORCE_CHORDS + 1
        pairs = [(2 * p, 2 * p + 1) for p in range(m)]
        with self.assertRaises(SizeLimitError):
            genus.contract_single_vertex_bruteforce(CanonicalMatchgate.zero(2 * m), pairs)


if __name__ == '__main__':
    unittest.main()
