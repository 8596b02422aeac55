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


import unittest
from unittest.mock import patch

import numpy as np

from matchgate_net import linalg
from matchgate_net.errors import InvalidInputError
from matchgate_net.grassmann import gaussian_generating_function, gaussian_integral_oracle


def random_skew(n, rng):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return X - X.T


def random_symmetric_gf2(m, rng):
    upper = np.triu(rng.integers(0, 2, size=(m, m)), 1)
    return (upper + upper.T).astype(np.uint8)


class TestAsSkew(unittest.TestCase):

    def test_rebuilds_lower_triangle(self):
        A = np.array([[0, 1.0], [-1.0 + 1e-14, 0]])
        S = linalg.as_skew(A)
        self.assertEqual(S[1, 0], -1.0)

    def test_rejects_symmetric(self):
        with self.assertRaises(InvalidInputError):
            linalg.as_skew([[0, 1], [1, 0]])

    def test_rejects_non_square(self):
        with self.assertRaises(InvalidInputError):
            linalg.as_skew(np.zeros((2, 3)))


class TestPfaffian(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(1)

    def test_two_by_two(self):
        self.assertEqual(linalg.pfaffian([[0, 3j], [-3j, 0]]), 3j)

    def test_empty_and_odd(self):
        self.assertEqual(linalg.pfaffian(np.zeros((0, 0))), 1)
        self.assertEqual(linalg.pfaffian(random_skew(5, self.rng)), 0)

    def test_four_by_four(self):
        """(A12, A13, A14, A23, A24, A34) = (1..6) gives 1*6 - 2*5 + 3*4 = 8."""
        A = np.zeros((4, 4))
        for (i, j), v in zip([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], range(1, 7)):
            A[i, j], A[j, i] = v, -v
        self.assertAlmostEqual(linalg.pfaffian(A), 8)
        self.assertAlmostEqual(linalg.pfaffian_by_matchings(A), 8)

    def test_singular(self):
        v, w = self.rng.normal(size=4), self.rng.normal(size=4)
        self.assertAlmostEqual(abs(linalg.pfaffian(np.outer(v, w) - np.outer(w, v))), 0)

    def test_square_is_determinant(self):
        for n in (2, 6, 12, 20):
            A = random_skew(n, self.rng)
            self.assertTrue(np.isclose(linalg.pfaffian(A) ** 2, np.linalg.det(A), rtol=1e-8))

    def test_congruence(self):
        for n in (4, 8, 12):
            A = random_skew(n, self.rng)
            U = self.rng.normal(size=(n, n)) + 1j * self.rng.normal(size=(n, n))
            lhs = linalg.pfaffian(U @ A @ U.T)
            rhs = np.linalg.det(U) * linalg.pfaffian(A)
            self.assertTrue(np.isclose(lhs, rhs, rtol=1e-8))

    def test_matches_matching_sum(self):
        for n in (2, 4, 6, 8):
            A = random_skew(n, self.rng)
            self.assertTrue(np.isclose(linalg.pfaffian(A), linalg.pfaffian_by_matchings(A), rtol=1e-10))


class TestSkewEliminate(unittest.TestCase):

    def test_zero_matrix(self):
        U, rank = linalg.skew_eliminate(np.zeros((3, 3)))
        self.assertEqual(rank, 0)
        np.testing.assert_array_equal(U, np.eye(3))

    def test_invertible(self):
        _, rank = linalg.skew_eliminate([[0, 2], [-2, 0]])
        self.assertEqual(rank, 2)

    def test_rank_two(self):
        rng = np.random.default_rng(4)
        v, w = rng.normal(size=4), rng.normal(size=4)
        A = np.outer(v, w) - np.outer(w, v)
        U, rank = linalg.skew_eliminate(A)
        self.assertEqual(rank, 2)
        reduced = U.T @ A @ U
        mask = np.ones((4, 4), dtype=bool)
        mask[:2, :2] = False
        self.assertLess(np.max(np.abs(reduced[mask])), 1e-10)
        self.assertGreater(abs(np.linalg.det(U)), 1e-12)


class TestGaussianIntegralClosed(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(9)

    def expand(self, result):
        return gaussian_generating_function(result.prefactor, result.quad, result.residual)

    def test_no_source(self):
        A = random_skew(4, self.rng)
        result = linalg.gaussian_integral_closed(A, np.zeros((4, 0)))
        self.assertTrue(np.isclose(result.prefactor, linalg.pfaffian(A)))
        self.assertEqual(result.residual.shape[0], 0)

    def test_invertible_quad(self):
        A = random_skew(4, self.rng)
        B = self.rng.normal(size=(4, 2))
        result = linalg.gaussian_integral_closed(A, B)
        self.assertEqual(result.residual.shape[0], 0)
        np.testing.assert_allclose(result.quad, B.T @ np.linalg.inv(A) @ B, atol=1e-10)

    def test_vanishing(self):
        result = linalg.gaussian_integral_closed(np.zeros((4, 4)), np.ones((4, 1)))
        self.assertTrue(result.is_zero)

    def test_rejects_wrong_shape(self):
        with self.assertRaises(InvalidInputError):
            linalg.gaussian_integral_closed(np.zeros((2, 2)), np.ones((3, 1)))

    def test_matches_oracle(self):
        """Expanded closed form equals the brute-force Grassmann integral."""
        for trial in range(200):
            n = int(self.rng.integers(1, 11))
            k = int(self.rng.integers(0, 7))
            A = random_skew(n, self.rng)
            if trial % 3 == 0:
                # low-rank A exercises the residual block
                v, w = self.rng.normal(size=n), self.rng.normal(size=n)
                A = np.outer(v, w) - np.outer(w, v)
            B = self.rng.normal(size=(n, k)) + 1j * self.rng.normal(size=(n, k))
            oracle = gaussian_integral_oracle(A, B)
            result = linalg.gaussian_integral_closed(A, B)
            if result.is_zero:
                self.assertLess(oracle.max_abs(), 1e-8)
                continue
            closed = self.expand(result)
            self.assertTrue(closed.allclose(oracle, rtol=1e-8, atol=1e-10), f"trial {trial}: n={n}, k={k}")


def sparse_grid(rows, cols, rng, chords=0):
    """Entries of a random complex skew matrix on a grid graph, some listed below the diagonal."""
    n = rows * cols
    pairs = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    pairs += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    pairs += [tuple(rng.choice(n, size=2, replace=False)) for _ in range(chords)]
    i, j = (np.array(p, dtype=np.int64) for p in zip(*pairs))
    v = rng.normal(size=len(pairs)) + 1j * rng.normal(size=len(pairs))
    K = np.zeros((n, n), dtype=complex)
    np.add.at(K, (i, j), v)
    np.add.at(K, (j, i), -v)
    flip = rng.random(len(pairs)) < 0.5
    return np.where(flip, j, i), np.where(flip, i, j), np.where(flip, -v, v), K


class TestGaussianIntegralSparse(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(19)

    def expand(self, result):
        return gaussian_generating_function(result.prefactor, result.quad, result.residual)

    def test_pfaffian_with_small_fronts(self):
        with patch.object(linalg, "LEAF_SIZE", 4):
            for trial in range(30):
                rows, cols = int(self.rng.integers(2, 6)), int(self.rng.integers(2, 7))
                i, j, v, K = sparse_grid(rows, cols, self.rng, chords=int(self.rng.integers(0, 4)))
                result = linalg.gaussian_integral_sparse(rows * cols, i, j, v, np.zeros((0, 0)))
                expected = linalg.pfaffian(K)
                if abs(expected) < 1e-10:
                    self.assertTrue(result.is_zero or abs(result.prefactor) < 1e-8, f"trial {trial}")
                    continue
                self.assertTrue(np.isclose(result.prefactor, expected, rtol=1e-8), f"trial {trial}")
                self.assertEqual(result.rank, rows * cols)

    def test_pfaffian_of_large_grid(self):
        i, j, v, K = sparse_grid(12, 14, self.rng, chords=5)
        result = linalg.gaussian_integral_sparse(168, i, j, v, np.zeros((0, 0)))
        self.assertTrue(np.isclose(result.prefactor, linalg.pfaffian(K), rtol=1e-7))
        self.assertTrue(np.isclose(result.phase * np.exp(result.log_abs), result.prefactor, rtol=1e-9))

    def test_kept_indices_match_closed_form(self):
        with patch.object(linalg, "LEAF_SIZE", 6):
            for trial in range(40):
                rows, cols = int(self.rng.integers(2, 5)), int(self.rng.integers(3, 6))
                n = rows * cols
                keep = int(self.rng.integers(1, 5))
                i, j, v, K = sparse_grid(rows, cols, self.rng, chords=int(self.rng.integers(0, 3)))
                B_keep = self.rng.normal(size=(keep, keep)) + 1j * self.rng.normal(size=(keep, keep))
                B = np.vstack([B_keep, np.zeros((n - keep, keep))])
                dense = linalg.gaussian_integral_closed(K, B)
                sparse = linalg.gaussian_integral_sparse(n, i, j, v, B_keep)
                self.assertEqual(sparse.is_zero, dense.is_zero, f"trial {trial}")
                if dense.is_zero:
                    continue
                self.assertTrue(self.expand(sparse).allclose(self.expand(dense), rtol=1e-8, atol=1e-10),
                                f"trial {trial}: n={n}, keep={keep}")

    def test_internal_block_without_pivots(self):
        """Internal indices joined only through kept ones are delayed to the dense remainder."""
        B_keep = np.array([[1.0, 0.5], [0.0, 2.0j]])
        rows, cols, values = [0, 1, 0], [2, 3, 1], [1.5, -0.5j, 0.25]
        K = np.zeros((4, 4), dtype=complex)
        for a, b, w in zip(rows, cols, values):
            K[a, b], K[b, a] = w, -w
        B = np.vstack([B_keep, np.zeros((2, 2))])
        sparse = linalg.gaussian_integral_sparse(4, rows, cols, values, B_keep)
        dense = linalg.gaussian_integral_closed(K, B)
        self.assertTrue(self.expand(sparse).allclose(self.expand(dense), rtol=1e-10, atol=1e-12))

    def test_vanishing(self):
        # an isolated internal index cannot be matched
        result = linalg.gaussian_integral_sparse(5, [0, 2], [1, 3], [1.0, 2.0], np.zeros((0, 0)))
        self.assertTrue(result.is_zero)
        self.assertEqual(result.prefactor, 0)

    def test_duplicate_entries_are_summed(self):
        result = linalg.gaussian_integral_sparse(2, [0, 1, 0], [1, 0, 1], [1.0, 0.5, 2.0], np.zeros((0, 0)))
        self.assertTrue(np.isclose(result.prefactor, 2.5))

    def test_magnitude_beyond_float_range(self):
        pairs = 600
        rows = np.arange(0, 2 * pairs, 2)
        result = linalg.gaussian_integral_sparse(2 * pairs, rows, rows + 1, np.full(pairs, 1e3),
                                                 np.zeros((0, 0)))
        self.assertFalse(result.is_zero)
        self.assertAlmostEqual(result.log_abs, pairs * np.log(1e3), places=6)
        self.assertTrue(np.isclose(result.phase, 1.0))
        self.assertTrue(np.isinf(abs(result.prefactor)))

    def test_rejects_bad_entries(self):
        with self.assertRaises(InvalidInputError):
            linalg.gaussian_integral_sparse(2, [0], [2], [1.0], np.zeros((0, 0)))
        with self.assertRaises(InvalidInputError):
            linalg.gaussian_integral_sparse(2, [1], [1], [1.0], np.zeros((0, 0)))
        with self.assertRaises(InvalidInputError):
            linalg.gaussian_integral_sparse(2, [0], [1], [1.0], np.zeros((3, 1)))


class TestGf2(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(2)

    def test_zero_matrix(self):
        rank, kernel, rows = linalg.gf2_rank_kernel(np.zeros((3, 3), dtype=int))
        self.assertEqual(rank, 0)
        self.assertEqual(kernel.shape, (3, 3))
        self.assertEqual(rows.shape[0], 0)

    def test_swap(self):
        rank, kernel, _ = linalg.gf2_rank_kernel([[0, 1], [1, 0]])
        self.assertEqual(rank, 2)
        self.assertEqual(kernel.shape[0], 0)

    def test_kernel_is_annihilated(self):
        for _ in range(10):
            N = random_symmetric_gf2(8, self.rng)
            rank, kernel, _ = linalg.gf2_rank_kernel(N)
            self.assertEqual(rank % 2, 0)
            self.assertEqual(kernel.shape[0], 8 - rank)
            self.assertFalse(linalg.gf2_matmul(N, kernel.T).any())

    def test_rejects_non_binary(self):
        with self.assertRaises(InvalidInputError):
            linalg.as_gf2([[0, 2], [2, 0]])

    def test_inverse(self):
        U = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        np.testing.assert_array_equal(linalg.gf2_matmul(U, linalg.gf2_inverse(U)), np.eye(3))
        with self.assertRaises(InvalidInputError):
            linalg.gf2_inverse([[1, 1], [1, 1]])


class TestGf2SymmetricDecompose(unittest.TestCase):

    def recompose(self, U, r):
        m = U.shape[0]
        return linalg.gf2_matmul(linalg.gf2_matmul(U.T, linalg.block_form(m, r)), U)

    def test_block_form_is_fixed(self):
        N = linalg.block_form(4, 4)
        U, r = linalg.gf2_symmetric_decompose(N)
        self.assertEqual(r, 4)
        np.testing.assert_array_equal(U, np.eye(4))

    def test_complete_graph(self):
        # (J + I)^2 = I over GF(2), so K4 has full rank
        N = np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
        U, r = linalg.gf2_symmetric_decompose(N)
        self.assertEqual(r, 4)
        np.testing.assert_array_equal(self.recompose(U, r), N)

    def test_zero(self):
        U, r = linalg.gf2_symmetric_decompose(np.zeros((3, 3), dtype=int))
        self.assertEqual(r, 0)
        np.testing.assert_array_equal(U, np.eye(3))

    def test_random_recomposition(self):
        rng = np.random.default_rng(12)
        for m in range(1, 13):
            N = random_symmetric_gf2(m, rng)
            U, r = linalg.gf2_symmetric_decompose(N)
            np.testing.assert_array_equal(self.recompose(U, r), N)

    def test_rejects_diagonal(self):
        with self.assertRaises(InvalidInputError):
            linalg.gf2_symmetric_decompose([[1, 0], [0, 0]])
        with self.assertRaises(InvalidInputError):
            linalg.gf2_symmetric_decompose([[0, 1], [0, 0]])


if __name__ == '__main__':
    unittest.main()
