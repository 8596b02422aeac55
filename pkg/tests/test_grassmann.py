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

import numpy as np

from matchgate_net import grassmann
from matchgate_net.errors import InvalidInputError, SizeLimitError
from matchgate_net.grassmann import GrassmannPoly
from matchgate_net.linalg import pfaffian
from matchgate_net.models import DenseTensor


def random_poly(n, rng, density=0.5, parity=None):
    coeffs = {}
    for mask in range(1 << n):
        if parity is not None and bin(mask).count("1") % 2 != parity:
            continue
        if rng.random() < density:
            coeffs[mask] = complex(rng.normal(), rng.normal())
    return GrassmannPoly(n, coeffs)


def random_skew(n, rng):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return X - X.T


class TestAlgebra(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_generators_anticommute(self):
        n = 4
        for a in range(n):
            for b in range(n):
                ab = grassmann.multiply(GrassmannPoly.generator(n, a), GrassmannPoly.generator(n, b))
                ba = grassmann.multiply(GrassmannPoly.generator(n, b), GrassmannPoly.generator(n, a))
                self.assertTrue((ab + ba).allclose(GrassmannPoly(n)))
                if a == b:
                    self.assertEqual(ab.coeffs, {})

    def test_odd_polynomials_anticommute(self):
        """f g = -g f for odd f, g."""
        for _ in range(5):
            f = random_poly(6, self.rng, parity=1)
            g = random_poly(6, self.rng, parity=1)
            self.assertTrue((f * g).allclose(-(g * f)))

    def test_even_polynomial_is_central(self):
        f = random_poly(5, self.rng, parity=0)
        g = random_poly(5, self.rng)
        self.assertTrue((f * g).allclose(g * f))

    def test_monomial_reorders_with_sign(self):
        """theta_2 theta_0 theta_1 normal-orders to +theta_0 theta_1 theta_2."""
        m = GrassmannPoly.monomial(3, [2, 0, 1], 2.0)
        self.assertEqual(m.coefficient([0, 1, 2]), 2.0)
        m = GrassmannPoly.monomial(3, [1, 0])
        self.assertEqual(m.coefficient([0, 1]), -1.0)

    def test_multiplication_is_associative(self):
        f, g, h = (random_poly(5, self.rng) for _ in range(3))
        self.assertTrue(((f * g) * h).allclose(f * (g * h)))

    def test_mismatched_generators_rejected(self):
        with self.assertRaises(InvalidInputError):
            grassmann.multiply(GrassmannPoly(2), GrassmannPoly(3))

    def test_generator_cap(self):
        with self.assertRaises(SizeLimitError):
            GrassmannPoly(grassmann.MAX_GENERATORS + 1)

    def test_dump_format(self):
        f = GrassmannPoly.monomial(3, [0, 2], 2.0) + GrassmannPoly.constant(3, -1.5j)
        lines = f.dump().splitlines()
        self.assertTrue(lines[0].startswith("-(") and lines[0].endswith(",1.5) θ[]"))
        self.assertEqual(lines[1], "+(2.0,0.0) θ[0,2]")


class TestDerivative(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_derivative_of_product(self):
        n = 2
        f = GrassmannPoly.monomial(n, [0, 1])
        self.assertEqual(grassmann.derivative(f, 0).coefficient([1]), 1.0)
        self.assertEqual(grassmann.derivative(f, 1).coefficient([0]), -1.0)

    def test_derivatives_anticommute(self):
        for _ in range(3):
            f = random_poly(6, self.rng)
            for a in range(6):
                self.assertEqual(grassmann.derivative(grassmann.derivative(f, a), a).coeffs, {})
                for b in range(a + 1, 6):
                    ab = grassmann.derivative(grassmann.derivative(f, b), a)
                    ba = grassmann.derivative(grassmann.derivative(f, a), b)
                    self.assertTrue(ab.allclose(-ba))

    def test_index_out_of_range(self):
        with self.assertRaises(InvalidInputError):
            grassmann.derivative(GrassmannPoly(2), 2)

    def test_chain_rule_under_substitution(self):
        """d~_c (f o U) = sum_a U[a, c] (d_a f) o U."""
        n = 4
        U = self.rng.normal(size=(n, n)) + 1j * self.rng.normal(size=(n, n))
        f = random_poly(n, self.rng)
        g = grassmann.change_of_variables(f, U)
        for c in range(n):
            lhs = grassmann.derivative(g, c)
            rhs = GrassmannPoly(n)
            for a in range(n):
                rhs = rhs + grassmann.change_of_variables(grassmann.derivative(f, a), U).scaled(U[a, c])
            self.assertTrue(lhs.allclose(rhs, rtol=1e-10))


class TestIntegrate(unittest.TestCase):

    def test_top_monomial(self):
        f = GrassmannPoly.monomial(2, [0, 1])
        self.assertEqual(grassmann.integrate(f, [0, 1]).coefficient([]), 1.0)

    def test_missing_variable_gives_zero(self):
        f = GrassmannPoly.generator(2, 0)
        self.assertEqual(grassmann.integrate(f, [0, 1]).coeffs, {})

    def test_order_of_integration(self):
        """Integrals over different variables anticommute."""
        f = GrassmannPoly.monomial(2, [0, 1])
        self.assertEqual(grassmann.integrate(f, [1, 0]).coefficient([]), -1.0)

    def test_duplicate_variable(self):
        with self.assertRaises(InvalidInputError):
            grassmann.integrate(GrassmannPoly(2), [0, 0])

    def test_determinant_under_substitution(self):
        rng = np.random.default_rng(3)
        n = 5
        for _ in range(3):
            U = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            f = random_poly(n, rng)
            before = grassmann.integrate(f, range(n)).coefficient([])
            after = grassmann.integrate(grassmann.change_of_variables(f, U), range(n)).coefficient([])
            self.assertTrue(np.isclose(after, np.linalg.det(U) * before, rtol=1e-10))


class TestChangeOfVariables(unittest.TestCase):

    def test_identity(self):
        f = random_poly(4, np.random.default_rng(0))
        self.assertTrue(grassmann.change_of_variables(f, np.eye(4)).allclose(f))

    def test_swap(self):
        f = GrassmannPoly.generator(2, 0)
        g = grassmann.change_of_variables(f, [[0, 1], [1, 0]])
        self.assertEqual(g.coeffs, {0b10: 1.0})

    def test_pair_scales_by_determinant(self):
        U = np.array([[1.0, 2.0], [3.0, 5.0j]])
        g = grassmann.change_of_variables(GrassmannPoly.monomial(2, [0, 1]), U)
        self.assertTrue(np.isclose(g.coefficient([0, 1]), np.linalg.det(U)))
        self.assertEqual(set(g.coeffs), {0b11})

    def test_singular(self):
        with self.assertRaises(InvalidInputError):
            grassmann.change_of_variables(GrassmannPoly(2), [[1, 1], [1, 1]])


class TestExpEven(unittest.TestCase):

    def test_single_pair(self):
        f = GrassmannPoly.monomial(2, [0, 1], 3.0)
        self.assertEqual(grassmann.exp_even(f).coeffs, {0: 1.0, 0b11: 3.0})

    def test_two_pairs(self):
        f = GrassmannPoly.monomial(4, [0, 1]) + GrassmannPoly.monomial(4, [2, 3])
        self.assertEqual(grassmann.exp_even(f).coeffs, {0: 1.0, 0b11: 1.0, 0b1100: 1.0, 0b1111: 1.0})

    def test_zero(self):
        self.assertEqual(grassmann.exp_even(GrassmannPoly(3)).coeffs, {0: 1.0})

    def test_matches_power_series(self):
        rng = np.random.default_rng(5)
        f = random_poly(6, rng, parity=0)
        f.coeffs.pop(0, None)
        self.assertTrue(grassmann.exp_even(f).allclose(grassmann.exp_even_series(f)))

    def test_rejects_odd_and_constant_terms(self):
        with self.assertRaises(InvalidInputError):
            grassmann.exp_even(GrassmannPoly.generator(2, 0))
        with self.assertRaises(InvalidInputError):
            grassmann.exp_even(GrassmannPoly.constant(2))


class TestGaussianOracle(unittest.TestCase):

    def test_two_by_two(self):
        f = grassmann.gaussian_integral_oracle([[0, 2.5], [-2.5, 0]])
        self.assertEqual(f.n_generators, 0)
        self.assertTrue(np.isclose(f.coefficient([]), 2.5))

    def test_linear_source(self):
        f = grassmann.gaussian_integral_oracle(np.zeros((1, 1)), [[1.0]])
        self.assertEqual(f.coeffs, {1: 1.0})

    def test_vanishing(self):
        f = grassmann.gaussian_integral_oracle(np.zeros((2, 2)))
        self.assertEqual(f.coeffs, {})

    def test_matches_pfaffian(self):
        rng = np.random.default_rng(21)
        for n in (2, 4, 6, 8, 10):
            A = random_skew(n, rng)
            value = grassmann.gaussian_integral_oracle(A).coefficient([])
            self.assertTrue(np.isclose(value, pfaffian(A), rtol=1e-9))

    def test_rejects_non_skew(self):
        with self.assertRaises(InvalidInputError):
            grassmann.gaussian_integral_oracle([[1.0, 0], [0, 0]])

    def test_size_cap(self):
        n = grassmann.MAX_ORACLE_N + 2
        with self.assertRaises(SizeLimitError):
            grassmann.gaussian_integral_oracle(np.zeros((n, n)))


class TestGeneratingFunction(unittest.TestCase):

    def test_bit_order(self):
        """x_1 (most significant bit) is generator 0."""
        T = DenseTensor.from_components(2, {"10": 4.0, "11": 1.0})
        f = grassmann.to_grassmann(T)
        self.assertEqual(f.coeffs, {0b01: 4.0, 0b11: 1.0})
        back = grassmann.from_grassmann(f)
        np.testing.assert_allclose(back.values, T.values)

    def test_linear_canonical_form(self):
        """C Int D mu exp(mu b^T theta) = C sum_j b_j theta_j."""
        f = grassmann.gaussian_generating_function(2.0, np.zeros((3, 3)), [[1.0, 0.0, -1.0]])
        self.assertEqual(f.coeffs, {0b001: 2.0, 0b100: -2.0})


if __name__ == '__main__':
    unittest.main()
