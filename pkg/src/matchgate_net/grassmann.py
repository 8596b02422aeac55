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

"""
Exact dense Grassmann algebra over complex coefficients.

A GrassmannPoly maps normally ordered monomials (bitmask, bit a = theta_a,
ascending order) to complex coefficients. All sign bookkeeping is integer
permutation parity; this module is the oracle the closed-form Gaussian
formulas are tested against.
"""

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, Iterable, Sequence

import numpy as np

from matchgate_net.errors import InvalidInputError, SizeLimitError
from matchgate_net.linalg import as_skew
from matchgate_net.models import DenseTensor

logger = logging.getLogger(__name__)

MAX_GENERATORS = 24
MAX_ORACLE_N = 12
MAX_ORACLE_K = 8

_BYTE_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    total = np.zeros_like(x)
    for shift in range(0, MAX_GENERATORS + 8, 8):
        total += _BYTE_POPCOUNT[(x >> shift) & 0xFF]
    return total


def _mask(indexes: Iterable[int]) -> int:
    mask = 0
    for a in indexes:
        mask |= 1 << a
    return mask


@dataclass(eq=False)
class GrassmannPoly:
    n_generators: int
    coeffs: Dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_generators > MAX_GENERATORS:
            raise SizeLimitError(f"Grassmann oracle supports at most {MAX_GENERATORS} generators")
        limit = 1 << self.n_generators
        clean = {}
        for mask, value in self.coeffs.items():
            if not 0 <= mask < limit:
                raise InvalidInputError(f"Monomial mask {mask:#b} exceeds {self.n_generators} generators")
            if value != 0:
                clean[int(mask)] = complex(value)
        self.coeffs = clean

    @classmethod
    def constant(cls, n: int, value: complex = 1.0) -> "GrassmannPoly":
        return cls(n, {0: value})

    @classmethod
    def generator(cls, n: int, a: int, value: complex = 1.0) -> "GrassmannPoly":
        _check_index(n, a)
        return cls(n, {1 << a: value})

    @classmethod
    def monomial(cls, n: int, indexes: Sequence[int], value: complex = 1.0) -> "GrassmannPoly":
        """value * theta_{i1} theta_{i2} ..., in the given (not necessarily sorted) order."""
        result = cls.constant(n, value)
        for a in indexes:
            result = multiply(result, cls.generator(n, a))
        return result

    @classmethod
    def _from_arrays(cls, n: int, keys: np.ndarray, vals: np.ndarray) -> "GrassmannPoly":
        if keys.size == 0:
            return cls(n)
        uniq, inverse = np.unique(keys, return_inverse=True)
        summed = np.zeros(uniq.shape[0], dtype=complex)
        np.add.at(summed, inverse, vals)
        return cls(n, dict(zip(uniq.tolist(), summed.tolist())))

    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        keys = np.fromiter(self.coeffs.keys(), dtype=np.int64, count=len(self.coeffs))
        vals = np.fromiter(self.coeffs.values(), dtype=complex, count=len(self.coeffs))
        return keys, vals

    def coefficient(self, indexes: Iterable[int] | int) -> complex:
        mask = indexes if isinstance(indexes, int) else _mask(indexes)
        return self.coeffs.get(mask, 0j)

    def is_even(self) -> bool:
        return all(bin(mask).count("1") % 2 == 0 for mask in self.coeffs)

    def is_odd(self) -> bool:
        return all(bin(mask).count("1") % 2 == 1 for mask in self.coeffs)

    def __add__(self, other: "GrassmannPoly") -> "GrassmannPoly":
        _check_same(self, other)
        coeffs = dict(self.coeffs)
        for mask, value in other.coeffs.items():
            coeffs[mask] = coeffs.get(mask, 0j) + value
        return GrassmannPoly(self.n_generators, coeffs)

    def __neg__(self) -> "GrassmannPoly":
        return self.scaled(-1)

    def __sub__(self, other: "GrassmannPoly") -> "GrassmannPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GrassmannPoly):
            return multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def scaled(self, factor: complex) -> "GrassmannPoly":
        return GrassmannPoly(self.n_generators, {m: v * factor for m, v in self.coeffs.items()})

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def allclose(self, other: "GrassmannPoly", rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        _check_same(self, other)
        scale = max(self.max_abs(), other.max_abs())
        masks = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeffs.get(m, 0j) - other.coeffs.get(m, 0j)) <= atol + rtol * scale
                   for m in masks)

    def dump(self) -> str:
        """One line per monomial: `+(re,im) theta[i1,i2,...]`, ascending indexes."""
        lines = []
        for mask in sorted(self.coeffs, key=lambda m: (bin(m).count("1"), m)):
            value = self.coeffs[mask]
            sign = "-" if value.real < 0 or (value.real == 0 and value.imag < 0) else "+"
            value = -value if sign == "-" else value
            indexes = ",".join(str(a) for a in range(self.n_generators) if mask >> a & 1)
            lines.append(f"{sign}({value.real!r},{value.imag!r}) θ[{indexes}]")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"GrassmannPoly(n={self.n_generators}, terms={len(self.coeffs)})"


def _check_index(n: int, a: int) -> None:
    if not 0 <= a < n:
        raise InvalidInputError(f"Generator index {a} out of range for {n} generators")


def _check_same(f: GrassmannPoly, g: GrassmannPoly) -> None:
    if f.n_generators != g.n_generators:
        raise InvalidInputError(
            f"Generator sets differ: {f.n_generators} vs {g.n_generators}")


def _times_monomial(keys: np.ndarray, vals: np.ndarray, mask: int, value: complex):
    """Right-multiply every term by value * theta(mask)."""
    keep = (keys & mask) == 0
    keys, vals = keys[keep], vals[keep]
    inversions = np.zeros_like(keys)
    m = mask
    while m:
        low = m & -m
        j = low.bit_length() - 1
        inversions += _popcount(keys >> (j + 1))
        m ^= low
    signs = np.where(inversions % 2, -1.0, 1.0)
    return keys | mask, vals * signs * value


def multiply(f: GrassmannPoly, g: GrassmannPoly) -> GrassmannPoly:
    _check_same(f, g)
    keys, vals = f._arrays()
    out_keys, out_vals = [], []
    for mask, value in g.coeffs.items():
        k, v = _times_monomial(keys, vals, mask, value)
        out_keys.append(k)
        out_vals.append(v)
    if not out_keys:
        return GrassmannPoly(f.n_generators)
    return GrassmannPoly._from_arrays(f.n_generators, np.concatenate(out_keys), np.concatenate(out_vals))


def derivative(f: GrassmannPoly, a: int) -> GrassmannPoly:
    """Left derivative d/d theta_a."""
    _check_index(f.n_generators, a)
    bit = 1 << a
    below = bit - 1
    coeffs = {}
    for mask, value in f.coeffs.items():
        if mask & bit:
            sign = -1 if bin(mask & below).count("1") % 2 else 1
            coeffs[mask ^ bit] = sign * value
    return GrassmannPoly(f.n_generators, coeffs)


def integrate(f: GrassmannPoly, ordered_vars: Sequence[int]) -> GrassmannPoly:
    """
    Int D theta = Int d theta_k ... Int d theta_1 over ordered_vars = (theta_1, ..., theta_k).

    Int d theta_1 is applied first; each single integral is the left derivative.
    """
    if len(set(ordered_vars)) != len(ordered_vars):
        raise InvalidInputError(f"Duplicate integration variable in {list(ordered_vars)}")
    for a in ordered_vars:
        f = derivative(f, a)
    return f


def change_of_variables(f: GrassmannPoly, U, tol: float = 1e-12) -> GrassmannPoly:
    """Substitute theta_a = sum_b U[a, b] theta~_b and re-expand."""
    n = f.n_generators
    U = np.asarray(U, dtype=complex)
    if U.shape != (n, n):
        raise InvalidInputError(f"Substitution matrix must be {n}x{n}, got {U.shape}")
    if n and abs(np.linalg.det(U)) <= tol:
        raise InvalidInputError("Substitution matrix is singular")
    images = [GrassmannPoly(n, {1 << b: U[a, b] for b in range(n)}) for a in range(n)]
    result = GrassmannPoly(n)
    for mask, value in f.coeffs.items():
        term = GrassmannPoly.constant(n, value)
        for a in range(n):
            if mask >> a & 1:
                term = multiply(term, images[a])
        result = result + term
    return result


def exp_even(f: GrassmannPoly) -> GrassmannPoly:
    """exp(f) for an even nilpotent f, exact: sum_{j <= n/2} f^j / j!."""
    if 0 in f.coeffs:
        raise InvalidInputError("exp_even needs a zero constant term")
    if not f.is_even():
        raise InvalidInputError("exp_even needs an even polynomial")
    n = f.n_generators
    # even monomials commute and square to zero, so exp(sum t) = prod (1 + t)
    keys = np.zeros(1, dtype=np.int64)
    vals = np.ones(1, dtype=complex)
    for mask, value in f.coeffs.items():
        k, v = _times_monomial(keys, vals, mask, value)
        merged = GrassmannPoly._from_arrays(n, np.concatenate([keys, k]), np.concatenate([vals, v]))
        keys, vals = merged._arrays()
    return GrassmannPoly._from_arrays(n, keys, vals)


def exp_even_series(f: GrassmannPoly) -> GrassmannPoly:
    """Same as exp_even, by the truncated power series. Kept as a cross-check."""
    if 0 in f.coeffs or not f.is_even():
        raise InvalidInputError("exp_even needs an even polynomial with zero constant term")
    n = f.n_generators
    result = GrassmannPoly.constant(n)
    power = GrassmannPoly.constant(n)
    for j in range(1, n // 2 + 1):
        power = multiply(power, f)
        if not power.coeffs:
            break
        result = result + power.scaled(1 / factorial(j))
    return result


def restrict(f: GrassmannPoly, keep: Sequence[int]) -> GrassmannPoly:
    """
    Re-index onto the generators in `keep` (new index = position in keep).

    Monomials that mention any dropped generator are an error.
    """
    keep = list(keep)
    position = {a: i for i, a in enumerate(keep)}
    coeffs = {}
    for mask, value in f.coeffs.items():
        new = 0
        for a in range(f.n_generators):
            if mask >> a & 1:
                if a not in position:
                    raise InvalidInputError(f"Monomial still contains dropped generator {a}")
                new |= 1 << position[a]
        coeffs[new] = value
    return GrassmannPoly(len(keep), coeffs)


def quadratic_form(n: int, A, offset: int = 0) -> GrassmannPoly:
    """1/2 theta^T A theta = sum_{a<b} A[a, b] theta_a theta_b on generators offset..offset+len(A)-1."""
    A = np.asarray(A, dtype=complex)
    coeffs = {}
    for a in range(A.shape[0]):
        for b in range(a + 1, A.shape[0]):
            if A[a, b] != 0:
                coeffs[(1 << (a + offset)) | (1 << (b + offset))] = A[a, b]
    return GrassmannPoly(n, coeffs)


def bilinear_form(n: int, B, row_offset: int, col_offset: int) -> GrassmannPoly:
    """sum_{a,j} B[a, j] theta_{row_offset+a} eta_{col_offset+j} (row block before column block)."""
    B = np.asarray(B, dtype=complex)
    result = GrassmannPoly(n)
    for a in range(B.shape[0]):
        for j in range(B.shape[1]):
            if B[a, j] != 0:
                result = result + GrassmannPoly.monomial(n, [row_offset + a, col_offset + j], B[a, j])
    return result


def gaussian_integral_oracle(A, B=None) -> GrassmannPoly:
    """
    Expand I(A, B) = Int D theta exp(1/2 theta^T A theta + theta^T B eta) by brute force.

    Returns a polynomial over the k eta generators.
    """
    A = as_skew(A)
    n = A.shape[0]
    B = np.zeros((n, 0)) if B is None else np.asarray(B, dtype=complex).reshape(n, -1)
    k = B.shape[1]
    if n > MAX_ORACLE_N or k > MAX_ORACLE_K:
        raise SizeLimitError(f"Gaussian oracle limited to n <= {MAX_ORACLE_N}, k <= {MAX_ORACLE_K}")
    total = n + k
    exponent = quadratic_form(total, A) + bilinear_form(total, B, 0, n)
    integrand = exp_even(exponent)
    integral = integrate(integrand, list(range(n)))
    return restrict(integral, list(range(n, total)))


def to_grassmann(T: DenseTensor) -> GrassmannPoly:
    """Generating function T(theta) = sum_x T(x) theta(x); x_1 is generator 0."""
    n = T.rank
    coeffs = {}
    for index, value in enumerate(T.values):
        if value != 0:
            mask = 0
            for a in range(n):
                if index >> (n - 1 - a) & 1:
                    mask |= 1 << a
            coeffs[mask] = value
    return GrassmannPoly(n, coeffs)


def from_grassmann(f: GrassmannPoly) -> DenseTensor:
    n = f.n_generators
    values = np.zeros(1 << n, dtype=complex)
    for mask, value in f.coeffs.items():
        index = 0
        for a in range(n):
            if mask >> a & 1:
                index |= 1 << (n - 1 - a)
        values[index] = value
    return DenseTensor(n, values)


def gaussian_generating_function(C: complex, A, B) -> GrassmannPoly:
    """
    Expand C exp(1/2 theta^T A theta) Int D mu exp(mu^T B theta) over the n theta generators.

    B is k x n; the mu block sits after the theta block and is integrated out.
    """
    A = as_skew(A)
    n = A.shape[0]
    B = np.asarray(B, dtype=complex).reshape(-1, n) if n else np.zeros((0, 0))
    k = B.shape[0]
    if n + k > MAX_GENERATORS:
        raise SizeLimitError(f"Generating function needs {n + k} generators")
    total = n + k
    exponent = quadratic_form(total, A) + bilinear_form(total, B, n, 0)
    integrand = exp_even(exponent).scaled(C)
    integral = integrate(integrand, list(range(n, total)))
    return restrict(integral, list(range(n)))
