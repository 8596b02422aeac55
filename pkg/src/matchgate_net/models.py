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
Data models shared across matchgate_net.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np

from matchgate_net.errors import InvalidInputError, SizeLimitError
from matchgate_net.linalg import as_skew

MAX_DENSE_RANK = 20


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        """epsilon(T): +1 for even tensors, -1 for odd ones."""
        return 1 if self is Parity.EVEN else -1

    @property
    def bit(self) -> int:
        return 0 if self is Parity.EVEN else 1

    @classmethod
    def of(cls, k: int) -> "Parity":
        return cls.EVEN if k % 2 == 0 else cls.ODD


@dataclass(eq=False)
class DenseTensor:
    """
    Rank-n complex tensor stored as 2^n components.

    Index bit order: x_1 is the most significant bit, so values.reshape((2,)*n)
    puts x_1 on axis 0 and the flat order is lexicographic in x.
    """
    rank: int
    values: np.ndarray

    def __post_init__(self):
        if self.rank < 0:
            raise InvalidInputError(f"Tensor rank must be non-negative, got {self.rank}")
        if self.rank > MAX_DENSE_RANK:
            raise SizeLimitError(f"Dense tensors are limited to rank {MAX_DENSE_RANK}, got {self.rank}")
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if self.values.shape[0] != 1 << self.rank:
            raise InvalidInputError(
                f"Rank-{self.rank} tensor needs {1 << self.rank} components, got {self.values.shape[0]}")

    def __getitem__(self, bits: str | tuple) -> complex:
        return complex(self.values[bits_to_index(bits)])

    def as_array(self) -> np.ndarray:
        return self.values.reshape((2,) * self.rank)

    def scale(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.scale() <= tol

    @classmethod
    def from_components(cls, rank: int, components: Dict[str, complex]) -> "DenseTensor":
        """Build from a sparse {'0110': value} map; absent strings are zero."""
        values = np.zeros(1 << rank, dtype=complex)
        for bits, value in components.items():
            if len(bits) != rank:
                raise InvalidInputError(f"Bit string {bits!r} does not have length {rank}")
            values[bits_to_index(bits)] = value
        return cls(rank, values)


def bits_to_index(bits) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def index_to_bits(index: int, rank: int) -> str:
    return format(index, f"0{rank}b") if rank else ""


@dataclass(eq=False)
class CanonicalMatchgate:
    """
    Gaussian generating function T(theta) = C exp(1/2 theta^T A theta) Int D mu exp(mu^T B theta).

    A is n x n skew, B is k x n with k mu-variables; parity is k mod 2.
    """
    A: np.ndarray
    B: np.ndarray
    C: complex
    parity: Optional[Parity] = None

    def __post_init__(self):
        self.A = as_skew(self.A)
        n = self.A.shape[0]
        B = np.asarray(self.B, dtype=complex)
        if B.size == 0:
            B = np.zeros((0, n), dtype=complex)
        if B.ndim != 2 or B.shape[1] != n:
            raise InvalidInputError(f"B must be k x {n}, got shape {B.shape}")
        if B.shape[0] > n:
            raise InvalidInputError(f"B has {B.shape[0]} rows, more than the rank {n}")
        self.B = B
        self.C = complex(self.C)
        expected = Parity.of(B.shape[0])
        if self.parity is None:
            self.parity = expected
        self.parity = Parity(self.parity)
        if self.parity is not expected:
            raise InvalidInputError(f"Parity {self.parity.value} does not match k={B.shape[0]}")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def k(self) -> int:
        return self.B.shape[0]

    def is_linear(self, tol: float = 1e-12) -> bool:
        """True for T(theta) = C * sum_j b_j theta_j."""
        return self.k == 1 and (self.n == 0 or np.max(np.abs(self.A)) <= tol)

    @classmethod
    def zero(cls, n: int) -> "CanonicalMatchgate":
        return cls(np.zeros((n, n)), np.zeros((0, n)), 0.0)

    @classmethod
    def scalar(cls, value: complex) -> "CanonicalMatchgate":
        return cls(np.zeros((0, 0)), np.zeros((0, 0)), value)


@dataclass
class ContractionReport:
    """Outcome of a full network contraction."""
    value: complex
    genus: Optional[int] = None
    planar_dim: int = 0
    stub_count: int = 0
    genus_rank: int = 0
    pfaffian_count: int = 1
    timings: Dict[str, float] = field(default_factory=dict)
    bruteforce_value: Optional[complex] = None
