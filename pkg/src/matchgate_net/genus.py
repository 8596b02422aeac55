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
Contraction of a single vertex carrying m self-loops on a genus-g surface.

The self-loop indicator R(x) = prod_e [x_l(e) = x_r(e)] is written as a
short sum of Gaussians indexed by the Fourier support of the chord
intersection matrix, so the contraction value is a sum of at most 2^(2g)
Pfaffians.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from matchgate_net.errors import EmbeddingError, InvalidInputError, SizeLimitError
from matchgate_net.linalg import as_gf2, gf2_symmetric_decompose, pfaffian
from matchgate_net.matchgate import canonicalize, densify
from matchgate_net.models import CanonicalMatchgate, DenseTensor

logger = logging.getLogger(__name__)

MAX_BRUTEFORCE_CHORDS = 10


@dataclass
class PairingGraph:
    """Chord diagram on the 2m boundary slots 0..2m-1; chord p joins pairs[p] = (l, r), l < r."""
    pairs: List[tuple[int, int]]

    def __post_init__(self):
        normalized = []
        for pair in self.pairs:
            if len(pair) != 2:
                raise InvalidInputError(f"Chord {pair!r} must have two endpoints")
            l, r = sorted(int(x) for x in pair)
            normalized.append((l, r))
        slots = sorted(x for pair in normalized for x in pair)
        if slots != list(range(2 * len(normalized))):
            raise InvalidInputError(f"Pairs {normalized} do not partition 0..{2 * len(normalized) - 1}")
        self.pairs = normalized

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def N(self) -> np.ndarray:
        return intersection_matrix(self.pairs)


@dataclass
class GenusResult:
    value: complex
    rank: int
    terms: int


def _pairing(pairs) -> PairingGraph:
    return pairs if isinstance(pairs, PairingGraph) else PairingGraph(list(pairs))


def intersection_matrix(pairs) -> np.ndarray:
    """N[p, q] = 1 iff chords p and q interleave."""
    chords = _pairing(pairs).pairs
    m = len(chords)
    N = np.zeros((m, m), dtype=np.uint8)
    for p, (lp, rp) in enumerate(chords):
        for q in range(p + 1, m):
            lq, rq = chords[q]
            if lp < lq < rp < rq or lq < lp < rq < rp:
                N[p, q] = N[q, p] = 1
    return N


def _block_quadratic(u: np.ndarray, r: int) -> int:
    """sum_j u_2j u_2j+1 over the first r coordinates."""
    return int(np.sum(u[0:r:2] & u[1:r:2])) % 2


def fourier_support(N) -> List[tuple[str, float]]:
    """
    Pairs (z, f(z)) with (-1)^(1/2 y^T N y) = sum_z f(z) (-1)^(y.z) for every y.

    With N = U^T Nt U, the 2^r support vectors are z = U^T u + l for u over
    the first r coordinates, l_p = q(U e_p), and f(z) = 2^(-r/2) (-1)^q(u).
    Enumerated in Gray-code order; returned sorted by z.
    """
    N = as_gf2(N)
    m = N.shape[0]
    if m == 0:
        return [("", 1.0)]
    U, r = gf2_symmetric_decompose(N)
    shift = np.array([_block_quadratic(U[:, p], r) for p in range(m)], dtype=np.uint8)
    scale = 2.0 ** (-r / 2)
    u = np.zeros(m, dtype=np.uint8)
    z = shift.copy()
    terms = [(z.copy(), scale)]
    for t in range(1, 1 << r):
        i = (t & -t).bit_length() - 1
        u[i] ^= 1
        z ^= U[i]
        terms.append((z.copy(), scale * (-1) ** _block_quadratic(u, r)))
    logger.debug(f"Fourier support: m={m}, rank {r}, {len(terms)} terms")
    return sorted(("".join(str(int(b)) for b in zv), f) for zv, f in terms)


def _base_matrix(M: CanonicalMatchgate, pairing: PairingGraph) -> tuple[np.ndarray, List[tuple[int, int]]]:
    """
    Omega over (mu, eta, theta): [[0, 0, G], [0, Abar_z, -iI], [-G^T, iI, F]] with z = 0.

    Returns the matrix and the (row, col) position of every chord entry.
    """
    n, k = M.n, M.k
    size = k + 2 * n
    eta = k + np.arange(n)
    theta = k + n + np.arange(n)
    omega = np.zeros((size, size), dtype=complex)
    omega[:k, theta] = M.B
    omega[theta, :k] = -M.B.T
    omega[eta, theta] = -1j
    omega[theta, eta] = 1j
    omega[np.ix_(theta, theta)] = M.A
    slots = []
    for l, r in pairing.pairs:
        omega[eta[l], eta[r]] = 1
        omega[eta[r], eta[l]] = -1
        slots.append((eta[l], eta[r]))
    return omega, slots


def genus_contraction(T: DenseTensor | CanonicalMatchgate, pairs, genus: Optional[int] = None) -> GenusResult:
    """c(T) = C sum_a f(z_a) Pf(Omega_a), one Pfaffian per Fourier support vector."""
    pairing = _pairing(pairs)
    M = canonicalize(T)
    if M.n != 2 * pairing.m:
        raise InvalidInputError(f"Tensor rank {M.n} does not match {pairing.m} chords")
    N = pairing.N
    support = fourier_support(N)
    rank = int(np.log2(len(support)))
    if genus is not None and len(support) > 4 ** genus:
        raise EmbeddingError(f"Pairing has intersection rank {rank}, more than 2g = {2 * genus}")
    if M.parity.bit or M.C == 0:
        logger.debug("Odd or zero tensor: fully self-contracted value is 0")
        return GenusResult(0j, rank, 0)
    omega, slots = _base_matrix(M, pairing)
    total = 0j
    for z, f in support:
        for (a, b), bit in zip(slots, z):
            sign = -1.0 if bit == "1" else 1.0
            omega[a, b], omega[b, a] = sign, -sign
        total += f * pfaffian(omega)
    logger.info(f"Genus stage: {pairing.m} chords, rank {rank}, {len(support)} Pfaffian(s)")
    return GenusResult(M.C * total, rank, len(support))


def contract_single_vertex(T: DenseTensor | CanonicalMatchgate, pairs, genus: Optional[int] = None) -> complex:
    return genus_contraction(T, pairs, genus).value


def contract_single_vertex_bruteforce(T: DenseTensor | CanonicalMatchgate, pairs) -> complex:
    """Sum_x T(x) R(x), R(x) = 1 iff every chord joins equal bits."""
    pairing = _pairing(pairs)
    if pairing.m > MAX_BRUTEFORCE_CHORDS:
        raise SizeLimitError(f"Brute-force self-contraction is limited to {MAX_BRUTEFORCE_CHORDS} chords")
    dense = densify(T)
    n = dense.rank
    if n != 2 * pairing.m:
        raise InvalidInputError(f"Tensor rank {n} does not match {pairing.m} chords")
    idx = np.arange(1 << n)
    agree = np.ones(idx.shape, dtype=bool)
    for l, r in pairing.pairs:
        agree &= ((idx >> (n - 1 - l)) & 1) == ((idx >> (n - 1 - r)) & 1)
    return complex(np.sum(dense.values[agree]))

