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
Matchgate tensors: identity checks, canonical Gaussian form and its symmetries.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from matchgate_net.errors import InvalidInputError, NotMatchgateError, SizeLimitError
from matchgate_net.grassmann import _popcount
from matchgate_net.linalg import as_skew, pfaffian
from matchgate_net.models import CanonicalMatchgate, DenseTensor, Parity, index_to_bits
from matchgate_net.settings import get_tolerance

logger = logging.getLogger(__name__)

MAX_IDENTITY_RANK = 14
MAX_LAMBDA_RANK = 10
KERNEL_TOL = 1e-8
_CHUNK = 256


@dataclass
class IdentityReport:
    """Outcome of evaluating the quadratic matchgate identities."""
    ok: bool
    worst: float
    scale: float
    worst_pair: Optional[tuple[str, str]] = None

    def __bool__(self) -> bool:
        return self.ok


def _flip_tables(T: DenseTensor) -> tuple[np.ndarray, np.ndarray]:
    """
    Columns a = 0..n-1 of (-1)^{x_1+...+x_{a-1}} T(x xor e_a), split by x_a = 0 / x_a = 1.
    """
    n = T.rank
    idx = np.arange(1 << n, dtype=np.int64)
    low = np.zeros((1 << n, n), dtype=complex)
    high = np.zeros((1 << n, n), dtype=complex)
    for a in range(n):
        shift = n - 1 - a
        signs = np.where(_popcount(idx >> (shift + 1)) % 2, -1.0, 1.0)
        flipped = T.values[idx ^ (1 << shift)] * signs
        bit = (idx >> shift) & 1
        low[:, a] = np.where(bit == 0, flipped, 0)
        high[:, a] = np.where(bit == 1, flipped, 0)
    return low, high


def check_matchgate(T: DenseTensor, tol: float | None = None) -> IdentityReport:
    """
    Evaluate sum_{a: x_a != y_a} (-1)^{x_<a + y_<a} T(x+e_a) T(y+e_a) = 0 for all x, y.

    Passes when the largest violation is within tol * max|T|^2.
    """
    tol = get_tolerance() if tol is None else tol
    n = T.rank
    if n > MAX_IDENTITY_RANK:
        raise SizeLimitError(f"Identity check enumerates 4^n pairs; rank {n} exceeds {MAX_IDENTITY_RANK}")
    scale = T.scale() ** 2
    low, high = _flip_tables(T)
    worst, worst_pair = 0.0, None
    size = 1 << n
    for start in range(0, size, _CHUNK):
        rows = slice(start, min(start + _CHUNK, size))
        block = np.abs(low[rows] @ high.T + high[rows] @ low.T)
        if block.size == 0:
            continue
        flat = int(np.argmax(block))
        value = float(block.flat[flat])
        if value > worst:
            x, y = divmod(flat, size)
            worst, worst_pair = value, (index_to_bits(start + x, n), index_to_bits(y, n))
    ok = worst <= tol * scale
    logger.debug(f"Matchgate identities: rank={n}, worst={worst:.3e}, scale={scale:.3e}, ok={ok}")
    return IdentityReport(ok, worst, scale, worst_pair)


def check_lambda(T: DenseTensor, tol: float = 1e-10) -> bool:
    """
    Lambda . (T (x) T) = 0 with Lambda = sum_a (theta_a (x) d_a + d_a (x) theta_a).

    Coefficients of the 2n-generator product are laid out as a 2^n x 2^n matrix.
    """
    n = T.rank
    if n > MAX_LAMBDA_RANK:
        raise SizeLimitError(f"Lambda check is limited to rank {MAX_LAMBDA_RANK}, got {n}")
    size = 1 << n
    # coefficients by monomial mask (bit a = theta_a)
    f = np.zeros(size, dtype=complex)
    for index, value in enumerate(T.values):
        mask = sum(1 << a for a in range(n) if index >> (n - 1 - a) & 1)
        f[mask] = value
    masks = np.arange(size, dtype=np.int64)
    theta = np.zeros((size, n), dtype=complex)
    deriv = np.zeros((size, n), dtype=complex)
    for a in range(n):
        bit = 1 << a
        signs = np.where(_popcount(masks & (bit - 1)) % 2, -1.0, 1.0)
        has = (masks & bit) != 0
        # theta_a f: source mask without a moves to mask | a
        theta[masks[has], a] = f[masks[has] ^ bit] * signs[has]
        # d_a f: source mask with a moves to mask without a
        deriv[masks[~has], a] = f[masks[~has] | bit] * signs[~has]
    total = theta @ deriv.T + deriv @ theta.T
    scale = max(float(np.max(np.abs(f))) ** 2, 1e-300)
    worst = float(np.max(np.abs(total))) if total.size else 0.0
    return worst <= tol * scale


def extended_matrix(M: CanonicalMatchgate) -> np.ndarray:
    n, k = M.n, M.k
    ext = np.zeros((n + k, n + k), dtype=complex)
    ext[:n, :n] = M.A
    ext[:n, n:] = -M.B.T
    ext[n:, :n] = M.B
    return ext


def to_dense(M: CanonicalMatchgate) -> DenseTensor:
    """T(x) = C eps(T) Pf(Abar restricted to x 1^k) with Abar = [[A, -B^T], [B, 0]]."""
    n, k = M.n, M.k
    if n + k > 20:
        raise SizeLimitError(f"Dense expansion needs n + k <= 20, got {n + k}")
    ext = extended_matrix(M)
    tail = list(range(n, n + k))
    values = np.zeros(1 << n, dtype=complex)
    if M.C == 0:
        return DenseTensor(n, values)
    factor = M.C * M.parity.sign
    for index in range(1 << n):
        ones = [a for a in range(n) if index >> (n - 1 - a) & 1]
        if (len(ones) + k) % 2:
            continue
        sel = ones + tail
        values[index] = factor * pfaffian(ext[np.ix_(sel, sel)])
    return DenseTensor(n, values)


def leading_component(M: CanonicalMatchgate) -> tuple[str, complex]:
    """
    One component x with T(x) != 0 and its value, without expanding T.

    x sets the k columns of B found by row pivoting; Pf of the restricted
    extended matrix is then +-det(B_x). Returns (zeros, 0) for the zero tensor.
    """
    n, k = M.n, M.k
    if M.C == 0:
        return index_to_bits(0, n), 0j
    R = np.array(M.B, dtype=complex)
    cols: list = []
    for r in range(k):
        scores = np.abs(R[r])
        scores[cols] = -1.0
        c = int(np.argmax(scores))
        if scores[c] <= 0:
            return index_to_bits(0, n), 0j
        cols.append(c)
        R[r + 1:] -= np.outer(R[r + 1:, c] / R[r, c], R[r])
    sel = sorted(cols) + list(range(n, n + k))
    ext = extended_matrix(M)
    value = M.C * M.parity.sign * pfaffian(ext[np.ix_(sel, sel)])
    bits = "".join("1" if a in cols else "0" for a in range(n))
    return bits, complex(value)


def canonical_gauge(M: CanonicalMatchgate) -> CanonicalMatchgate:
    """
    Project A so that B A = 0 when B B^T is invertible; otherwise return M unchanged.

    Adding B^T X - X^T B to A leaves the tensor unchanged; the projection uses
    that freedom. When B B^T is singular (B = [1, i, 0] has full row rank but
    B B^T = 0) no such move reaches B A = 0, so A is kept and only the weaker
    invariant holds: the tensor is unchanged.
    """
    if M.k == 0 or M.n == 0:
        return M
    gram = M.B @ M.B.T
    if np.linalg.cond(gram) > 1e10:
        logger.debug("B B^T is singular; keeping the non-canonical gauge")
        return M
    P = np.eye(M.n) - M.B.T @ np.linalg.solve(gram, M.B)
    A = P.T @ M.A @ P
    return CanonicalMatchgate((A - A.T) / 2, M.B, M.C, M.parity)


def _tilde_component(T: DenseTensor, W: np.ndarray, Q: list) -> complex:
    """Coefficient of phi(Q) after theta = W phi: sum_{|x|=|Q|} T(x) det(W[x, Q])."""
    n = T.rank
    w = len(Q)
    if w == 0:
        return complex(T.values[0])
    xs, vals = [], []
    for index in np.nonzero(T.values)[0]:
        ones = [a for a in range(n) if index >> (n - 1 - a) & 1]
        if len(ones) == w:
            xs.append(ones)
            vals.append(T.values[index])
    if not xs:
        return 0j
    rows = np.array(xs)
    minors = W[rows[:, :, None], np.array(Q)[None, None, :]]
    return complex(np.dot(np.array(vals), np.linalg.det(minors)))


def from_dense(T: DenseTensor, tol: float | None = None) -> CanonicalMatchgate:
    """
    Recover a canonical form (A, B, C) from a dense matchgate.

    Finds the annihilating subspace Z = {xi : sum_a xi_a theta_a T = 0}, changes
    variables so its basis becomes the last k generators, reads C and the
    covariance of the cofactor, then undoes the change of variables.
    """
    tol = get_tolerance() if tol is None else tol
    n = T.rank
    if T.is_zero():
        raise InvalidInputError("The zero tensor has no canonical form")
    weights = np.array([bin(i).count("1") % 2 for i in range(1 << n)])
    support = np.abs(T.values) > 0
    parities = set(weights[support].tolist())
    if len(parities) > 1:
        raise NotMatchgateError("Tensor is neither even nor odd")
    if n <= 10 and not check_matchgate(T, tol):
        raise NotMatchgateError("Tensor violates the matchgate identities")
    if n == 0:
        return CanonicalMatchgate.scalar(T.values[0])

    _, annihilation = _flip_tables(T)
    _, sigma, Vh = np.linalg.svd(annihilation, full_matrices=True)
    cutoff = KERNEL_TOL * max(float(sigma[0]), 1e-300)
    null = [i for i in range(n) if sigma[i] < cutoff]
    order = [i for i in range(n) if i not in null] + null
    U = np.conj(Vh[order])
    k = len(null)
    if k % 2 != parities.pop():
        raise NotMatchgateError(f"Annihilator dimension {k} does not match the tensor parity")
    W = np.conj(U).T
    top = n - k
    L = list(range(top, n))
    c0 = _tilde_component(T, W, L)
    if abs(c0) <= KERNEL_TOL * T.scale():
        raise NotMatchgateError("Cofactor has a vanishing constant term")
    M = np.zeros((n, n), dtype=complex)
    for a in range(top):
        for b in range(a + 1, top):
            M[a, b] = _tilde_component(T, W, [a, b] + L) / c0
            M[b, a] = -M[a, b]
    A = U.T @ M @ U
    B = U[top:]
    C = c0 * (-1) ** (k * (k - 1) // 2)
    result = canonical_gauge(CanonicalMatchgate((A - A.T) / 2, B, C))
    check = to_dense(result)
    err = float(np.max(np.abs(check.values - T.values)))
    if err > max(tol, 1e-12) * T.scale() * 10:
        raise NotMatchgateError(f"Canonical round trip failed (max error {err:.3e})")
    logger.debug(f"Canonical form: n={n}, k={k}, round-trip error {err:.3e}")
    return result


def canonicalize(T: DenseTensor | CanonicalMatchgate, tol: float | None = None) -> CanonicalMatchgate:
    if isinstance(T, CanonicalMatchgate):
        return T
    if T.is_zero():
        return CanonicalMatchgate.zero(T.rank)
    return from_dense(T, tol)


def densify(T: DenseTensor | CanonicalMatchgate) -> DenseTensor:
    return T if isinstance(T, DenseTensor) else to_dense(T)


# --- symmetries ---------------------------------------------------------------

def _substitute(M: CanonicalMatchgate, P: np.ndarray, factor: complex = 1.0) -> CanonicalMatchgate:
    """factor * T(P theta)."""
    A = P.T @ M.A @ P
    return CanonicalMatchgate((A - A.T) / 2, M.B @ P, M.C * factor, M.parity)


def cyclic_shift(M: CanonicalMatchgate) -> CanonicalMatchgate:
    """
    T'(x_1 ... x_n) = T(x_2 ... x_n x_1).

    Generator theta_j is substituted by theta_{j+1}, so the component at x moves
    to x rotated one place right; n - t shifts rotate the incidence list left by t.
    """
    n = M.n
    if n < 2:
        return M
    P = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        P[j, j + 1] = 1
    P[n - 1, 0] = (-1) ** (M.parity.bit + 1)
    return _substitute(M, P)


def rotate(M: CanonicalMatchgate, t: int) -> CanonicalMatchgate:
    """Tensor for the incidence list rotated left by t: L' = L[t:] + L[:t]."""
    n = M.n
    if n < 2:
        return M
    for _ in range((n - t) % n):
        M = cyclic_shift(M)
    return M


def reflection(M: CanonicalMatchgate) -> CanonicalMatchgate:
    """T'(x_1 ... x_n) = T(x_n ... x_1)."""
    n = M.n
    R = np.eye(n, dtype=complex)[::-1]
    return _substitute(M, 1j * R, (-1j) ** M.parity.bit)


def phase_shift(M: CanonicalMatchgate, z) -> CanonicalMatchgate:
    """T'(x) = (-1)^{z.x} T(x)."""
    z = np.asarray(z, dtype=int).reshape(-1)
    if z.shape[0] != M.n:
        raise InvalidInputError(f"Phase vector needs {M.n} bits, got {z.shape[0]}")
    return _substitute(M, np.diag(np.where(z % 2, -1.0, 1.0)).astype(complex))


def scale_variable(M: CanonicalMatchgate, a: int, factor: complex) -> CanonicalMatchgate:
    """T'(x) = factor^{x_a} T(x)."""
    D = np.eye(M.n, dtype=complex)
    D[a, a] = factor
    return _substitute(M, D)


def symmetry(M: CanonicalMatchgate, op: str, z=None) -> CanonicalMatchgate:
    if op == "cyclic_shift":
        return cyclic_shift(M)
    if op == "reflection":
        return reflection(M)
    if op == "phase_shift":
        return phase_shift(M, np.zeros(M.n, dtype=int) if z is None else z)
    raise InvalidInputError(f"Unknown symmetry {op!r}")


def mean_covariance(T: DenseTensor, z: str | None = None) -> tuple[str, np.ndarray]:
    """
    Mean vector z (largest component, lexicographic tie-break) and covariance
    A_ab = T(e_a + e_b + z) / T(z).
    """
    if T.is_zero():
        raise InvalidInputError("The zero tensor has no mean vector")
    n = T.rank
    if z is None:
        zi = int(np.argmax(np.abs(T.values)))
    else:
        zi = int(z, 2) if n else 0
        if T.values[zi] == 0:
            raise InvalidInputError(f"T({z}) is zero")
    tz = T.values[zi]
    A = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(a + 1, n):
            flip = (1 << (n - 1 - a)) | (1 << (n - 1 - b))
            A[a, b] = T.values[zi ^ flip] / tz
            A[b, a] = -A[a, b]
    return index_to_bits(zi, n), as_skew(A)
