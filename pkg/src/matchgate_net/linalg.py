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
Dense complex linear algebra for skew-symmetric matrices and GF(2) linear algebra.

Pfaffians use skew-symmetric elimination with full pivoting on the trailing
block: U^T A U is reduced to 2x2 blocks [[0, p], [-p, 0]] using column
operations that keep det(U) = +-1. Large sparse matrices are eliminated
front by front along a nested-dissection tree.
"""

import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from matchgate_net.errors import InvalidInputError, SizeLimitError

logger = logging.getLogger(__name__)

SKEW_TOL = 1e-12
RANK_TOL = 1e-10


def as_skew(A, tol: float = SKEW_TOL) -> np.ndarray:
    """
    Validate and return an exactly antisymmetric complex copy of A.

    The lower triangle is rebuilt from the upper one.
    """
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros((0, 0), dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"Expected a square matrix, got shape {A.shape}")
    if np.max(np.abs(A + A.T)) > tol:
        raise InvalidInputError(f"Matrix is not skew-symmetric within {tol}")
    upper = np.triu(A, 1)
    return upper - upper.T


@dataclass(eq=False)
class GaussianFormResult:
    """
    Closed form of I(A, B) = Int D theta exp(1/2 theta^T A theta + theta^T B eta):

        prefactor * exp(1/2 eta^T quad eta) * Int D mu exp(mu^T residual eta)
    """
    prefactor: complex
    quad: np.ndarray
    residual: np.ndarray
    is_zero: bool = False
    rank: int = 0
    # prefactor = phase * exp(log_abs); kept apart for networks whose value overflows
    log_abs: float = 0.0
    phase: complex = 1.0 + 0j


@dataclass(eq=False)
class _Elimination:
    M: np.ndarray
    U: np.ndarray
    rank: int
    det_sign: int
    pivots: list


def _swap(M: np.ndarray, U: np.ndarray, a: int, b: int) -> int:
    if a == b:
        return 1
    M[[a, b], :] = M[[b, a], :]
    M[:, [a, b]] = M[:, [b, a]]
    U[:, [a, b]] = U[:, [b, a]]
    return -1


def _eliminate(A: np.ndarray, tol: float) -> _Elimination:
    M = np.array(A, dtype=complex)
    n = M.shape[0]
    U = np.eye(n, dtype=complex)
    det_sign = 1
    pivots = []
    r = 0
    while r + 1 < n:
        sub = np.abs(M[r:, r:])
        i, j = divmod(int(np.argmax(sub)), n - r)
        if sub[i, j] <= tol:
            break
        i, j = sorted((i + r, j + r))
        det_sign *= _swap(M, U, r, i)
        det_sign *= _swap(M, U, r + 1, j)
        p = M[r, r + 1]
        rest = slice(r + 2, n)
        alpha = M[r + 1, rest] / p
        beta = -M[r, rest] / p
        # columns: M <- M E, with E = I + e_r alpha^T + e_{r+1} beta^T
        M[r:, rest] += np.outer(M[r:, r], alpha) + np.outer(M[r:, r + 1], beta)
        # rows: M <- E^T M
        M[rest, r:] += np.outer(alpha, M[r, r:]) + np.outer(beta, M[r + 1, r:])
        U[:, rest] += np.outer(U[:, r], alpha) + np.outer(U[:, r + 1], beta)
        M[r:r + 2, rest] = 0
        M[rest, r:r + 2] = 0
        tail = M[rest, rest]
        M[rest, rest] = (tail - tail.T) / 2
        pivots.append(p)
        r += 2
    logger.debug(f"Skew elimination: n={n}, rank={r}")
    return _Elimination(M, U, r, det_sign, pivots)


def _rank_tol(A: np.ndarray) -> float:
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return RANK_TOL * max(scale, 1.0)


def skew_eliminate(A) -> tuple[np.ndarray, int]:
    """
    Find U with U^T A U = [[A11, 0], [0, 0]], A11 invertible of even size rank.
    """
    A = as_skew(A)
    elim = _eliminate(A, _rank_tol(A))
    return elim.U, elim.rank


def pfaffian(A) -> complex:
    A = as_skew(A)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n % 2:
        return 0j
    elim = _eliminate(A, 0.0)
    if elim.rank < n:
        return 0j
    return complex(np.prod(elim.pivots) * elim.det_sign)


def pfaffian_by_matchings(A) -> complex:
    """Signed sum over all (n-1)!! perfect matchings. Test oracle only."""
    A = as_skew(A)
    n = A.shape[0]
    if n > 12:
        raise SizeLimitError(f"Matching-sum Pfaffian is limited to n <= 12, got {n}")
    if n % 2:
        return 0j

    def expand(remaining: tuple) -> complex:
        if not remaining:
            return 1.0 + 0j
        first = remaining[0]
        total = 0j
        for pos in range(1, len(remaining)):
            partner = remaining[pos]
            rest = remaining[1:pos] + remaining[pos + 1:]
            # moving partner next to first crosses pos - 1 indices
            sign = -1 if (pos - 1) % 2 else 1
            total += sign * A[first, partner] * expand(rest)
        return total

    return complex(expand(tuple(range(n))))


def gaussian_integral_closed(A, B) -> GaussianFormResult:
    """
    Evaluate I(A, B) in closed form.

    With U^T A U = [[A11, 0], [0, 0]] and U^T B = [B1; B2]:
    I = Pf(A11) det(U) exp(1/2 eta^T B1^T A11^{-1} B1 eta) Int D mu exp(mu^T B2 eta).
    """
    A = as_skew(A)
    n = A.shape[0]
    B = np.asarray(B, dtype=complex)
    if B.size == 0:
        B = np.zeros((n, B.shape[1] if B.ndim == 2 else 0), dtype=complex)
    if B.ndim != 2 or B.shape[0] != n:
        raise InvalidInputError(f"B must have {n} rows, got shape {B.shape}")
    k = B.shape[1]
    elim = _eliminate(A, _rank_tol(A))
    m = elim.rank
    if m < n - k:
        logger.debug(f"Gaussian integral vanishes: rank {m} < n - k = {n - k}")
        return GaussianFormResult(0j, np.zeros((k, k), dtype=complex),
                                  np.zeros((n - m, k), dtype=complex), True, m)
    UB = elim.U.T @ B
    B1, B2 = UB[:m], UB[m:]
    # A11 is block diagonal; its inverse has blocks [[0, -1/p], [1/p, 0]]
    inv = np.zeros((m, m), dtype=complex)
    for idx, p in enumerate(elim.pivots):
        r = 2 * idx
        inv[r, r + 1] = -1 / p
        inv[r + 1, r] = 1 / p
    quad = B1.T @ inv @ B1
    quad = (quad - quad.T) / 2
    pivots = np.asarray(elim.pivots, dtype=complex)
    prefactor = complex(np.prod(pivots) * elim.det_sign) if m else 1.0 + 0j
    log_abs = float(np.sum(np.log(np.abs(pivots))))
    phase = complex(np.prod(pivots / np.abs(pivots)) * elim.det_sign)
    return GaussianFormResult(prefactor, quad, B2, False, m, log_abs, phase)


# --- sparse elimination -------------------------------------------------------

LEAF_SIZE = 64


@dataclass(eq=False)
class _Front:
    own: np.ndarray
    children: list


def _leaf(vertices, fronts: list) -> int:
    fronts.append(_Front(np.array(sorted(vertices), dtype=np.int64), []))
    return len(fronts) - 1


def _dissect(graph: nx.Graph, vertices: list, fronts: list) -> int:
    """
    Append the dissection tree of vertices to fronts in post-order; returns the root index.

    Separators are the middle BFS level from a pseudo-peripheral vertex.
    """
    if len(vertices) <= LEAF_SIZE:
        return _leaf(vertices, fronts)
    sub = graph.subgraph(vertices)
    parts = sorted((sorted(p) for p in nx.connected_components(sub)), key=len)
    if len(parts) > 1:
        children, bucket = [], []
        for part in parts:
            if len(part) > LEAF_SIZE:
                children.append(_dissect(graph, part, fronts))
                continue
            bucket.extend(part)
            if len(bucket) >= LEAF_SIZE:
                children.append(_leaf(bucket, fronts))
                bucket = []
        if bucket:
            children.append(_leaf(bucket, fronts))
        fronts.append(_Front(np.zeros(0, dtype=np.int64), children))
        return len(fronts) - 1
    first = nx.single_source_shortest_path_length(sub, vertices[0])
    start = max(first, key=first.get)
    level = nx.single_source_shortest_path_length(sub, start)
    depth = max(level.values())
    if depth < 2:
        return _leaf(vertices, fronts)
    counts = np.bincount(np.fromiter(level.values(), dtype=np.int64))
    cut = int(np.searchsorted(np.cumsum(counts), len(vertices) / 2))
    cut = min(max(cut, 1), depth - 1)
    low = [v for v, d in level.items() if d < cut]
    high = [v for v, d in level.items() if d > cut]
    children = [_dissect(graph, low, fronts), _dissect(graph, high, fronts)]
    separator = [v for v, d in level.items() if d == cut]
    fronts.append(_Front(np.array(sorted(separator), dtype=np.int64), children))
    return len(fronts) - 1


def _eliminate_front(F: np.ndarray, labels: np.ndarray, eligible: np.ndarray,
                     alive: np.ndarray, tol: float) -> tuple[np.ndarray, float, complex, int]:
    """
    Pivot out eligible pairs of the frontal matrix F in place.

    Each pair (x, y) contributes (-1)^(pos(x) + pos(y) - 1) F[x, y], where pos
    counts the indices still alive in the whole matrix; alive is updated.
    """
    live = np.ones(len(labels), dtype=bool)
    log_abs, phase, count = 0.0, 1.0 + 0j, 0
    while True:
        idx = np.flatnonzero(eligible & live)
        if idx.size < 2:
            break
        sub = np.abs(F[np.ix_(idx, idx)])
        r, c = divmod(int(np.argmax(sub)), idx.size)
        if sub[r, c] <= tol:
            break
        i, j = idx[r], idx[c]
        pi = np.count_nonzero(alive[:labels[i]])
        pj = np.count_nonzero(alive[:labels[j]])
        if pi > pj:
            i, j, pi, pj = j, i, pj, pi
        p = F[i, j]
        sign = -1 if (pi + pj - 1) % 2 else 1
        log_abs += float(np.log(abs(p)))
        phase *= sign * p / abs(p)
        ri, rj = F[i].copy(), F[j].copy()
        ri[[i, j]] = 0
        rj[[i, j]] = 0
        F += (np.outer(rj, ri) - np.outer(ri, rj)) / p
        F[[i, j], :] = 0
        F[:, [i, j]] = 0
        live[[i, j]] = False
        alive[labels[[i, j]]] = False
        count += 1
    return live, log_abs, phase, count


def _coalesce(n: int, rows, cols, values) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Upper-triangle entries (a < b, K[a, b]) with duplicates summed and zeros dropped."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=complex)
    if rows.shape != cols.shape or rows.shape != values.shape:
        raise InvalidInputError("Entry arrays must have equal length")
    if rows.size and (min(rows.min(), cols.min()) < 0 or max(rows.max(), cols.max()) >= n):
        raise InvalidInputError(f"Entry index out of range for n={n}")
    if np.any((rows == cols) & (values != 0)):
        raise InvalidInputError("Skew-symmetric matrix has a nonzero diagonal entry")
    off = rows != cols
    rows, cols, values = rows[off], cols[off], values[off]
    a = np.minimum(rows, cols)
    b = np.maximum(rows, cols)
    values = np.where(rows < cols, values, -values)
    keys, inverse = np.unique(a * n + b, return_inverse=True)
    acc = np.zeros(len(keys), dtype=complex)
    np.add.at(acc, inverse, values)
    nonzero = acc != 0
    return keys[nonzero] // n, keys[nonzero] % n, acc[nonzero]


def gaussian_integral_sparse(n: int, rows, cols, values, B_keep) -> GaussianFormResult:
    """
    I(K, B) for a sparse skew K of size n given by entries K[rows, cols] = values
    (and K[cols, rows] = -values), where B is zero outside its first len(B_keep) rows.

    Indices from len(B_keep) on are eliminated pair by pair in nested-dissection
    order on dense frontal matrices. Whatever cannot be pivoted, together with the
    kept indices, goes to gaussian_integral_closed.
    """
    B_keep = np.asarray(B_keep, dtype=complex)
    if B_keep.ndim != 2:
        raise InvalidInputError(f"B_keep must be a matrix, got shape {B_keep.shape}")
    keep, k = B_keep.shape
    if keep > n:
        raise InvalidInputError(f"Cannot keep {keep} of {n} indices")
    a, b, acc = _coalesce(n, rows, cols, values)
    tol = RANK_TOL * max(float(np.max(np.abs(acc))) if acc.size else 0.0, 1.0)

    inner = a >= keep
    graph = nx.Graph()
    graph.add_nodes_from(range(keep, n))
    graph.add_edges_from(zip(a[inner].tolist(), b[inner].tolist()))
    fronts: list = []
    if n > keep:
        _dissect(graph, list(range(keep, n)), fronts)
    root = len(fronts) - 1

    post = np.full(n, len(fronts), dtype=np.int64)
    for index, front in enumerate(fronts):
        post[front.own] = index
    # front at which both an index and all its neighbours have been assembled
    ready = post.copy()
    np.maximum.at(ready, a, post[b])
    np.maximum.at(ready, b, post[a])
    np.minimum(ready, max(root, 0), out=ready)

    node = np.minimum(post[a], post[b])
    order = np.argsort(node, kind="stable")
    a, b, acc, node = a[order], b[order], acc[order], node[order]
    bounds = np.searchsorted(node, np.arange(len(fronts) + 2))

    alive = np.ones(n, dtype=bool)
    log_abs, phase, pivots = 0.0, 1.0 + 0j, 0
    updates: dict = {}
    for X, front in enumerate(fronts):
        lo, hi = bounds[X], bounds[X + 1]
        children = [updates.pop(c) for c in front.children]
        labels = np.unique(np.concatenate([front.own, a[lo:hi], b[lo:hi]] + [c[0] for c in children]))
        F = np.zeros((len(labels), len(labels)), dtype=complex)
        for child_labels, child_F in children:
            pos = np.searchsorted(labels, child_labels)
            F[np.ix_(pos, pos)] += child_F
        ia = np.searchsorted(labels, a[lo:hi])
        ib = np.searchsorted(labels, b[lo:hi])
        np.add.at(F, (ia, ib), acc[lo:hi])
        np.add.at(F, (ib, ia), -acc[lo:hi])
        eligible = (labels >= keep) & (ready[labels] <= X)
        live, front_log, front_phase, count = _eliminate_front(F, labels, eligible, alive, tol)
        log_abs += front_log
        phase *= front_phase
        pivots += count
        updates[X] = (labels[live], F[np.ix_(live, live)])

    rest_labels, rest_F = updates.pop(root) if fronts else (np.zeros(0, dtype=np.int64), np.zeros((0, 0)))
    labels = np.union1d(np.arange(keep), rest_labels)
    F = np.zeros((len(labels), len(labels)), dtype=complex)
    pos = np.searchsorted(labels, rest_labels)
    F[np.ix_(pos, pos)] += rest_F
    lo, hi = bounds[len(fronts)], bounds[len(fronts) + 1]
    np.add.at(F, (a[lo:hi], b[lo:hi]), acc[lo:hi])
    np.add.at(F, (b[lo:hi], a[lo:hi]), -acc[lo:hi])
    B = np.zeros((len(labels), k), dtype=complex)
    B[:keep] = B_keep
    logger.debug(f"Sparse elimination: n={n}, {len(fronts)} fronts, {pivots} pivot pairs, "
                 f"{len(labels)} indices left")

    closed = gaussian_integral_closed(F, B)
    rank = closed.rank + 2 * pivots
    if closed.is_zero:
        return GaussianFormResult(0j, closed.quad, closed.residual, True, rank)
    log_abs += closed.log_abs
    phase *= closed.phase
    with np.errstate(over="ignore"):
        prefactor = complex(phase * np.exp(log_abs))
    return GaussianFormResult(prefactor, closed.quad, closed.residual, False, rank, log_abs, phase)


# --- GF(2) ------------------------------------------------------------------

def as_gf2(N) -> np.ndarray:
    N = np.asarray(N)
    if N.ndim != 2:
        raise InvalidInputError(f"Expected a binary matrix, got shape {N.shape}")
    if N.size and not np.isin(N, (0, 1)).all():
        raise InvalidInputError("Binary matrix entries must be 0 or 1")
    return N.astype(np.uint8)


def _row_reduce(N: np.ndarray) -> tuple[np.ndarray, list]:
    R = N.copy()
    rows, cols = R.shape
    pivot_cols = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(R[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        others = np.nonzero(R[:, c])[0]
        for o in others:
            if o != r:
                R[o] ^= R[r]
        pivot_cols.append(c)
        r += 1
    return R, pivot_cols


def gf2_rank_kernel(N) -> tuple[int, np.ndarray, np.ndarray]:
    """
    Returns (rank, kernel basis rows, row-space basis rows) over GF(2).
    """
    N = as_gf2(N)
    rows, cols = N.shape
    R, pivot_cols = _row_reduce(N)
    rank = len(pivot_cols)
    free = [c for c in range(cols) if c not in pivot_cols]
    kernel = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        kernel[i, f] = 1
        for r, pc in enumerate(pivot_cols):
            kernel[i, pc] = R[r, f]
    return rank, kernel, R[:rank].copy()


def gf2_inverse(U) -> np.ndarray:
    U = as_gf2(U)
    m = U.shape[0]
    aug = np.concatenate([U, np.eye(m, dtype=np.uint8)], axis=1)
    R, pivot_cols = _row_reduce(aug)
    if pivot_cols[:m] != list(range(m)):
        raise InvalidInputError("Binary matrix is singular")
    return R[:, m:].copy()


def gf2_matmul(X, Y) -> np.ndarray:
    return (np.asarray(X, dtype=np.int64) @ np.asarray(Y, dtype=np.int64) % 2).astype(np.uint8)


def block_form(m: int, r: int) -> np.ndarray:
    """r/2 blocks [[0, 1], [1, 0]] on the diagonal, zero elsewhere."""
    Nt = np.zeros((m, m), dtype=np.uint8)
    for j in range(0, r, 2):
        Nt[j, j + 1] = Nt[j + 1, j] = 1
    return Nt


def gf2_symmetric_decompose(N) -> tuple[np.ndarray, int]:
    """
    Find an invertible U and rank r with N = U^T Nt U, Nt = block_form(m, r).

    Symplectic Gram-Schmidt on the alternating form x^T N y.
    """
    N = as_gf2(N)
    m = N.shape[0]
    if N.shape != (m, m) or (N != N.T).any() or N.diagonal().any():
        raise InvalidInputError("Expected a symmetric binary matrix with zero diagonal")

    def form(x, y) -> int:
        return int(x.astype(np.int64) @ N.astype(np.int64) @ y.astype(np.int64)) % 2

    remaining = [row.copy() for row in np.eye(m, dtype=np.uint8)]
    pairs, radical = [], []
    while remaining:
        x = remaining.pop(0)
        partner = next((i for i, y in enumerate(remaining) if form(x, y)), None)
        if partner is None:
            radical.append(x)
            continue
        y = remaining.pop(partner)
        pairs.extend([x, y])
        for i, z in enumerate(remaining):
            remaining[i] = z ^ (form(z, y) * x) ^ (form(z, x) * y)
    W = np.array(pairs + radical, dtype=np.uint8).reshape(m, m).T
    U = gf2_inverse(W)
    r = len(pairs)
    if (gf2_matmul(gf2_matmul(U.T, block_form(m, r)), U) != N).any():
        raise InvalidInputError("Symplectic decomposition failed to recompose")
    return U, r

