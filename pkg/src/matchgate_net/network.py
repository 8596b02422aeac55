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
Tensor networks on surfaces: data model, brute-force contraction and
pairwise contraction of edges and self-loops in canonical Gaussian form.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional

import numpy as np

from matchgate_net.errors import EmbeddingError, InvalidInputError, SizeLimitError
from matchgate_net.linalg import gaussian_integral_closed
from matchgate_net.matchgate import canonical_gauge, canonicalize, densify, rotate
from matchgate_net.models import CanonicalMatchgate, DenseTensor
from matchgate_net.settings import get_bruteforce_edge_limit

logger = logging.getLogger(__name__)

Tensor = DenseTensor | CanonicalMatchgate


def tensor_rank(tensor: Tensor) -> int:
    return tensor.rank if isinstance(tensor, DenseTensor) else tensor.n


@dataclass(frozen=True)
class EdgeEnd:
    """One end of an edge; slot tells the two ends of a self-loop apart."""
    edge: Hashable
    slot: int = 0


@dataclass
class Vertex:
    id: Hashable
    incidence: List[EdgeEnd] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.incidence)


@dataclass(eq=False)
class TensorNetwork:
    """
    Graph with a counterclockwise rotation system and one tensor per vertex.

    Edges referenced by exactly one end are dangling (open) edges. `boundary`
    optionally fixes the counterclockwise order of the dangling ends.
    """
    vertices: List[Vertex]
    tensors: Dict[Hashable, Tensor]
    genus: Optional[int] = None
    planar_cut: Optional[List[Hashable]] = None
    boundary: Optional[List[EdgeEnd]] = None
    edges: Optional[List[Hashable]] = None
    _canonical: Dict[Hashable, CanonicalMatchgate] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        seen = {}
        ids = set()
        for vertex in self.vertices:
            if vertex.id in ids:
                raise InvalidInputError(f"Duplicate vertex id {vertex.id!r}")
            ids.add(vertex.id)
            if vertex.id not in self.tensors:
                raise InvalidInputError(f"Vertex {vertex.id!r} has no tensor")
            rank = tensor_rank(self.tensors[vertex.id])
            if rank != vertex.degree:
                raise InvalidInputError(
                    f"Vertex {vertex.id!r} has degree {vertex.degree} but its tensor has rank {rank}")
            for pos, end in enumerate(vertex.incidence):
                if end in seen:
                    raise InvalidInputError(f"Edge end {end} appears twice")
                seen[end] = (vertex.id, pos)
        counts: Dict[Hashable, int] = {}
        for end in seen:
            counts[end.edge] = counts.get(end.edge, 0) + 1
        if self.edges is None:
            self.edges = list(dict.fromkeys(end.edge for end in seen))
        else:
            missing = set(counts) - set(self.edges)
            if missing:
                raise InvalidInputError(f"Edges {sorted(map(str, missing))} are not declared")
            unused = [e for e in self.edges if e not in counts]
            if unused:
                raise InvalidInputError(f"Edges {unused} have no ends")
        for edge, count in counts.items():
            if count > 2:
                raise InvalidInputError(f"Edge {edge!r} has more than two ends")
        if self.genus is not None and self.genus < 0:
            raise InvalidInputError("Genus must be non-negative")
        self._ends = seen
        self._by_edge: Dict[Hashable, List[EdgeEnd]] = {}
        for end in seen:
            self._by_edge.setdefault(end.edge, []).append(end)
        self._by_id = {vertex.id: vertex for vertex in self.vertices}

    # --- lookups ---------------------------------------------------------------

    def vertex(self, vid: Hashable) -> Vertex:
        if vid not in self._by_id:
            raise InvalidInputError(f"Unknown vertex {vid!r}")
        return self._by_id[vid]

    def locate(self, end: EdgeEnd) -> tuple[Hashable, int]:
        """(vertex id, position in its incidence list) of an edge end."""
        return self._ends[end]

    def ends_of(self, edge: Hashable) -> List[EdgeEnd]:
        return list(self._by_edge.get(edge, []))

    def dangling(self) -> List[EdgeEnd]:
        return [end for end in self._ends if len(self._by_edge[end.edge]) == 1]

    def internal_edges(self) -> List[Hashable]:
        return [e for e in self.edges if len(self._by_edge.get(e, ())) == 2]

    def canonical(self, vid: Hashable) -> CanonicalMatchgate:
        """Canonical form of a vertex tensor, converted once and cached."""
        if vid not in self._canonical:
            self._canonical[vid] = canonicalize(self.tensors[vid])
        return self._canonical[vid]

    def derive(self, vertices: List[Vertex], tensors: Dict[Hashable, Tensor]) -> "TensorNetwork":
        cache = {vid: m for vid, m in self._canonical.items() if vid in tensors and tensors[vid] is self.tensors.get(vid)}
        kept = {end.edge for v in vertices for end in v.incidence}
        return TensorNetwork(vertices, tensors, self.genus,
                             [e for e in self.planar_cut if e in kept] if self.planar_cut is not None else None,
                             self.boundary, [e for e in self.edges if e in kept], cache)


# --- brute force -----------------------------------------------------------------

def _einsum_operands(net: TensorNetwork) -> tuple[list, Dict[Hashable, int]]:
    labels = {edge: i for i, edge in enumerate(net.edges)}
    operands = []
    for vertex in net.vertices:
        operands.append(densify(net.tensors[vertex.id]).as_array())
        operands.append([labels[end.edge] for end in vertex.incidence])
    return operands, labels


def _check_edge_budget(net: TensorNetwork) -> None:
    limit = get_bruteforce_edge_limit()
    if len(net.edges) > limit:
        raise SizeLimitError(f"Brute-force contraction is limited to {limit} edges, got {len(net.edges)}")


def contract_bruteforce(net: TensorNetwork) -> complex:
    """c(T) = sum over all edge index strings of the product of tensor components."""
    _check_edge_budget(net)
    if net.dangling():
        raise InvalidInputError("Network has dangling edges; use contract_open_bruteforce")
    operands, _ = _einsum_operands(net)
    if not operands:
        return 1.0 + 0j
    return complex(np.einsum(*operands, [], optimize=True))


def contract_open_bruteforce(net: TensorNetwork, boundary: Optional[List[EdgeEnd]] = None) -> DenseTensor:
    """Dense tensor over the dangling ends, in `boundary` order (default: net.boundary or discovery order)."""
    _check_edge_budget(net)
    boundary = boundary or net.boundary or net.dangling()
    if sorted(map(repr, boundary)) != sorted(map(repr, net.dangling())):
        raise InvalidInputError("Boundary order must list every dangling end exactly once")
    operands, labels = _einsum_operands(net)
    output = [labels[end.edge] for end in boundary]
    values = np.einsum(*operands, output, optimize=True) if operands else np.ones(())
    return DenseTensor(len(boundary), np.asarray(values).reshape(-1))


# --- pairwise contraction ------------------------------------------------------

def _block_starts(positions: set, degree: int) -> List[int]:
    """Starts s such that positions == {s, s+1, ..., s+b-1} mod degree."""
    b = len(positions)
    return [s for s in range(degree)
            if {(s + j) % degree for j in range(b)} == positions]


def convolve(Mu: CanonicalMatchgate, Mv: CanonicalMatchgate, b: int) -> CanonicalMatchgate:
    """
    Contract the last b ends of u with the first b ends of v (in reverse order).

    End du-b+i of u is joined to end b-1-i of v. The result has the remaining
    ends of u followed by the remaining ends of v.
    """
    du, dv, ku, kv = Mu.n, Mv.n, Mu.k, Mv.k
    if b > du or b > dv:
        raise InvalidInputError(f"Cannot contract {b} edges between ranks {du} and {dv}")
    tu = np.arange(du)
    tv = du + np.arange(dv)
    mu_u = du + dv + np.arange(ku)
    mu_v = du + dv + ku + np.arange(kv)
    size = du + dv + ku + kv
    omega = np.zeros((size, size), dtype=complex)
    omega[np.ix_(tu, tu)] = Mu.A
    omega[np.ix_(tv, tv)] = Mv.A
    omega[np.ix_(mu_u, tu)] = Mu.B
    omega[np.ix_(tu, mu_u)] = -Mu.B.T
    omega[np.ix_(mu_v, tv)] = Mv.B
    omega[np.ix_(tv, mu_v)] = -Mv.B.T
    order = list(mu_u) + list(mu_v)
    for i in range(b):
        beta = tu[du - b + i]
        gamma = tv[b - 1 - i]
        omega[beta, gamma] += 1
        omega[gamma, beta] -= 1
        order += [beta, gamma]
    keep = list(tu[:du - b]) + list(tv[b:])
    K = omega[np.ix_(order, order)]
    L = omega[np.ix_(order, keep)]
    H = omega[np.ix_(keep, keep)]
    result = gaussian_integral_closed(K, L)
    rank = len(keep)
    if result.is_zero:
        return CanonicalMatchgate.zero(rank)
    sign = -1 if Mu.parity.bit and Mv.parity.bit else 1
    C = sign * Mu.C * Mv.C * result.prefactor
    A = H + result.quad
    merged = CanonicalMatchgate((A - A.T) / 2, result.residual, C)
    logger.debug(f"Convolved ranks {du},{dv} over {b} edges: rank {rank}, k={merged.k}")
    return canonical_gauge(merged)


def contract_edge_pair(net: TensorNetwork, u: Hashable, v: Hashable) -> TensorNetwork:
    """
    Merge adjacent vertices u and v, contracting every edge between them.

    The shared edges must be consecutive in both rotation orders and meet
    in opposite orientations, so that together they bound a disk.
    """
    if u == v:
        raise InvalidInputError("contract_edge_pair needs two distinct vertices")
    vu, vv = net.vertex(u), net.vertex(v)
    v_edges = {end.edge: pos for pos, end in enumerate(vv.incidence)}
    shared = [(pos, end) for pos, end in enumerate(vu.incidence) if end.edge in v_edges]
    b = len(shared)
    if b == 0:
        raise InvalidInputError(f"Vertices {u!r} and {v!r} are not adjacent")
    du, dv = vu.degree, vv.degree
    pos_u = {pos for pos, _ in shared}
    pos_v = {v_edges[end.edge] for _, end in shared}
    chosen = None
    for su in _block_starts(pos_u, du):
        for sv in _block_starts(pos_v, dv):
            if all(vv.incidence[(sv + b - 1 - j) % dv].edge == vu.incidence[(su + j) % du].edge
                   for j in range(b)):
                chosen = (su, sv)
                break
        if chosen:
            break
    if chosen is None:
        raise EmbeddingError(
            f"Edges between {u!r} and {v!r} do not bound a disk (not consecutive or misaligned)")
    su, sv = chosen
    tu = (su + b) % du if du else 0
    Mu = rotate(net.canonical(u), tu)
    Mv = rotate(net.canonical(v), sv)
    inc_u = vu.incidence[tu:] + vu.incidence[:tu]
    inc_v = vv.incidence[sv:] + vv.incidence[:sv]
    merged = convolve(Mu, Mv, b)
    new_vertex = Vertex(u, inc_u[:du - b] + inc_v[b:])
    vertices = [new_vertex if x.id == u else x for x in net.vertices if x.id != v]
    tensors = {vid: t for vid, t in net.tensors.items() if vid not in (u, v)}
    tensors[u] = merged
    logger.debug(f"Contracted {b} edge(s) between {u!r} and {v!r}: new degree {new_vertex.degree}")
    result = net.derive(vertices, tensors)
    result._canonical[u] = merged
    return result


def other_end(net: TensorNetwork, end: EdgeEnd) -> EdgeEnd:
    for other in net.ends_of(end.edge):
        if other != end:
            return other
    raise InvalidInputError(f"Edge {end.edge!r} is dangling")


def _delta_tensor() -> CanonicalMatchgate:
    """T(x1, x2) = [x1 == x2]."""
    return CanonicalMatchgate(np.array([[0, 1], [-1, 0]]), np.zeros((0, 2)), 1.0)


def contract_self_loops(net: TensorNetwork, u: Hashable) -> TensorNetwork:
    """
    Remove every disk-contractible self-loop at u, innermost first.

    Each loop gets a dummy delta vertex and is then contracted as a pair of
    parallel edges.
    """
    current = net
    while True:
        vertex = current.vertex(u)
        d = vertex.degree
        loops = {}
        for pos, end in enumerate(vertex.incidence):
            loops.setdefault(end.edge, []).append(pos)
        loops = {e: p for e, p in loops.items() if len(p) == 2}
        if not loops:
            return current
        target = None
        for edge, (p, q) in loops.items():
            if (p + 1) % d == q:
                target = (edge, p, q)
            elif (q + 1) % d == p:
                target = (edge, q, p)
            if target:
                break
        if target is None:
            raise EmbeddingError(
                f"Self-loops {list(loops)} at {u!r} are not contractible inside a disk")
        edge, first, second = target
        dummy = ("loop", u, edge)
        end_a, end_b = EdgeEnd(("loop", edge, "a")), EdgeEnd(("loop", edge, "b"))
        incidence = list(vertex.incidence)
        incidence[first], incidence[second] = end_a, end_b
        vertices = [Vertex(u, incidence) if x.id == u else x for x in current.vertices]
        vertices.append(Vertex(dummy, [EdgeEnd(end_b.edge, 1), EdgeEnd(end_a.edge, 1)]))
        tensors = dict(current.tensors)
        tensors[dummy] = _delta_tensor()
        edges = [e for e in current.edges if e != edge] + [end_a.edge, end_b.edge]
        cache = dict(current._canonical)
        staged = TensorNetwork(vertices, tensors, current.genus, current.planar_cut, None, edges, cache)
        current = contract_edge_pair(staged, u, dummy)
        logger.debug(f"Contracted self-loop {edge!r} at {u!r}")


def scalar_value(tensor: Tensor) -> complex:
    if isinstance(tensor, DenseTensor):
        return complex(tensor.values[0])
    return tensor.C


def contract_sequential(net: TensorNetwork) -> complex:
    """
    Contract a closed genus-0 network pairwise down to scalars.

    Self-loops are removed as soon as they are contractible; otherwise the
    first edge whose endpoints bound a disk is contracted.
    """
    if net.dangling():
        raise InvalidInputError("Sequential contraction needs a closed network")
    current = net
    while True:
        progressed = False
        for vertex in current.vertices:
            if any(len([e for e in vertex.incidence if e.edge == end.edge]) == 2 for end in vertex.incidence):
                try:
                    current = contract_self_loops(current, vertex.id)
                    progressed = True
                    break
                except EmbeddingError:
                    continue
        if progressed:
            continue
        for edge in current.internal_edges():
            (u, _), (v, _) = (current.locate(end) for end in current.ends_of(edge))
            if u == v:
                continue
            try:
                current = contract_edge_pair(current, u, v)
                progressed = True
                break
            except EmbeddingError:
                continue
        if not progressed:
            break
    if current.internal_edges():
        raise EmbeddingError("Network cannot be contracted pairwise inside disks")
    value = 1.0 + 0j
    for vertex in current.vertices:
        value *= scalar_value(current.canonical(vertex.id))
    return value
