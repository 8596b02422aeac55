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
One-shot contraction of a planar open network into a single matchgate.

Every vertex tensor is compiled to a planar matching sum (or, when all
tensors are linear, kept as a single hub vertex), the pieces are stitched
along the network edges, and the resulting matching sum over the external
stubs is evaluated as one Gaussian integral with Kasteleyn signs.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional

import networkx as nx
import numpy as np

from matchgate_net.errors import EmbeddingError, InvalidInputError
from matchgate_net.gadgets import compile_matchsum
from matchgate_net.linalg import gaussian_integral_sparse
from matchgate_net.matchgate import canonical_gauge, leading_component
from matchgate_net.models import CanonicalMatchgate
from matchgate_net.network import EdgeEnd, TensorNetwork, other_end
from matchgate_net.planar import KasteleynOrientation, PlanarGraph, kasteleyn_orient

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class StitchedNetwork:
    """The planar matching-sum graph of a whole open network."""
    graph: PlanarGraph
    stubs: List[int]
    rim_edges: List[int]
    prefactor: complex
    linear: bool
    # per network vertex: compiled matchsum and its vertex/edge offsets
    compiled: Dict[Hashable, tuple] = field(default_factory=dict)
    # per (vertex id, position): id of the stitched edge or stub vertex
    stitch_edges: Dict[tuple, int] = field(default_factory=dict)
    stub_of: Dict[tuple, int] = field(default_factory=dict)


def network_graph(net: TensorNetwork) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(v.id for v in net.vertices)
    for edge in net.internal_edges():
        (u, _), (v, _) = (net.locate(end) for end in net.ends_of(edge))
        graph.add_edge(u, v, key=edge)
    return graph


def derive_boundary(net: TensorNetwork) -> List[EdgeEnd]:
    """
    Counterclockwise order of the dangling ends along the face that holds all of them.

    The order starts at the first dangling end in vertex/incidence order.
    """
    dangling = net.dangling()
    if len(dangling) <= 1:
        return dangling
    graph = PlanarGraph()
    index = {}
    for vertex in net.vertices:
        index[vertex.id] = graph.add_vertex()
    slots: Dict[EdgeEnd, int] = {}
    leaves: Dict[int, EdgeEnd] = {}
    for edge in net.edges:
        ends = net.ends_of(edge)
        if len(ends) == 1:
            u, _ = net.locate(ends[0])
            leaf = graph.add_vertex()
            leaves[leaf] = ends[0]
            slots[ends[0]] = graph.add_edge(index[u], leaf, place=False)
            graph.rotation[leaf].append(slots[ends[0]])
            continue
        (u, _), (v, _) = (net.locate(end) for end in ends)
        if u == v:
            middle = graph.add_vertex()
            for end in ends:
                slots[end] = graph.add_edge(index[u], middle, place=False)
                graph.rotation[middle].append(slots[end])
        else:
            e = graph.add_edge(index[u], index[v], place=False)
            for end in ends:
                slots[end] = e
    for vertex in net.vertices:
        graph.rotation[index[vertex.id]] = [slots[end] for end in vertex.incidence]
    faces, _ = graph.faces()
    for walk in faces:
        visited = [graph.head(d) for d in walk if graph.head(d) in leaves]
        if len(visited) == len(leaves):
            order = [leaves[v] for v in reversed(visited)]
            start = order.index(dangling[0])
            return order[start:] + order[:start]
    raise EmbeddingError("Dangling ends do not share a face")


def _embed(target: PlanarGraph, source: PlanarGraph) -> tuple[int, int]:
    """Copy source into target; returns (vertex offset, edge offset)."""
    v_off, e_off = target.n_vertices, len(target.edges)
    for _ in range(source.n_vertices):
        target.add_vertex()
    for (u, v), w in zip(source.edges, source.weights):
        target.add_edge(u + v_off, v + v_off, w, place=False)
    for v, rot in enumerate(source.rotation):
        target.rotation[v + v_off] = [e + e_off for e in rot]
    return v_off, e_off


def stitch(net: TensorNetwork, boundary: List[EdgeEnd]) -> StitchedNetwork:
    """Build the planar matching-sum graph of the network with stubs in boundary order."""
    tensors = {v.id: net.canonical(v.id) for v in net.vertices}
    linear = all(m.is_linear() for m in tensors.values() if m.n > 0)
    graph = PlanarGraph()
    prefactor = 1.0 + 0j
    ports: Dict[tuple, tuple[int, complex]] = {}
    slot_edges: Dict[tuple, List[int]] = {}
    hubs: Dict[Hashable, int] = {}
    stitched = StitchedNetwork(graph, [], [], prefactor, linear)

    for vertex in net.vertices:
        M = tensors[vertex.id]
        if vertex.degree == 0:
            prefactor *= M.C
            continue
        if linear:
            hub = graph.add_vertex()
            hubs[vertex.id] = hub
            prefactor *= M.C
            for j in range(vertex.degree):
                ports[(vertex.id, j)] = (hub, M.B[0, j])
        else:
            compiled = compile_matchsum(M, with_prefactor=False)
            offsets = _embed(graph, compiled.graph)
            stitched.compiled[vertex.id] = (compiled, *offsets)
            prefactor *= M.C * M.parity.sign
            for j, x in enumerate(compiled.external):
                ports[(vertex.id, j)] = (x + offsets[0], 1.0)

    stub_position = {end: i for i, end in enumerate(boundary)}
    stubs: List[Optional[int]] = [None] * len(boundary)
    done = set()
    for vertex in net.vertices:
        for j, end in enumerate(vertex.incidence):
            if end in done:
                continue
            port, weight = ports[(vertex.id, j)]
            if end in stub_position:
                if linear:
                    inner = graph.add_vertex()
                    stub = graph.add_vertex()
                    e1 = graph.add_edge(port, inner, weight, place=False)
                    e2 = graph.add_edge(inner, stub, 1.0, place=False)
                    graph.rotation[inner] = [e1, e2]
                    graph.rotation[stub] = [e2]
                    slot_edges[(vertex.id, j)] = [e1]
                else:
                    stub = port
                stubs[stub_position[end]] = stub
                stitched.stub_of[(vertex.id, j)] = stub
                done.add(end)
                continue
            partner = other_end(net, end)
            v, l = net.locate(partner)
            done.update((end, partner))
            if v == vertex.id and linear:
                continue
            other_port, other_weight = ports[(v, l)]
            e = graph.add_edge(port, other_port, weight * other_weight, place=False)
            slot_edges[(vertex.id, j)] = [e]
            slot_edges[(v, l)] = [e]
            stitched.stitch_edges[(vertex.id, j)] = e
            stitched.stitch_edges[(v, l)] = e

    rims = [graph.add_edge(a, b, 0.0, place=False) for a, b in zip(stubs, stubs[1:])]
    for i, stub in enumerate(stubs):
        around = ([rims[i - 1]] if i > 0 else []) + ([rims[i]] if i < len(rims) else [])
        graph.rotation[stub].extend(around)

    for vertex in net.vertices:
        if linear and vertex.degree:
            graph.rotation[hubs[vertex.id]] = [e for j in range(vertex.degree)
                                               for e in slot_edges.get((vertex.id, j), [])]
        elif not linear:
            for j in range(vertex.degree):
                port, _ = ports[(vertex.id, j)]
                if (vertex.id, j) not in stitched.stub_of:
                    graph.rotation[port].extend(slot_edges[(vertex.id, j)])
    stitched.stubs = stubs
    stitched.rim_edges = rims
    stitched.prefactor = prefactor
    return stitched


def _parity_assignment(net: TensorNetwork, tensors: Dict[Hashable, CanonicalMatchgate],
                       stub_ends: set) -> Optional[Dict[EdgeEnd, int]]:
    """
    Bits on edges and stubs with sum_j x_{u,j} = k_u (mod 2) at every vertex,
    solved on a BFS tree; None when no assignment exists.
    """
    bits: Dict[EdgeEnd, int] = {}
    tree = nx.Graph()
    tree.add_nodes_from(v.id for v in net.vertices)
    for edge in net.internal_edges():
        a, b = net.ends_of(edge)
        (u, _), (v, _) = net.locate(a), net.locate(b)
        if u != v and not tree.has_edge(u, v):
            tree.add_edge(u, v, ends=(a, b))
    need = {v.id: tensors[v.id].k % 2 for v in net.vertices}
    with_stub = [v.id for v in net.vertices if any(end in stub_ends for end in v.incidence)]
    root = with_stub[0] if with_stub else net.vertices[0].id
    for parent, child in reversed(list(nx.bfs_edges(tree, root))):
        if need[child]:
            for end in tree[parent][child]["ends"]:
                bits[end] = 1
            need[child] = 0
            need[parent] ^= 1
    if need[root]:
        stub = next((end for end in net.vertex(root).incidence if end in stub_ends), None)
        if stub is None:
            return None
        bits[stub] = 1
    return bits


def _reference_matching(net: TensorNetwork, stitched: StitchedNetwork,
                        tensors: Dict[Hashable, CanonicalMatchgate]) -> Optional[tuple[List[int], List[int]]]:
    """
    (matched edge ids, unmatched stub vertices) of one matching of a compiled
    network, or None if none exists. Built from a parity assignment on the
    network and the reference matching of every gadget.
    """
    stub_ends = {end for v in net.vertices for j, end in enumerate(v.incidence) if (v.id, j) in stitched.stub_of}
    bits = _parity_assignment(net, tensors, stub_ends)
    if bits is None:
        return None
    edges, unmatched, stitched_used = [], [], set()
    for vertex in net.vertices:
        if not vertex.degree:
            continue
        compiled, v_off, e_off = stitched.compiled[vertex.id]
        local = [bits.get(end, 0) for end in vertex.incidence]
        matching = compiled.reference_matching(local)
        if matching is None:
            raise InvalidInputError(f"Parity assignment does not fit vertex {vertex.id!r}")
        edges.extend(e + e_off for e in matching)
        for j, bit in enumerate(local):
            if not bit:
                continue
            key = (vertex.id, j)
            if key in stitched.stub_of:
                unmatched.append(stitched.stub_of[key])
            elif key in stitched.stitch_edges and stitched.stitch_edges[key] not in stitched_used:
                stitched_used.add(stitched.stitch_edges[key])
                edges.append(stitched.stitch_edges[key])
    return edges, unmatched



def _permutation_parity(sequence: List[int]) -> int:
    position = {value: i for i, value in enumerate(sorted(sequence))}
    perm = [position[v] for v in sequence]
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) % 2
    return parity


def matching_sign(graph: PlanarGraph, ko: KasteleynOrientation, index: Dict[int, int],
                  edges: List[int], unmatched: List[int]) -> int:
    """
    sgn(M): prod_{u in dS} eta_u prod_{e in M} A_e eta_u eta_v = sgn(M) eta(V), order given by index.
    """
    sequence = sorted(index[s] for s in unmatched)
    sign = 1
    for e in edges:
        u, v = graph.edges[e]
        sequence += [index[u], index[v]]
        sign *= int(ko.orientation[e])
    if len(sequence) != len(index) or len(set(sequence)) != len(sequence):
        raise InvalidInputError("Reference matching does not cover the stitched graph")
    return -sign if _permutation_parity(sequence) else sign


@dataclass
class PlanarResult:
    matchgate: CanonicalMatchgate
    dimension: int = 0


def contract_open_network(net: TensorNetwork, boundary: Optional[List[EdgeEnd]] = None) -> CanonicalMatchgate:
    """
    Contract every internal edge of a planar open network.

    Returns a rank-m matchgate whose indexes follow the counterclockwise order
    of the m dangling ends (boundary, net.boundary, or derived from faces).
    """
    return planar_stage(net, boundary).matchgate


def _kasteleyn_entries(graph: PlanarGraph, ko: KasteleynOrientation, index: Dict[int, int],
                       unit: bool = False) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Upper entries of the Kasteleyn matrix in index order; unit=True sets every nonzero weight to 1."""
    rows, cols, values = [], [], []
    for e, ((u, v), w) in enumerate(zip(graph.edges, graph.weights)):
        if w == 0:
            continue
        rows.append(index[u])
        cols.append(index[v])
        values.append(ko.orientation[e] * (1.0 if unit else w))
    return (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
            np.array(values, dtype=complex))


def _unit_weight_sign(graph: PlanarGraph, ko: KasteleynOrientation, index: Dict[int, int],
                      m: int, phase: complex) -> int:
    """
    Sign shared by all matchings, read off the contraction with unit weights.

    Every component of that contraction is sgn times a matching count, so any
    nonzero component gives sgn. Returns 0 when the graph has no matching.
    """
    result = gaussian_integral_sparse(graph.n_vertices, *_kasteleyn_entries(graph, ko, index, unit=True),
                                      1j * np.eye(m))
    if result.is_zero:
        return 0
    counting = CanonicalMatchgate(result.quad, result.residual, phase * result.phase)
    bits, value = leading_component(counting)
    if value == 0:
        return 0
    if abs(value.imag) > 1e-6 * abs(value):
        logger.warning(f"Unit-weight component {bits} is not real: {value}")
    logger.debug(f"Unit-weight component {bits}: {value}")
    return 1 if value.real > 0 else -1


def planar_stage(net: TensorNetwork, boundary: Optional[List[EdgeEnd]] = None) -> PlanarResult:
    dangling = net.dangling()
    boundary = list(boundary or net.boundary or derive_boundary(net))
    if set(boundary) != set(dangling) or len(boundary) != len(dangling):
        raise InvalidInputError("Boundary must list every dangling end exactly once")
    m = len(boundary)
    if net.vertices and not nx.is_connected(network_graph(net)):
        raise EmbeddingError("Open network must be connected")
    tensors = {v.id: net.canonical(v.id) for v in net.vertices}
    if any(t.C == 0 for t in tensors.values()):
        return PlanarResult(CanonicalMatchgate.zero(m))

    stitched = stitch(net, boundary)
    graph = stitched.graph
    if graph.n_vertices == 0:
        return PlanarResult(CanonicalMatchgate.scalar(stitched.prefactor))
    if not nx.is_connected(graph.nx_graph()):
        raise EmbeddingError("Stitched graph is disconnected")
    try:
        ko = kasteleyn_orient(graph, stitched.stubs)
    except EmbeddingError as exc:
        raise EmbeddingError(f"Network is not planar with the given boundary order: {exc}") from exc

    N = graph.n_vertices
    stub_set = set(stitched.stubs)
    order = list(stitched.stubs) + [v for v in range(N) if v not in stub_set]
    index = {v: i for i, v in enumerate(order)}
    phase = 1.0 if N % 2 == 0 else -1j

    if stitched.linear:
        sign = _unit_weight_sign(graph, ko, index, m, phase)
    else:
        reference = _reference_matching(net, stitched, tensors)
        sign = 0 if reference is None else matching_sign(graph, ko, index, *reference)
    if sign == 0:
        logger.debug("Stitched graph has no admissible matching; contraction is zero")
        return PlanarResult(CanonicalMatchgate.zero(m), N)
    if sign < 0:
        logger.debug("Matchings carry sign -1; negating the prefactor")

    logger.info(f"Planar stage: {N} stitched vertices, {len(graph.edges)} edges, {m} stubs")
    result = gaussian_integral_sparse(N, *_kasteleyn_entries(graph, ko, index), 1j * np.eye(m))
    if result.is_zero:
        return PlanarResult(CanonicalMatchgate.zero(m), N)
    if not np.isfinite(result.prefactor):
        logger.warning(f"Planar prefactor overflows: log|Pf| = {result.log_abs:.6g}")
    C = sign * stitched.prefactor * phase * result.prefactor
    return PlanarResult(canonical_gauge(CanonicalMatchgate(result.quad, result.residual, C)), N)
