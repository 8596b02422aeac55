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
Instance generators: grid and torus graphs, matching-sum networks, Ising
networks and random matchgate networks.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from matchgate_net.errors import InvalidInputError
from matchgate_net.matchgate import canonical_gauge, scale_variable
from matchgate_net.models import CanonicalMatchgate
from matchgate_net.network import EdgeEnd, TensorNetwork, Vertex

logger = logging.getLogger(__name__)

MAX_ISING_DEGREE = 8


@dataclass(eq=False)
class SurfaceGraph:
    """Weighted graph with a counterclockwise rotation system (edge ids) on a genus-g surface."""
    n_vertices: int
    edges: List[tuple[int, int]]
    weights: List[complex]
    rotation: List[List[int]]
    genus: int = 0
    planar_cut: List[int] = field(default_factory=list)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])


def _grid_edges(rows: int, cols: int, wrap: bool) -> tuple[List[tuple[int, int]], List[List[int]], List[int]]:
    """Edges and ccw rotations (east, north, west, south) of a rows x cols grid; vertex r*cols + c."""
    edges: List[tuple[int, int]] = []
    cut: List[int] = []
    slots = [dict() for _ in range(rows * cols)]

    def vid(r: int, c: int) -> int:
        return r * cols + c

    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols or wrap:
                e = len(edges)
                right = vid(r, (c + 1) % cols)
                edges.append((vid(r, c), right))
                slots[vid(r, c)]["east"] = e
                slots[right]["west"] = e
                if c + 1 == cols:
                    cut.append(e)
            if r + 1 < rows or wrap:
                e = len(edges)
                up = vid((r + 1) % rows, c)
                edges.append((vid(r, c), up))
                slots[vid(r, c)]["north"] = e
                slots[up]["south"] = e
                if r + 1 == rows:
                    cut.append(e)
    rotation = [[s[d] for d in ("east", "north", "west", "south") if d in s] for s in slots]
    return edges, rotation, cut


def grid_graph(rows: int, cols: int, weights: Optional[Sequence[complex]] = None) -> SurfaceGraph:
    if rows < 1 or cols < 1:
        raise InvalidInputError("Grid needs at least one row and one column")
    edges, rotation, _ = _grid_edges(rows, cols, wrap=False)
    return SurfaceGraph(rows * cols, edges, _weights(edges, weights), rotation)


def torus_grid_graph(rows: int, cols: int, weights: Optional[Sequence[complex]] = None) -> SurfaceGraph:
    """Grid with wrap-around edges; the wrap edges form the planar cut."""
    if rows < 2 or cols < 2:
        raise InvalidInputError("Torus grid needs at least two rows and two columns")
    edges, rotation, cut = _grid_edges(rows, cols, wrap=True)
    return SurfaceGraph(rows * cols, edges, _weights(edges, weights), rotation, genus=1, planar_cut=cut)


def cycle_with_chords(n: int, chords: int, rng: np.random.Generator) -> SurfaceGraph:
    """n-cycle drawn on a circle plus up to `chords` random non-crossing chords inside it."""
    if n < 3:
        raise InvalidInputError("Cycle needs at least three vertices")
    pairs = [(i, (i + 1) % n) for i in range(n)]
    accepted: List[tuple[int, int]] = []
    for _ in range(20 * chords):
        if len(accepted) == chords:
            break
        a, b = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        if b - a in (1, n - 1) or (a, b) in accepted:
            continue
        if any(a < c < b < d or c < a < d < b for c, d in accepted):
            continue
        accepted.append((a, b))
    edges = pairs + accepted
    rotation: List[List[int]] = [[] for _ in range(n)]
    for v in range(n):
        incident = [e for e, (a, b) in enumerate(edges) if v in (a, b)]
        rotation[v] = sorted(incident, key=lambda e: (sum(edges[e]) - 2 * v) % n)
    return SurfaceGraph(n, edges, [1.0] * len(edges), rotation)


def _weights(edges, weights) -> List[complex]:
    if weights is None:
        return [1.0 + 0j] * len(edges)
    if len(weights) != len(edges):
        raise InvalidInputError(f"Expected {len(edges)} edge weights, got {len(weights)}")
    return [complex(w) for w in weights]


def _skeleton(graph: SurfaceGraph) -> List[Vertex]:
    """Vertices with incidence lists; edges[e][0] holds slot 0, edges[e][1] slot 1."""
    vertices = []
    for v in range(graph.n_vertices):
        incidence = []
        for e in graph.rotation[v]:
            a, b = graph.edges[e]
            if a == b:
                raise InvalidInputError(f"Edge {e} is a self-loop")
            incidence.append(EdgeEnd(e, 0 if a == v else 1))
        vertices.append(Vertex(v, incidence))
    return vertices


def gen_matching_network(graph: SurfaceGraph) -> TensorNetwork:
    """
    Network with c(T) = PerfMatch(G, {}).

    Every vertex carries a linear tensor; the weight of an edge sits on its
    smaller-id endpoint and the other endpoint gets 1.
    """
    vertices = _skeleton(graph)
    tensors = {}
    for vertex in vertices:
        if not vertex.degree:
            tensors[vertex.id] = CanonicalMatchgate.zero(0)
            continue
        b = np.ones((1, vertex.degree), dtype=complex)
        for j, end in enumerate(vertex.incidence):
            if vertex.id == min(graph.edges[end.edge]):
                b[0, j] = graph.weights[end.edge]
        tensors[vertex.id] = CanonicalMatchgate(np.zeros((vertex.degree, vertex.degree)), b, 1.0)
    logger.debug(f"Matching network: {graph.n_vertices} vertices, {len(graph.edges)} edges, genus {graph.genus}")
    return TensorNetwork(vertices, tensors, graph.genus, list(graph.planar_cut) or None,
                         edges=list(range(len(graph.edges))))


def even_indicator(d: int) -> CanonicalMatchgate:
    """T(x) = 1 for every x of even weight: exp(1/2 theta^T A theta) with A all ones above the diagonal."""
    A = np.triu(np.ones((d, d)), 1)
    return CanonicalMatchgate(A - A.T, np.zeros((0, d)), 1.0)


def gen_ising_network(graph: SurfaceGraph, couplings: Sequence[float]) -> tuple[TensorNetwork, complex]:
    """
    High-temperature expansion: Z = prefactor * c(network).

    prefactor = 2^|V| prod_e cosh(beta J_e); the factor tanh(beta J_e) rescales
    the edge variable at its smaller-id endpoint.
    """
    if len(couplings) != len(graph.edges):
        raise InvalidInputError(f"Expected {len(graph.edges)} couplings, got {len(couplings)}")
    vertices = _skeleton(graph)
    tensors = {}
    for vertex in vertices:
        if vertex.degree > MAX_ISING_DEGREE:
            raise InvalidInputError(f"Vertex {vertex.id} has degree {vertex.degree} > {MAX_ISING_DEGREE}")
        M = even_indicator(vertex.degree)
        for j, end in enumerate(vertex.incidence):
            if vertex.id == min(graph.edges[end.edge]):
                M = scale_variable(M, j, math.tanh(couplings[end.edge]))
        tensors[vertex.id] = M
    prefactor = 2.0 ** graph.n_vertices * math.prod(math.cosh(c) for c in couplings)
    net = TensorNetwork(vertices, tensors, graph.genus, list(graph.planar_cut) or None,
                        edges=list(range(len(graph.edges))))
    return net, complex(prefactor)


def random_matchgate(n: int, rng: np.random.Generator, k: Optional[int] = None) -> CanonicalMatchgate:
    """Random complex canonical matchgate of rank n with k mu-variables (random parity-consistent k by default)."""
    if k is None:
        k = int(rng.integers(0, n + 1))
    if not 0 <= k <= n:
        raise InvalidInputError(f"Need 0 <= k <= n, got k={k}, n={n}")
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
    C = complex(rng.normal(), rng.normal())
    return canonical_gauge(CanonicalMatchgate((X - X.T) / 2, B, C))


def gen_random_network(kind: str, size: int, rng: np.random.Generator, chords: int = 2) -> TensorNetwork:
    """
    Random canonical matchgates on a planar cycle with chords ("planar")
    or on a size x size torus grid ("torus").
    """
    if kind == "planar":
        graph = cycle_with_chords(size, chords, rng)
    elif kind == "torus":
        graph = torus_grid_graph(size, size)
    else:
        raise InvalidInputError(f"Unknown random network kind {kind!r}")
    vertices = _skeleton(graph)
    tensors = {v.id: random_matchgate(v.degree, rng) for v in vertices}
    return TensorNetwork(vertices, tensors, graph.genus, list(graph.planar_cut) or None,
                         edges=list(range(len(graph.edges))))
