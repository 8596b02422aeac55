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
Planar weighted graphs with rotation systems, Kasteleyn orientations and
brute-force matching sums.

Rotation lists hold edge ids in counterclockwise order. Faces are traced with
their interior on the left, so inner faces run counterclockwise and the outer
face clockwise.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import networkx as nx
import numpy as np

from matchgate_net.errors import EmbeddingError, InvalidInputError, SizeLimitError

logger = logging.getLogger(__name__)

MAX_MATCHING_VERTICES = 128


@dataclass(eq=False)
class PlanarGraph:
    n_vertices: int = 0
    edges: List[tuple[int, int]] = field(default_factory=list)
    weights: List[complex] = field(default_factory=list)
    rotation: List[List[int]] = field(default_factory=list)
    external: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.rotation:
            self.rotation = [[] for _ in range(self.n_vertices)]
        if len(self.rotation) != self.n_vertices:
            raise InvalidInputError("Rotation system must list every vertex")
        if len(self.weights) != len(self.edges):
            raise InvalidInputError("Every edge needs a weight")
        self.weights = [complex(w) for w in self.weights]
        for e, (u, v) in enumerate(self.edges):
            if u == v:
                raise InvalidInputError(f"Edge {e} is a self-loop")
        for v, rot in enumerate(self.rotation):
            for e in rot:
                if v not in self.edges[e]:
                    raise InvalidInputError(f"Edge {e} listed at vertex {v} does not touch it")
        for e, (u, v) in enumerate(self.edges):
            if self.rotation[u].count(e) != 1 or self.rotation[v].count(e) != 1:
                raise InvalidInputError(f"Edge {e} must appear once in each endpoint's rotation")

    def add_vertex(self) -> int:
        self.rotation.append([])
        self.n_vertices += 1
        return self.n_vertices - 1

    def add_edge(self, u: int, v: int, weight: complex = 1.0, place: bool = True) -> int:
        """Append an edge; with place=False the caller inserts it into the rotations."""
        if u == v:
            raise InvalidInputError("Self-loops are not allowed in planar graphs")
        self.edges.append((u, v))
        self.weights.append(complex(weight))
        e = len(self.edges) - 1
        if place:
            self.rotation[u].append(e)
            self.rotation[v].append(e)
        return e

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if v == a else a

    def edge_between(self, u: int, v: int) -> Optional[int]:
        for e in self.rotation[u]:
            if self.other(e, u) == v:
                return e
        return None

    # darts: 2e runs edges[e][0] -> edges[e][1], 2e+1 the reverse
    def tail(self, dart: int) -> int:
        return self.edges[dart // 2][dart % 2]

    def head(self, dart: int) -> int:
        return self.edges[dart // 2][1 - dart % 2]

    def dart_from(self, e: int, v: int) -> int:
        return 2 * e if self.edges[e][0] == v else 2 * e + 1

    def next_dart(self, dart: int) -> int:
        """Arriving at v via edge e, leave along the edge preceding e in v's ccw rotation."""
        v = self.head(dart)
        rot = self.rotation[v]
        i = rot.index(dart // 2)
        return self.dart_from(rot[(i - 1) % len(rot)], v)

    def faces(self) -> tuple[List[List[int]], Dict[int, int]]:
        """Face boundary walks (lists of darts) and the face index of every dart."""
        face_of: Dict[int, int] = {}
        faces: List[List[int]] = []
        for start in range(2 * len(self.edges)):
            if start in face_of:
                continue
            walk = []
            dart = start
            while dart not in face_of:
                face_of[dart] = len(faces)
                walk.append(dart)
                dart = self.next_dart(dart)
            faces.append(walk)
        return faces, face_of

    def nx_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n_vertices))
        for e, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, key=e)
        return graph

    def check_planar(self) -> None:
        """Euler check V - E + F = 2 on every component that has edges."""
        faces, face_of = self.faces()
        graph = self.nx_graph()
        for component in nx.connected_components(graph):
            comp_edges = {e for v in component for e in self.rotation[v]}
            if not comp_edges:
                continue
            comp_faces = {face_of[2 * e] for e in comp_edges} | {face_of[2 * e + 1] for e in comp_edges}
            euler = len(component) - len(comp_edges) + len(comp_faces)
            if euler != 2:
                raise EmbeddingError(
                    f"Rotation system is not planar: V - E + F = {euler} on a component of {len(component)} vertices")


@dataclass(eq=False)
class KasteleynOrientation:
    """orientation[e] = +1 when edge e points edges[e][0] -> edges[e][1], -1 otherwise."""
    orientation: np.ndarray
    faces: List[List[int]]
    face_of: Dict[int, int]
    outer_face: int
    boundary_edges: List[int] = field(default_factory=list)

    def sign(self, graph: PlanarGraph, u: int, v: int, e: int) -> int:
        """A_{u,v} for edge e: +1 if it points u -> v."""
        forward = graph.edges[e][0] == u
        return int(self.orientation[e]) if forward else -int(self.orientation[e])

    def gauge(self, graph: PlanarGraph, v: int) -> None:
        for e in graph.rotation[v]:
            self.orientation[e] *= -1


def _agreeing(graph: PlanarGraph, orientation: np.ndarray, walk: Sequence[int]) -> int:
    count = 0
    for dart in walk:
        forward = dart % 2 == 0
        if (orientation[dart // 2] > 0) == forward:
            count += 1
    return count


def _choose_outer(graph: PlanarGraph, faces, face_of, boundary: Sequence[int]) -> tuple[int, List[int]]:
    path = []
    for a, b in zip(boundary, boundary[1:]):
        e = graph.edge_between(a, b)
        if e is None:
            raise EmbeddingError(f"Boundary vertices {a} and {b} are not joined by an edge")
        path.append(e)
    if path:
        return face_of[graph.dart_from(path[0], boundary[1])], path
    return max(range(len(faces)), key=lambda f: (len(faces[f]), -f)), path


def verify_kasteleyn(graph: PlanarGraph, ko: KasteleynOrientation, boundary: Sequence[int] = ()) -> bool:
    """Every inner face has an odd count of counterclockwise edges; the boundary path runs forward."""
    for f, walk in enumerate(ko.faces):
        if f == ko.outer_face:
            continue
        if _agreeing(graph, ko.orientation, walk) % 2 == 0:
            return False
    for (a, b), e in zip(zip(boundary, boundary[1:]), ko.boundary_edges):
        if ko.sign(graph, a, b, e) != 1:
            return False
    return True


def kasteleyn_orient(graph: PlanarGraph, boundary: Sequence[int] = (), outer_face: Optional[int] = None) -> KasteleynOrientation:
    """
    Kasteleyn orientation with the boundary path boundary[0] -> boundary[1] -> ... forward.

    Free edges start forward; a spanning tree of the dual rooted at the outer
    face fixes the parity of every inner face from the leaves up; gauge flips
    at boundary vertices then orient the boundary path.
    """
    if graph.n_vertices and not nx.is_connected(graph.nx_graph()):
        raise EmbeddingError("Kasteleyn orientation needs a connected graph")
    graph.check_planar()
    faces, face_of = graph.faces()
    orientation = np.ones(len(graph.edges), dtype=np.int8)
    outer, path = _choose_outer(graph, faces, face_of, boundary)
    if outer_face is not None:
        outer = outer_face
    ko = KasteleynOrientation(orientation, faces, face_of, outer, path)
    if not faces:
        return ko

    dual = nx.Graph()
    dual.add_nodes_from(range(len(faces)))
    for e in range(len(graph.edges)):
        f1, f2 = face_of[2 * e], face_of[2 * e + 1]
        if f1 != f2 and not dual.has_edge(f1, f2):
            dual.add_edge(f1, f2, edge=e)
    tree = list(nx.bfs_edges(dual, outer))
    for parent, child in reversed(tree):
        if _agreeing(graph, orientation, faces[child]) % 2 == 0:
            orientation[dual[parent][child]["edge"]] *= -1

    for i in range(len(path) - 1, -1, -1):
        a, b = boundary[i], boundary[i + 1]
        if ko.sign(graph, a, b, path[i]) != 1:
            ko.gauge(graph, a)

    if not verify_kasteleyn(graph, ko, boundary):
        raise EmbeddingError("Kasteleyn orientation failed verification")
    logger.debug(f"Kasteleyn orientation: {len(graph.edges)} edges, {len(faces)} faces, outer face {outer}")
    return ko


def _matching_order(graph: PlanarGraph) -> List[int]:
    """Low-bandwidth vertex order keeps the matching DP frontier small."""
    simple = nx.Graph()
    simple.add_nodes_from(range(graph.n_vertices))
    simple.add_edges_from(graph.edges)
    return list(nx.utils.reverse_cuthill_mckee_ordering(simple))


def matching_sum_bruteforce(graph: PlanarGraph, S: Sequence[int] = ()) -> complex:
    """
    PerfMatch(G, S): sum over matchings that cover every vertex outside S exactly once
    and leave S unmatched.
    """
    n = graph.n_vertices
    if n > MAX_MATCHING_VERTICES:
        raise SizeLimitError(f"Matching enumeration is limited to {MAX_MATCHING_VERTICES} vertices, got {n}")
    excluded = set(S)
    if not excluded <= set(range(n)):
        raise InvalidInputError(f"Unmatched set {sorted(excluded)} is not a vertex subset")
    if (n - len(excluded)) % 2:
        return 0j
    order = _matching_order(graph)
    rank = {v: i for i, v in enumerate(order)}
    neighbours: List[List[tuple[int, complex]]] = [[] for _ in range(n)]
    for (u, v), w in zip(graph.edges, graph.weights):
        if w != 0 and u not in excluded and v not in excluded:
            neighbours[rank[u]].append((rank[v], w))
            neighbours[rank[v]].append((rank[u], w))

    @lru_cache(maxsize=None)
    def count(remaining: int) -> complex:
        if remaining == 0:
            return 1.0 + 0j
        low = remaining & -remaining
        v = low.bit_length() - 1
        rest = remaining ^ low
        total = 0j
        for w, weight in neighbours[v]:
            if rest >> w & 1:
                total += weight * count(rest ^ (1 << w))
        return total

    start = sum(1 << rank[v] for v in range(n) if v not in excluded)
    value = count(start)
    count.cache_clear()
    return value
