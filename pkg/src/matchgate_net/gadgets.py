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
Compilation of matchgates into planar matching sums.

The complete graph on the kappa = n + k vertices of the extended matrix
Abar = [[A, -B^T], [B, 0]] is drawn with vertices on a line and chords as
upper semicircles. Every chord crossing is replaced by a six-vertex gadget,
every tensor index gets a pendant "bit-flip" vertex, and the C eps(T) factor
becomes a separate weighted edge, so that

    T(x) = PerfMatch(G, {x'_j : x_j = 1}).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from matchgate_net.errors import InvalidInputError
from matchgate_net.linalg import as_skew
from matchgate_net.matchgate import extended_matrix
from matchgate_net.models import CanonicalMatchgate
from matchgate_net.planar import PlanarGraph

logger = logging.getLogger(__name__)

EXT = None
# local vertices 1..6; 1..4 are the externals, counterclockwise
GADGET_EDGES = [(1, 4, 1), (2, 3, 1), (1, 5, 1), (2, 5, 1), (3, 6, 1), (4, 6, 1), (5, 6, -1)]
# counterclockwise neighbours; EXT marks the slot of the outside segment
GADGET_ROTATION = {
    1: [4, EXT, 5],
    2: [3, 5, EXT],
    3: [6, 2, EXT],
    4: [EXT, 1, 6],
    5: [6, 1, 2],
    6: [4, 5, 3],
}
# internal matchings by chord occupancy: the chord through 1-3, the chord through 2-4, neither
GADGET_STATES = {
    "first": [(2, 5), (4, 6)],
    "second": [(1, 5), (3, 6)],
    "none": [(1, 5), (2, 3), (4, 6)],
}


@dataclass
class Gadget:
    """A crossing of chords first=(a, b) and second=(c, d) with a < c < b < d."""
    first: tuple[int, int]
    second: tuple[int, int]
    x: float
    vertices: Dict[int, int] = field(default_factory=dict)
    edges: Dict[tuple[int, int], int] = field(default_factory=dict)


@dataclass(eq=False)
class CompiledMatchsum:
    graph: PlanarGraph
    circle: List[int]
    external: List[int]
    pendant_edges: List[int]
    chords: Dict[tuple[int, int], List[int]]
    gadgets: List[Gadget]
    n: int
    prefactor_edge: Optional[int] = None

    def unmatched(self, bits: Sequence[int]) -> List[int]:
        """External vertices left unmatched for index string x."""
        return [self.external[j] for j, bit in enumerate(bits) if int(bit)]

    def reference_matching(self, bits: Sequence[int]) -> Optional[List[int]]:
        """
        One matching of the compiled graph leaving exactly unmatched(bits) free,
        or None when the parity of x does not fit the tensor.

        Circle vertices that must be matched inside are paired consecutively,
        so the chosen chords never cross.
        """
        kappa = len(self.circle)
        inside = [j for j in range(self.n) if int(bits[j])] + list(range(self.n, kappa))
        if len(inside) % 2:
            return None
        matching = [self.pendant_edges[j] for j in range(self.n) if not int(bits[j])]
        used = set()
        for a, b in zip(inside[0::2], inside[1::2]):
            matching.extend(self.chords[(a, b)])
            used.add((a, b))
        for gadget in self.gadgets:
            if gadget.first in used:
                state = "first"
            elif gadget.second in used:
                state = "second"
            else:
                state = "none"
            matching.extend(gadget.edges[pair] for pair in GADGET_STATES[state])
        if self.prefactor_edge is not None:
            matching.append(self.prefactor_edge)
        return matching


def crossing_gadget() -> PlanarGraph:
    """The bare gadget; vertices 0..3 are the externals 1..4."""
    graph = PlanarGraph(6)
    ids = {}
    for u, v, w in GADGET_EDGES:
        ids[(u, v)] = graph.add_edge(u - 1, v - 1, w, place=False)
    for local, neighbours in GADGET_ROTATION.items():
        graph.rotation[local - 1] = [_gadget_edge(ids, local, nb) for nb in neighbours if nb is not EXT]
    graph.external = [0, 1, 2, 3]
    return graph


def _gadget_edge(ids: Dict[tuple[int, int], int], a: int, b: int) -> int:
    return ids[(a, b)] if (a, b) in ids else ids[(b, a)]


def _positions(kappa: int, seed: int) -> tuple[np.ndarray, Dict]:
    """Perturbed vertex abscissae with pairwise distinct crossing points on every chord."""
    rng = np.random.default_rng(seed)
    for _ in range(100):
        p = np.arange(kappa, dtype=float) + rng.uniform(-0.25, 0.25, kappa)
        crossings = {}
        ok = True
        for a in range(kappa):
            for c in range(a + 1, kappa):
                for b in range(c + 1, kappa):
                    for d in range(b + 1, kappa):
                        x = (p[a] * p[b] - p[c] * p[d]) / (p[a] + p[b] - p[c] - p[d])
                        crossings[((a, b), (c, d))] = x
        per_chord: Dict[tuple[int, int], List[float]] = {}
        for (first, second), x in crossings.items():
            per_chord.setdefault(first, []).append(x)
            per_chord.setdefault(second, []).append(x)
        for xs in per_chord.values():
            xs = np.sort(xs)
            if xs.size > 1 and np.min(np.diff(xs)) < 1e-9:
                ok = False
                break
        if ok:
            return p, crossings
    raise InvalidInputError("Could not find a generic chord drawing")


def chord_graph(Abar, seed: int = 0) -> CompiledMatchsum:
    """
    Planar graph whose matching sums are Pfaffian minors of the skew matrix Abar:
    PerfMatch(G, S) = Pf(Abar restricted to the circle vertices outside S).
    """
    Abar = as_skew(Abar)
    kappa = Abar.shape[0]
    graph = PlanarGraph(kappa)
    circle = list(range(kappa))
    _, crossings = _positions(kappa, seed)

    gadgets = []
    on_chord: Dict[tuple[int, int], List[tuple[float, Gadget]]] = {}
    for (first, second), x in sorted(crossings.items()):
        gadget = Gadget(first, second, x)
        for local in range(1, 7):
            gadget.vertices[local] = graph.add_vertex()
        for u, v, w in GADGET_EDGES:
            gadget.edges[(u, v)] = graph.add_edge(gadget.vertices[u], gadget.vertices[v], w, place=False)
        gadgets.append(gadget)
        on_chord.setdefault(first, []).append((x, gadget))
        on_chord.setdefault(second, []).append((x, gadget))

    chords: Dict[tuple[int, int], List[int]] = {}
    ext_edge: Dict[int, Dict[int, int]] = {id(g): {} for g in gadgets}
    for a in range(kappa):
        for b in range(a + 1, kappa):
            stops = [g for _, g in sorted(on_chord.get((a, b), []), key=lambda item: item[0])]
            segments = []
            previous, pending = a, None
            for gadget in stops:
                entry, leave = (3, 1) if gadget.first == (a, b) else (4, 2)
                e = graph.add_edge(previous, gadget.vertices[entry], 1.0 if segments else Abar[a, b], place=False)
                if pending:
                    ext_edge[id(pending[0])][pending[1]] = e
                ext_edge[id(gadget)][entry] = e
                segments.append(e)
                previous, pending = gadget.vertices[leave], (gadget, leave)
            e = graph.add_edge(previous, b, 1.0 if segments else Abar[a, b], place=False)
            if pending:
                ext_edge[id(pending[0])][pending[1]] = e
            segments.append(e)
            chords[(a, b)] = segments

    for gadget in gadgets:
        for local, neighbours in GADGET_ROTATION.items():
            graph.rotation[gadget.vertices[local]] = [
                ext_edge[id(gadget)][local] if nb is EXT else _gadget_edge(gadget.edges, local, nb)
                for nb in neighbours]
    for i in range(kappa):
        right = [chords[(i, j)][0] for j in range(i + 1, kappa)]
        left = [chords[(j, i)][-1] for j in range(i)]
        graph.rotation[i] = right + left
    logger.debug(f"Chord graph: kappa={kappa}, {len(gadgets)} crossings, {graph.n_vertices} vertices")
    return CompiledMatchsum(graph, circle, [], [], chords, gadgets, 0)


def compile_matchsum(M: CanonicalMatchgate, with_prefactor: bool = True, seed: int = 0) -> CompiledMatchsum:
    """
    Weighted planar graph G with external vertices x'_1..x'_n (counterclockwise)
    such that T(x) = PerfMatch(G, {x'_j : x_j = 1}).
    """
    compiled = chord_graph(extended_matrix(M), seed)
    graph = compiled.graph
    compiled.n = M.n
    for j in range(M.n):
        x = graph.add_vertex()
        e = graph.add_edge(x, j, 1.0, place=False)
        graph.rotation[j].append(e)
        graph.rotation[x].append(e)
        compiled.external.append(x)
        compiled.pendant_edges.append(e)
    graph.external = list(compiled.external)
    if with_prefactor:
        u, v = graph.add_vertex(), graph.add_vertex()
        compiled.prefactor_edge = graph.add_edge(u, v, M.C * M.parity.sign)
    graph.check_planar()
    return compiled
