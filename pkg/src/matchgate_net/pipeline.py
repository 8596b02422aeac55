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
End-to-end contraction: the planar-cut stage followed by the genus stage.
"""

import logging
import time
from typing import Dict, Hashable, List, Optional

import networkx as nx
import numpy as np

from matchgate_net.errors import EmbeddingError, InvalidInputError
from matchgate_net.genus import genus_contraction
from matchgate_net.models import ContractionReport
from matchgate_net.network import EdgeEnd, TensorNetwork, Vertex, contract_bruteforce, contract_sequential
from matchgate_net.open_network import derive_boundary, network_graph, planar_stage

logger = logging.getLogger(__name__)


def cut_stub(end: EdgeEnd) -> EdgeEnd:
    """The dangling end that replaces one end of a cut edge."""
    return EdgeEnd(("cut", end.edge, end.slot))


def cut_network(net: TensorNetwork) -> TensorNetwork:
    """G_M: every planar-cut edge is replaced by two dangling stubs."""
    cut = set(net.planar_cut or [])
    internal = set(net.internal_edges())
    bad = [e for e in cut if e not in internal]
    if bad:
        raise EmbeddingError(f"Planar cut edges {bad} are not internal edges of the network")
    vertices = [Vertex(v.id, [cut_stub(end) if end.edge in cut else end for end in v.incidence])
                for v in net.vertices]
    edges: List[Hashable] = []
    for edge in net.edges:
        if edge in cut:
            edges.extend(cut_stub(end).edge for end in sorted(net.ends_of(edge), key=lambda e: e.slot))
        else:
            edges.append(edge)
    cache = dict(net._canonical)
    return TensorNetwork(vertices, dict(net.tensors), 0, None, None, edges, cache)


def stub_order(net: TensorNetwork, planar: TensorNetwork) -> List[EdgeEnd]:
    """
    Counterclockwise stub order on the disk boundary.

    net.boundary, when given, lists cut-edge ends and is taken as authoritative;
    otherwise the order is read off the faces of G_M.
    """
    if net.boundary:
        stubs = [cut_stub(end) for end in net.boundary]
        if sorted(map(repr, stubs)) != sorted(map(repr, planar.dangling())):
            raise InvalidInputError("Boundary must list every end of every cut edge exactly once")
        return stubs
    return derive_boundary(planar)


def _components(net: TensorNetwork) -> List[TensorNetwork]:
    graph = network_graph(net)
    if graph.number_of_nodes() == 0 or nx.is_connected(graph):
        return [net]
    parts = []
    for component in nx.connected_components(graph):
        vertices = [v for v in net.vertices if v.id in component]
        tensors = {v.id: net.tensors[v.id] for v in vertices}
        parts.append(net.derive(vertices, tensors))
    return parts


def contract(net: TensorNetwork, bruteforce_check: bool = False, sequential: bool = False) -> ContractionReport:
    """
    c(T) of a closed network with a planar cut.

    Stage 1 contracts G_M into one rank-2m matchgate over the cut stubs;
    stage 2 pairs the two stubs of every cut edge and sums the genus-stage
    Pfaffians. Without a cut the first stage already yields the scalar.
    """
    if net.dangling():
        raise InvalidInputError("contract needs a closed network; use contract_open_network for open ones")
    timings: Dict[str, float] = {}
    report = ContractionReport(0j, genus=net.genus)

    if sequential:
        if net.planar_cut:
            raise EmbeddingError("Sequential contraction only handles networks without a planar cut")
        start = time.perf_counter()
        report.value = contract_sequential(net)
        timings["sequential"] = time.perf_counter() - start
    elif not net.planar_cut:
        start = time.perf_counter()
        value = 1.0 + 0j
        for part in _components(net):
            stage = planar_stage(part, [])
            report.planar_dim += stage.dimension
            value *= stage.matchgate.C
        report.value = value
        timings["planar"] = time.perf_counter() - start
    else:
        start = time.perf_counter()
        planar = cut_network(net)
        stubs = stub_order(net, planar)
        stage = planar_stage(planar, stubs)
        timings["planar"] = time.perf_counter() - start
        report.planar_dim = stage.dimension
        report.stub_count = len(stubs)

        position = {stub: i for i, stub in enumerate(stubs)}
        pairs = []
        for edge in net.planar_cut:
            ends = net.ends_of(edge)
            pairs.append(tuple(position[cut_stub(end)] for end in ends))
        start = time.perf_counter()
        result = genus_contraction(stage.matchgate, pairs, net.genus)
        timings["genus"] = time.perf_counter() - start
        report.value = result.value
        report.genus_rank = result.rank
        report.pfaffian_count = result.terms
    report.timings = timings
    logger.info(f"Contraction value {report.value:.10g} "
                f"(planar dim {report.planar_dim}, {report.pfaffian_count} Pfaffian term(s))")

    if bruteforce_check:
        report.bruteforce_value = contract_bruteforce(net)
        if not agrees(report.value, report.bruteforce_value):
            logger.warning(f"Brute force disagrees: {report.bruteforce_value:.10g} vs {report.value:.10g}")
    return report


def agrees(a: complex, b: complex, rtol: float = 1e-7, atol: float = 1e-10) -> bool:
    return bool(np.isclose(a, b, rtol=rtol, atol=atol))
