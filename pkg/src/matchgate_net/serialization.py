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
JSON encodings for tensors, networks, pairings, compiled graphs and reports.

Complex numbers are written as [re, im] pairs.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from matchgate_net.errors import InvalidInputError
from matchgate_net.genus import PairingGraph
from matchgate_net.models import CanonicalMatchgate, ContractionReport, DenseTensor
from matchgate_net.network import EdgeEnd, Tensor, TensorNetwork, Vertex
from matchgate_net.planar import PlanarGraph

logger = logging.getLogger(__name__)


def encode_complex(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise InvalidInputError(f"Expected a number or an [re, im] pair, got {value!r}")


# --- tensors -------------------------------------------------------------------

def tensor_to_json(tensor: Tensor) -> Dict[str, Any]:
    if isinstance(tensor, DenseTensor):
        return {"rank": tensor.rank, "values": [encode_complex(v) for v in tensor.values]}
    n = tensor.n
    upper = [encode_complex(tensor.A[i, j]) for i in range(n) for j in range(i + 1, n)]
    return {
        "n": n,
        "k": tensor.k,
        "A": upper,
        "B": [encode_complex(v) for v in tensor.B.reshape(-1)],
        "C": encode_complex(tensor.C),
        "parity": tensor.parity.value,
    }


def tensor_from_json(data: Dict[str, Any]) -> Tensor:
    if not isinstance(data, dict):
        raise InvalidInputError("Tensor must be a JSON object")
    try:
        if "values" in data:
            return DenseTensor(int(data["rank"]), [decode_complex(v) for v in data["values"]])
        n, k = int(data["n"]), int(data["k"])
        upper = [decode_complex(v) for v in data.get("A", [])]
        if len(upper) != n * (n - 1) // 2:
            raise InvalidInputError(f"A needs {n * (n - 1) // 2} upper-triangle entries, got {len(upper)}")
        A = np.zeros((n, n), dtype=complex)
        A[np.triu_indices(n, 1)] = upper
        flat = [decode_complex(v) for v in data.get("B", [])]
        if len(flat) != k * n:
            raise InvalidInputError(f"B needs {k * n} entries, got {len(flat)}")
        B = np.array(flat, dtype=complex).reshape(k, n)
        return CanonicalMatchgate(A - A.T, B, decode_complex(data["C"]), data.get("parity"))
    except KeyError as exc:
        raise InvalidInputError(f"Tensor is missing field {exc}") from exc


# --- networks ------------------------------------------------------------------

def _edge_key(value):
    return tuple(value) if isinstance(value, list) else value


def _vertex_key(vid) -> str:
    """Key of a vertex in the tensors map; tuple ids are written as JSON lists."""
    return json.dumps(list(vid)) if isinstance(vid, tuple) else str(vid)


def network_to_json(net: TensorNetwork) -> Dict[str, Any]:
    data = {
        "genus": net.genus,
        "vertices": [{"id": v.id, "incidence": [[end.edge, end.slot] for end in v.incidence]}
                     for v in net.vertices],
        "edges": [{"id": e} for e in net.edges],
        "tensors": {_vertex_key(v.id): tensor_to_json(net.tensors[v.id]) for v in net.vertices},
    }
    if net.planar_cut:
        data["planar_cut"] = list(net.planar_cut)
    if net.boundary:
        data["boundary"] = [[end.edge, end.slot] for end in net.boundary]
    return data


def network_from_json(data: Dict[str, Any]) -> TensorNetwork:
    """
    Incidence entries are [edge_id, slot] or a bare edge id; bare ids get
    slot 0 at their first appearance and 1 at the second.
    """
    if not isinstance(data, dict) or "vertices" not in data:
        raise InvalidInputError("Network must be a JSON object with a 'vertices' list")
    tensors_in = data.get("tensors", {})
    seen: Dict[Any, int] = {}
    vertices, tensors = [], {}
    for item in data["vertices"]:
        if not isinstance(item, dict) or "id" not in item:
            raise InvalidInputError(f"Vertex entry {item!r} needs an id")
        vid = _edge_key(item["id"])
        incidence = []
        for entry in item.get("incidence", []):
            if isinstance(entry, list) and len(entry) == 2:
                edge, slot = _edge_key(entry[0]), int(entry[1])
            else:
                edge = _edge_key(entry)
                slot = seen.get(edge, 0)
            seen[edge] = slot + 1
            incidence.append(EdgeEnd(edge, slot))
        vertices.append(Vertex(vid, incidence))
        key = _vertex_key(vid)
        if key not in tensors_in:
            raise InvalidInputError(f"Vertex {vid!r} has no tensor")
        tensors[vid] = tensor_from_json(tensors_in[key])
    edges = [_edge_key(e["id"] if isinstance(e, dict) else e) for e in data["edges"]] if "edges" in data else None
    cut = [_edge_key(e) for e in data["planar_cut"]] if data.get("planar_cut") else None
    boundary = [EdgeEnd(_edge_key(e), int(s)) for e, s in data["boundary"]] if data.get("boundary") else None
    genus = int(data["genus"]) if data.get("genus") is not None else None
    return TensorNetwork(vertices, tensors, genus, cut, boundary, edges)


# --- pairings, graphs, reports -------------------------------------------------

def pairing_to_json(pairing: PairingGraph) -> Dict[str, Any]:
    return {"m": pairing.m, "pairs": [list(p) for p in pairing.pairs]}


def pairing_from_json(data: Dict[str, Any]) -> PairingGraph:
    pairing = PairingGraph([tuple(p) for p in data.get("pairs", [])])
    if "m" in data and int(data["m"]) != pairing.m:
        raise InvalidInputError(f"Pairing declares m={data['m']} but lists {pairing.m} pairs")
    return pairing


def graph_to_json(graph: PlanarGraph, orientation: Optional[Sequence[int]] = None) -> Dict[str, Any]:
    edges = []
    for e, ((u, v), w) in enumerate(zip(graph.edges, graph.weights)):
        item = {"u": u, "v": v, "weight": encode_complex(w)}
        if orientation is not None:
            item["orientation"] = int(orientation[e])
        edges.append(item)
    return {"vertices": graph.n_vertices, "edges": edges, "rotation": graph.rotation, "external": graph.external}


def report_to_json(report: ContractionReport) -> Dict[str, Any]:
    return {
        "value": encode_complex(report.value),
        "genus": report.genus,
        "planar_dim": report.planar_dim,
        "stub_count": report.stub_count,
        "genus_rank": report.genus_rank,
        "pfaffian_count": report.pfaffian_count,
        "timings": report.timings,
        "bruteforce_value": None if report.bruteforce_value is None else encode_complex(report.bruteforce_value),
    }


def read_json(path: str | Path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise InvalidInputError(f"Cannot read {path}: {exc}") from exc


def write_json(path: str | Path, data: Any) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
    logger.info(f"Wrote {path}")
