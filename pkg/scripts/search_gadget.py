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
Search every 6-vertex, 7-edge graph with one -1 edge for the crossing-gadget
identities on the external vertices 1..4.
"""

import itertools
import os
import sys

sys.path.append(os.path.join(os.path.dirname(__file__), "..", "src"))

from matchgate_net.planar import PlanarGraph, matching_sum_bruteforce

# unmatched external set (local 0..3) -> required matching sum
TARGETS = {
    (): 1, (0, 2): 1, (1, 3): 1, (0, 1, 2, 3): -1,
    (0, 1): 0, (2, 3): 0, (0, 3): 0, (1, 2): 0,
}


def satisfies(edges, negative) -> bool:
    graph = PlanarGraph(6)
    for i, (u, v) in enumerate(edges):
        graph.add_edge(u, v, -1.0 if i == negative else 1.0)
    for S, target in TARGETS.items():
        if abs(matching_sum_bruteforce(graph, S) - target) > 1e-12:
            return False
    for S in itertools.chain(itertools.combinations(range(4), 1), itertools.combinations(range(4), 3)):
        if matching_sum_bruteforce(graph, S) != 0:
            return False
    return True


def main():
    pairs = list(itertools.combinations(range(6), 2))
    found = []
    for edges in itertools.combinations(pairs, 7):
        for negative in range(7):
            if satisfies(edges, negative):
                found.append((edges, negative))
    print(f"{len(found)} candidate gadget(s)")
    for edges, negative in found:
        labelled = [f"({u + 1},{v + 1}){'*' if i == negative else ''}" for i, (u, v) in enumerate(edges)]
        print("  " + " ".join(labelled))


if __name__ == "__main__":
    main()
