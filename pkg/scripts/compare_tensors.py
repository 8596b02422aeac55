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
Compare two tensor JSON files component by component.
"""

import argparse
import os
import sys

import numpy as np

sys.path.append(os.path.join(os.path.dirname(__file__), "..", "src"))

from matchgate_net.matchgate import densify
from matchgate_net.models import index_to_bits
from matchgate_net.serialization import read_json, tensor_from_json


def main():
    parser = argparse.ArgumentParser(description="Diff two tensors (dense or canonical)")
    parser.add_argument("left")
    parser.add_argument("right")
    parser.add_argument("--rtol", type=float, default=1e-9)
    parser.add_argument("--show", type=int, default=10, help="Largest differences to print")
    args = parser.parse_args()

    a = densify(tensor_from_json(read_json(args.left)))
    b = densify(tensor_from_json(read_json(args.right)))
    if a.rank != b.rank:
        print(f"Rank mismatch: {a.rank} vs {b.rank}")
        sys.exit(1)
    diff = np.abs(a.values - b.values)
    scale = max(a.scale(), b.scale(), 1e-300)
    worst = np.argsort(diff)[::-1][:args.show]
    print(f"rank {a.rank}: max |diff| = {diff.max():.3e} (relative {diff.max() / scale:.3e})")
    for i in worst:
        if diff[i] == 0:
            break
        print(f"  {index_to_bits(int(i), a.rank)}: {a.values[i]:.6g} vs {b.values[i]:.6g}")
    sys.exit(0 if diff.max() <= args.rtol * scale else 1)


if __name__ == "__main__":
    main()
