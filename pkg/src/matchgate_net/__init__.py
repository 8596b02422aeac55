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
Exact contraction of matchgate tensor networks on surfaces.

The usual entry point is `pipeline.contract`; the `mgc` CLI lives in `main`.
"""

from matchgate_net.errors import (EmbeddingError, InvalidInputError, MatchgateError, NotMatchgateError,
                                  SizeLimitError)
from matchgate_net.models import CanonicalMatchgate, ContractionReport, DenseTensor
from matchgate_net.network import EdgeEnd, TensorNetwork, Vertex
from matchgate_net.pipeline import contract

__version__ = "0.1.0"

__all__ = [
    "CanonicalMatchgate",
    "ContractionReport",
    "DenseTensor",
    "EdgeEnd",
    "EmbeddingError",
    "InvalidInputError",
    "MatchgateError",
    "NotMatchgateError",
    "SizeLimitError",
    "TensorNetwork",
    "Vertex",
    "contract",
]
