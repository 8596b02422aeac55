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
Exception hierarchy for matchgate_net.

Each error carries the exit code the `mgc` CLI reports for it.
"""


class MatchgateError(Exception):
    """Base class for all library errors."""
    exit_code = 1


class InvalidInputError(MatchgateError, ValueError):
    """Malformed matrices, pairings, indexes or JSON payloads."""
    exit_code = 2


class NotMatchgateError(MatchgateError):
    """A tensor fails the matchgate identities or its canonical round trip."""
    exit_code = 2


class EmbeddingError(MatchgateError):
    """Rotation system is not planar, the planar cut is invalid, or a contraction region is not a disk."""
    exit_code = 2


class SizeLimitError(MatchgateError):
    """An oracle or dense representation bound was exceeded."""
    exit_code = 3
