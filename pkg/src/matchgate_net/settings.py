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
Centralised numeric settings resolution.

Checks (in priority order):
  1. Explicit override via CLI arg (--tol, --log-dir)
  2. MGC_* environment variables
  3. Built-in defaults
"""

import os
import logging

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_LOG_DIR = "logs"
DEFAULT_BRUTEFORCE_EDGES = 24

# Module-level overrides set by the CLI flags
_tolerance_override: float | None = None
_log_dir_override: str | None = None


def set_tolerance_override(value: float) -> None:
    """Set an explicit matchgate tolerance from a CLI argument."""
    global _tolerance_override
    _tolerance_override = float(value)
    logger.info(f"Tolerance override set to: {value}")


def set_log_dir_override(path: str) -> None:
    """Set an explicit log directory from a CLI argument."""
    global _log_dir_override
    _log_dir_override = path


def reset_overrides() -> None:
    global _tolerance_override, _log_dir_override
    _tolerance_override = None
    _log_dir_override = None


def _env_number(var: str, cast, default):
    value = os.environ.get(var)
    if not value:
        return default
    try:
        parsed = cast(value)
    except ValueError:
        logger.warning(f"Ignoring malformed {var}={value!r}, using {default}")
        return default
    logger.debug(f"Using {var}: {parsed}")
    return parsed


def get_tolerance() -> float:
    """
    Resolve the relative tolerance used by matchgate checks and round trips.
    """
    if _tolerance_override is not None:
        return _tolerance_override
    return _env_number("MGC_TOL", float, DEFAULT_TOLERANCE)


def get_log_dir() -> str:
    if _log_dir_override:
        return _log_dir_override
    return os.environ.get("MGC_LOG_DIR") or DEFAULT_LOG_DIR


def get_bruteforce_edge_limit() -> int:
    """Largest edge count accepted by the brute-force contraction oracle."""
    return _env_number("MGC_MAX_BRUTEFORCE_EDGES", int, DEFAULT_BRUTEFORCE_EDGES)
