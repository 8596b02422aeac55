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

import logging
import os
import unittest
from unittest.mock import patch

from matchgate_net import settings


class TestGetTolerance(unittest.TestCase):
    """Test tolerance resolution priority."""

    def setUp(self):
        settings.reset_overrides()

    def tearDown(self):
        settings.reset_overrides()

    def test_default(self):
        """With no env vars and no override, the built-in default is used."""
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(settings.get_tolerance(), settings.DEFAULT_TOLERANCE)

    def test_env_var(self):
        """MGC_TOL is honoured."""
        with patch.dict(os.environ, {"MGC_TOL": "1e-6"}, clear=True):
            self.assertEqual(settings.get_tolerance(), 1e-6)

    def test_malformed_env_falls_back_with_warning(self):
        """A value that does not parse is ignored and logged."""
        with patch.dict(os.environ, {"MGC_TOL": "tight"}, clear=True):
            with self.assertLogs("matchgate_net.settings", level=logging.WARNING):
                self.assertEqual(settings.get_tolerance(), settings.DEFAULT_TOLERANCE)

    def test_cli_override_beats_env(self):
        """set_tolerance_override takes highest priority."""
        with patch.dict(os.environ, {"MGC_TOL": "1e-6"}, clear=True):
            settings.set_tolerance_override(1e-3)
            self.assertEqual(settings.get_tolerance(), 1e-3)


class TestGetLogDir(unittest.TestCase):
    def setUp(self):
        settings.reset_overrides()

    def tearDown(self):
        settings.reset_overrides()

    def test_default(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(settings.get_log_dir(), "logs")

    def test_env_then_override(self):
        with patch.dict(os.environ, {"MGC_LOG_DIR": "/tmp/mgc-env"}, clear=True):
            self.assertEqual(settings.get_log_dir(), "/tmp/mgc-env")
            settings.set_log_dir_override("/tmp/mgc-cli")
            self.assertEqual(settings.get_log_dir(), "/tmp/mgc-cli")

    def test_reset_clears_module_variables(self):
        settings.set_log_dir_override("/x")
        settings.set_tolerance_override(0.5)
        settings.reset_overrides()
        self.assertIsNone(settings._log_dir_override)
        self.assertIsNone(settings._tolerance_override)


class TestBruteforceLimit(unittest.TestCase):
    def test_env_integer(self):
        with patch.dict(os.environ, {"MGC_MAX_BRUTEFORCE_EDGES": "10"}, clear=True):
            self.assertEqual(settings.get_bruteforce_edge_limit(), 10)

    def test_float_string_is_rejected(self):
        """Only integers are accepted for the edge limit."""
        with patch.dict(os.environ, {"MGC_MAX_BRUTEFORCE_EDGES": "2.5"}, clear=True):
            self.assertEqual(settings.get_bruteforce_edge_limit(), settings.DEFAULT_BRUTEFORCE_EDGES)


if __name__ == '__main__':
    unittest.main()
