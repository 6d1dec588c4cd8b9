# Copyright 2026 The msmsq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Multi-spatial-mode squeezing simulator."""

from msmsq._core import (
    ConfigError,
    NumericalIntegrityError,
    __version__,
    canonical_config,
    config_hash,
    experiments,
    fock_moments,
    mode_values,
    run,
    run_acceptance,
    single_mode_width_baselines,
    squeeze_parameter_for_db,
    width_matrix,
)

__all__ = [
    "ConfigError",
    "NumericalIntegrityError",
    "__version__",
    "canonical_config",
    "config_hash",
    "experiments",
    "fock_moments",
    "mode_values",
    "run",
    "run_acceptance",
    "single_mode_width_baselines",
    "squeeze_parameter_for_db",
    "width_matrix",
]
