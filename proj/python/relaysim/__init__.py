# Copyright 2026 The relaysim Authors
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

"""Relay selection and beamforming simulator."""

from relaysim._core import (
    ConfigError,
    DegenerateInputError,
    NetworkConfig,
    UnsupportedConfigurationError,
    __version__,
    beamform,
    draw_channel,
    parse_config,
    run_config,
    run_episode,
    run_pretraining,
    schemes,
)

__all__ = [
    "ConfigError",
    "DegenerateInputError",
    "NetworkConfig",
    "UnsupportedConfigurationError",
    "__version__",
    "beamform",
    "draw_channel",
    "parse_config",
    "run_config",
    "run_episode",
    "run_pretraining",
    "schemes",
]
