# Copyright 2026 The eznav Authors
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

"""Python bindings for the eznav core library."""

from eznav._core import (
    EznavError,
    __version__,
    ablation_names,
    amplification,
    default_config,
    fuse_step,
    penalized_angular_error,
    perceive,
    run_episode,
    validate_score_grid,
)

__all__ = [
    "EznavError",
    "__version__",
    "ablation_names",
    "amplification",
    "default_config",
    "fuse_step",
    "penalized_angular_error",
    "perceive",
    "run_episode",
    "validate_score_grid",
]
