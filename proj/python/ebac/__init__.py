# Copyright 2026 The EBAC Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Energy-balancing actor-critic for port-Hamiltonian systems."""

from ebac._core import (
    ConfigError,
    EnergyBalancingPolicy,
    FourierBasis,
    LearnerConfig,
    NonFiniteStateError,
    Pendulum,
    PendulumParams,
    PolicyParams,
    SwingupTask,
    TrainingResult,
    __version__,
    apply_exploration,
    cli,
    reward,
    saturate,
    scaled_learning_rates,
    td_error,
    wrap_angle,
)

__all__ = [
    "ConfigError",
    "EnergyBalancingPolicy",
    "FourierBasis",
    "LearnerConfig",
    "NonFiniteStateError",
    "Pendulum",
    "PendulumParams",
    "PolicyParams",
    "SwingupTask",
    "TrainingResult",
    "__version__",
    "apply_exploration",
    "cli",
    "reward",
    "saturate",
    "scaled_learning_rates",
    "td_error",
    "wrap_angle",
]
