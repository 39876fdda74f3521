# SPDX-License-Identifier: Apache-2.0
#
# xldma: near-field modeling and channel estimation for XL dynamic metasurface antennas
# Copyright (C) 2026 The xldma authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Python bindings for the xldma C++ core."""

from ._xldma import (
    CapacityError,
    Config,
    ConfigError,
    DegenerateSupportError,
    DomainError,
    Error,
    GridIndexError,
    NumericalError,
    PreconditionError,
    ShapeError,
    az_dictionary,
    beamforming_gain,
    design_seed,
    design_weights,
    el_grid,
    manifold,
    measure,
    nmse,
    ols_recover,
    run_beam_gain,
    run_coherence,
    run_model_error,
    run_nmse_sweep,
    sample_paths,
    scale_optimal_coherence,
    steering_az,
    steering_az_derivatives,
    steering_el,
    synthesize_channel,
    target_gram,
    total_coherence,
    trial_seed,
)

__version__ = "0.1.0"
