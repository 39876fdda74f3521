// SPDX-License-Identifier: Apache-2.0
//
// xldma: near-field modeling and channel estimation for XL dynamic metasurface antennas
// Copyright (C) 2026 The xldma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef XLDMA_RANDOM_HPP
#define XLDMA_RANDOM_HPP

#include "xldma/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace xldma
{
    using Rng = std::mt19937_64;

    // Seed for an independent stream identified by (master, keys...). Stable across runs and thread counts.
    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

    // Standard circularly-symmetric complex Gaussian, E|z|^2 = 1.
    cplx complex_normal(Rng &rng);

    // Matrix of i.i.d. CN(0, 1) entries.
    CMat complex_normal_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols);

    // Haar-distributed random unitary of size n (QR of a Gaussian matrix with the phase of diag(R) removed).
    CMat random_unitary(Rng &rng, Eigen::Index n);
}

#endif
