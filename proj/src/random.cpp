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

#include "xldma/random.hpp"

#include <cmath>
#include <vector>

namespace xldma
{
    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
    {
        std::vector<std::uint32_t> words;
        words.reserve(2 * (keys.size() + 1));
        auto push = [&](std::uint64_t v)
        {
            words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
            words.push_back(static_cast<std::uint32_t>(v >> 32));
        };
        push(master);
        for (auto k : keys)
            push(k);
        std::seed_seq seq(words.begin(), words.end());
        std::uint32_t out[2];
        seq.generate(out, out + 2);
        return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }

    cplx complex_normal(Rng &rng)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        const double re = normal(rng);
        const double im = normal(rng);
        return {re, im};
    }

    CMat complex_normal_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols)
    {
        CMat out(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                out(r, c) = complex_normal(rng);
        return out;
    }

    CMat random_unitary(Rng &rng, Eigen::Index n)
    {
        const CMat g = complex_normal_matrix(rng, n, n);
        Eigen::HouseholderQR<CMat> qr(g);
        CMat q = qr.householderQ() * CMat::Identity(n, n);
        const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double mag = std::abs(r(i, i));
            if (mag > 0.0)
                q.col(i) *= r(i, i) / mag;
        }
        return q;
    }
}
