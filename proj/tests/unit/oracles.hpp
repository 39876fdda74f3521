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

// Independent reference implementations used by the unit tests. Everything here is written from the
// distance formulas with 1-based element indices, without calling the library.

#ifndef XLDMA_TESTS_ORACLES_HPP
#define XLDMA_TESTS_ORACLES_HPP

#include "xldma/types.hpp"

#include <cmath>
#include <string>

namespace oracle
{
    using xldma::cplx;
    using xldma::CVec;

    // m1, n1 are 1-based
    inline double distance(const std::string &model, double r, double el, double az, int m1, int n1, double d)
    {
        const double y = (n1 - 1) * d, z = (m1 - 1) * d;
        if (model == "spherical")
            return std::sqrt(r * r - 2 * r * y * az + y * y - 2 * r * z * el + z * z);
        if (model == "taylor2")
            return r - y * az - z * el + z * z / (2 * r) * (1 - el * el) + y * y / (2 * r) * (1 - az * az) -
                   y * z * az * el / r;
        if (model == "oblong")
            return r - y * az - z * el + y * y / (2 * r) * (1 - az * az);
        return r - y * az - z * el;
    }

    inline CVec manifold(const std::string &model, double r, double el, double az, int M, int N, double d,
                         double lambda)
    {
        CVec g(M * N);
        const double k = 2 * xldma::kPi / lambda;
        for (int m1 = 1; m1 <= M; ++m1)
            for (int n1 = 1; n1 <= N; ++n1)
                g[(m1 - 1) * N + (n1 - 1)] =
                    std::exp(cplx(0, -k * (distance(model, r, el, az, m1, n1, d) - r))) / std::sqrt(double(M * N));
        return g;
    }

    inline CVec steering_el(double el, int M, double d, double lambda)
    {
        CVec a(M);
        for (int m1 = 1; m1 <= M; ++m1)
            a[m1 - 1] = std::exp(cplx(0, 2 * xldma::kPi / lambda * (m1 - 1) * d * el)) / std::sqrt(double(M));
        return a;
    }

    inline CVec steering_az(double az, double r, int N, double d, double lambda)
    {
        CVec b(N);
        for (int n1 = 1; n1 <= N; ++n1)
        {
            const double y = (n1 - 1) * d;
            const double quad = std::isinf(r) ? 0.0 : y * y * (1 - az * az) / (2 * r);
            b[n1 - 1] = std::exp(cplx(0, 2 * xldma::kPi / lambda * (y * az - quad))) / std::sqrt(double(N));
        }
        return b;
    }
}

#endif
