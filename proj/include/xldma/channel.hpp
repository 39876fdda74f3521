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

#ifndef XLDMA_CHANNEL_HPP
#define XLDMA_CHANNEL_HPP

#include "xldma/geometry.hpp"
#include "xldma/random.hpp"

#include <vector>

namespace xldma
{
    struct Path
    {
        SourceParams source;
        cplx gain{1.0, 0.0}; // z_l
    };

    struct PathSet
    {
        std::vector<Path> paths;

        int size() const { return static_cast<int>(paths.size()); }
        void validate() const; // L >= 1 and every source valid
    };

    struct PathSampling
    {
        int num_paths = 3;
        double cosine_min = -1.0;
        double cosine_max = 1.0;
        double range_min = 5.0;
        double range_max = 100.0;
        // Sample the two cosines independently without the vartheta^2 + varphi^2 <= 1 rejection step.
        bool allow_nonphysical_cosines = false;
    };

    // L paths with uniform cosines, uniform range and CN(0, 1) gains.
    PathSet sample_paths(Rng &rng, const PathSampling &opts = {});

    // hbar = sqrt(MN / L) * sum_l z_l g(vartheta_l, varphi_l, r_l), length M*N.
    CVec synthesize_channel(const PathSet &paths, const ArrayGeometry &geom,
                            WavefrontModel model = WavefrontModel::Spherical);

    // Waveguide propagation inside each microstrip.
    struct DmaHardware
    {
        RMat positions;        // rho_{m,n} [m], M x N
        RVec attenuation;      // alpha_m [Np/m]
        RVec guide_wavenumber; // beta_m [rad/m]

        // rho = n*d, lossless, beta = 2 pi / lambda
        static DmaHardware lossless(const ArrayGeometry &geom);
        int num_microstrips() const { return static_cast<int>(positions.rows()); }
        int elements_per_microstrip() const { return static_cast<int>(positions.cols()); }
        void validate() const;
    };

    // Diagonal of V_m: v_{m,n} = exp(-rho_{m,n} (alpha_m + j beta_m)).
    CVec waveguide_diagonal(const DmaHardware &hw, int m);
    CMat waveguide_matrix(const DmaHardware &hw, int m);

    // Lorentzian-constrained DMA weight q = (j + e^{jx}) / 2.
    struct LorentzianWeight
    {
        double phase = 0.0; // x in [0, 2 pi)
        cplx value() const;
    };

    cplx lorentzian_weight(double phase);

    // Nearest point of the Lorentzian circle to w. The centre j/2 maps to x = 0.
    LorentzianWeight lorentzian_project(cplx w);

    // Pilots received by all M RF chains.
    struct MeasurementBundle
    {
        std::vector<CVec> pilots;       // y_m, length P each
        std::vector<CMat> measurements; // W_m = V_m^H Q_m, N x P each
        double noise_variance = 0.0;    // sigma_n^2

        int num_microstrips() const { return static_cast<int>(pilots.size()); }
        int num_pilots() const { return pilots.empty() ? 0 : static_cast<int>(pilots.front().size()); }
        int elements_per_microstrip() const
        {
            return measurements.empty() ? 0 : static_cast<int>(measurements.front().rows());
        }
        void validate() const;
    };

    // y_m = W_m^H h_m + n~_m with unit pilots; n~_{m,p} = w_{m,p}^H n_{m,p}, n ~ CN(0, sigma^2 I).
    CVec measure(const CVec &h_m, const CMat &W_m, double noise_variance, Rng &rng);

    // Splits hbar into M microstrip channels and measures each with its W_m.
    MeasurementBundle measure_all(const CVec &h_bar, const std::vector<CMat> &W, double noise_variance, Rng &rng);
}

#endif
