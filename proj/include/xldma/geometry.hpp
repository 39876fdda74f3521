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

#ifndef XLDMA_GEOMETRY_HPP
#define XLDMA_GEOMETRY_HPP

#include "xldma/types.hpp"

#include <limits>
#include <string_view>
#include <utility>

namespace xldma
{
    // Physical layout of an XL-DMA: M microstrips (EL, z-axis) of N elements each (AZ, y-axis).
    // Element (m, n) sits at (0, n*d, m*d) with 0-based indices.
    struct ArrayGeometry
    {
        int num_microstrips = 1;         // M
        int elements_per_microstrip = 1; // N
        double spacing = 0.0;            // d [m]
        double wavelength = 0.0;         // lambda [m]

        // Half-wavelength spaced array
        static ArrayGeometry half_wavelength(int M, int N, double wavelength);
        static ArrayGeometry from_frequency(int M, int N, double carrier_hz);

        int size() const { return num_microstrips * elements_per_microstrip; }
        double wavenumber() const { return 2.0 * kPi / wavelength; }
        void validate() const; // throws DomainError
    };

    // Direction cosines and range of a point source. el_cosine multiplies the microstrip
    // offset m*d, az_cosine the element offset n*d. range may be +infinity (far field).
    struct SourceParams
    {
        double el_cosine = 0.0; // vartheta
        double az_cosine = 0.0; // varphi
        double range = std::numeric_limits<double>::infinity();

        double inverse_range() const { return 1.0 / range; }
        void validate() const; // throws DomainError
    };

    enum class WavefrontModel
    {
        Spherical, // exact distance
        Taylor2,   // second-order expansion incl. the EL-AZ cross term
        Oblong,    // near field along AZ, planar along EL
        Planar     // far-field assumption
    };

    std::string_view to_string(WavefrontModel model);
    WavefrontModel wavefront_model_from_string(std::string_view name); // throws ConfigError

    // Distance between element (m, n) and the source, 0-based indices.
    double element_distance(const ArrayGeometry &geom, const SourceParams &src, WavefrontModel model, int m, int n);

    // r_(n,m) - r, evaluated without cancellation and finite for range = +infinity.
    double path_difference(const ArrayGeometry &geom, const SourceParams &src, WavefrontModel model, int m, int n);

    // EL steering vector a(vartheta), length M, unit norm.
    CVec steering_el(double el_cosine, int M, double spacing, double wavelength);

    // AZ steering vector b(varphi, r), length N, unit norm. range = +infinity gives the far-field vector.
    CVec steering_az(double az_cosine, double range, int N, double spacing, double wavelength);

    // Inverse-range form bbar(varphi, R) with R = 1/r; identical output to steering_az.
    CVec steering_az_inv(double az_cosine, double inv_range, int N, double spacing, double wavelength);

    struct SteeringDerivatives
    {
        CVec d_az; // d bbar / d varphi
        CVec d_inv_range; // d bbar / d R
    };

    // Analytic partial derivatives of bbar(varphi, R).
    SteeringDerivatives steering_az_derivatives(double az_cosine, double inv_range, int N, double spacing,
                                                double wavelength);

    // Array manifold g, length M*N, unit norm, microstrip index outer and element index inner.
    CVec manifold(const ArrayGeometry &geom, const SourceParams &src, WavefrontModel model);

    // |g_test^H g_ref| for unit-norm manifolds.
    double beamforming_gain(const CVec &g_ref, const CVec &g_test);
}

#endif
