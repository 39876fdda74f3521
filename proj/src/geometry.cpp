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

#include "xldma/geometry.hpp"

#include <cmath>
#include <string>

namespace xldma
{
    ArrayGeometry ArrayGeometry::half_wavelength(int M, int N, double wavelength)
    {
        ArrayGeometry g{M, N, wavelength / 2.0, wavelength};
        g.validate();
        return g;
    }

    ArrayGeometry ArrayGeometry::from_frequency(int M, int N, double carrier_hz)
    {
        if (!(carrier_hz > 0.0))
            throw DomainError("carrier frequency must be positive");
        return half_wavelength(M, N, kSpeedOfLight / carrier_hz);
    }

    void ArrayGeometry::validate() const
    {
        if (num_microstrips < 1 || elements_per_microstrip < 1)
            throw DomainError("array geometry needs M >= 1 and N >= 1");
        if (!(spacing > 0.0) || !(wavelength > 0.0) || !std::isfinite(spacing) || !std::isfinite(wavelength))
            throw DomainError("array geometry needs finite spacing > 0 and wavelength > 0");
    }

    void SourceParams::validate() const
    {
        if (!(std::abs(el_cosine) <= 1.0) || !(std::abs(az_cosine) <= 1.0))
            throw DomainError("direction cosines must lie in [-1, 1]");
        if (!(range > 0.0))
            throw DomainError("source range must be positive, got " + std::to_string(range));
    }

    std::string_view to_string(WavefrontModel model)
    {
        switch (model)
        {
        case WavefrontModel::Spherical:
            return "spherical";
        case WavefrontModel::Taylor2:
            return "taylor2";
        case WavefrontModel::Oblong:
            return "oblong";
        case WavefrontModel::Planar:
            return "planar";
        }
        return "unknown";
    }

    WavefrontModel wavefront_model_from_string(std::string_view name)
    {
        if (name == "spherical")
            return WavefrontModel::Spherical;
        if (name == "taylor2")
            return WavefrontModel::Taylor2;
        if (name == "oblong")
            return WavefrontModel::Oblong;
        if (name == "planar")
            return WavefrontModel::Planar;
        throw ConfigError("unknown wavefront model '" + std::string(name) + "'");
    }

    namespace
    {
        void check_indices(const ArrayGeometry &geom, int m, int n)
        {
            if (m < 0 || m >= geom.num_microstrips)
                throw IndexError("microstrip index " + std::to_string(m) + " out of range");
            if (n < 0 || n >= geom.elements_per_microstrip)
                throw IndexError("element index " + std::to_string(n) + " out of range");
        }

        // Unchecked r_(n,m) - r; y = n*d is the AZ offset, z = m*d the EL offset.
        double path_difference_raw(double y, double z, double el, double az, double r, WavefrontModel model)
        {
            const double linear = -y * az - z * el;
            if (std::isinf(r))
                return linear;
            switch (model)
            {
            case WavefrontModel::Spherical:
            {
                const double excess = y * y + z * z - 2.0 * r * (y * az + z * el); // r_nm^2 - r^2
                const double dist_sq = r * r + excess;
                if (dist_sq < 0.0)
                    throw DomainError("source cosines do not describe a physical direction");
                return excess / (std::sqrt(dist_sq) + r);
            }
            case WavefrontModel::Taylor2:
                return linear + z * z * (1.0 - el * el) / (2.0 * r) + y * y * (1.0 - az * az) / (2.0 * r) -
                       y * z * az * el / r;
            case WavefrontModel::Oblong:
                return linear + y * y * (1.0 - az * az) / (2.0 * r);
            case WavefrontModel::Planar:
                return linear;
            }
            return linear;
        }
    }

    double path_difference(const ArrayGeometry &geom, const SourceParams &src, WavefrontModel model, int m, int n)
    {
        geom.validate();
        src.validate();
        check_indices(geom, m, n);
        return path_difference_raw(n * geom.spacing, m * geom.spacing, src.el_cosine, src.az_cosine, src.range, model);
    }

    double element_distance(const ArrayGeometry &geom, const SourceParams &src, WavefrontModel model, int m, int n)
    {
        const double diff = path_difference(geom, src, model, m, n);
        return src.range + diff;
    }

    CVec steering_el(double el_cosine, int M, double spacing, double wavelength)
    {
        if (!(std::abs(el_cosine) <= 1.0))
            throw DomainError("EL cosine must lie in [-1, 1]");
        if (M < 1)
            throw DomainError("steering_el needs M >= 1");
        const double k = 2.0 * kPi / wavelength;
        const double scale = 1.0 / std::sqrt(static_cast<double>(M));
        CVec a(M);
        for (int m = 0; m < M; ++m)
            a[m] = std::polar(scale, k * m * spacing * el_cosine);
        return a;
    }

    CVec steering_az_inv(double az_cosine, double inv_range, int N, double spacing, double wavelength)
    {
        if (!(std::abs(az_cosine) <= 1.0))
            throw DomainError("AZ cosine must lie in [-1, 1]");
        if (!(inv_range >= 0.0) || !std::isfinite(inv_range))
            throw DomainError("inverse range must be finite and non-negative");
        if (N < 1)
            throw DomainError("steering_az needs N >= 1");
        const double k = 2.0 * kPi / wavelength;
        const double scale = 1.0 / std::sqrt(static_cast<double>(N));
        const double curvature = (1.0 - az_cosine * az_cosine) * inv_range / 2.0;
        CVec b(N);
        for (int n = 0; n < N; ++n)
        {
            const double y = n * spacing;
            b[n] = std::polar(scale, k * (y * az_cosine - y * y * curvature));
        }
        return b;
    }

    CVec steering_az(double az_cosine, double range, int N, double spacing, double wavelength)
    {
        if (!(range > 0.0))
            throw DomainError("source range must be positive");
        return steering_az_inv(az_cosine, 1.0 / range, N, spacing, wavelength);
    }

    SteeringDerivatives steering_az_derivatives(double az_cosine, double inv_range, int N, double spacing,
                                                double wavelength)
    {
        const CVec b = steering_az_inv(az_cosine, inv_range, N, spacing, wavelength);
        const double k = 2.0 * kPi / wavelength;
        SteeringDerivatives out{CVec(N), CVec(N)};
        for (int n = 0; n < N; ++n)
        {
            const double y = n * spacing;
            out.d_az[n] = kJ * (k * (y + y * y * az_cosine * inv_range)) * b[n];
            out.d_inv_range[n] = -kJ * (k * y * y * (1.0 - az_cosine * az_cosine) / 2.0) * b[n];
        }
        return out;
    }

    CVec manifold(const ArrayGeometry &geom, const SourceParams &src, WavefrontModel model)
    {
        geom.validate();
        src.validate();
        const int M = geom.num_microstrips;
        const int N = geom.elements_per_microstrip;
        const double k = geom.wavenumber();
        const double scale = 1.0 / std::sqrt(static_cast<double>(M) * N);
        CVec g(M * N);
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < N; ++n)
            {
                const double diff = path_difference_raw(n * geom.spacing, m * geom.spacing, src.el_cosine,
                                                        src.az_cosine, src.range, model);
                g[m * N + n] = std::polar(scale, -k * diff);
            }
        return g;
    }

    double beamforming_gain(const CVec &g_ref, const CVec &g_test)
    {
        if (g_ref.size() != g_test.size())
            throw ShapeError("beamforming_gain: manifolds differ in length");
        return std::abs(g_test.dot(g_ref)); // Eigen dot conjugates the left operand
    }
}
