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

#include "xldma/channel.hpp"

#include <cmath>
#include <string>

namespace xldma
{
    void PathSet::validate() const
    {
        if (paths.empty())
            throw DomainError("a path set needs at least one path");
        for (const auto &p : paths)
            p.source.validate();
    }

    PathSet sample_paths(Rng &rng, const PathSampling &opts)
    {
        if (opts.num_paths < 1)
            throw DomainError("sample_paths needs L >= 1");
        if (!(opts.cosine_min < opts.cosine_max) || opts.cosine_min < -1.0 || opts.cosine_max > 1.0)
            throw DomainError("cosine sampling interval must be a non-empty subset of [-1, 1]");
        if (!(opts.range_min > 0.0) || !(opts.range_min < opts.range_max))
            throw DomainError("range sampling interval must be non-empty and positive");

        std::uniform_real_distribution<double> cosine(opts.cosine_min, opts.cosine_max);
        std::uniform_real_distribution<double> range(opts.range_min, opts.range_max);
        PathSet out;
        out.paths.reserve(opts.num_paths);
        for (int l = 0; l < opts.num_paths; ++l)
        {
            Path p;
            for (int attempt = 0;; ++attempt)
            {
                p.source.el_cosine = cosine(rng);
                p.source.az_cosine = cosine(rng);
                if (opts.allow_nonphysical_cosines ||
                    p.source.el_cosine * p.source.el_cosine + p.source.az_cosine * p.source.az_cosine <= 1.0)
                    break;
                if (attempt > 10000)
                    throw DomainError("cosine interval contains no physical directions");
            }
            p.source.range = range(rng);
            p.gain = complex_normal(rng);
            out.paths.push_back(p);
        }
        return out;
    }

    CVec synthesize_channel(const PathSet &paths, const ArrayGeometry &geom, WavefrontModel model)
    {
        paths.validate();
        const double scale = std::sqrt(static_cast<double>(geom.size()) / paths.size());
        CVec h = CVec::Zero(geom.size());
        for (const auto &p : paths.paths)
            h += (scale * p.gain) * manifold(geom, p.source, model);
        return h;
    }

    DmaHardware DmaHardware::lossless(const ArrayGeometry &geom)
    {
        geom.validate();
        DmaHardware hw;
        hw.positions.resize(geom.num_microstrips, geom.elements_per_microstrip);
        for (int m = 0; m < geom.num_microstrips; ++m)
            for (int n = 0; n < geom.elements_per_microstrip; ++n)
                hw.positions(m, n) = n * geom.spacing;
        hw.attenuation = RVec::Zero(geom.num_microstrips);
        hw.guide_wavenumber = RVec::Constant(geom.num_microstrips, geom.wavenumber());
        return hw;
    }

    void DmaHardware::validate() const
    {
        if (positions.rows() < 1 || positions.cols() < 1)
            throw DomainError("DMA hardware needs at least one element");
        if (attenuation.size() != positions.rows() || guide_wavenumber.size() != positions.rows())
            throw ShapeError("DMA hardware: one attenuation and wavenumber per microstrip required");
        for (Eigen::Index m = 0; m < positions.rows(); ++m)
        {
            if (!(attenuation[m] >= 0.0))
                throw DomainError("attenuation must be non-negative");
            for (Eigen::Index n = 0; n < positions.cols(); ++n)
            {
                if (!(positions(m, n) >= 0.0))
                    throw DomainError("element positions must be non-negative");
                if (n > 0 && positions(m, n) < positions(m, n - 1))
                    throw DomainError("element positions must be non-decreasing along a microstrip");
            }
        }
    }

    CVec waveguide_diagonal(const DmaHardware &hw, int m)
    {
        hw.validate();
        if (m < 0 || m >= hw.num_microstrips())
            throw IndexError("microstrip index " + std::to_string(m) + " out of range");
        const cplx propagation{hw.attenuation[m], hw.guide_wavenumber[m]};
        CVec v(hw.elements_per_microstrip());
        for (int n = 0; n < hw.elements_per_microstrip(); ++n)
            v[n] = std::exp(-hw.positions(m, n) * propagation);
        return v;
    }

    CMat waveguide_matrix(const DmaHardware &hw, int m)
    {
        return waveguide_diagonal(hw, m).asDiagonal();
    }

    cplx lorentzian_weight(double phase)
    {
        return (kJ + std::polar(1.0, phase)) / 2.0;
    }

    cplx LorentzianWeight::value() const
    {
        return lorentzian_weight(phase);
    }

    LorentzianWeight lorentzian_project(cplx w)
    {
        const cplx offset = w - kJ / 2.0;
        if (offset == cplx{0.0, 0.0})
            return {0.0};
        double x = std::arg(offset);
        if (x < 0.0)
            x += 2.0 * kPi;
        return {x};
    }

    void MeasurementBundle::validate() const
    {
        if (pilots.empty() || pilots.size() != measurements.size())
            throw ShapeError("measurement bundle needs one pilot vector per measurement matrix");
        const auto P = pilots.front().size();
        const auto N = measurements.front().rows();
        for (std::size_t m = 0; m < pilots.size(); ++m)
        {
            if (pilots[m].size() != P || measurements[m].cols() != P || measurements[m].rows() != N)
                throw ShapeError("measurement bundle: inconsistent shapes at microstrip " + std::to_string(m));
        }
        if (!(noise_variance >= 0.0))
            throw DomainError("noise variance must be non-negative");
    }

    CVec measure(const CVec &h_m, const CMat &W_m, double noise_variance, Rng &rng)
    {
        if (h_m.size() != W_m.rows())
            throw ShapeError("measure: channel length does not match measurement matrix rows");
        if (!(noise_variance >= 0.0))
            throw DomainError("noise variance must be non-negative");
        CVec y = W_m.adjoint() * h_m;
        if (noise_variance > 0.0)
        {
            // w^H n with n ~ CN(0, sigma^2 I) is CN(0, sigma^2 ||w||^2)
            for (Eigen::Index p = 0; p < y.size(); ++p)
                y[p] += std::sqrt(noise_variance) * W_m.col(p).norm() * complex_normal(rng);
        }
        return y;
    }

    MeasurementBundle measure_all(const CVec &h_bar, const std::vector<CMat> &W, double noise_variance, Rng &rng)
    {
        if (W.empty())
            throw ShapeError("measure_all needs at least one measurement matrix");
        const auto N = W.front().rows();
        if (h_bar.size() != N * static_cast<Eigen::Index>(W.size()))
            throw ShapeError("measure_all: channel length must equal M*N");
        MeasurementBundle out;
        out.noise_variance = noise_variance;
        for (std::size_t m = 0; m < W.size(); ++m)
        {
            out.pilots.push_back(measure(h_bar.segment(static_cast<Eigen::Index>(m) * N, N), W[m], noise_variance, rng));
            out.measurements.push_back(W[m]);
        }
        return out;
    }
}
