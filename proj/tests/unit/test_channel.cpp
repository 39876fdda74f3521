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
#include "oracles.hpp"
#include "xldma/channel.hpp"

#include <doctest.h>

#include <cmath>

using namespace xldma;

namespace
{
    const ArrayGeometry kGeom = ArrayGeometry::half_wavelength(2, 4, 0.0107);
}

TEST_CASE("channel: sample_paths is deterministic for a seed")
{
    Rng a(42), b(42);
    const PathSet p = sample_paths(a), q = sample_paths(b);
    REQUIRE(p.size() == 3);
    for (int l = 0; l < 3; ++l)
    {
        CHECK(p.paths[l].source.el_cosine == q.paths[l].source.el_cosine);
        CHECK(p.paths[l].source.az_cosine == q.paths[l].source.az_cosine);
        CHECK(p.paths[l].source.range == q.paths[l].source.range);
        CHECK(p.paths[l].gain == q.paths[l].gain);
    }
}

TEST_CASE("channel: sampled paths respect the configured ranges")
{
    Rng rng(7);
    double energy = 0.0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t)
    {
        const PathSet p = sample_paths(rng);
        for (const auto &path : p.paths)
        {
            CHECK(path.source.range >= 5.0);
            CHECK(path.source.range <= 100.0);
            CHECK(path.source.el_cosine * path.source.el_cosine + path.source.az_cosine * path.source.az_cosine <=
                  1.0);
        }
        energy += std::norm(p.paths[0].gain);
    }
    CHECK(energy / draws == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("channel: nonphysical cosines are only produced when allowed")
{
    PathSampling opts;
    opts.num_paths = 1;
    opts.allow_nonphysical_cosines = true;
    Rng rng(3);
    bool outside = false;
    for (int t = 0; t < 2000 && !outside; ++t)
    {
        const auto s = sample_paths(rng, opts).paths[0].source;
        outside = s.el_cosine * s.el_cosine + s.az_cosine * s.az_cosine > 1.0;
    }
    CHECK(outside);
}

TEST_CASE("channel: sample_paths rejects empty ranges")
{
    Rng rng(1);
    PathSampling bad;
    bad.range_min = 10.0;
    bad.range_max = 10.0;
    CHECK_THROWS_AS(sample_paths(rng, bad), DomainError);
    bad = {};
    bad.cosine_min = 0.5;
    bad.cosine_max = 0.5;
    CHECK_THROWS_AS(sample_paths(rng, bad), DomainError);
    bad = {};
    bad.num_paths = 0;
    CHECK_THROWS_AS(sample_paths(rng, bad), DomainError);
}

TEST_CASE("channel: single-path channel normalization")
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(4, 32, 0.0107);
    PathSet p;
    p.paths.push_back({{0.1, -0.3, 12.0}, 1.0});
    const CVec h = synthesize_channel(p, g);
    CHECK(h.norm() == doctest::Approx(std::sqrt(4.0 * 32.0)).epsilon(1e-12));
    CHECK((h - std::sqrt(128.0) * manifold(g, p.paths[0].source, WavefrontModel::Spherical)).norm() < 1e-12);

    p.paths[0].gain = 0.0;
    CHECK(synthesize_channel(p, g).norm() == 0.0);
}

TEST_CASE("channel: synthesis matches a termwise loop oracle")
{
    Rng rng(11);
    PathSampling opts;
    opts.num_paths = 2;
    const PathSet p = sample_paths(rng, opts);
    const CVec h = synthesize_channel(p, kGeom);
    CVec ref = CVec::Zero(8);
    for (const auto &path : p.paths)
        ref += std::sqrt(8.0 / 2.0) * path.gain *
               oracle::manifold("spherical", path.source.range, path.source.el_cosine, path.source.az_cosine, 2, 4,
                                kGeom.spacing, kGeom.wavelength);
    CHECK((h - ref).norm() < 1e-10);
}

TEST_CASE("channel: mean channel energy is MN")
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(2, 16, 0.0107);
    Rng rng(5);
    double e = 0.0;
    for (int t = 0; t < 1000; ++t)
        e += synthesize_channel(sample_paths(rng), g).squaredNorm();
    CHECK(e / 1000.0 == doctest::Approx(32.0).epsilon(0.05));
}

TEST_CASE("channel: waveguide matrix")
{
    DmaHardware hw = DmaHardware::lossless(kGeom);
    hw.guide_wavenumber.setZero();
    CHECK((waveguide_matrix(hw, 0) - CMat::Identity(4, 4)).norm() == 0.0);

    hw = DmaHardware::lossless(kGeom);
    for (int m = 0; m < 2; ++m)
        CHECK((waveguide_diagonal(hw, m).cwiseAbs() - RVec::Ones(4)).norm() < 1e-15);

    // rho_{m,n} = (n-1) d with d = 0.00535 and alpha = 0.5 Np/m
    hw.positions.row(0) = RVec::LinSpaced(4, 0.0, 3 * 0.00535).transpose();
    hw.attenuation[0] = 0.5;
    CHECK(std::abs(waveguide_diagonal(hw, 0)[1]) == doctest::Approx(std::exp(-0.5 * 0.00535)).epsilon(1e-15));
    CHECK_THROWS_AS(waveguide_diagonal(hw, 2), IndexError);
    hw.attenuation[0] = -1.0;
    CHECK_THROWS_AS(waveguide_diagonal(hw, 0), DomainError);
}

TEST_CASE("channel: Lorentzian weights lie on the circle")
{
    for (int k = 0; k < 100; ++k)
        CHECK(std::abs(lorentzian_weight(0.0631 * k) - kJ / 2.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("channel: Lorentzian projection")
{
    CHECK(lorentzian_project(kJ).phase == doctest::Approx(kPi / 2));
    CHECK(std::abs(lorentzian_project(kJ).value() - kJ) < 1e-15);
    CHECK(lorentzian_project((kJ + 1.0) / 2.0).phase == doctest::Approx(0.0));
    CHECK(lorentzian_project(kJ / 2.0).phase == 0.0);

    Rng rng(9);
    std::uniform_real_distribution<double> ux(0.0, 2 * kPi);
    for (int t = 0; t < 20; ++t)
    {
        const cplx w = 2.0 * complex_normal(rng);
        const double best = std::abs(w - lorentzian_project(w).value());
        for (int k = 0; k < 1000; ++k)
            CHECK(best <= std::abs(w - lorentzian_weight(ux(rng))) + 1e-12);
    }
}

TEST_CASE("channel: noiseless measurement is W^H h and linear in h")
{
    Rng rng(2);
    const CMat W = complex_normal_matrix(rng, 8, 5);
    const CVec h1 = complex_normal_matrix(rng, 8, 1), h2 = complex_normal_matrix(rng, 8, 1);
    CHECK((measure(h1, W, 0.0, rng) - W.adjoint() * h1).norm() < 1e-12);
    const cplx a{0.3, -1.2}, b{2.0, 0.5};
    CHECK((measure(a * h1 + b * h2, W, 0.0, rng) - (a * measure(h1, W, 0.0, rng) + b * measure(h2, W, 0.0, rng)))
              .norm() < 1e-12);
    CHECK_THROWS_AS(measure(CVec::Zero(7), W, 0.0, rng), ShapeError);
    CHECK_THROWS_AS(measure(h1, W, -1.0, rng), DomainError);
}

TEST_CASE("channel: measurement noise variance is sigma^2 ||w||^2")
{
    Rng rng(4);
    CMat W(3, 1);
    W << cplx(1.0, 0.5), cplx(-0.2, 2.0), cplx(0.0, -1.0);
    const double sigma2 = 0.7;
    double acc = 0.0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t)
        acc += std::norm(measure(CVec::Zero(3), W, sigma2, rng)[0]);
    CHECK(acc / draws == doctest::Approx(sigma2 * W.col(0).squaredNorm()).epsilon(0.05));
}

TEST_CASE("channel: measure_all splits the channel per microstrip")
{
    Rng rng(8);
    std::vector<CMat> W{complex_normal_matrix(rng, 4, 3), complex_normal_matrix(rng, 4, 3)};
    const CVec h = complex_normal_matrix(rng, 8, 1);
    const MeasurementBundle b = measure_all(h, W, 0.0, rng);
    b.validate();
    CHECK(b.num_microstrips() == 2);
    CHECK(b.num_pilots() == 3);
    CHECK((b.pilots[1] - W[1].adjoint() * h.segment(4, 4)).norm() < 1e-12);
    CHECK_THROWS_AS(measure_all(CVec::Zero(7), W, 0.0, rng), ShapeError);
}
