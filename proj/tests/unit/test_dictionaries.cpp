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
#include "xldma/dictionaries.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace xldma;

namespace
{
    constexpr double kLambda = 0.0107;
}

TEST_CASE("dictionaries: EL grid")
{
    CHECK(build_el_grid(1) == std::vector<double>{-1.0, 1.0});
    const auto g2 = build_el_grid(2);
    REQUIRE(g2.size() == 4);
    CHECK(g2[0] == -1.0);
    CHECK(g2[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(g2[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(g2[3] == 1.0);
    const auto g8 = build_el_grid(8);
    CHECK(g8.size() == 16);
    for (std::size_t k = 1; k < g8.size(); ++k)
        CHECK(g8[k] > g8[k - 1]);
    CHECK(g8.front() >= -1.0);
    CHECK(g8.back() <= 1.0);
    CHECK_THROWS_AS(build_el_grid(0), DomainError);
}

TEST_CASE("dictionaries: default polar grid sizes and inverse-range law")
{
    const PolarGrid g = PolarGrid::uniform(2 * 128, 20, 5.0, 100.0);
    CHECK(g.angles.size() == 256);
    CHECK(g.inverse_ranges.size() == 20);
    CHECK(g.columns() == 256 * 20);
    CHECK(g.inverse_ranges.front() == doctest::Approx(0.01));
    CHECK(g.inverse_ranges.back() == doctest::Approx(0.2));
    for (std::size_t k = 1; k < g.inverse_ranges.size(); ++k)
        CHECK(g.inverse_ranges[k] - g.inverse_ranges[k - 1] == doctest::Approx(0.19 / 19).epsilon(1e-12));
    CHECK(g.inverse_range_spacing() == doctest::Approx(0.01));
    CHECK(g.angle_spacing() == doctest::Approx(2.0 / 256));
}

TEST_CASE("dictionaries: polar index association is a bijection, angle-major")
{
    const PolarGrid g = PolarGrid::uniform(12, 5, 5.0, 100.0);
    for (int c = 0; c < g.columns(); ++c)
    {
        const auto [a, r] = g.split(c);
        CHECK(g.column_index(a, r) == c);
    }
    CHECK(g.split(5) == std::pair<int, int>{1, 0});
    CHECK_THROWS_AS(g.split(g.columns()), IndexError);
    CHECK_THROWS_AS(g.column_index(12, 0), IndexError);
}

TEST_CASE("dictionaries: AZ dictionary columns")
{
    const ArrayGeometry g2 = ArrayGeometry::half_wavelength(1, 8, kLambda);
    const CMat B2 = build_az_dictionary(g2, PolarGrid::angle_only(2));
    REQUIRE(B2.cols() == 2);
    CHECK((B2.col(0) - oracle::steering_az(-0.5, std::numeric_limits<double>::infinity(), 8, g2.spacing, kLambda))
              .norm() < 1e-12);
    CHECK((B2.col(1) - oracle::steering_az(0.5, std::numeric_limits<double>::infinity(), 8, g2.spacing, kLambda))
              .norm() < 1e-12);

    // N=16, G_a=32, R=4 over r in [5, 20] puts (0.25 + 1/32, 10 m) on the grid
    const ArrayGeometry g = ArrayGeometry::half_wavelength(1, 16, kLambda);
    PolarGrid grid = PolarGrid::uniform(32, 4, 5.0, 20.0);
    const CMat B = build_az_dictionary(g, grid);
    for (int c = 0; c < B.cols(); ++c)
        CHECK(B.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const int a = 20, r = 2; // angle -1 + 41/32, inverse range 0.05 + 2 * 0.05 / 3
    const double phi = -1.0 + 41.0 / 32.0, R = 0.05 + 2.0 * (0.2 - 0.05) / 3.0;
    CHECK(grid.az_cosine(grid.column_index(a, r)) == doctest::Approx(phi));
    CHECK(grid.inverse_range(grid.column_index(a, r)) == doctest::Approx(R));
    CHECK((B.col(grid.column_index(a, r)) - oracle::steering_az(phi, 1.0 / R, 16, g.spacing, kLambda)).norm() <
          1e-12);
}

TEST_CASE("dictionaries: angle-only 2N grid gives a tight frame")
{
    for (int N : {8, 32, 128})
    {
        const ArrayGeometry g = ArrayGeometry::half_wavelength(1, N, kLambda);
        const CMat B = build_az_dictionary(g, PolarGrid::angle_only(2 * N));
        const double gbar = 2.0 * N;
        CHECK((B * B.adjoint() - (gbar / N) * CMat::Identity(N, N)).norm() < 1e-9);
    }
}

TEST_CASE("dictionaries: joint dictionary")
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(2, 4, kLambda);
    const JointGrid grid = JointGrid::standard(2, 4, 3, 5.0, 100.0);
    CHECK(grid.columns() == 8 * 3 * 4);
    const CMat G = build_joint_dictionary(g, grid);
    REQUIRE(G.cols() == grid.columns());
    const JointDictionary lazy(g, grid);
    for (std::int64_t c = 0; c < grid.columns(); ++c)
    {
        const SourceParams s = lazy.parameters(c);
        CHECK(G.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
        const CVec ref = oracle::manifold("oblong", s.range, s.el_cosine, s.az_cosine, 2, 4, g.spacing, kLambda);
        CHECK((G.col(c) - ref).norm() < 1e-10);
        CHECK((lazy.column(c) - G.col(c)).norm() == 0.0);
    }

    const CMat S = build_joint_dictionary(g, grid, JointAtoms::Spherical);
    const SourceParams s = lazy.parameters(17);
    CHECK((S.col(17) - manifold(g, s, WavefrontModel::Spherical)).norm() < 1e-14);
}

TEST_CASE("dictionaries: joint dictionary with M = 1 reduces to the AZ dictionary")
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(1, 8, kLambda);
    const JointGrid grid = JointGrid::standard(1, 8, 4, 5.0, 100.0);
    const CMat G = build_joint_dictionary(g, grid);
    const CMat B = build_az_dictionary(g, grid.polar);
    // the two EL samples (+-1) give the same atoms for a single microstrip
    CHECK((G.leftCols(B.cols()) - B).norm() < 1e-12);
    CHECK((G.rightCols(B.cols()) - B).norm() < 1e-12);
}

TEST_CASE("dictionaries: joint dictionary honours the memory budget")
{
    const ArrayGeometry g = ArrayGeometry::half_wavelength(4, 128, kLambda);
    const JointGrid grid = JointGrid::standard(4, 128, 20, 5.0, 100.0);
    const JointDictionary lazy(g, grid);
    CHECK(lazy.dense_bytes() == 512ull * 256 * 20 * 8 * 16);
    try
    {
        build_joint_dictionary(g, grid, JointAtoms::Oblong, 1 << 20);
        FAIL("expected CapacityError");
    }
    catch (const CapacityError &e)
    {
        CHECK(e.required == lazy.dense_bytes());
        CHECK(e.budget == (1u << 20));
    }
}
