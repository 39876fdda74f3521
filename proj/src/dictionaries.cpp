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

#include "xldma/dictionaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace xldma
{
    std::vector<double> uniform_cosine_grid(int count)
    {
        if (count < 1)
            throw DomainError("cosine grid needs at least one sample");
        std::vector<double> out(count);
        for (int k = 0; k < count; ++k)
            out[k] = -1.0 + (2.0 * k + 1.0) / count;
        return out;
    }

    std::vector<double> uniform_inverse_range_grid(int count, double range_min, double range_max)
    {
        if (count < 1)
            throw DomainError("range grid needs at least one sample");
        if (!(range_min > 0.0) || !(range_min <= range_max))
            throw DomainError("range grid needs 0 < r_min <= r_max");
        const double lo = 1.0 / range_max;
        const double hi = 1.0 / range_min;
        if (count == 1)
            return {(lo + hi) / 2.0};
        std::vector<double> out(count);
        for (int k = 0; k < count; ++k)
            out[k] = lo + (hi - lo) * k / (count - 1);
        return out;
    }

    std::vector<double> build_el_grid(int M)
    {
        if (M < 1)
            throw DomainError("EL grid needs M >= 1");
        const int count = 2 * M;
        std::vector<double> out(count);
        for (int k = 0; k < count; ++k)
            out[k] = -1.0 + 2.0 * k / (count - 1);
        out.back() = 1.0;
        return out;
    }

    PolarGrid PolarGrid::uniform(int angle_count, int range_count, double range_min, double range_max)
    {
        return {uniform_cosine_grid(angle_count), uniform_inverse_range_grid(range_count, range_min, range_max)};
    }

    PolarGrid PolarGrid::angle_only(int angle_count)
    {
        return {uniform_cosine_grid(angle_count), {0.0}};
    }

    int PolarGrid::column_index(int angle_idx, int range_idx) const
    {
        if (angle_idx < 0 || angle_idx >= static_cast<int>(angles.size()) || range_idx < 0 ||
            range_idx >= static_cast<int>(inverse_ranges.size()))
            throw IndexError("polar grid index out of range");
        return angle_idx * static_cast<int>(inverse_ranges.size()) + range_idx;
    }

    std::pair<int, int> PolarGrid::split(int column) const
    {
        if (column < 0 || column >= columns())
            throw IndexError("polar grid column " + std::to_string(column) + " out of range");
        const int R = static_cast<int>(inverse_ranges.size());
        return {column / R, column % R};
    }

    double PolarGrid::angle_spacing() const
    {
        return angles.size() < 2 ? 0.0 : (angles.back() - angles.front()) / (angles.size() - 1);
    }

    double PolarGrid::inverse_range_spacing() const
    {
        return inverse_ranges.size() < 2 ? 0.0
                                         : (inverse_ranges.back() - inverse_ranges.front()) / (inverse_ranges.size() - 1);
    }

    void PolarGrid::validate() const
    {
        if (angles.empty() || inverse_ranges.empty())
            throw DomainError("polar grid needs at least one angle and one range");
        if (!std::is_sorted(angles.begin(), angles.end()) || !std::is_sorted(inverse_ranges.begin(), inverse_ranges.end()))
            throw DomainError("polar grid samples must be sorted");
        if (angles.front() < -1.0 || angles.back() > 1.0)
            throw DomainError("polar grid angles must lie in [-1, 1]");
        if (inverse_ranges.front() < 0.0 || !std::isfinite(inverse_ranges.back()))
            throw DomainError("polar grid inverse ranges must be finite and non-negative");
    }

    JointGrid JointGrid::standard(int M, int N, int range_count, double range_min, double range_max)
    {
        return {build_el_grid(M), PolarGrid::uniform(2 * N, range_count, range_min, range_max)};
    }

    std::pair<int, int> JointGrid::split(std::int64_t column) const
    {
        if (column < 0 || column >= columns())
            throw IndexError("joint grid column " + std::to_string(column) + " out of range");
        const std::int64_t G = polar.columns();
        return {static_cast<int>(column / G), static_cast<int>(column % G)};
    }

    void JointGrid::validate() const
    {
        if (el_angles.empty())
            throw DomainError("joint grid needs at least one EL angle");
        if (!std::is_sorted(el_angles.begin(), el_angles.end()) || el_angles.front() < -1.0 || el_angles.back() > 1.0)
            throw DomainError("joint grid EL angles must be sorted within [-1, 1]");
        polar.validate();
    }

    CMat build_az_dictionary(const ArrayGeometry &geom, const PolarGrid &grid)
    {
        geom.validate();
        grid.validate();
        const int N = geom.elements_per_microstrip;
        CMat B(N, grid.columns());
        for (int c = 0; c < grid.columns(); ++c)
            B.col(c) = steering_az_inv(grid.az_cosine(c), grid.inverse_range(c), N, geom.spacing, geom.wavelength);
        return B;
    }

    JointDictionary::JointDictionary(ArrayGeometry geom, JointGrid grid, JointAtoms atoms)
        : geom_(geom), grid_(std::move(grid)), atoms_(atoms)
    {
        geom_.validate();
        grid_.validate();
    }

    SourceParams JointDictionary::parameters(std::int64_t column) const
    {
        const auto [el_idx, polar_col] = grid_.split(column);
        const double R = grid_.polar.inverse_range(polar_col);
        return {grid_.el_angles[el_idx], grid_.polar.az_cosine(polar_col),
                R > 0.0 ? 1.0 / R : std::numeric_limits<double>::infinity()};
    }

    CVec JointDictionary::column(std::int64_t column) const
    {
        const SourceParams src = parameters(column);
        if (atoms_ == JointAtoms::Spherical)
            return manifold(geom_, src, WavefrontModel::Spherical);
        const auto [el_idx, polar_col] = grid_.split(column);
        const CVec a = steering_el(src.el_cosine, geom_.num_microstrips, geom_.spacing, geom_.wavelength);
        const CVec b = steering_az_inv(src.az_cosine, grid_.polar.inverse_range(polar_col),
                                       geom_.elements_per_microstrip, geom_.spacing, geom_.wavelength);
        CVec g(geom_.size());
        const int N = geom_.elements_per_microstrip;
        for (int m = 0; m < geom_.num_microstrips; ++m)
            g.segment(m * N, N) = a[m] * b;
        return g;
    }

    std::uint64_t JointDictionary::dense_bytes() const
    {
        return static_cast<std::uint64_t>(geom_.size()) * static_cast<std::uint64_t>(columns()) * sizeof(cplx);
    }

    CMat build_joint_dictionary(const ArrayGeometry &geom, const JointGrid &grid, JointAtoms atoms,
                                std::uint64_t memory_budget)
    {
        const JointDictionary dict(geom, grid, atoms);
        if (dict.dense_bytes() > memory_budget)
            throw CapacityError("joint dictionary does not fit the memory budget", dict.dense_bytes(), memory_budget);
        CMat G(geom.size(), dict.columns());
        for (std::int64_t c = 0; c < dict.columns(); ++c)
            G.col(c) = dict.column(c);
        return G;
    }
}
