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

#ifndef XLDMA_DICTIONARIES_HPP
#define XLDMA_DICTIONARIES_HPP

#include "xldma/geometry.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace xldma
{
    // Cosine samples (-1 + (2k+1)/count), uniform and symmetric. For count = 2N and d = lambda/2 the
    // far-field atoms form a tight frame: B B^H = (count / N) I_N.
    std::vector<double> uniform_cosine_grid(int count);

    // count inverse-range samples, uniform on [1/r_max, 1/r_min], endpoints included.
    std::vector<double> uniform_inverse_range_grid(int count, double range_min, double range_max);

    // 2M EL cosines uniform on [-1, 1], endpoints included.
    std::vector<double> build_el_grid(int M);

    // (varphi, R) grid of the per-microstrip dictionary. Columns are angle-major: all ranges of the first
    // angle, then all ranges of the second angle, ...
    struct PolarGrid
    {
        std::vector<double> angles;         // sorted AZ cosines
        std::vector<double> inverse_ranges; // sorted R = 1/r, 0 means far field

        static PolarGrid uniform(int angle_count, int range_count, double range_min, double range_max);
        static PolarGrid angle_only(int angle_count);

        int columns() const { return static_cast<int>(angles.size() * inverse_ranges.size()); }
        int column_index(int angle_idx, int range_idx) const;
        std::pair<int, int> split(int column) const; // (angle_idx, range_idx)
        double az_cosine(int column) const { return angles[split(column).first]; }
        double inverse_range(int column) const { return inverse_ranges[split(column).second]; }
        double angle_spacing() const;         // 0 for a single angle
        double inverse_range_spacing() const; // 0 for a single range
        void validate() const;
    };

    enum class JointAtoms
    {
        Oblong,   // a(vartheta) kron b(varphi, r)
        Spherical // exact manifold
    };

    // (vartheta, varphi, R) grid. Column = el_idx * polar.columns() + polar column.
    struct JointGrid
    {
        std::vector<double> el_angles;
        PolarGrid polar;

        static JointGrid standard(int M, int N, int range_count, double range_min, double range_max);

        std::int64_t columns() const { return static_cast<std::int64_t>(el_angles.size()) * polar.columns(); }
        std::pair<int, int> split(std::int64_t column) const; // (el_idx, polar column)
        void validate() const;
    };

    inline constexpr std::uint64_t kDefaultMemoryBudget = 4ull << 30; // 4 GiB

    // N x (G_a R) matrix of AZ atoms b(varphi, r).
    CMat build_az_dictionary(const ArrayGeometry &geom, const PolarGrid &grid);

    // Materialized (MN) x Gbar joint dictionary. Throws CapacityError when it does not fit the budget.
    CMat build_joint_dictionary(const ArrayGeometry &geom, const JointGrid &grid,
                                JointAtoms atoms = JointAtoms::Oblong,
                                std::uint64_t memory_budget = kDefaultMemoryBudget);

    // Column generator for the joint dictionary; never materializes the full matrix.
    class JointDictionary
    {
    public:
        JointDictionary(ArrayGeometry geom, JointGrid grid, JointAtoms atoms = JointAtoms::Oblong);

        std::int64_t columns() const { return grid_.columns(); }
        const JointGrid &grid() const { return grid_; }
        JointAtoms atoms() const { return atoms_; }
        SourceParams parameters(std::int64_t column) const;
        CVec column(std::int64_t column) const;

        // Bytes needed to materialize all columns.
        std::uint64_t dense_bytes() const;

    private:
        ArrayGeometry geom_;
        JointGrid grid_;
        JointAtoms atoms_;
    };
}

#endif
