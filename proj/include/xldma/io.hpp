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

#ifndef XLDMA_IO_HPP
#define XLDMA_IO_HPP

#include "xldma/mmo.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace xldma
{
    // Binary matrix: "XLDMAMAT", uint32 version, uint32 reserved, uint64 rows, uint64 cols, then
    // rows * cols complex doubles (real, imag) in column-major order, all little-endian.
    void write_matrix(std::ostream &os, const CMat &A);
    CMat read_matrix(std::istream &is); // throws Error on a malformed stream
    void save_matrix(const std::filesystem::path &path, const CMat &A);
    CMat load_matrix(const std::filesystem::path &path);

    // A design directory holds design.txt (mode, seed, M, N, P, solver) and Q_<m>.bin, V_<m>.bin per
    // microstrip. W is rebuilt on load.
    void save_design(const std::filesystem::path &dir, const MeasurementDesign &design);
    MeasurementDesign load_design(const std::filesystem::path &dir);

    // Shortest decimal text that reads back to the same double.
    std::string format_double(double x);

    class CsvWriter
    {
    public:
        CsvWriter(const std::filesystem::path &path, std::vector<std::string> header);

        void row(const std::vector<std::string> &fields); // throws ShapeError on a column-count mismatch
        void flush();
        std::size_t columns() const { return columns_; }

    private:
        std::filesystem::path path_;
        std::size_t columns_;
        std::ofstream os_;
    };
}

#endif
