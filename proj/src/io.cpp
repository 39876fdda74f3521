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

#include "xldma/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>

namespace xldma
{
    namespace
    {
        constexpr char kMagic[8] = {'X', 'L', 'D', 'M', 'A', 'M', 'A', 'T'};
        constexpr std::uint32_t kVersion = 1;

        static_assert(std::endian::native == std::endian::little, "binary matrix IO assumes a little-endian host");

        template <typename T>
        void put(std::ostream &os, T value)
        {
            os.write(reinterpret_cast<const char *>(&value), sizeof(T));
        }

        template <typename T>
        T get(std::istream &is)
        {
            T value{};
            if (!is.read(reinterpret_cast<char *>(&value), sizeof(T)))
                throw Error("read_matrix: truncated stream");
            return value;
        }

        std::string csv_escape(const std::string &field)
        {
            if (field.find_first_of(",\"\n") == std::string::npos)
                return field;
            std::string out = "\"";
            for (char c : field)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }
    }

    void write_matrix(std::ostream &os, const CMat &A)
    {
        os.write(kMagic, sizeof(kMagic));
        put<std::uint32_t>(os, kVersion);
        put<std::uint32_t>(os, 0);
        put<std::uint64_t>(os, static_cast<std::uint64_t>(A.rows()));
        put<std::uint64_t>(os, static_cast<std::uint64_t>(A.cols()));
        for (Eigen::Index c = 0; c < A.cols(); ++c)
            for (Eigen::Index r = 0; r < A.rows(); ++r)
            {
                put<double>(os, A(r, c).real());
                put<double>(os, A(r, c).imag());
            }
        if (!os)
            throw Error("write_matrix: stream error");
    }

    CMat read_matrix(std::istream &is)
    {
        char magic[sizeof(kMagic)];
        if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
            throw Error("read_matrix: bad magic");
        const auto version = get<std::uint32_t>(is);
        if (version != kVersion)
            throw Error("read_matrix: unsupported version " + std::to_string(version));
        (void)get<std::uint32_t>(is);
        const auto rows = get<std::uint64_t>(is);
        const auto cols = get<std::uint64_t>(is);
        if (rows > (1ull << 31) || cols > (1ull << 31))
            throw Error("read_matrix: implausible dimensions");
        CMat A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index c = 0; c < A.cols(); ++c)
            for (Eigen::Index r = 0; r < A.rows(); ++r)
            {
                const double re = get<double>(is);
                const double im = get<double>(is);
                A(r, c) = {re, im};
            }
        return A;
    }

    void save_matrix(const std::filesystem::path &path, const CMat &A)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw Error("cannot open " + path.string() + " for writing");
        write_matrix(os, A);
    }

    CMat load_matrix(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw Error("cannot open " + path.string());
        return read_matrix(is);
    }

    void save_design(const std::filesystem::path &dir, const MeasurementDesign &design)
    {
        std::filesystem::create_directories(dir);
        std::ofstream meta(dir / "design.txt");
        if (!meta)
            throw Error("cannot write " + (dir / "design.txt").string());
        meta << "mode " << to_string(design.mode) << "\n"
             << "seed " << design.seed << "\n"
             << "M " << design.num_microstrips() << "\n"
             << "N " << design.elements_per_microstrip() << "\n"
             << "P " << design.num_pilots() << "\n"
             << "solver " << design.solver << "\n";
        for (int m = 0; m < design.num_microstrips(); ++m)
        {
            save_matrix(dir / ("Q_" + std::to_string(m) + ".bin"), design.Q[m]);
            save_matrix(dir / ("V_" + std::to_string(m) + ".bin"), design.V[m]);
        }
    }

    MeasurementDesign load_design(const std::filesystem::path &dir)
    {
        std::ifstream meta(dir / "design.txt");
        if (!meta)
            throw ConfigError("cannot read " + (dir / "design.txt").string());
        MeasurementDesign design;
        int M = -1, N = -1, P = -1;
        std::string key;
        while (meta >> key)
        {
            if (key == "mode")
            {
                std::string mode;
                meta >> mode;
                design.mode = design_mode_from_string(mode);
            }
            else if (key == "seed")
                meta >> design.seed;
            else if (key == "M")
                meta >> M;
            else if (key == "N")
                meta >> N;
            else if (key == "P")
                meta >> P;
            else if (key == "solver")
                meta >> design.solver;
            else
                throw ConfigError("design.txt: unknown key '" + key + "'");
        }
        if (M < 1 || N < 1 || P < 1)
            throw ConfigError("design.txt: missing or invalid M, N, P");
        for (int m = 0; m < M; ++m)
        {
            CMat Q = load_matrix(dir / ("Q_" + std::to_string(m) + ".bin"));
            CMat V = load_matrix(dir / ("V_" + std::to_string(m) + ".bin"));
            if (Q.rows() != N || Q.cols() != P || V.rows() != N || V.cols() != 1)
                throw ConfigError("design: matrix dimensions do not match design.txt");
            const CVec v = V.col(0);
            design.W.push_back(v.conjugate().asDiagonal() * Q);
            design.Q.push_back(std::move(Q));
            design.V.push_back(v);
        }
        return design;
    }

    std::string format_double(double x)
    {
        std::array<char, 64> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
        return std::string(buf.data(), res.ptr);
    }

    CsvWriter::CsvWriter(const std::filesystem::path &path, std::vector<std::string> header)
        : path_(path), columns_(header.size())
    {
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        os_.open(path, std::ios::binary | std::ios::trunc);
        if (!os_)
            throw Error("cannot open " + path.string() + " for writing");
        row(header);
    }

    void CsvWriter::row(const std::vector<std::string> &fields)
    {
        if (fields.size() != columns_)
            throw ShapeError("CsvWriter: expected " + std::to_string(columns_) + " fields in " + path_.string());
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i)
                os_ << ',';
            os_ << csv_escape(fields[i]);
        }
        os_ << '\n';
    }

    void CsvWriter::flush() { os_.flush(); }
}
