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

#ifndef XLDMA_TYPES_HPP
#define XLDMA_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace xldma
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s
    inline constexpr cplx kJ{0.0, 1.0};

    // Error hierarchy. Every failure surfaced by the library derives from xldma::Error.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Argument outside the mathematical domain of an operation (|cos| > 1, r <= 0, ...)
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    // Element, microstrip or column index out of range
    class IndexError : public Error
    {
    public:
        using Error::Error;
    };

    // Non-conformable matrix/vector shapes
    class ShapeError : public Error
    {
    public:
        using Error::Error;
    };

    // Materializing an object would exceed the configured memory budget
    class CapacityError : public Error
    {
    public:
        CapacityError(const std::string &what, std::uint64_t required_bytes, std::uint64_t budget_bytes)
            : Error(what + " (requires " + std::to_string(required_bytes) + " bytes, budget " +
                    std::to_string(budget_bytes) + " bytes)"),
              required(required_bytes), budget(budget_bytes) {}
        std::uint64_t required;
        std::uint64_t budget;
    };

    // Selected atoms are linearly dependent, or no admissible atom remains
    class DegenerateSupportError : public Error
    {
    public:
        using Error::Error;
    };

    // A solver precondition does not hold (e.g. BB^H not proportional to I for phase alignment)
    class PreconditionError : public Error
    {
    public:
        using Error::Error;
    };

    // Malformed configuration or unknown experiment/estimator name
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    // Numerical failure that cannot be recovered (e.g. all-zero gain column for EL search)
    class NumericalError : public Error
    {
    public:
        using Error::Error;
    };
}

#endif
