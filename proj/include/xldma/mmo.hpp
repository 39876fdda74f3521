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

#ifndef XLDMA_MMO_HPP
#define XLDMA_MMO_HPP

#include "xldma/channel.hpp"
#include "xldma/random.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xldma
{
    // ||I_gbar - B^H W W^H B||_F^2, plus the equivalent P x P form ||I_P - W^H B B^H W||_F^2 + gbar - P.
    struct Coherence
    {
        double direct = 0.0;
        double reduced = 0.0;
    };

    Coherence total_coherence(const CMat &W, const CMat &B);

    // min over c > 0 of the total coherence of c * W. A common gain on W scales signal and noise alike,
    // so this is the figure of merit used to compare designs with different weight magnitudes.
    double scale_optimal_coherence(const CMat &W, const CMat &B);

    // Target Gram factor Phi~ (P x gbar) with P equal singular values sqrt(power / P).
    struct TargetGram
    {
        CMat phi;
        double power = 0.0; // sigma-bar^2 = ||Phi~||_F^2
        CMat U1;            // P x P
        CMat U2;            // gbar x gbar
    };

    TargetGram target_gram(int P, int gbar, double power, Rng &rng);

    enum class WeightConstraint
    {
        Lorentzian,   // q = (j + e^{jx}) / 2
        UnitModulus,  // phased array, q = e^{jx}
        Unconstrained // complex Gaussian baseline
    };

    // Q = offset + scale * F with F unit modulus: (J/2, 1/2) for Lorentzian, (0, 1) for unit modulus.
    struct WeightSolution
    {
        CMat F; // N x P, unit modulus
        CMat Q; // N x P, feasible weights
    };

    // Closed-form per-entry phase alignment. Requires B B^H = (gbar/N) I_N and |v_n| = 1; throws
    // PreconditionError otherwise.
    WeightSolution solve_phase_alignment(const CMat &phi, const CVec &v, const CMat &B, WeightConstraint constraint,
                                         double tight_frame_tol = 1e-6);

    struct CoordinateDescentOptions
    {
        int sweeps = 20;
        double tol = 1e-8; // stop when a sweep lowers the objective by less than tol * |objective|
        bool record_entry_objective = false;
    };

    struct CoordinateDescentResult
    {
        CMat F;
        CMat Q;
        std::vector<double> sweep_objective; // objective before the first sweep, then after each sweep
        std::vector<double> entry_objective; // after every entry update (when recorded)
        int sweeps_run = 0;
    };

    // Cyclic element-wise minimization of f(Fbar) = Tr{Fbar^H Fbar X1} - 2 Re Tr{Fbar^H X2} over unit-modulus
    // Fbar = F^H. Starts from initial_F when given, else from the phases of the unconstrained LS weights.
    CoordinateDescentResult solve_coordinate_descent(const CMat &phi, const CVec &v, const CMat &B,
                                                     WeightConstraint constraint,
                                                     const CoordinateDescentOptions &opts = {},
                                                     const CMat *initial_F = nullptr);

    // f(F^H) for the coordinate-descent problem; equals ||Phi~ - Q^H V B||_F^2 minus a constant.
    double weight_objective(const CMat &phi, const CVec &v, const CMat &B, WeightConstraint constraint, const CMat &F);

    // Feasible weights from unit-modulus F.
    CMat weights_from_phases(const CMat &F, WeightConstraint constraint);

    enum class DesignMethod
    {
        Optimized,
        RandomFeasible,
        GaussianRandom
    };

    struct DesignMode
    {
        WeightConstraint constraint = WeightConstraint::Lorentzian;
        DesignMethod method = DesignMethod::Optimized;

        bool operator==(const DesignMode &) const = default;
    };

    // "dma-mmo", "pa-mmo", "dma-random", "pa-random", "gaussian"
    std::string to_string(const DesignMode &mode);
    DesignMode design_mode_from_string(std::string_view name); // throws ConfigError

    struct MeasurementDesign
    {
        DesignMode mode;
        std::uint64_t seed = 0;
        std::string solver; // "phase-alignment", "coordinate-descent", "random"
        std::vector<CMat> Q; // N x P per microstrip
        std::vector<CVec> V; // waveguide diagonal per microstrip
        std::vector<CMat> W; // V_m^H Q_m

        int num_microstrips() const { return static_cast<int>(Q.size()); }
        int num_pilots() const { return Q.empty() ? 0 : static_cast<int>(Q.front().cols()); }
        int elements_per_microstrip() const { return Q.empty() ? 0 : static_cast<int>(Q.front().rows()); }
    };

    struct DesignOptions
    {
        int power_draws = 100; // random feasible draws used to estimate sigma-bar^2
        bool force_coordinate_descent = false;
        double tight_frame_tol = 1e-6;
        CoordinateDescentOptions coordinate_descent;
    };

    // Random feasible N x P weights under a constraint.
    CMat random_weights(WeightConstraint constraint, int N, int P, Rng &rng);

    // Mean ||Q^H V B||_F^2 over random feasible Q.
    double estimate_gram_power(WeightConstraint constraint, const CVec &v, const CMat &B, int P, int draws, Rng &rng);

    // Per-microstrip measurement design. Each microstrip uses its own stream derived from (seed, m).
    MeasurementDesign make_design(const DesignMode &mode, const DmaHardware &hw, const CMat &B, int P,
                                  std::uint64_t seed, const DesignOptions &opts = {});
}

#endif
