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

#ifndef XLDMA_ESTIMATORS_HPP
#define XLDMA_ESTIMATORS_HPP

#include "xldma/channel.hpp"
#include "xldma/dictionaries.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace xldma
{
    // Least-squares solve with singular values below tolerance * sigma_max discarded.
    CVec pinv_solve(const CMat &A, const CVec &b, double tolerance = 1e-10);
    int numerical_rank(const CMat &A, double tolerance = 1e-10);

    double nmse(const CVec &estimate, const CVec &truth);

    // ---------------------------------------------------------------------------------------------
    // Orthogonal least squares

    struct OlsResult
    {
        std::vector<Eigen::Index> support; // selection order
        CVec coefficients;                 // LS coefficients on the selected columns, same order
        std::vector<double> residual_history; // ||r||^2, entry 0 is ||y||^2, entry l after l selections
    };

    // Greedy OLS: every step picks the column whose addition minimizes ||(I - Phi Phi^+) y||^2.
    OlsResult ols_recover(const CVec &y, const CMat &A, int sparsity);

    // ---------------------------------------------------------------------------------------------
    // Estimation context: geometry, dictionaries and the per-microstrip projected atoms W_m^H B.
    // Depends only on the measurement design, so it is built once and shared across trials.

    class EstimationContext
    {
    public:
        EstimationContext(ArrayGeometry geom, PolarGrid grid, const std::vector<CMat> &W);

        const ArrayGeometry &geometry() const { return geom_; }
        const PolarGrid &grid() const { return grid_; }
        const CMat &az_dictionary() const { return B_; }
        const std::vector<double> &el_grid() const { return el_grid_; }
        const CMat &projected(int m) const { return projected_[m]; }          // W_m^H B, P x G
        const RVec &projected_norms2(int m) const { return norms2_[m]; }      // column norms^2
        const std::vector<CMat> &measurements() const { return W_; }
        int num_microstrips() const { return static_cast<int>(W_.size()); }
        int num_pilots() const { return W_.empty() ? 0 : static_cast<int>(W_.front().cols()); }

    private:
        ArrayGeometry geom_;
        PolarGrid grid_;
        CMat B_;
        std::vector<double> el_grid_;
        std::vector<CMat> W_;
        std::vector<CMat> projected_;
        std::vector<RVec> norms2_;
    };

    // ---------------------------------------------------------------------------------------------
    // Distributed OLS building blocks

    struct DolsSelection
    {
        int column = -1;
        double residual = 0.0; // sum_m of the post-projection residual for the chosen column
    };

    // Column of B minimizing sum_m ||Phi_m^{perp} y_m||^2 after appending W_m^H B[:, col] to the
    // current support bases. Only columns with available[col] are considered; ties go to the smaller index.
    DolsSelection dols_select(const EstimationContext &ctx, const MeasurementBundle &bundle,
                              const std::vector<CMat> &support_bases, const std::vector<bool> &available);

    // Phi_m = W_m^H [bbar(varphi_k, R_k)]_k for every microstrip.
    std::vector<CMat> support_bases(const ArrayGeometry &geom, const MeasurementBundle &bundle, const RVec &az,
                                    const RVec &inv_range);

    // Per-microstrip LS coefficients, row m = xi_m^T (M x l).
    CMat solve_support_gains(const std::vector<CMat> &bases, const MeasurementBundle &bundle,
                             double tolerance = 1e-10);

    // sum_m ||y_m - Phi_m xi_m||^2
    double stacked_residual(const std::vector<CMat> &bases, const MeasurementBundle &bundle, const CMat &gains);

    enum class RefineSolve
    {
        Separate, // eta_phi and eta_R each fitted to the full residual, real part kept
        Joint     // one real least-squares fit of (eta_phi, eta_R) to the linearized residual
    };

    struct RefineOptions
    {
        RefineSolve solve = RefineSolve::Separate;
        int backtracking = 0; // step halvings tried before an increasing update is rejected
        // Project the derivative columns onto the orthogonal complement of each Phi_m, so the step accounts for
        // the gains being re-solved after the update (variable projection).
        bool project_derivatives = false;
        int iterations = 5;
        double inverse_range_max = 1.0; // clamp for R; 1 / (1 m)
        double angle_step = 0.0;        // additive fallback step scale when |varphi| is ~0
        double inverse_range_step = 0.0; // additive fallback step scale when R is ~0
        double pinv_tolerance = 1e-10;
        bool step_guard = true; // reject updates that increase the stacked residual
    };

    struct RefineResult
    {
        RVec az_cosines;
        RVec inverse_ranges;
        CMat gains; // M x l
        std::vector<double> objective_history; // before refinement, then after each accepted update
        int accepted = 0;
        int rejected = 0;
        int singular = 0; // iterations skipped because the stacked derivative system was rank deficient
    };

    // Off-grid refinement of the (varphi, R) support by first-order perturbation steps.
    RefineResult og_refine(const ArrayGeometry &geom, const MeasurementBundle &bundle, const RVec &az,
                           const RVec &inv_range, const CMat &gains, const RefineOptions &opts);

    struct DolsResult
    {
        std::vector<int> columns; // selected grid columns in order
        RVec az_cosines;          // refined varphi
        RVec inverse_ranges;      // refined R
        CMat gains;               // Z, M x L
        std::vector<double> residual_history; // entry 0 = sum ||y_m||^2, entry l after l atoms (post refinement)
        std::vector<RefineResult> refinements;
    };

    DolsResult og_dols(const EstimationContext &ctx, const MeasurementBundle &bundle, int sparsity,
                       const RefineOptions &refine);

    enum class ElRefine
    {
        None,      // grid argmax only
        Parabolic, // three-point parabolic interpolation around the grid peak
        Local      // golden-section maximization between the two grid neighbours of the peak
    };

    std::string_view to_string(ElRefine r);
    ElRefine el_refine_from_string(std::string_view name); // throws ConfigError

    // EL cosine per column of Z from the peak of |a(vartheta)^H zbar_l| over the EL grid.
    std::vector<double> estimate_el(const CMat &Z, const std::vector<double> &el_grid, int M, double spacing,
                                    double wavelength, ElRefine refine = ElRefine::None);

    // ---------------------------------------------------------------------------------------------
    // Full estimators

    struct FullEstimate
    {
        std::vector<SourceParams> params; // empty for AZ-IE
        CVec gains;                       // z-hat per path
        CVec channel;                     // hbar-hat, length M*N
        double nmse = 0.0;                // NaN without ground truth
        bool rank_deficient = false;
        std::vector<std::vector<Eigen::Index>> supports; // selected dictionary columns (per microstrip for AZ-IE)
    };

    struct ReconstructOptions
    {
        JointAtoms atoms = JointAtoms::Oblong;
        double pinv_tolerance = 1e-10;
    };

    // Joint LS fit of the path gains on the stacked system for known (vartheta, varphi, r).
    FullEstimate reconstruct(const ArrayGeometry &geom, const MeasurementBundle &bundle,
                             const std::vector<SourceParams> &params, const CVec *truth = nullptr,
                             const ReconstructOptions &opts = {});

    enum class Estimator
    {
        OracleLs,
        ElAzJe,
        AzIe,
        ElAzDe,
        OgElAzDe
    };

    std::string_view to_string(Estimator e);
    Estimator estimator_from_string(std::string_view name); // throws ConfigError

    struct EstimatorConfig
    {
        int sparsity = 3;
        int refine_iterations = 5;
        RefineSolve refine_solve = RefineSolve::Separate;
        int refine_backtracking = 0;
        bool refine_projected = false;
        // When > 0, the refined support is kept only if its final residual beats plain DOLS by more than
        // refine_noise_gate * L * s^2 (s^2 = mean per-pilot noise power). Fitting 2L real parameters to pure
        // noise lowers the residual by L * s^2 on average.
        double refine_noise_gate = 0.0;
        ElRefine el_refine = ElRefine::None;
        JointAtoms joint_atoms = JointAtoms::Oblong;
        JointAtoms reconstruction_atoms = JointAtoms::Oblong;
        double range_min_clamp = 1.0;
        std::uint64_t memory_budget = kDefaultMemoryBudget;
    };

    FullEstimate el_az_je(const EstimationContext &ctx, const MeasurementBundle &bundle, const EstimatorConfig &cfg,
                          const CVec *truth = nullptr);
    FullEstimate az_ie(const EstimationContext &ctx, const MeasurementBundle &bundle, const EstimatorConfig &cfg,
                       const CVec *truth = nullptr);
    // refine_iterations = 0 gives EL-AZ-DE, > 0 gives OG-EL-AZ-DE.
    FullEstimate el_az_de(const EstimationContext &ctx, const MeasurementBundle &bundle, const EstimatorConfig &cfg,
                          const CVec *truth = nullptr);
    FullEstimate oracle_ls(const ArrayGeometry &geom, const MeasurementBundle &bundle, const PathSet &paths,
                           const CVec *truth = nullptr, const ReconstructOptions &opts = {});

    FullEstimate run_estimator(Estimator e, const EstimationContext &ctx, const MeasurementBundle &bundle,
                               const EstimatorConfig &cfg, const PathSet &true_paths, const CVec *truth);
}

#endif
