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

#include "xldma/mmo.hpp"

#include <cmath>

namespace xldma
{
    Coherence total_coherence(const CMat &W, const CMat &B)
    {
        if (W.rows() != B.rows())
            throw ShapeError("total_coherence: W and B must have the same number of rows");
        const Eigen::Index gbar = B.cols();
        const Eigen::Index P = W.cols();
        const CMat G = B.adjoint() * W; // gbar x P

        Coherence out;
        out.direct = (CMat::Identity(gbar, gbar) - G * G.adjoint()).squaredNorm();
        const CMat H = G.adjoint() * G; // W^H B B^H W
        out.reduced = (CMat::Identity(P, P) - H).squaredNorm() + static_cast<double>(gbar - P);
        return out;
    }

    double scale_optimal_coherence(const CMat &W, const CMat &B)
    {
        if (W.rows() != B.rows())
            throw ShapeError("scale_optimal_coherence: W and B must have the same number of rows");
        const Eigen::Index gbar = B.cols();
        const Eigen::Index P = W.cols();
        const CMat G = B.adjoint() * W;
        const CMat H = G.adjoint() * G;
        const double h2 = H.squaredNorm();
        const double s = h2 > 0.0 ? H.trace().real() / h2 : 0.0;
        return (CMat::Identity(P, P) - s * H).squaredNorm() + static_cast<double>(gbar - P);
    }

    TargetGram target_gram(int P, int gbar, double power, Rng &rng)
    {
        if (P < 1 || P > gbar)
            throw DomainError("target_gram: requires 1 <= P <= gbar");
        if (!(power > 0.0))
            throw DomainError("target_gram: power must be positive");
        TargetGram out;
        out.power = power;
        out.U1 = random_unitary(rng, P);
        out.U2 = random_unitary(rng, gbar);
        // U1 [s I_P, 0] U2^H with s^2 = power / P, so sum_i sigma_i^2 = power.
        out.phi = std::sqrt(power / P) * (out.U1 * out.U2.leftCols(P).adjoint());
        return out;
    }

    namespace
    {
        struct AffineWeights
        {
            cplx offset;
            double scale;
        };

        AffineWeights affine(WeightConstraint c)
        {
            switch (c)
            {
            case WeightConstraint::Lorentzian:
                return {kJ / 2.0, 0.5};
            case WeightConstraint::UnitModulus:
                return {0.0, 1.0};
            case WeightConstraint::Unconstrained:
                break;
            }
            throw PreconditionError("unconstrained weights have no phase-only parametrization");
        }

        cplx unit_phase(cplx z)
        {
            const double mag = std::abs(z);
            return mag > 0.0 ? z / mag : cplx{1.0, 0.0};
        }

        CMat phases(const CMat &A)
        {
            return A.unaryExpr([](cplx z) { return unit_phase(z); });
        }

        struct QuadraticTerms
        {
            CMat X1; // N x N
            CMat X2; // P x N
        };

        QuadraticTerms quadratic_terms(const CMat &phi, const CVec &v, const CMat &B, WeightConstraint constraint)
        {
            const Eigen::Index N = B.rows();
            const Eigen::Index P = phi.rows();
            if (phi.cols() != B.cols() || v.size() != N)
                throw ShapeError("MMO: Phi~ must be P x gbar and v length N for an N x gbar dictionary");
            const AffineWeights aw = affine(constraint);
            const CMat VB = v.asDiagonal() * B;
            // Psi = Phi~ - offset^H 1_P 1_N^T V B
            const Eigen::RowVectorXcd colsum = VB.colwise().sum();
            CMat Psi = phi;
            Psi.rowwise() -= std::conj(aw.offset) * colsum;
            (void)P;
            return {aw.scale * aw.scale * (VB * VB.adjoint()), aw.scale * (Psi * VB.adjoint())};
        }

        double objective_of(const QuadraticTerms &q, const CMat &Fbar)
        {
            return (Fbar * q.X1 * Fbar.adjoint()).trace().real() - 2.0 * (Fbar.conjugate().cwiseProduct(q.X2)).sum().real();
        }
    }

    CMat weights_from_phases(const CMat &F, WeightConstraint constraint)
    {
        const AffineWeights aw = affine(constraint);
        return (aw.scale * F).array() + aw.offset;
    }

    WeightSolution solve_phase_alignment(const CMat &phi, const CVec &v, const CMat &B, WeightConstraint constraint,
                                         double tight_frame_tol)
    {
        const Eigen::Index N = B.rows();
        const Eigen::Index gbar = B.cols();
        if (phi.cols() != gbar || v.size() != N)
            throw ShapeError("solve_phase_alignment: Phi~ must be P x gbar and v length N");
        const double c = static_cast<double>(gbar) / N;
        const double frame_err = (B * B.adjoint() - c * CMat::Identity(N, N)).norm();
        if (frame_err > tight_frame_tol * c * std::sqrt(static_cast<double>(N)))
            throw PreconditionError("solve_phase_alignment: B B^H is not proportional to I_N");
        if ((v.cwiseAbs().array() - 1.0).abs().maxCoeff() > tight_frame_tol)
            throw PreconditionError("solve_phase_alignment: waveguide response is not unit modulus");

        const AffineWeights aw = affine(constraint);
        // With B B^H = c I and V unitary, ||Phi~ - Q^H V B||^2 = c ||Q - T||^2 + const, T = V B Phi~^H / c.
        const CMat target = (v.asDiagonal() * B * phi.adjoint()) / c;
        // Psi-bar: for the Lorentzian case 2T - J
        const CMat psi_bar = (target.array() - aw.offset) / aw.scale;
        WeightSolution out;
        out.F = phases(psi_bar);
        out.Q = weights_from_phases(out.F, constraint);
        return out;
    }

    double weight_objective(const CMat &phi, const CVec &v, const CMat &B, WeightConstraint constraint, const CMat &F)
    {
        const QuadraticTerms q = quadratic_terms(phi, v, B, constraint);
        if (F.rows() != B.rows() || F.cols() != phi.rows())
            throw ShapeError("weight_objective: F must be N x P");
        return objective_of(q, F.adjoint());
    }

    CoordinateDescentResult solve_coordinate_descent(const CMat &phi, const CVec &v, const CMat &B,
                                                     WeightConstraint constraint, const CoordinateDescentOptions &opts,
                                                     const CMat *initial_F)
    {
        if (opts.sweeps < 1)
            throw DomainError("solve_coordinate_descent: sweeps must be >= 1");
        const Eigen::Index N = B.rows();
        const Eigen::Index P = phi.rows();
        const QuadraticTerms q = quadratic_terms(phi, v, B, constraint);
        const AffineWeights aw = affine(constraint);

        CMat F;
        if (initial_F)
        {
            if (initial_F->rows() != N || initial_F->cols() != P)
                throw ShapeError("solve_coordinate_descent: initial F must be N x P");
            F = phases(*initial_F);
        }
        else
        {
            // Phases of the unconstrained LS weights: (V B)^H Q = Phi~^H
            const CMat VBh = (v.asDiagonal() * B).adjoint();
            const CMat Q_ls = VBh.completeOrthogonalDecomposition().solve(phi.adjoint());
            F = phases((Q_ls.array() - aw.offset) / aw.scale);
        }

        CMat Fbar = F.adjoint(); // P x N
        CMat G = Fbar * q.X1;    // running Fbar X1
        CoordinateDescentResult out;
        double f = objective_of(q, Fbar);
        out.sweep_objective.push_back(f);

        for (int sweep = 0; sweep < opts.sweeps; ++sweep)
        {
            for (Eigen::Index p = 0; p < P; ++p)
                for (Eigen::Index n = 0; n < N; ++n)
                {
                    const cplx old = Fbar(p, n);
                    const cplx nu = q.X2(p, n) - (G(p, n) - old * q.X1(n, n));
                    if (std::abs(nu) == 0.0)
                    {
                        if (opts.record_entry_objective)
                            out.entry_objective.push_back(f);
                        continue; // any phase is optimal
                    }
                    const cplx next = nu / std::abs(nu);
                    const cplx delta = next - old;
                    if (delta != cplx{0.0, 0.0})
                    {
                        G.row(p) += delta * q.X1.row(n);
                        Fbar(p, n) = next;
                        f -= 2.0 * (std::conj(delta) * nu).real();
                    }
                    if (opts.record_entry_objective)
                        out.entry_objective.push_back(f);
                }
            ++out.sweeps_run;
            f = objective_of(q, Fbar);
            G = Fbar * q.X1;
            const double prev = out.sweep_objective.back();
            out.sweep_objective.push_back(f);
            if (prev - f < opts.tol * std::abs(prev))
                break;
        }
        out.F = Fbar.adjoint();
        out.Q = weights_from_phases(out.F, constraint);
        return out;
    }

    std::string to_string(const DesignMode &mode)
    {
        if (mode.method == DesignMethod::GaussianRandom)
            return "gaussian";
        const std::string prefix = mode.constraint == WeightConstraint::Lorentzian ? "dma" : "pa";
        return prefix + (mode.method == DesignMethod::Optimized ? "-mmo" : "-random");
    }

    DesignMode design_mode_from_string(std::string_view name)
    {
        if (name == "dma-mmo")
            return {WeightConstraint::Lorentzian, DesignMethod::Optimized};
        if (name == "pa-mmo")
            return {WeightConstraint::UnitModulus, DesignMethod::Optimized};
        if (name == "dma-random")
            return {WeightConstraint::Lorentzian, DesignMethod::RandomFeasible};
        if (name == "pa-random")
            return {WeightConstraint::UnitModulus, DesignMethod::RandomFeasible};
        if (name == "gaussian")
            return {WeightConstraint::Unconstrained, DesignMethod::GaussianRandom};
        throw ConfigError("unknown design mode '" + std::string(name) + "'");
    }

    CMat random_weights(WeightConstraint constraint, int N, int P, Rng &rng)
    {
        if (constraint == WeightConstraint::Unconstrained)
            return complex_normal_matrix(rng, N, P);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        CMat Q(N, P);
        for (int p = 0; p < P; ++p)
            for (int n = 0; n < N; ++n)
            {
                const double x = phase(rng);
                Q(n, p) = constraint == WeightConstraint::Lorentzian ? lorentzian_weight(x) : std::polar(1.0, x);
            }
        return Q;
    }

    double estimate_gram_power(WeightConstraint constraint, const CVec &v, const CMat &B, int P, int draws, Rng &rng)
    {
        if (draws < 1)
            throw DomainError("estimate_gram_power: draws must be >= 1");
        const CMat VB = v.asDiagonal() * B;
        double total = 0.0;
        for (int i = 0; i < draws; ++i)
        {
            const CMat Q = random_weights(constraint, static_cast<int>(B.rows()), P, rng);
            total += (Q.adjoint() * VB).squaredNorm();
        }
        return total / draws;
    }

    MeasurementDesign make_design(const DesignMode &mode, const DmaHardware &hw, const CMat &B, int P,
                                  std::uint64_t seed, const DesignOptions &opts)
    {
        hw.validate();
        const int M = hw.num_microstrips();
        const int N = hw.elements_per_microstrip();
        if (B.rows() != N)
            throw ShapeError("make_design: dictionary rows must equal N");
        if (P < 1)
            throw DomainError("make_design: P must be >= 1");
        if (mode.method == DesignMethod::Optimized && (mode.constraint == WeightConstraint::Unconstrained || P > B.cols()))
            throw ConfigError("make_design: optimized designs need a weight constraint and P <= gbar");

        MeasurementDesign out;
        out.mode = mode;
        out.seed = seed;
        out.solver = mode.method == DesignMethod::Optimized ? "" : "random";
        for (int m = 0; m < M; ++m)
        {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(m)}));
            const CVec v = waveguide_diagonal(hw, m);
            CMat Q;
            switch (mode.method)
            {
            case DesignMethod::GaussianRandom:
                // W is drawn directly; Q = V^{-H} W
                Q = v.conjugate().cwiseInverse().asDiagonal() * complex_normal_matrix(rng, N, P);
                break;
            case DesignMethod::RandomFeasible:
                Q = random_weights(mode.constraint, N, P, rng);
                break;
            case DesignMethod::Optimized:
            {
                const double power = estimate_gram_power(mode.constraint, v, B, P, opts.power_draws, rng);
                const TargetGram tg = target_gram(P, static_cast<int>(B.cols()), power, rng);
                bool solved = false;
                if (!opts.force_coordinate_descent)
                {
                    try
                    {
                        Q = solve_phase_alignment(tg.phi, v, B, mode.constraint, opts.tight_frame_tol).Q;
                        out.solver = "phase-alignment";
                        solved = true;
                    }
                    catch (const PreconditionError &)
                    {
                    }
                }
                if (!solved)
                {
                    Q = solve_coordinate_descent(tg.phi, v, B, mode.constraint, opts.coordinate_descent).Q;
                    out.solver = "coordinate-descent";
                }
                break;
            }
            }
            out.Q.push_back(Q);
            out.V.push_back(v);
            out.W.push_back(v.conjugate().asDiagonal() * Q);
        }
        return out;
    }
}
