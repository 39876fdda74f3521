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

#include "xldma/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace xldma
{
    CVec pinv_solve(const CMat &A, const CVec &b, double tolerance)
    {
        if (A.rows() != b.size())
            throw ShapeError("pinv_solve: right-hand side length does not match rows");
        if (A.cols() == 0)
            return CVec(0);
        Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(tolerance);
        return svd.solve(b);
    }

    int numerical_rank(const CMat &A, double tolerance)
    {
        if (A.cols() == 0 || A.rows() == 0)
            return 0;
        Eigen::JacobiSVD<CMat> svd(A);
        svd.setThreshold(tolerance);
        return static_cast<int>(svd.rank());
    }

    double nmse(const CVec &estimate, const CVec &truth)
    {
        if (estimate.size() != truth.size())
            throw ShapeError("nmse: vectors differ in length");
        const double energy = truth.squaredNorm();
        if (energy == 0.0)
            throw NumericalError("nmse: ground-truth channel has zero energy");
        return (estimate - truth).squaredNorm() / energy;
    }

    namespace
    {
        constexpr double kDegenerateTol = 1e-10;

        // Orthonormal basis of range(A) (rank-revealing QR).
        CMat range_basis(const CMat &A)
        {
            if (A.cols() == 0)
                return CMat(A.rows(), 0);
            Eigen::ColPivHouseholderQR<CMat> qr(A);
            qr.setThreshold(kDegenerateTol);
            const auto rank = qr.rank();
            return qr.householderQ() * CMat::Identity(A.rows(), rank);
        }
    }

    OlsResult ols_recover(const CVec &y, const CMat &A, int sparsity)
    {
        if (y.size() != A.rows())
            throw ShapeError("ols_recover: y length must equal the number of rows of A");
        if (sparsity < 1 || sparsity > std::min(A.rows(), A.cols()))
            throw DomainError("ols_recover: sparsity must satisfy 1 <= L <= min(rows, cols)");

        const Eigen::Index G = A.cols();
        const RVec col_norm2 = A.colwise().squaredNorm().transpose();
        RVec proj_norm2 = RVec::Zero(G); // ||Q^H a_k||^2
        std::vector<bool> selected(G, false);
        CMat basis(A.rows(), 0);
        CVec residual = y;

        OlsResult out;
        out.residual_history.push_back(residual.squaredNorm());
        for (int step = 0; step < sparsity; ++step)
        {
            const CVec corr = A.adjoint() * residual;
            Eigen::Index best = -1;
            double best_gain = -1.0;
            for (Eigen::Index k = 0; k < G; ++k)
            {
                if (selected[k])
                    continue;
                const double denom = col_norm2[k] - proj_norm2[k];
                if (!(col_norm2[k] > 0.0) || denom <= kDegenerateTol * col_norm2[k])
                    continue;
                const double gain = std::norm(corr[k]) / denom;
                if (gain > best_gain)
                {
                    best_gain = gain;
                    best = k;
                }
            }
            if (best < 0)
                throw DegenerateSupportError("ols_recover: no linearly independent column remains");

            // Gram-Schmidt twice for orthogonality at double precision.
            CVec q = A.col(best);
            for (int pass = 0; pass < 2; ++pass)
                if (basis.cols() > 0)
                    q -= basis * (basis.adjoint() * q);
            q /= q.norm();
            basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
            basis.col(basis.cols() - 1) = q;

            residual -= q * q.dot(residual);
            proj_norm2 += (A.adjoint() * q).cwiseAbs2();
            selected[best] = true;
            out.support.push_back(best);
            out.residual_history.push_back(residual.squaredNorm());
        }

        CMat chosen(A.rows(), sparsity);
        for (int i = 0; i < sparsity; ++i)
            chosen.col(i) = A.col(out.support[i]);
        out.coefficients = chosen.colPivHouseholderQr().solve(y);
        return out;
    }

    EstimationContext::EstimationContext(ArrayGeometry geom, PolarGrid grid, const std::vector<CMat> &W)
        : geom_(geom), grid_(std::move(grid)), W_(W)
    {
        geom_.validate();
        grid_.validate();
        if (W_.empty())
            throw ShapeError("estimation context needs one measurement matrix per microstrip");
        if (static_cast<int>(W_.size()) != geom_.num_microstrips)
            throw ShapeError("estimation context: number of measurement matrices must equal M");
        B_ = build_az_dictionary(geom_, grid_);
        el_grid_ = build_el_grid(geom_.num_microstrips);
        for (const auto &Wm : W_)
        {
            if (Wm.rows() != geom_.elements_per_microstrip || Wm.cols() != W_.front().cols())
                throw ShapeError("estimation context: measurement matrices must all be N x P");
            projected_.push_back(Wm.adjoint() * B_);
            norms2_.push_back(projected_.back().colwise().squaredNorm().transpose());
        }
    }

    DolsSelection dols_select(const EstimationContext &ctx, const MeasurementBundle &bundle,
                              const std::vector<CMat> &bases, const std::vector<bool> &available)
    {
        bundle.validate();
        const int M = bundle.num_microstrips();
        const Eigen::Index G = ctx.grid().columns();
        if (ctx.num_microstrips() != M || static_cast<int>(bases.size()) != M)
            throw ShapeError("dols_select: microstrip count mismatch");
        if (static_cast<Eigen::Index>(available.size()) != G)
            throw ShapeError("dols_select: availability mask must cover every dictionary column");

        RVec total = RVec::Zero(G);
        std::vector<bool> valid(available);
        for (int m = 0; m < M; ++m)
        {
            const CMat &A = ctx.projected(m);
            const RVec &norm2 = ctx.projected_norms2(m);
            const CMat Q = range_basis(bases[m]);
            CVec r = bundle.pilots[m];
            if (Q.cols() > 0)
                r -= Q * (Q.adjoint() * r);
            const double r2 = r.squaredNorm();
            const CVec corr = A.adjoint() * r;
            RVec proj2 = RVec::Zero(G);
            if (Q.cols() > 0)
                proj2 = (Q.adjoint() * A).colwise().squaredNorm().transpose();
            for (Eigen::Index k = 0; k < G; ++k)
            {
                if (!valid[k])
                    continue;
                const double denom = norm2[k] - proj2[k];
                if (!(norm2[k] > 0.0) || denom <= kDegenerateTol * norm2[k])
                {
                    valid[k] = false;
                    continue;
                }
                total[k] += std::max(0.0, r2 - std::norm(corr[k]) / denom);
            }
        }

        DolsSelection best;
        best.residual = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < G; ++k)
            if (valid[k] && total[k] < best.residual)
            {
                best.residual = total[k];
                best.column = static_cast<int>(k);
            }
        if (best.column < 0)
            throw DegenerateSupportError("dols_select: no admissible candidate column");
        return best;
    }

    std::vector<CMat> support_bases(const ArrayGeometry &geom, const MeasurementBundle &bundle, const RVec &az,
                                    const RVec &inv_range)
    {
        if (az.size() != inv_range.size())
            throw ShapeError("support_bases: parameter vectors differ in length");
        const int N = geom.elements_per_microstrip;
        CMat atoms(N, az.size());
        for (Eigen::Index k = 0; k < az.size(); ++k)
            atoms.col(k) = steering_az_inv(az[k], inv_range[k], N, geom.spacing, geom.wavelength);
        std::vector<CMat> out;
        out.reserve(bundle.measurements.size());
        for (const auto &Wm : bundle.measurements)
            out.push_back(Wm.adjoint() * atoms);
        return out;
    }

    CMat solve_support_gains(const std::vector<CMat> &bases, const MeasurementBundle &bundle, double tolerance)
    {
        const int M = bundle.num_microstrips();
        const Eigen::Index l = bases.empty() ? 0 : bases.front().cols();
        CMat Z(M, l);
        for (int m = 0; m < M; ++m)
            Z.row(m) = pinv_solve(bases[m], bundle.pilots[m], tolerance).transpose();
        return Z;
    }

    double stacked_residual(const std::vector<CMat> &bases, const MeasurementBundle &bundle, const CMat &gains)
    {
        double total = 0.0;
        for (int m = 0; m < bundle.num_microstrips(); ++m)
        {
            if (bases[m].cols() == 0)
                total += bundle.pilots[m].squaredNorm();
            else
                total += (bundle.pilots[m] - bases[m] * gains.row(m).transpose()).squaredNorm();
        }
        return total;
    }

    RefineResult og_refine(const ArrayGeometry &geom, const MeasurementBundle &bundle, const RVec &az,
                           const RVec &inv_range, const CMat &gains, const RefineOptions &opts)
    {
        bundle.validate();
        const int M = bundle.num_microstrips();
        const int P = bundle.num_pilots();
        const int N = geom.elements_per_microstrip;
        const Eigen::Index l = az.size();
        if (inv_range.size() != l || gains.rows() != M || gains.cols() != l)
            throw ShapeError("og_refine: gains must be M x l with l = number of support atoms");
        if (opts.iterations < 0)
            throw DomainError("og_refine: iteration count must be non-negative");

        RefineResult out{az, inv_range, gains, {}, 0, 0, 0};
        std::vector<CMat> bases = support_bases(geom, bundle, out.az_cosines, out.inverse_ranges);
        double objective = stacked_residual(bases, bundle, out.gains);
        out.objective_history.push_back(objective);
        if (l == 0)
            return out;

        constexpr double kTiny = 1e-6;
        for (int it = 0; it < opts.iterations; ++it)
        {
            // Perturbation scales: the multiplicative rule eta * value, or an additive step near zero.
            RVec az_scale(l), r_scale(l);
            for (Eigen::Index k = 0; k < l; ++k)
            {
                az_scale[k] = std::abs(out.az_cosines[k]) < kTiny ? opts.angle_step : out.az_cosines[k];
                r_scale[k] = out.inverse_ranges[k] < kTiny ? opts.inverse_range_step : out.inverse_ranges[k];
            }

            std::vector<SteeringDerivatives> derivs;
            derivs.reserve(l);
            for (Eigen::Index k = 0; k < l; ++k)
                derivs.push_back(steering_az_derivatives(out.az_cosines[k], out.inverse_ranges[k], N, geom.spacing,
                                                         geom.wavelength));

            CMat P_az(M * P, l), P_r(M * P, l);
            CVec t(M * P);
            for (int m = 0; m < M; ++m)
            {
                const CMat &W = bundle.measurements[m];
                t.segment(m * P, P) = bundle.pilots[m] - bases[m] * out.gains.row(m).transpose();
                for (Eigen::Index k = 0; k < l; ++k)
                {
                    const cplx xi = out.gains(m, k);
                    P_az.block(m * P, k, P, 1) = W.adjoint() * (xi * az_scale[k] * derivs[k].d_az);
                    P_r.block(m * P, k, P, 1) = W.adjoint() * (xi * r_scale[k] * derivs[k].d_inv_range);
                }
                if (opts.project_derivatives)
                {
                    const Eigen::HouseholderQR<CMat> qr(bases[m]);
                    const CMat Q = qr.householderQ() * CMat::Identity(P, std::min<Eigen::Index>(l, P));
                    auto pa = P_az.middleRows(m * P, P);
                    auto pr = P_r.middleRows(m * P, P);
                    pa -= Q * (Q.adjoint() * pa);
                    pr -= Q * (Q.adjoint() * pr);
                }
            }

            if (numerical_rank(P_az, opts.pinv_tolerance) == 0 && numerical_rank(P_r, opts.pinv_tolerance) == 0)
            {
                ++out.singular;
                continue;
            }
            RVec eta_az, eta_r;
            if (opts.solve == RefineSolve::Separate)
            {
                eta_az = pinv_solve(P_az, t, opts.pinv_tolerance).real();
                eta_r = pinv_solve(P_r, t, opts.pinv_tolerance).real();
            }
            else
            {
                RMat A(2 * M * P, 2 * l);
                A << P_az.real(), P_r.real(), P_az.imag(), P_r.imag();
                RVec b(2 * M * P);
                b << t.real(), t.imag();
                Eigen::JacobiSVD<RMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
                svd.setThreshold(opts.pinv_tolerance);
                const RVec eta = svd.solve(b);
                eta_az = eta.head(l);
                eta_r = eta.tail(l);
            }

            RVec new_az(l), new_r(l);
            std::vector<CMat> new_bases;
            CMat new_gains;
            double new_objective = 0.0;
            double step = 1.0;
            for (int attempt = 0;; ++attempt)
            {
                for (Eigen::Index k = 0; k < l; ++k)
                {
                    new_az[k] = std::clamp(out.az_cosines[k] + step * eta_az[k] * az_scale[k], -1.0, 1.0);
                    new_r[k] = std::clamp(out.inverse_ranges[k] + step * eta_r[k] * r_scale[k], 0.0,
                                          opts.inverse_range_max);
                }
                new_bases = support_bases(geom, bundle, new_az, new_r);
                new_gains = solve_support_gains(new_bases, bundle, opts.pinv_tolerance);
                new_objective = stacked_residual(new_bases, bundle, new_gains);
                if (!opts.step_guard || new_objective <= objective || attempt >= opts.backtracking)
                    break;
                step *= 0.5;
            }

            if (opts.step_guard && !(new_objective <= objective))
            {
                ++out.rejected;
                break;
            }
            out.az_cosines = std::move(new_az);
            out.inverse_ranges = std::move(new_r);
            out.gains = std::move(new_gains);
            bases = std::move(new_bases);
            objective = new_objective;
            out.objective_history.push_back(objective);
            ++out.accepted;
        }
        return out;
    }

    DolsResult og_dols(const EstimationContext &ctx, const MeasurementBundle &bundle, int sparsity,
                       const RefineOptions &refine)
    {
        bundle.validate();
        const int M = bundle.num_microstrips();
        const PolarGrid &grid = ctx.grid();
        if (sparsity < 1 || sparsity > grid.columns())
            throw DomainError("og_dols: sparsity must satisfy 1 <= L <= dictionary columns");

        DolsResult out;
        std::vector<bool> available(grid.columns(), true);
        std::vector<CMat> bases(M, CMat(bundle.num_pilots(), 0));
        out.az_cosines.resize(0);
        out.inverse_ranges.resize(0);
        out.gains.resize(M, 0);

        double initial = 0.0;
        for (const auto &y : bundle.pilots)
            initial += y.squaredNorm();
        out.residual_history.push_back(initial);

        for (int l = 0; l < sparsity; ++l)
        {
            const DolsSelection sel = dols_select(ctx, bundle, bases, available);
            available[sel.column] = false;
            out.columns.push_back(sel.column);

            const Eigen::Index k = out.az_cosines.size();
            out.az_cosines.conservativeResize(k + 1);
            out.inverse_ranges.conservativeResize(k + 1);
            out.az_cosines[k] = grid.az_cosine(sel.column);
            out.inverse_ranges[k] = grid.inverse_range(sel.column);

            bases = support_bases(ctx.geometry(), bundle, out.az_cosines, out.inverse_ranges);
            out.gains = solve_support_gains(bases, bundle, refine.pinv_tolerance);

            if (refine.iterations > 0)
            {
                RefineResult r = og_refine(ctx.geometry(), bundle, out.az_cosines, out.inverse_ranges, out.gains, refine);
                out.az_cosines = r.az_cosines;
                out.inverse_ranges = r.inverse_ranges;
                out.gains = r.gains;
                bases = support_bases(ctx.geometry(), bundle, out.az_cosines, out.inverse_ranges);
                out.refinements.push_back(std::move(r));
            }
            out.residual_history.push_back(stacked_residual(bases, bundle, out.gains));
        }
        return out;
    }

    std::string_view to_string(ElRefine r)
    {
        switch (r)
        {
        case ElRefine::None:
            return "none";
        case ElRefine::Parabolic:
            return "parabolic";
        case ElRefine::Local:
            return "local";
        }
        return "?";
    }

    ElRefine el_refine_from_string(std::string_view name)
    {
        if (name == "none")
            return ElRefine::None;
        if (name == "parabolic")
            return ElRefine::Parabolic;
        if (name == "local")
            return ElRefine::Local;
        throw ConfigError("unknown EL refinement '" + std::string(name) + "'");
    }

    std::vector<double> estimate_el(const CMat &Z, const std::vector<double> &el_grid, int M, double spacing,
                                    double wavelength, ElRefine refine)
    {
        if (Z.rows() != M || Z.cols() < 1)
            throw ShapeError("estimate_el: Z must be M x L with L >= 1");
        if (el_grid.empty())
            throw DomainError("estimate_el: empty EL grid");

        std::vector<CVec> atoms;
        atoms.reserve(el_grid.size());
        for (double v : el_grid)
            atoms.push_back(steering_el(v, M, spacing, wavelength));

        std::vector<double> out;
        out.reserve(Z.cols());
        for (Eigen::Index l = 0; l < Z.cols(); ++l)
        {
            const CVec z = Z.col(l);
            if (z.squaredNorm() == 0.0)
                throw NumericalError("estimate_el: all-zero gain column has no direction");
            std::vector<double> corr(el_grid.size());
            std::size_t best = 0;
            for (std::size_t i = 0; i < el_grid.size(); ++i)
            {
                corr[i] = std::abs(atoms[i].dot(z));
                if (corr[i] > corr[best])
                    best = i;
            }
            double est = el_grid[best];
            if (refine == ElRefine::Parabolic && best > 0 && best + 1 < el_grid.size())
            {
                const double lo = corr[best - 1], mid = corr[best], hi = corr[best + 1];
                const double curvature = lo - 2.0 * mid + hi;
                if (curvature < 0.0)
                {
                    const double h = (el_grid[best + 1] - el_grid[best - 1]) / 2.0;
                    est = std::clamp(el_grid[best] + h * (lo - hi) / (2.0 * curvature), -1.0, 1.0);
                }
            }
            else if (refine == ElRefine::Local && el_grid.size() > 1)
            {
                auto f = [&](double v) { return std::abs(steering_el(v, M, spacing, wavelength).dot(z)); };
                double a = std::max(-1.0, best > 0 ? el_grid[best - 1] : el_grid[best]);
                double b = std::min(1.0, best + 1 < el_grid.size() ? el_grid[best + 1] : el_grid[best]);
                const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
                double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
                double f1 = f(x1), f2 = f(x2);
                while (b - a > 1e-9)
                {
                    if (f1 < f2)
                    {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + ratio * (b - a);
                        f2 = f(x2);
                    }
                    else
                    {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - ratio * (b - a);
                        f1 = f(x1);
                    }
                }
                const double cand = 0.5 * (a + b);
                if (f(cand) >= corr[best])
                    est = cand;
            }
            out.push_back(est);
        }
        return out;
    }

    FullEstimate reconstruct(const ArrayGeometry &geom, const MeasurementBundle &bundle,
                             const std::vector<SourceParams> &params, const CVec *truth, const ReconstructOptions &opts)
    {
        bundle.validate();
        if (params.empty())
            throw DomainError("reconstruct: parameter list is empty");
        const int M = bundle.num_microstrips();
        const int N = geom.elements_per_microstrip;
        const int P = bundle.num_pilots();
        if (M != geom.num_microstrips || bundle.elements_per_microstrip() != N)
            throw ShapeError("reconstruct: bundle does not match the array geometry");
        const int L = static_cast<int>(params.size());
        const double scale = std::sqrt(static_cast<double>(M) * N / L);
        const WavefrontModel model =
            opts.atoms == JointAtoms::Spherical ? WavefrontModel::Spherical : WavefrontModel::Oblong;

        CMat G(M * N, L);
        for (int l = 0; l < L; ++l)
            G.col(l) = manifold(geom, params[l], model);

        CMat A(M * P, L);
        CVec y(M * P);
        for (int m = 0; m < M; ++m)
        {
            A.block(m * P, 0, P, L) = scale * (bundle.measurements[m].adjoint() * G.block(m * N, 0, N, L));
            y.segment(m * P, P) = bundle.pilots[m];
        }

        FullEstimate out;
        out.params = params;
        out.rank_deficient = numerical_rank(A, opts.pinv_tolerance) < L;
        out.gains = pinv_solve(A, y, opts.pinv_tolerance);
        out.channel = scale * (G * out.gains);
        out.nmse = truth ? nmse(out.channel, *truth) : std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    std::string_view to_string(Estimator e)
    {
        switch (e)
        {
        case Estimator::OracleLs:
            return "oracle-ls";
        case Estimator::ElAzJe:
            return "el-az-je";
        case Estimator::AzIe:
            return "az-ie";
        case Estimator::ElAzDe:
            return "el-az-de";
        case Estimator::OgElAzDe:
            return "og-el-az-de";
        }
        return "unknown";
    }

    Estimator estimator_from_string(std::string_view name)
    {
        for (Estimator e : {Estimator::OracleLs, Estimator::ElAzJe, Estimator::AzIe, Estimator::ElAzDe,
                            Estimator::OgElAzDe})
            if (name == to_string(e))
                return e;
        throw ConfigError("unknown estimator '" + std::string(name) + "'");
    }

    FullEstimate el_az_je(const EstimationContext &ctx, const MeasurementBundle &bundle, const EstimatorConfig &cfg,
                          const CVec *truth)
    {
        bundle.validate();
        const ArrayGeometry &geom = ctx.geometry();
        const int M = bundle.num_microstrips();
        const int P = bundle.num_pilots();
        const JointDictionary dict(geom, JointGrid{ctx.el_grid(), ctx.grid()}, cfg.joint_atoms);
        const std::int64_t Gbar = dict.columns();
        const std::uint64_t bytes = static_cast<std::uint64_t>(M) * P * static_cast<std::uint64_t>(Gbar) * sizeof(cplx);
        if (bytes > cfg.memory_budget)
            throw CapacityError("el_az_je: measured joint dictionary does not fit the memory budget", bytes,
                                cfg.memory_budget);

        // W~^H Gbar, built column-block-wise. Oblong atoms factor as a_m(vartheta) * (W_m^H b).
        const int G = ctx.grid().columns();
        CMat A(M * P, Gbar);
        if (cfg.joint_atoms == JointAtoms::Oblong)
        {
            for (std::size_t e = 0; e < ctx.el_grid().size(); ++e)
            {
                const CVec a = steering_el(ctx.el_grid()[e], M, geom.spacing, geom.wavelength);
                for (int m = 0; m < M; ++m)
                    A.block(m * P, static_cast<Eigen::Index>(e) * G, P, G) = a[m] * ctx.projected(m);
            }
        }
        else
        {
            const int N = geom.elements_per_microstrip;
            for (std::int64_t c = 0; c < Gbar; ++c)
            {
                const CVec g = dict.column(c);
                for (int m = 0; m < M; ++m)
                    A.block(m * P, c, P, 1) = bundle.measurements[m].adjoint() * g.segment(m * N, N);
            }
        }

        CVec y(M * P);
        for (int m = 0; m < M; ++m)
            y.segment(m * P, P) = bundle.pilots[m];

        const OlsResult ols = ols_recover(y, A, cfg.sparsity);
        std::vector<SourceParams> params;
        for (auto c : ols.support)
            params.push_back(dict.parameters(c));
        FullEstimate out = reconstruct(geom, bundle, params, truth, {cfg.joint_atoms});
        out.supports.push_back(ols.support);
        return out;
    }

    FullEstimate az_ie(const EstimationContext &ctx, const MeasurementBundle &bundle, const EstimatorConfig &cfg,
                       const CVec *truth)
    {
        bundle.validate();
        const int M = bundle.num_microstrips();
        const int N = ctx.geometry().elements_per_microstrip;
        FullEstimate out;
        out.channel = CVec::Zero(static_cast<Eigen::Index>(M) * N);
        for (int m = 0; m < M; ++m)
        {
            const OlsResult ols = ols_recover(bundle.pilots[m], ctx.projected(m), cfg.sparsity);
            CVec h_m = CVec::Zero(N);
            for (std::size_t i = 0; i < ols.support.size(); ++i)
                h_m += ols.coefficients[static_cast<Eigen::Index>(i)] * ctx.az_dictionary().col(ols.support[i]);
            out.channel.segment(static_cast<Eigen::Index>(m) * N, N) = h_m;
            out.supports.push_back(ols.support);
        }
        out.nmse = truth ? nmse(out.channel, *truth) : std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    FullEstimate el_az_de(const EstimationContext &ctx, const MeasurementBundle &bundle, const EstimatorConfig &cfg,
                          const CVec *truth)
    {
        const ArrayGeometry &geom = ctx.geometry();
        RefineOptions refine;
        refine.iterations = cfg.refine_iterations;
        refine.solve = cfg.refine_solve;
        refine.backtracking = cfg.refine_backtracking;
        refine.project_derivatives = cfg.refine_projected;
        refine.inverse_range_max = 1.0 / cfg.range_min_clamp;
        refine.angle_step = ctx.grid().angle_spacing();
        refine.inverse_range_step = ctx.grid().inverse_range_spacing();

        DolsResult dols = og_dols(ctx, bundle, cfg.sparsity, refine);
        if (cfg.refine_noise_gate > 0.0 && refine.iterations > 0)
        {
            RefineOptions plain = refine;
            plain.iterations = 0;
            DolsResult base = og_dols(ctx, bundle, cfg.sparsity, plain);
            double w2 = 0.0;
            for (const auto &W : bundle.measurements)
                w2 += W.squaredNorm();
            const double s2 = bundle.noise_variance * w2 / static_cast<double>(bundle.measurements.size() *
                                                                             bundle.measurements.front().cols());
            const double gain = base.residual_history.back() - dols.residual_history.back();
            if (!(gain > cfg.refine_noise_gate * cfg.sparsity * s2))
                dols = std::move(base);
        }
        const std::vector<double> el =
            estimate_el(dols.gains, ctx.el_grid(), geom.num_microstrips, geom.spacing, geom.wavelength, cfg.el_refine);

        std::vector<SourceParams> params;
        for (int l = 0; l < cfg.sparsity; ++l)
        {
            const double R = dols.inverse_ranges[l];
            params.push_back({el[l], dols.az_cosines[l], R > 0.0 ? 1.0 / R : std::numeric_limits<double>::infinity()});
        }
        FullEstimate out = reconstruct(geom, bundle, params, truth, {cfg.reconstruction_atoms});
        out.supports.emplace_back(dols.columns.begin(), dols.columns.end());
        return out;
    }

    FullEstimate oracle_ls(const ArrayGeometry &geom, const MeasurementBundle &bundle, const PathSet &paths,
                           const CVec *truth, const ReconstructOptions &opts)
    {
        paths.validate();
        std::vector<SourceParams> params;
        for (const auto &p : paths.paths)
            params.push_back(p.source);
        return reconstruct(geom, bundle, params, truth, opts);
    }

    FullEstimate run_estimator(Estimator e, const EstimationContext &ctx, const MeasurementBundle &bundle,
                               const EstimatorConfig &cfg, const PathSet &true_paths, const CVec *truth)
    {
        switch (e)
        {
        case Estimator::OracleLs:
            return oracle_ls(ctx.geometry(), bundle, true_paths, truth, {cfg.reconstruction_atoms});
        case Estimator::ElAzJe:
            return el_az_je(ctx, bundle, cfg, truth);
        case Estimator::AzIe:
            return az_ie(ctx, bundle, cfg, truth);
        case Estimator::ElAzDe:
        {
            EstimatorConfig plain = cfg;
            plain.refine_iterations = 0;
            return el_az_de(ctx, bundle, plain, truth);
        }
        case Estimator::OgElAzDe:
            return el_az_de(ctx, bundle, cfg, truth);
        }
        throw ConfigError("unhandled estimator");
    }
}
