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

#include "xldma/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace xldma
{
    namespace
    {
        using json = nlohmann::json;

        constexpr std::uint64_t kDesignStream = 0x64657369676eull;
        constexpr std::uint64_t kTimingStream = 0x74696d696e67ull;
        constexpr std::uint64_t kCoherenceStream = 0x636f68657265ull;

        // Reads typed fields from one JSON object and rejects keys nobody asked for.
        class Section
        {
        public:
            Section(const json &obj, std::string name) : obj_(obj), name_(std::move(name))
            {
                if (!obj_.is_object())
                    throw ConfigError("config: '" + name_ + "' must be an object");
            }

            template <typename T>
            void read(const char *key, T &out)
            {
                seen_.insert(key);
                auto it = obj_.find(key);
                if (it == obj_.end())
                    return;
                try
                {
                    out = it->template get<T>();
                }
                catch (const json::exception &)
                {
                    throw ConfigError("config: bad value for '" + qualified(key) + "'");
                }
            }

            bool has(const char *key) const { return obj_.contains(key); }

            Section sub(const char *key)
            {
                seen_.insert(key);
                static const json empty = json::object();
                auto it = obj_.find(key);
                return Section(it == obj_.end() ? empty : *it, qualified(key));
            }

            void finish() const
            {
                for (auto it = obj_.begin(); it != obj_.end(); ++it)
                    if (!seen_.count(it.key()))
                        throw ConfigError("config: unknown key '" + qualified(it.key().c_str()) + "'");
            }

        private:
            std::string qualified(const char *key) const { return name_.empty() ? key : name_ + "." + key; }

            const json &obj_;
            std::string name_;
            std::set<std::string> seen_;
        };

        JointAtoms joint_atoms_from_string(const std::string &s)
        {
            if (s == "oblong")
                return JointAtoms::Oblong;
            if (s == "spherical")
                return JointAtoms::Spherical;
            throw ConfigError("config: joint atoms must be 'oblong' or 'spherical'");
        }

        std::string format_seed(std::uint64_t s) { return std::to_string(s); }
    }

    ArrayGeometry ExperimentConfig::geometry(int M_, int N_) const
    {
        ArrayGeometry g = ArrayGeometry::from_frequency(M_, N_, carrier_hz);
        if (spacing > 0.0)
            g.spacing = spacing;
        return g;
    }

    DmaHardware ExperimentConfig::hardware(const ArrayGeometry &geom) const
    {
        DmaHardware hw = DmaHardware::lossless(geom);
        hw.attenuation.setConstant(attenuation);
        if (guide_wavenumber > 0.0)
            hw.guide_wavenumber.setConstant(guide_wavenumber);
        return hw;
    }

    PolarGrid ExperimentConfig::estimation_grid(int N_) const
    {
        return PolarGrid::uniform(angle_samples > 0 ? angle_samples : 2 * N_, range_samples, range_min, range_max);
    }

    void ExperimentConfig::validate() const
    {
        auto require = [](bool ok, const std::string &what) {
            if (!ok)
                throw ConfigError("config: " + what);
        };
        require(carrier_hz > 0.0 && std::isfinite(carrier_hz), "carrier_hz must be positive");
        require(spacing >= 0.0, "spacing must be >= 0");
        require(M >= 1 && N >= 1 && P >= 1, "M, N, P must be >= 1");
        require(!snr_db.empty(), "snr_db must not be empty");
        require(trials >= 1, "trials must be >= 1");
        require(threads >= 1, "threads must be >= 1");
        require(paths.num_paths >= 1, "L must be >= 1");
        require(paths.range_min > 0.0 && paths.range_min <= paths.range_max, "paths range must satisfy 0 < min <= max");
        require(paths.cosine_min >= -1.0 && paths.cosine_min <= paths.cosine_max && paths.cosine_max <= 1.0,
                "paths cosine bounds must lie in [-1, 1]");
        require(angle_samples >= 0, "angle_samples must be >= 0");
        require(range_samples >= 1, "range_samples must be >= 1");
        require(range_min > 0.0 && range_min <= range_max, "dictionary range must satisfy 0 < min <= max");
        require(design_dictionary == "angle_only" || design_dictionary == "polar",
                "design_dictionary must be 'angle_only' or 'polar'");
        const DesignMode mode = design_mode_from_string(design);
        const int gbar = design_dictionary == "polar" ? estimation_grid(N).columns()
                                                      : (angle_samples > 0 ? angle_samples : 2 * N);
        require(mode.method != DesignMethod::Optimized || P <= gbar, "optimized designs need P <= gbar");
        require(design_options.power_draws >= 1, "design_options.power_draws must be >= 1");
        require(design_options.coordinate_descent.sweeps >= 1, "design_options.sweeps must be >= 1");
        require(attenuation >= 0.0, "attenuation must be >= 0");
        require(guide_wavenumber >= 0.0, "guide_wavenumber must be >= 0");
        require(!estimators.empty(), "estimators must not be empty");
        require(estimator.sparsity >= 1 && estimator.sparsity <= P, "estimator.sparsity must be in [1, P]");
        require(estimator.refine_iterations >= 0, "estimator.refine_iterations must be >= 0");
        require(estimator.refine_backtracking >= 0, "estimator.refine_backtracking must be >= 0");
        require(estimator.refine_noise_gate >= 0.0, "estimator.refine_noise_gate must be >= 0");
        require(estimator.range_min_clamp > 0.0, "estimator.range_min_clamp must be positive");
        require(model_error.M >= 1 && model_error.N >= 1, "model_error.M, N must be >= 1");
        require(beam_gain.M >= 1 && beam_gain.N >= 1, "beam_gain.M, N must be >= 1");
        require(beam_gain.points >= 2 && beam_gain.range_min > 0.0 && beam_gain.range_min < beam_gain.range_max,
                "beam_gain needs points >= 2 and 0 < range_min < range_max");
        require(!timing.sizes.empty() && timing.trials >= 1, "timing needs sizes and trials >= 1");
        for (int n : timing.sizes)
            require(n >= 1 && P <= 2 * n, "timing sizes must be >= 1 and allow P <= 2N");
        require(coherence.seeds >= 1 && !coherence.modes.empty(), "coherence needs seeds >= 1 and modes");
        for (const auto &m : coherence.modes)
            design_mode_from_string(m);
        model_error.source.validate();
    }

    ExperimentConfig config_from_json(const std::string &text)
    {
        json root;
        try
        {
            root = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }

        ExperimentConfig cfg;
        Section top(root, "");
        top.read("carrier_hz", cfg.carrier_hz);
        top.read("spacing", cfg.spacing);
        top.read("M", cfg.M);
        top.read("N", cfg.N);
        top.read("P", cfg.P);
        int L = cfg.paths.num_paths;
        top.read("L", L);
        cfg.paths.num_paths = L;
        cfg.estimator.sparsity = L;
        top.read("snr_db", cfg.snr_db);
        top.read("trials", cfg.trials);
        top.read("seed", cfg.seed);
        top.read("threads", cfg.threads);
        std::string model = "spherical";
        top.read("channel_model", model);
        cfg.channel_model = wavefront_model_from_string(model);
        top.read("angle_samples", cfg.angle_samples);
        top.read("range_samples", cfg.range_samples);
        top.read("range_min", cfg.range_min);
        top.read("range_max", cfg.range_max);
        top.read("design", cfg.design);
        top.read("design_file", cfg.design_file);
        top.read("design_dictionary", cfg.design_dictionary);
        top.read("attenuation", cfg.attenuation);
        top.read("guide_wavenumber", cfg.guide_wavenumber);
        top.read("record_wall_time", cfg.record_wall_time);
        if (top.has("estimators"))
        {
            std::vector<std::string> names;
            top.read("estimators", names);
            cfg.estimators.clear();
            for (const auto &n : names)
                cfg.estimators.push_back(estimator_from_string(n));
        }

        {
            Section s = top.sub("paths");
            s.read("cosine_min", cfg.paths.cosine_min);
            s.read("cosine_max", cfg.paths.cosine_max);
            s.read("range_min", cfg.paths.range_min);
            s.read("range_max", cfg.paths.range_max);
            s.read("allow_nonphysical_cosines", cfg.paths.allow_nonphysical_cosines);
            s.finish();
        }
        {
            Section s = top.sub("estimator");
            s.read("sparsity", cfg.estimator.sparsity);
            s.read("refine_iterations", cfg.estimator.refine_iterations);
            std::string solve = "separate";
            s.read("refine_solve", solve);
            if (solve == "separate")
                cfg.estimator.refine_solve = RefineSolve::Separate;
            else if (solve == "joint")
                cfg.estimator.refine_solve = RefineSolve::Joint;
            else
                throw ConfigError("config: estimator.refine_solve must be 'separate' or 'joint'");
            s.read("refine_backtracking", cfg.estimator.refine_backtracking);
            s.read("refine_noise_gate", cfg.estimator.refine_noise_gate);
            s.read("refine_projected", cfg.estimator.refine_projected);
            std::string el_refine = "none";
            s.read("el_refine", el_refine);
            cfg.estimator.el_refine = el_refine_from_string(el_refine);
            std::string atoms = "oblong";
            s.read("joint_atoms", atoms);
            cfg.estimator.joint_atoms = joint_atoms_from_string(atoms);
            atoms = "oblong";
            s.read("reconstruction_atoms", atoms);
            cfg.estimator.reconstruction_atoms = joint_atoms_from_string(atoms);
            s.read("range_min_clamp", cfg.estimator.range_min_clamp);
            s.read("memory_budget", cfg.estimator.memory_budget);
            s.finish();
        }
        {
            Section s = top.sub("design_options");
            s.read("power_draws", cfg.design_options.power_draws);
            s.read("force_coordinate_descent", cfg.design_options.force_coordinate_descent);
            s.read("tight_frame_tol", cfg.design_options.tight_frame_tol);
            s.read("sweeps", cfg.design_options.coordinate_descent.sweeps);
            s.read("tol", cfg.design_options.coordinate_descent.tol);
            s.finish();
        }
        {
            Section s = top.sub("model_error");
            s.read("M", cfg.model_error.M);
            s.read("N", cfg.model_error.N);
            s.read("el_cosine", cfg.model_error.source.el_cosine);
            s.read("az_cosine", cfg.model_error.source.az_cosine);
            s.read("range", cfg.model_error.source.range);
            s.finish();
        }
        {
            Section s = top.sub("beam_gain");
            s.read("M", cfg.beam_gain.M);
            s.read("N", cfg.beam_gain.N);
            s.read("el_cosine", cfg.beam_gain.el_cosine);
            s.read("az_cosine", cfg.beam_gain.az_cosine);
            s.read("range_min", cfg.beam_gain.range_min);
            s.read("range_max", cfg.beam_gain.range_max);
            s.read("points", cfg.beam_gain.points);
            s.finish();
        }
        {
            Section s = top.sub("timing");
            s.read("sizes", cfg.timing.sizes);
            s.read("snr_db", cfg.timing.snr_db);
            s.read("trials", cfg.timing.trials);
            s.finish();
        }
        {
            Section s = top.sub("coherence");
            s.read("modes", cfg.coherence.modes);
            s.read("seeds", cfg.coherence.seeds);
            s.finish();
        }
        top.finish();
        cfg.validate();
        return cfg;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream is(path);
        if (!is)
            throw ConfigError("cannot read config " + path.string());
        std::stringstream ss;
        ss << is.rdbuf();
        return config_from_json(ss.str());
    }

    std::uint64_t design_seed(std::uint64_t master) { return derive_seed(master, {kDesignStream}); }

    std::uint64_t trial_seed(std::uint64_t master, int snr_index, int trial)
    {
        return derive_seed(master, {static_cast<std::uint64_t>(snr_index), static_cast<std::uint64_t>(trial)});
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw DomainError("median of an empty set");
        const std::size_t mid = values.size() / 2;
        std::nth_element(values.begin(), values.begin() + mid, values.end());
        const double hi = values[mid];
        if (values.size() % 2)
            return hi;
        return 0.5 * (hi + *std::max_element(values.begin(), values.begin() + mid));
    }

    namespace
    {
        CMat design_dictionary(const ExperimentConfig &cfg, const ArrayGeometry &geom)
        {
            const int N = geom.elements_per_microstrip;
            const PolarGrid grid = cfg.design_dictionary == "polar"
                                       ? cfg.estimation_grid(N)
                                       : PolarGrid::angle_only(cfg.angle_samples > 0 ? cfg.angle_samples : 2 * N);
            return build_az_dictionary(geom, grid);
        }

        MeasurementDesign optimize_design(const ExperimentConfig &cfg, const ArrayGeometry &geom, const CMat &B,
                                          const std::string &mode, std::uint64_t seed)
        {
            return make_design(design_mode_from_string(mode), cfg.hardware(geom), B, cfg.P, seed, cfg.design_options);
        }

        MeasurementBundle draw_bundle(const ExperimentConfig &cfg, const ArrayGeometry &geom,
                                      const MeasurementDesign &design, double snr_db, Rng &rng, PathSet &paths,
                                      CVec &h)
        {
            paths = sample_paths(rng, cfg.paths);
            h = synthesize_channel(paths, geom, cfg.channel_model);
            const double noise_variance = std::pow(10.0, -snr_db / 10.0);
            return measure_all(h, design.W, noise_variance, rng);
        }

        NmseRow timed_estimate(const ExperimentConfig &cfg, Estimator e, const EstimationContext &ctx,
                               const MeasurementBundle &bundle, const PathSet &paths, const CVec &h)
        {
            const auto t0 = std::chrono::steady_clock::now();
            const FullEstimate est = run_estimator(e, ctx, bundle, cfg.estimator, paths, &h);
            const auto t1 = std::chrono::steady_clock::now();
            if (!std::isfinite(est.nmse))
                throw NumericalError("non-finite NMSE from " + std::string(to_string(e)));
            NmseRow row;
            row.estimator = std::string(to_string(e));
            row.nmse = est.nmse;
            row.wall_time = std::chrono::duration<double>(t1 - t0).count();
            return row;
        }
    }

    MeasurementDesign experiment_design(const ExperimentConfig &cfg, const ArrayGeometry &geom)
    {
        if (!cfg.design_file.empty())
        {
            MeasurementDesign d = load_design(cfg.design_file);
            if (d.num_microstrips() != geom.num_microstrips || d.elements_per_microstrip() != geom.elements_per_microstrip ||
                d.num_pilots() != cfg.P)
                throw ConfigError("design file dimensions do not match the config (M, N, P)");
            return d;
        }
        return optimize_design(cfg, geom, design_dictionary(cfg, geom), cfg.design, design_seed(cfg.seed));
    }

    std::vector<NmseRow> run_nmse_trial(const ExperimentConfig &cfg, const EstimationContext &ctx,
                                        const MeasurementDesign &design, int snr_index, int trial)
    {
        const std::uint64_t seed = trial_seed(cfg.seed, snr_index, trial);
        Rng rng(seed);
        PathSet paths;
        CVec h;
        const double snr = cfg.snr_db.at(snr_index);
        const MeasurementBundle bundle = draw_bundle(cfg, ctx.geometry(), design, snr, rng, paths, h);
        std::vector<NmseRow> rows;
        for (Estimator e : cfg.estimators)
        {
            NmseRow row = timed_estimate(cfg, e, ctx, bundle, paths, h);
            row.experiment = "nmse";
            row.design = to_string(design.mode);
            row.M = ctx.geometry().num_microstrips;
            row.N = ctx.geometry().elements_per_microstrip;
            row.P = ctx.num_pilots();
            row.snr_db = snr;
            row.trial = trial;
            row.seed = seed;
            if (!cfg.record_wall_time)
                row.wall_time = 0.0;
            rows.push_back(std::move(row));
        }
        return rows;
    }

    std::vector<NmseRow> run_nmse_sweep(const ExperimentConfig &cfg, CsvWriter *sink)
    {
        cfg.validate();
        const ArrayGeometry geom = cfg.geometry();
        const MeasurementDesign design = experiment_design(cfg, geom);
        const EstimationContext ctx(geom, cfg.estimation_grid(cfg.N), design.W);

        const int cells = static_cast<int>(cfg.snr_db.size()) * cfg.trials;
        std::vector<std::vector<NmseRow>> results(cells);
        std::vector<bool> done(cells, false);
        int flushed = 0;
        std::mutex mutex;

        parallel_for(cells, cfg.threads, [&](int cell) {
            auto rows = run_nmse_trial(cfg, ctx, design, cell / cfg.trials, cell % cfg.trials);
            std::lock_guard lock(mutex);
            results[cell] = std::move(rows);
            done[cell] = true;
            if (!sink)
                return;
            while (flushed < cells && done[flushed])
            {
                for (const auto &r : results[flushed])
                    sink->row(nmse_fields(r));
                ++flushed;
            }
            sink->flush();
        });

        std::vector<NmseRow> out;
        for (auto &rows : results)
            for (auto &r : rows)
                out.push_back(std::move(r));
        return out;
    }

    std::vector<ModelErrorRow> run_model_error(const ExperimentConfig &cfg)
    {
        const ArrayGeometry geom = cfg.geometry(cfg.model_error.M, cfg.model_error.N);
        const std::array<WavefrontModel, 4> models{WavefrontModel::Spherical, WavefrontModel::Taylor2,
                                                   WavefrontModel::Oblong, WavefrontModel::Planar};
        std::vector<ModelErrorRow> rows;
        for (int m = 0; m < geom.num_microstrips; ++m)
            for (int n = 0; n < geom.elements_per_microstrip; ++n)
            {
                ModelErrorRow row;
                row.element = m * geom.elements_per_microstrip + n;
                row.m = m;
                row.n = n;
                for (std::size_t k = 0; k < models.size(); ++k)
                    row.distance[k] = element_distance(geom, cfg.model_error.source, models[k], m, n);
                rows.push_back(row);
            }
        return rows;
    }

    std::vector<BeamGainRow> run_beam_gain(const ExperimentConfig &cfg)
    {
        const BeamGainSettings &s = cfg.beam_gain;
        const ArrayGeometry geom = cfg.geometry(s.M, s.N);
        const std::array<WavefrontModel, 4> models{WavefrontModel::Spherical, WavefrontModel::Taylor2,
                                                   WavefrontModel::Oblong, WavefrontModel::Planar};
        std::vector<BeamGainRow> rows;
        const double lo = std::log(s.range_min), hi = std::log(s.range_max);
        for (int i = 0; i < s.points; ++i)
        {
            const double r = std::exp(lo + (hi - lo) * i / (s.points - 1));
            const SourceParams src{s.el_cosine, s.az_cosine, r};
            const CVec ref = manifold(geom, src, WavefrontModel::Spherical);
            BeamGainRow row;
            row.range = r;
            for (std::size_t k = 0; k < models.size(); ++k)
                row.gain[k] = beamforming_gain(ref, manifold(geom, src, models[k]));
            rows.push_back(row);
        }
        return rows;
    }

    std::vector<NmseRow> run_timing(const ExperimentConfig &cfg)
    {
        cfg.validate();
        std::vector<NmseRow> rows;
        for (int N : cfg.timing.sizes)
        {
            ExperimentConfig c = cfg;
            c.N = N;
            const ArrayGeometry geom = c.geometry();
            const MeasurementDesign design =
                optimize_design(c, geom, design_dictionary(c, geom), c.design, design_seed(c.seed));
            const EstimationContext ctx(geom, c.estimation_grid(N), design.W);
            for (int trial = 0; trial < cfg.timing.trials; ++trial)
            {
                const std::uint64_t seed =
                    derive_seed(cfg.seed, {kTimingStream, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(trial)});
                Rng rng(seed);
                PathSet paths;
                CVec h;
                const MeasurementBundle bundle = draw_bundle(c, geom, design, cfg.timing.snr_db, rng, paths, h);
                for (Estimator e : cfg.estimators)
                {
                    NmseRow row = timed_estimate(c, e, ctx, bundle, paths, h);
                    row.experiment = "timing";
                    row.design = to_string(design.mode);
                    row.M = c.M;
                    row.N = N;
                    row.P = c.P;
                    row.snr_db = cfg.timing.snr_db;
                    row.trial = trial;
                    row.seed = seed;
                    rows.push_back(std::move(row));
                }
            }
        }
        return rows;
    }

    std::vector<TimingSummaryRow> summarize_timing(const std::vector<NmseRow> &rows)
    {
        std::vector<std::pair<std::string, int>> order;
        std::map<std::pair<std::string, int>, std::vector<double>> groups;
        for (const auto &r : rows)
        {
            auto key = std::make_pair(r.estimator, r.N);
            if (!groups.count(key))
                order.push_back(key);
            groups[key].push_back(r.wall_time);
        }
        std::vector<TimingSummaryRow> out;
        for (const auto &key : order)
            out.push_back({key.first, key.second, median(groups[key])});
        return out;
    }

    std::vector<CoherenceRow> run_coherence(const ExperimentConfig &cfg)
    {
        cfg.validate();
        const ArrayGeometry geom = cfg.geometry();
        const CMat B = design_dictionary(cfg, geom);
        std::vector<CoherenceRow> rows(cfg.coherence.modes.size() * cfg.coherence.seeds);
        parallel_for(static_cast<int>(rows.size()), cfg.threads, [&](int i) {
            const int mode_idx = i / cfg.coherence.seeds;
            const int s = i % cfg.coherence.seeds;
            const std::uint64_t seed = derive_seed(cfg.seed, {kCoherenceStream, static_cast<std::uint64_t>(s)});
            const std::string &mode = cfg.coherence.modes[mode_idx];
            const MeasurementDesign d = optimize_design(cfg, geom, B, mode, seed);
            CoherenceRow row;
            row.mode = mode;
            row.seed_index = s;
            row.seed = seed;
            row.solver = d.solver;
            for (const CMat &W : d.W)
            {
                row.coherence += total_coherence(W, B).reduced / d.num_microstrips();
                row.scale_optimal += scale_optimal_coherence(W, B) / d.num_microstrips();
            }
            rows[i] = row;
        });
        return rows;
    }

    std::vector<std::string> nmse_header()
    {
        return {"experiment", "design", "estimator", "M", "N", "P", "snr_db", "trial", "nmse", "wall_time", "seed"};
    }

    std::vector<std::string> nmse_fields(const NmseRow &r)
    {
        return {r.experiment,          r.design,          r.estimator,         std::to_string(r.M),
                std::to_string(r.N),   std::to_string(r.P), format_double(r.snr_db), std::to_string(r.trial),
                format_double(r.nmse), format_double(r.wall_time), format_seed(r.seed)};
    }

    void write_nmse_csv(const std::filesystem::path &path, const std::vector<NmseRow> &rows)
    {
        CsvWriter w(path, nmse_header());
        for (const auto &r : rows)
            w.row(nmse_fields(r));
    }

    void write_model_error_csv(const std::filesystem::path &path, const std::vector<ModelErrorRow> &rows)
    {
        CsvWriter w(path, {"element", "m", "n", "spherical", "taylor2", "oblong", "planar"});
        for (const auto &r : rows)
            w.row({std::to_string(r.element), std::to_string(r.m), std::to_string(r.n), format_double(r.distance[0]),
                   format_double(r.distance[1]), format_double(r.distance[2]), format_double(r.distance[3])});
    }

    void write_beam_gain_csv(const std::filesystem::path &path, const std::vector<BeamGainRow> &rows)
    {
        CsvWriter w(path, {"range", "spherical", "taylor2", "oblong", "planar"});
        for (const auto &r : rows)
            w.row({format_double(r.range), format_double(r.gain[0]), format_double(r.gain[1]), format_double(r.gain[2]),
                   format_double(r.gain[3])});
    }

    void write_timing_summary_csv(const std::filesystem::path &path, const std::vector<TimingSummaryRow> &rows)
    {
        CsvWriter w(path, {"estimator", "N", "median_wall_time"});
        for (const auto &r : rows)
            w.row({r.estimator, std::to_string(r.N), format_double(r.median_wall_time)});
    }

    void write_coherence_csv(const std::filesystem::path &path, const std::vector<CoherenceRow> &rows)
    {
        CsvWriter w(path, {"mode", "seed_index", "seed", "solver", "coherence", "scale_optimal_coherence"});
        for (const auto &r : rows)
            w.row({r.mode, std::to_string(r.seed_index), format_seed(r.seed), r.solver, format_double(r.coherence),
                   format_double(r.scale_optimal)});
    }
}
