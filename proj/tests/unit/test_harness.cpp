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

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

using namespace xldma;
namespace fs = std::filesystem;

namespace
{
    ExperimentConfig small_config()
    {
        ExperimentConfig cfg = config_from_json(R"({
            "M": 2, "N": 16, "P": 8, "L": 2, "snr_db": [0, 10], "trials": 3, "seed": 5,
            "range_samples": 4,
            "estimators": ["oracle-ls", "el-az-je", "az-ie", "el-az-de", "og-el-az-de"],
            "design_options": {"power_draws": 10}
        })");
        return cfg;
    }

    std::string read_all(const fs::path &p)
    {
        std::ifstream is(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(is), {}};
    }
}

TEST_CASE("harness: empty config gives the desk-scale defaults")
{
    const ExperimentConfig cfg = config_from_json("{}");
    CHECK(cfg.carrier_hz == 28e9);
    CHECK(cfg.N == 128);
    CHECK(cfg.M == 4);
    CHECK(cfg.P == 20);
    CHECK(cfg.paths.num_paths == 3);
    CHECK(cfg.estimator.sparsity == 3);
    CHECK(cfg.range_samples == 20);
    CHECK(cfg.trials == 200);
    CHECK(cfg.snr_db.front() == -20.0);
    CHECK(cfg.snr_db.back() == 12.0);
    CHECK(cfg.estimator.refine_iterations == 5);
    const ArrayGeometry g = cfg.geometry();
    CHECK(g.wavelength == doctest::Approx(kSpeedOfLight / 28e9));
    CHECK(g.spacing == doctest::Approx(g.wavelength / 2));
    const PolarGrid grid = cfg.estimation_grid(128);
    CHECK(grid.angles.size() == 256);
    CHECK(grid.inverse_ranges.size() == 20);
}

TEST_CASE("harness: config parsing")
{
    const ExperimentConfig cfg = config_from_json(R"({
        "L": 2, "channel_model": "oblong",
        "estimator": {"refine_iterations": 7, "refine_solve": "joint", "el_refine": "local",
                      "refine_noise_gate": 1.5, "refine_projected": true},
        "paths": {"allow_nonphysical_cosines": true},
        "timing": {"sizes": [16, 32]}
    })");
    CHECK(cfg.paths.num_paths == 2);
    CHECK(cfg.estimator.sparsity == 2);
    CHECK(cfg.channel_model == WavefrontModel::Oblong);
    CHECK(cfg.estimator.refine_iterations == 7);
    CHECK(cfg.estimator.refine_solve == RefineSolve::Joint);
    CHECK(cfg.estimator.el_refine == ElRefine::Local);
    CHECK(cfg.estimator.refine_noise_gate == 1.5);
    CHECK(cfg.estimator.refine_projected);
    CHECK(cfg.paths.allow_nonphysical_cosines);
    CHECK(cfg.timing.sizes == std::vector<int>{16, 32});
}

TEST_CASE("harness: config errors")
{
    CHECK_THROWS_AS(config_from_json("{"), ConfigError);
    CHECK_THROWS_AS(config_from_json("[]"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"trails": 3})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"trials": "many"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"trials": 0})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"estimators": ["omp"]})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"design": "dma"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"estimator": {"sparsity": 3, "foo": 1}})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"P": 300})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/xldma.json"), ConfigError);
}

TEST_CASE("harness: seeds are distinct per cell")
{
    std::set<std::uint64_t> seen;
    for (int s = 0; s < 9; ++s)
        for (int t = 0; t < 200; ++t)
            seen.insert(trial_seed(1, s, t));
    seen.insert(design_seed(1));
    CHECK(seen.size() == 9 * 200 + 1);
    CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
    CHECK(trial_seed(1, 2, 3) != trial_seed(2, 2, 3));
}

TEST_CASE("harness: NMSE sweep rows are canonical and reproducible")
{
    ExperimentConfig cfg = small_config();
    const auto a = run_nmse_sweep(cfg);
    REQUIRE(a.size() == 2 * 3 * 5);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].snr_db == cfg.snr_db[i / 15]);
        CHECK(a[i].trial == static_cast<int>((i / 5) % 3));
        CHECK(a[i].estimator == to_string(cfg.estimators[i % 5]));
        CHECK(a[i].nmse >= 0.0);
        CHECK(a[i].wall_time == 0.0);
        CHECK(a[i].design == "dma-mmo");
    }

    cfg.threads = 3;
    const auto b = run_nmse_sweep(cfg);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(b[i].nmse == a[i].nmse);
        CHECK(b[i].seed == a[i].seed);
    }
}

TEST_CASE("harness: a row's metadata reruns its trial in isolation")
{
    const ExperimentConfig cfg = small_config();
    const auto rows = run_nmse_sweep(cfg);
    const ArrayGeometry g = cfg.geometry();
    const MeasurementDesign design = experiment_design(cfg, g);
    const EstimationContext ctx(g, cfg.estimation_grid(cfg.N), design.W);
    const auto again = run_nmse_trial(cfg, ctx, design, 1, 2);
    REQUIRE(again.size() == 5);
    for (const auto &r : again)
    {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const NmseRow &x) {
            return x.snr_db == r.snr_db && x.trial == r.trial && x.estimator == r.estimator;
        });
        REQUIRE(it != rows.end());
        CHECK(it->nmse == r.nmse);
        CHECK(it->seed == r.seed);
    }
}

TEST_CASE("harness: noiseless oracle on an Oblong channel is exact")
{
    ExperimentConfig cfg = config_from_json(R"({
        "M": 2, "N": 16, "P": 16, "snr_db": [400], "trials": 4, "channel_model": "oblong",
        "estimators": ["oracle-ls"], "range_samples": 4, "design_options": {"power_draws": 5}
    })");
    for (const auto &r : run_nmse_sweep(cfg))
        CHECK(r.nmse < 1e-20);
}

TEST_CASE("harness: oracle bounds the estimators on most trials")
{
    ExperimentConfig cfg = small_config();
    cfg.trials = 20;
    cfg.snr_db = {10};
    const auto rows = run_nmse_sweep(cfg);
    int total = 0, ok = 0;
    for (std::size_t i = 0; i < rows.size(); i += 5)
        for (std::size_t k = 1; k < 5; ++k)
        {
            ++total;
            ok += rows[i].nmse <= rows[i + k].nmse;
        }
    CHECK(ok >= 0.95 * total);
}

TEST_CASE("harness: streamed CSV equals the batch writer output")
{
    const ExperimentConfig cfg = small_config();
    const fs::path dir = fs::temp_directory_path() / "xldma_harness_csv";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<NmseRow> rows;
    {
        CsvWriter sink(dir / "streamed.csv", nmse_header());
        rows = run_nmse_sweep(cfg, &sink);
    }
    write_nmse_csv(dir / "batch.csv", rows);
    const std::string streamed = read_all(dir / "streamed.csv");
    CHECK(streamed == read_all(dir / "batch.csv"));
    CHECK(streamed.substr(0, streamed.find('\n')) ==
          "experiment,design,estimator,M,N,P,snr_db,trial,nmse,wall_time,seed");
    fs::remove_all(dir);
}

TEST_CASE("harness: model error table")
{
    ExperimentConfig cfg;
    const auto rows = run_model_error(cfg);
    REQUIRE(rows.size() == 8u * 128u);
    for (double d : rows.front().distance)
        CHECK(d == rows.front().distance[0]);
    double planar = 0.0, oblong = 0.0;
    for (const auto &r : rows)
    {
        planar = std::max(planar, std::abs(r.distance[3] - r.distance[0]));
        oblong = std::max(oblong, std::abs(r.distance[2] - r.distance[0]));
    }
    CHECK(planar > oblong);
}

TEST_CASE("harness: beam gain table")
{
    ExperimentConfig cfg;
    cfg.beam_gain.range_min = 5.0;
    const auto rows = run_beam_gain(cfg);
    CHECK(rows.size() == 60);
    for (const auto &r : rows)
    {
        CHECK(r.gain[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.gain[2] >= 0.95);
    }
    // wider array, larger angles: minor degradation only
    cfg.beam_gain.M = 32;
    cfg.beam_gain.el_cosine = 0.5;
    cfg.beam_gain.az_cosine = 0.5;
    for (const auto &r : run_beam_gain(cfg))
        CHECK(r.gain[2] >= 0.9);
}

TEST_CASE("harness: coherence table is deterministic")
{
    ExperimentConfig cfg = config_from_json(R"({"N": 16, "P": 6, "M": 1,
        "coherence": {"seeds": 3, "modes": ["dma-mmo", "dma-random"]},
        "design_options": {"power_draws": 5}})");
    const auto a = run_coherence(cfg), b = run_coherence(cfg);
    REQUIRE(a.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].coherence == b[i].coherence);
        CHECK(a[i].scale_optimal <= a[i].coherence + 1e-9);
    }
}

TEST_CASE("harness: timing summary takes per-N medians")
{
    std::vector<NmseRow> rows;
    for (double t : {3.0, 1.0, 2.0})
        rows.push_back({"timing", "dma-mmo", "az-ie", 4, 32, 20, 12.0, 0, 0.1, t, 0});
    rows.push_back({"timing", "dma-mmo", "az-ie", 4, 64, 20, 12.0, 0, 0.1, 5.0, 0});
    const auto s = summarize_timing(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].N == 32);
    CHECK(s[0].median_wall_time == 2.0);
    CHECK(s[1].median_wall_time == 5.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}

TEST_CASE("harness: parallel_for covers every index and propagates errors")
{
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](int i) { hits[i]++; });
    for (auto &h : hits)
        CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](int i) {
                                     if (i == 7)
                                         throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("harness: saved design files are used by the sweep")
{
    ExperimentConfig cfg = small_config();
    const ArrayGeometry g = cfg.geometry();
    const fs::path dir = fs::temp_directory_path() / "xldma_harness_design";
    fs::remove_all(dir);
    save_design(dir, experiment_design(cfg, g));
    const auto direct = run_nmse_sweep(cfg);
    cfg.design_file = dir.string();
    const auto loaded = run_nmse_sweep(cfg);
    REQUIRE(loaded.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(loaded[i].nmse == direct[i].nmse);

    cfg.N = 32;
    CHECK_THROWS_AS(experiment_design(cfg, cfg.geometry()), ConfigError);
    fs::remove_all(dir);
}
