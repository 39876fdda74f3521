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

#ifndef XLDMA_HARNESS_HPP
#define XLDMA_HARNESS_HPP

#include "xldma/estimators.hpp"
#include "xldma/io.hpp"
#include "xldma/mmo.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace xldma
{
    struct ModelErrorSettings
    {
        int M = 8;
        int N = 128;
        SourceParams source{0.25, 0.25, 3.0};
    };

    struct BeamGainSettings
    {
        int M = 8;
        int N = 128;
        double el_cosine = 0.25;
        double az_cosine = 0.25;
        double range_min = 1.0;
        double range_max = 100.0;
        int points = 60; // log-spaced ranges
    };

    struct TimingSettings
    {
        std::vector<int> sizes{32, 64, 128, 256};
        double snr_db = 12.0;
        int trials = 20;
    };

    struct CoherenceSettings
    {
        std::vector<std::string> modes{"dma-mmo", "pa-mmo", "dma-random", "pa-random", "gaussian"};
        int seeds = 50;
    };

    // Every default reproduces the desk-scale simulation setting, so an empty config is a valid run.
    struct ExperimentConfig
    {
        double carrier_hz = 28e9;
        double spacing = 0.0; // 0 means lambda / 2
        int M = 4;
        int N = 128;
        int P = 20;
        std::vector<double> snr_db{-20, -16, -12, -8, -4, 0, 4, 8, 12};
        int trials = 200;
        std::uint64_t seed = 1;
        int threads = 1;

        WavefrontModel channel_model = WavefrontModel::Spherical;
        PathSampling paths;

        int angle_samples = 0; // G_a; 0 means 2N
        int range_samples = 20; // R
        double range_min = 5.0;
        double range_max = 100.0;

        std::string design = "dma-mmo";
        std::string design_file;                  // load a saved design instead of optimizing
        std::string design_dictionary = "angle_only"; // B used by the MMO: angle_only (2N) or polar (2N R)
        DesignOptions design_options;
        double attenuation = 0.0;      // alpha_m for every microstrip
        double guide_wavenumber = 0.0; // beta_m; 0 means 2 pi / lambda

        std::vector<Estimator> estimators{Estimator::OracleLs, Estimator::ElAzJe, Estimator::AzIe, Estimator::ElAzDe,
                                          Estimator::OgElAzDe};
        EstimatorConfig estimator;
        bool record_wall_time = false; // wall times make the nmse CSV non-reproducible

        ModelErrorSettings model_error;
        BeamGainSettings beam_gain;
        TimingSettings timing;
        CoherenceSettings coherence;

        double wavelength() const { return kSpeedOfLight / carrier_hz; }
        ArrayGeometry geometry(int M, int N) const;
        ArrayGeometry geometry() const { return geometry(M, N); }
        DmaHardware hardware(const ArrayGeometry &geom) const;
        PolarGrid estimation_grid(int N) const;
        void validate() const; // throws ConfigError
    };

    // JSON text; unknown keys are rejected so typos surface as config errors.
    ExperimentConfig config_from_json(const std::string &text);
    ExperimentConfig load_config(const std::filesystem::path &path); // throws ConfigError

    struct NmseRow
    {
        std::string experiment;
        std::string design;
        std::string estimator;
        int M = 0;
        int N = 0;
        int P = 0;
        double snr_db = 0.0;
        int trial = 0;
        double nmse = 0.0;
        double wall_time = 0.0;
        std::uint64_t seed = 0; // per-trial stream seed
    };

    struct ModelErrorRow
    {
        int element = 0;
        int m = 0;
        int n = 0;
        std::array<double, 4> distance{}; // spherical, taylor2, oblong, planar
    };

    struct BeamGainRow
    {
        double range = 0.0;
        std::array<double, 4> gain{}; // each model against the spherical manifold
    };

    struct CoherenceRow
    {
        std::string mode;
        int seed_index = 0;
        std::uint64_t seed = 0;
        std::string solver;
        double coherence = 0.0;
        double scale_optimal = 0.0;
    };

    struct TimingSummaryRow
    {
        std::string estimator;
        int N = 0;
        double median_wall_time = 0.0;
    };

    // Seed of the sweep's measurement design.
    std::uint64_t design_seed(std::uint64_t master);
    // Seed of one (SNR index, trial) cell.
    std::uint64_t trial_seed(std::uint64_t master, int snr_index, int trial);

    // Loads cfg.design_file when set, otherwise optimizes a design for cfg.design.
    MeasurementDesign experiment_design(const ExperimentConfig &cfg, const ArrayGeometry &geom);

    // Runs one trial of the NMSE sweep on a prepared context; rows for every configured estimator.
    std::vector<NmseRow> run_nmse_trial(const ExperimentConfig &cfg, const EstimationContext &ctx,
                                        const MeasurementDesign &design, int snr_index, int trial);

    // Rows are canonical (SNR, trial, estimator) order. When sink is given, rows are streamed to it as soon
    // as every earlier cell has finished.
    std::vector<NmseRow> run_nmse_sweep(const ExperimentConfig &cfg, CsvWriter *sink = nullptr);
    std::vector<ModelErrorRow> run_model_error(const ExperimentConfig &cfg);
    std::vector<BeamGainRow> run_beam_gain(const ExperimentConfig &cfg);
    std::vector<NmseRow> run_timing(const ExperimentConfig &cfg);
    std::vector<TimingSummaryRow> summarize_timing(const std::vector<NmseRow> &rows);
    std::vector<CoherenceRow> run_coherence(const ExperimentConfig &cfg);

    std::vector<std::string> nmse_header();
    std::vector<std::string> nmse_fields(const NmseRow &row);
    void write_nmse_csv(const std::filesystem::path &path, const std::vector<NmseRow> &rows);
    void write_model_error_csv(const std::filesystem::path &path, const std::vector<ModelErrorRow> &rows);
    void write_beam_gain_csv(const std::filesystem::path &path, const std::vector<BeamGainRow> &rows);
    void write_timing_summary_csv(const std::filesystem::path &path, const std::vector<TimingSummaryRow> &rows);
    void write_coherence_csv(const std::filesystem::path &path, const std::vector<CoherenceRow> &rows);

    // Runs fn(i) for i in [0, count) on up to `threads` workers; the first exception is rethrown.
    template <typename Fn>
    void parallel_for(int count, int threads, Fn &&fn);

    double median(std::vector<double> values);
}

#include "xldma/detail/parallel.hpp"

#endif
