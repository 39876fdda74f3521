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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace
{
    struct Options
    {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<int> threads;
    };

    xldma::ExperimentConfig load(const Options &o)
    {
        xldma::ExperimentConfig cfg = xldma::load_config(o.config);
        if (o.seed)
            cfg.seed = *o.seed;
        if (o.trials)
        {
            cfg.trials = *o.trials;
            cfg.timing.trials = *o.trials;
        }
        if (o.threads)
            cfg.threads = *o.threads;
        cfg.validate();
        return cfg;
    }

    int run(const std::string &cmd, const Options &o)
    {
        namespace fs = std::filesystem;
        using namespace xldma;
        const ExperimentConfig cfg = load(o);
        const fs::path out = o.out;
        fs::create_directories(out);

        if (cmd == "model-error")
            write_model_error_csv(out / "model_error.csv", run_model_error(cfg));
        else if (cmd == "beam-gain")
            write_beam_gain_csv(out / "beam_gain.csv", run_beam_gain(cfg));
        else if (cmd == "nmse")
        {
            CsvWriter sink(out / "nmse.csv", nmse_header());
            run_nmse_sweep(cfg, &sink);
        }
        else if (cmd == "timing")
        {
            const auto rows = run_timing(cfg);
            write_nmse_csv(out / "timing.csv", rows);
            write_timing_summary_csv(out / "timing_summary.csv", summarize_timing(rows));
        }
        else if (cmd == "coherence")
            write_coherence_csv(out / "coherence.csv", run_coherence(cfg));
        else if (cmd == "design")
        {
            const MeasurementDesign d = experiment_design(cfg, cfg.geometry());
            save_design(out / "design", d);
            std::cout << "saved " << to_string(d.mode) << " design (" << d.solver << ") to "
                      << (out / "design").string() << "\n";
        }
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Near-field channel estimation experiments for XL dynamic metasurface antennas"};
    app.require_subcommand(1);
    Options o;
    const char *commands[][2] = {
        {"model-error", "Element distances under every wavefront model"},
        {"beam-gain", "Beamforming gain of each model against the spherical manifold"},
        {"nmse", "NMSE versus SNR Monte Carlo sweep"},
        {"timing", "Estimator wall time versus N"},
        {"coherence", "Total coherence of each measurement design"},
        {"design", "Optimize a measurement design and save it"},
    };
    std::string chosen;
    for (auto &c : commands)
    {
        CLI::App *sub = app.add_subcommand(c[0], c[1]);
        sub->add_option("--config", o.config, "JSON config file (defaults apply to missing keys)")->required();
        sub->add_option("--out", o.out, "Output directory")->required();
        sub->add_option("--seed", o.seed, "Master seed");
        sub->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->callback([&chosen, name = std::string(c[0])] { chosen = name; });
    }
    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        return run(chosen, o);
    }
    catch (const xldma::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const xldma::Error &e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
