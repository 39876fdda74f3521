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

#include "xldma/channel.hpp"
#include "xldma/dictionaries.hpp"
#include "xldma/estimators.hpp"
#include "xldma/geometry.hpp"
#include "xldma/harness.hpp"
#include "xldma/mmo.hpp"
#include "xldma/random.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <tuple>

namespace py = pybind11;
using namespace xldma;

namespace
{
    using PathTuple = std::tuple<double, double, double, cplx>; // (el_cosine, az_cosine, range, gain)

    ArrayGeometry geometry(int M, int N, double wavelength)
    {
        ArrayGeometry g = ArrayGeometry::half_wavelength(M, N, wavelength);
        g.validate();
        return g;
    }

    PathSet to_paths(const std::vector<PathTuple> &paths)
    {
        PathSet set;
        for (const auto &[el, az, r, z] : paths)
            set.paths.push_back({{el, az, r}, z});
        set.validate();
        return set;
    }

    py::dict nmse_row(const NmseRow &r)
    {
        py::dict d;
        d["experiment"] = r.experiment;
        d["design"] = r.design;
        d["estimator"] = r.estimator;
        d["M"] = r.M;
        d["N"] = r.N;
        d["P"] = r.P;
        d["snr_db"] = r.snr_db;
        d["trial"] = r.trial;
        d["nmse"] = r.nmse;
        d["wall_time"] = r.wall_time;
        d["seed"] = r.seed;
        return d;
    }

    py::list nmse_rows(const std::vector<NmseRow> &rows)
    {
        py::list out;
        for (const auto &r : rows)
            out.append(nmse_row(r));
        return out;
    }
}

PYBIND11_MODULE(_xldma, m)
{
    m.doc() = "Near-field modeling and channel estimation for XL dynamic metasurface antennas";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<IndexError>(m, "GridIndexError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<DegenerateSupportError>(m, "DegenerateSupportError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    const double inf = std::numeric_limits<double>::infinity();

    // geometry
    m.def(
        "manifold",
        [](int M, int N, double wavelength, double el_cosine, double az_cosine, double range,
           const std::string &model) {
            return manifold(geometry(M, N, wavelength), {el_cosine, az_cosine, range},
                            wavefront_model_from_string(model));
        },
        py::arg("M"), py::arg("N"), py::arg("wavelength"), py::arg("el_cosine"), py::arg("az_cosine"),
        py::arg("range") = inf, py::arg("model") = "spherical",
        "Unit-norm array manifold of length M*N, microstrip index outer.");
    m.def("steering_el", &steering_el, py::arg("el_cosine"), py::arg("M"), py::arg("spacing"),
          py::arg("wavelength"));
    m.def("steering_az", &steering_az, py::arg("az_cosine"), py::arg("range"), py::arg("N"), py::arg("spacing"),
          py::arg("wavelength"));
    m.def(
        "steering_az_derivatives",
        [](double az, double inv_range, int N, double spacing, double wavelength) {
            const SteeringDerivatives d = steering_az_derivatives(az, inv_range, N, spacing, wavelength);
            return py::make_tuple(d.d_az, d.d_inv_range);
        },
        py::arg("az_cosine"), py::arg("inv_range"), py::arg("N"), py::arg("spacing"), py::arg("wavelength"),
        "(d b / d az_cosine, d b / d inverse range)");
    m.def("beamforming_gain", &beamforming_gain, py::arg("g_ref"), py::arg("g_test"));

    // channel
    m.def(
        "sample_paths",
        [](std::uint64_t seed, int num_paths, double range_min, double range_max) {
            Rng rng(seed);
            PathSampling opts;
            opts.num_paths = num_paths;
            opts.range_min = range_min;
            opts.range_max = range_max;
            std::vector<PathTuple> out;
            for (const Path &p : sample_paths(rng, opts).paths)
                out.emplace_back(p.source.el_cosine, p.source.az_cosine, p.source.range, p.gain);
            return out;
        },
        py::arg("seed"), py::arg("num_paths") = 3, py::arg("range_min") = 5.0, py::arg("range_max") = 100.0,
        "Random paths as (el_cosine, az_cosine, range, gain) tuples.");
    m.def(
        "synthesize_channel",
        [](int M, int N, double wavelength, const std::vector<PathTuple> &paths, const std::string &model) {
            return synthesize_channel(to_paths(paths), geometry(M, N, wavelength),
                                      wavefront_model_from_string(model));
        },
        py::arg("M"), py::arg("N"), py::arg("wavelength"), py::arg("paths"), py::arg("model") = "spherical");
    m.def(
        "measure",
        [](const CVec &h_bar, const std::vector<CMat> &W, double noise_variance, std::uint64_t seed) {
            Rng rng(seed);
            return measure_all(h_bar, W, noise_variance, rng).pilots;
        },
        py::arg("h_bar"), py::arg("W"), py::arg("noise_variance") = 0.0, py::arg("seed") = 0,
        "Pilots y_m = W_m^H h_m + noise for every microstrip.");

    // dictionaries
    m.def(
        "az_dictionary",
        [](int N, double wavelength, int angle_count, int range_count, double range_min, double range_max) {
            const PolarGrid grid = range_count > 0 ? PolarGrid::uniform(angle_count, range_count, range_min, range_max)
                                                   : PolarGrid::angle_only(angle_count);
            return build_az_dictionary(geometry(1, N, wavelength), grid);
        },
        py::arg("N"), py::arg("wavelength"), py::arg("angle_count"), py::arg("range_count") = 0,
        py::arg("range_min") = 5.0, py::arg("range_max") = 100.0,
        "Polar-domain AZ dictionary, angle-major columns. range_count = 0 gives the far-field grid.");
    m.def("el_grid", &build_el_grid, py::arg("M"));

    // estimators
    m.def(
        "ols_recover",
        [](const CVec &y, const CMat &A, int sparsity) {
            const OlsResult r = ols_recover(y, A, sparsity);
            return py::make_tuple(r.support, r.coefficients, r.residual_history);
        },
        py::arg("y"), py::arg("A"), py::arg("sparsity"), "(support, coefficients, residual history)");
    m.def("nmse", &nmse, py::arg("estimate"), py::arg("truth"));

    // measurement design
    m.def(
        "target_gram",
        [](int P, int gbar, double power, std::uint64_t seed) {
            Rng rng(seed);
            return target_gram(P, gbar, power, rng).phi;
        },
        py::arg("P"), py::arg("gbar"), py::arg("power"), py::arg("seed") = 0);
    m.def(
        "total_coherence", [](const CMat &W, const CMat &B) { return total_coherence(W, B).direct; }, py::arg("W"),
        py::arg("B"));
    m.def("scale_optimal_coherence", &scale_optimal_coherence, py::arg("W"), py::arg("B"));

    // experiments
    py::class_<ExperimentConfig>(m, "Config")
        .def(py::init<>())
        .def_static("from_json", &config_from_json, py::arg("text"))
        .def_static(
            "load", [](const std::string &path) { return load_config(path); }, py::arg("path"))
        .def_readwrite("M", &ExperimentConfig::M)
        .def_readwrite("N", &ExperimentConfig::N)
        .def_readwrite("P", &ExperimentConfig::P)
        .def_readwrite("snr_db", &ExperimentConfig::snr_db)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("design", &ExperimentConfig::design)
        .def_property_readonly("wavelength", &ExperimentConfig::wavelength)
        .def("validate", &ExperimentConfig::validate);

    m.def(
        "design_weights",
        [](const ExperimentConfig &cfg) {
            cfg.validate();
            const MeasurementDesign d = experiment_design(cfg, cfg.geometry());
            return py::make_tuple(d.Q, d.W);
        },
        py::arg("config"), "(Q_m, W_m = V_m^H Q_m) for every microstrip of the sweep design.");
    m.def(
        "run_nmse_sweep",
        [](const ExperimentConfig &cfg) {
            cfg.validate();
            std::vector<NmseRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_nmse_sweep(cfg);
            }
            return nmse_rows(rows);
        },
        py::arg("config"), "One dict per (snr, trial, estimator) in canonical order.");
    m.def(
        "run_model_error",
        [](const ExperimentConfig &cfg) {
            cfg.validate();
            std::vector<std::tuple<int, int, int, std::array<double, 4>>> out;
            for (const auto &r : run_model_error(cfg))
                out.emplace_back(r.element, r.m, r.n, r.distance);
            return out;
        },
        py::arg("config"), "(element, m, n, [spherical, taylor2, oblong, planar] distances)");
    m.def(
        "run_beam_gain",
        [](const ExperimentConfig &cfg) {
            cfg.validate();
            std::vector<std::pair<double, std::array<double, 4>>> out;
            for (const auto &r : run_beam_gain(cfg))
                out.emplace_back(r.range, r.gain);
            return out;
        },
        py::arg("config"), "(range, [spherical, taylor2, oblong, planar] gains)");
    m.def(
        "run_coherence",
        [](const ExperimentConfig &cfg) {
            cfg.validate();
            std::vector<CoherenceRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_coherence(cfg);
            }
            py::list out;
            for (const auto &r : rows)
            {
                py::dict d;
                d["mode"] = r.mode;
                d["seed_index"] = r.seed_index;
                d["seed"] = r.seed;
                d["solver"] = r.solver;
                d["coherence"] = r.coherence;
                d["scale_optimal"] = r.scale_optimal;
                out.append(d);
            }
            return out;
        },
        py::arg("config"));
    m.def("design_seed", &design_seed, py::arg("master"));
    m.def("trial_seed", &trial_seed, py::arg("master"), py::arg("snr_index"), py::arg("trial"));
}
