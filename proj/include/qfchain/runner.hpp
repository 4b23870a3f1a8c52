/*
 * Copyright 2026 The qfchain Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @brief Configuration, task execution and report emission for the CLI.
 *
 * A run is described by one JSON document (schema_version 1, see
 * docs/config.schema.json). Tasks run in declared order; each produces a
 * record with a status and never aborts the others.
 */

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qfchain/ed.hpp"
#include "qfchain/errors.hpp"
#include "qfchain/observables.hpp"
#include "qfchain/quasifree.hpp"
#include "qfchain/random.hpp"

namespace qfchain::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* tool_name = "qfchain";
inline constexpr const char* tool_version = "1.0.0";
inline constexpr int schema_version = 1;

inline const std::vector<std::string>& task_types() {
    static const std::vector<std::string> types{"spectrum", "string-order", "z2-index", "split", "oracle", "sweep"};
    return types;
}

struct ModelSpec {
    std::string name;
    long sites = 0;
    Boundary boundary = Boundary::open;
    ModelParams params;
};

struct TaskSpec {
    std::string type;
    json options = json::object();
    std::vector<TaskSpec> subtasks;
};

struct RunConfig {
    ModelSpec model;
    Tolerances tolerances;
    std::uint64_t seed = 0;
    std::string output_dir = "qfchain-out";
    std::vector<std::string> formats{"json"};
    std::vector<TaskSpec> tasks;
    json source;
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline std::string child(const std::string& path, const std::string& key) {
    std::string escaped;
    for (char c : key) {
        if (c == '~') escaped += "~0";
        else if (c == '/') escaped += "~1";
        else escaped += c;
    }
    return path + "/" + escaped;
}

inline std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

inline void expect_keys(const json& j, const std::string& path, const std::vector<std::string>& allowed,
                        const std::vector<std::string>& required) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(child(path, key), "unknown key");
        }
    }
    for (const auto& key : required) {
        if (!j.contains(key)) throw ConfigError(child(path, key), "required key missing");
    }
}

inline double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

inline double positive_at(const json& j, const std::string& path) {
    const double v = number_at(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "expected a positive number");
    return v;
}

inline long integer_at(const json& j, const std::string& path, long min, long max) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const long v = j.get<long>();
    if (v < min || v > max) {
        throw ConfigError(path, "expected an integer in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
    }
    return v;
}

inline std::string string_at(const json& j, const std::string& path, const std::vector<std::string>& choices = {}) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    const std::string v = j.get<std::string>();
    if (!choices.empty() && std::find(choices.begin(), choices.end(), v) == choices.end()) {
        std::string list;
        for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
        throw ConfigError(path, "expected one of: " + list);
    }
    return v;
}

inline std::vector<long> windows_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of integers");
    std::vector<long> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(integer_at(j[i], child(path, i), 1, 1L << 30));
        if (i > 0 && out[i] <= out[i - 1]) throw ConfigError(child(path, i), "windows must be strictly increasing");
    }
    return out;
}

inline TaskSpec parse_task(const json& j, const std::string& path, const ModelSpec& model, bool nested) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    if (!j.contains("type")) throw ConfigError(child(path, "type"), "required key missing");
    TaskSpec task;
    task.type = string_at(j.at("type"), child(path, "type"), task_types());
    const long sites = model.sites;

    if (task.type == "spectrum") {
        expect_keys(j, path, {"type"}, {});
    } else if (task.type == "string-order") {
        expect_keys(j, path, {"type", "k_max", "origin", "pair", "odd_length"}, {});
        if (j.contains("k_max")) integer_at(j.at("k_max"), child(path, "k_max"), 0, sites);
        if (j.contains("origin")) integer_at(j.at("origin"), child(path, "origin"), 1, sites - 1);
        if (j.contains("pair")) string_at(j.at("pair"), child(path, "pair"), {"x", "y"});
        if (j.contains("odd_length") && !j.at("odd_length").is_boolean()) {
            throw ConfigError(child(path, "odd_length"), "expected a boolean");
        }
    } else if (task.type == "z2-index" || task.type == "split") {
        std::vector<std::string> keys{"type", "cut", "windows"};
        if (task.type == "z2-index") keys.push_back("string_margin");
        expect_keys(j, path, keys, {});
        if (j.contains("cut")) integer_at(j.at("cut"), child(path, "cut"), 1, sites - 1);
        if (j.contains("windows")) windows_at(j.at("windows"), child(path, "windows"));
        if (j.contains("string_margin")) integer_at(j.at("string_margin"), child(path, "string_margin"), 0, sites);
    } else if (task.type == "oracle") {
        expect_keys(j, path, {"type", "L", "checks", "probes"}, {});
        if (j.contains("L")) integer_at(j.at("L"), child(path, "L"), 2, ed_max_sites);
        if (j.contains("probes")) integer_at(j.at("probes"), child(path, "probes"), 1, 100000);
        if (j.contains("checks")) {
            const json& checks = j.at("checks");
            if (!checks.is_array() || checks.empty()) {
                throw ConfigError(child(path, "checks"), "expected a non-empty array of check names");
            }
            for (std::size_t i = 0; i < checks.size(); ++i) {
                string_at(checks[i], child(child(path, "checks"), i), {"energy", "wick", "jw", "gap"});
            }
        }
    } else if (task.type == "sweep") {
        if (nested) throw ConfigError(path, "sweeps cannot be nested");
        expect_keys(j, path, {"type", "param", "values", "tasks"}, {"param", "values", "tasks"});
        const std::string param = string_at(j.at("param"), child(path, "param"));
        if (!model.params.count(param)) {
            throw ConfigError(child(path, "param"), "model '" + model.name + "' has no parameter '" + param + "'");
        }
        const json& values = j.at("values");
        if (!values.is_array() || values.empty()) throw ConfigError(child(path, "values"), "expected a non-empty array");
        for (std::size_t i = 0; i < values.size(); ++i) number_at(values[i], child(child(path, "values"), i));
        const json& tasks = j.at("tasks");
        if (!tasks.is_array()) throw ConfigError(child(path, "tasks"), "expected an array");
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            task.subtasks.push_back(parse_task(tasks[i], child(child(path, "tasks"), i), model, true));
        }
    }
    task.options = j;
    return task;
}

}  // namespace detail

/// Validate a parsed JSON document; every error names a JSON pointer.
inline RunConfig parse_config(const json& doc) {
    using namespace detail;
    expect_keys(doc, "", {"schema_version", "model", "tolerances", "seed", "output", "tasks"},
                {"schema_version", "model"});
    integer_at(doc.at("schema_version"), "/schema_version", schema_version, schema_version);

    RunConfig config;
    config.source = doc;

    const json& model = doc.at("model");
    expect_keys(model, "/model", {"name", "L", "boundary", "params"}, {"name", "L"});
    config.model.name = string_at(model.at("name"), "/model/name", model_catalog());
    config.model.sites = integer_at(model.at("L"), "/model/L", 2, 100000);
    if (model.contains("boundary")) {
        config.model.boundary = boundary_from_string(string_at(model.at("boundary"), "/model/boundary", {"open", "ring"}));
    }
    if (model.contains("params")) {
        const json& params = model.at("params");
        if (!params.is_object()) throw ConfigError("/model/params", "expected an object");
        for (const auto& [key, value] : params.items()) {
            config.model.params[key] = number_at(value, child("/model/params", key));
        }
    }
    try {
        build_model(config.model.name, config.model.sites, config.model.params, config.model.boundary);
    } catch (const ModelError& e) {
        const bool about_params = std::string(e.what()).find("parameter") != std::string::npos;
        throw ConfigError(about_params ? "/model/params" : "/model", e.what());
    }

    if (doc.contains("tolerances")) {
        const json& tol = doc.at("tolerances");
        expect_keys(tol, "/tolerances", {"zero_mode_tol", "wedge_tol", "eta", "tail_tol", "conv_tol"}, {});
        Tolerances& t = config.tolerances;
        if (tol.contains("zero_mode_tol")) t.zero_mode_tol = positive_at(tol.at("zero_mode_tol"), "/tolerances/zero_mode_tol");
        if (tol.contains("wedge_tol")) t.wedge_tol = positive_at(tol.at("wedge_tol"), "/tolerances/wedge_tol");
        if (tol.contains("eta")) t.eta = positive_at(tol.at("eta"), "/tolerances/eta");
        if (tol.contains("tail_tol")) t.tail_tol = positive_at(tol.at("tail_tol"), "/tolerances/tail_tol");
        if (tol.contains("conv_tol")) t.conv_tol = positive_at(tol.at("conv_tol"), "/tolerances/conv_tol");
    }

    if (doc.contains("seed")) {
        const json& seed = doc.at("seed");
        if (!seed.is_number_unsigned()) throw ConfigError("/seed", "expected a non-negative integer");
        config.seed = seed.get<std::uint64_t>();
    }

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        expect_keys(out, "/output", {"dir", "formats"}, {});
        if (out.contains("dir")) config.output_dir = string_at(out.at("dir"), "/output/dir");
        if (out.contains("formats")) {
            const json& formats = out.at("formats");
            if (!formats.is_array() || formats.empty()) throw ConfigError("/output/formats", "expected a non-empty array");
            config.formats.clear();
            for (std::size_t i = 0; i < formats.size(); ++i) {
                config.formats.push_back(string_at(formats[i], child("/output/formats", i), {"json", "csv"}));
            }
        }
    }

    if (doc.contains("tasks")) {
        const json& tasks = doc.at("tasks");
        if (!tasks.is_array()) throw ConfigError("/tasks", "expected an array");
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            config.tasks.push_back(parse_task(tasks[i], child("/tasks", i), config.model, false));
        }
    }
    return config;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

/// A default task of `type` validated against `config`, for subcommands without a matching task.
inline TaskSpec default_task(const RunConfig& config, const std::string& type) {
    return detail::parse_task(json{{"type", type}}, "/tasks/-", config.model, false);
}

// ---------------------------------------------------------------------------
// Execution

/// One numeric series destined for a CSV file.
struct Series {
    std::string name;
    std::string column;  // "k" or "window"
    std::string value;   // "value" or "hs_norm"
    std::vector<std::pair<long, double>> rows;
};

struct Report {
    json document;
    std::vector<Series> series;
    bool failed = false;
};

struct RunOptions {
    int threads = 1;
    /// Restrict to tasks of this type (empty: all). A default task runs when none matches.
    std::string only;
};

namespace detail {

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline json tolerances_json(const Tolerances& t) {
    return json{{"zero_mode_tol", t.zero_mode_tol}, {"wedge_tol", t.wedge_tol}, {"eta", t.eta},
                {"tail_tol", t.tail_tol}, {"conv_tol", t.conv_tol}, {"variance_floor", t.variance_floor}};
}

inline json model_json(const ModelSpec& m) {
    json params = json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    return json{{"name", m.name}, {"L", m.sites}, {"boundary", to_string(m.boundary)}, {"params", params}};
}

inline QuadraticHamiltonian build(const ModelSpec& m, long sites) {
    return build_model(m.name, sites, m.params, m.boundary);
}

inline GroundOptions ground_options(const Tolerances& t) {
    GroundOptions o;
    o.zero_mode_tol = t.zero_mode_tol;
    return o;
}

struct TaskContext {
    const ModelSpec& model;
    const Tolerances& tol;
    std::uint64_t seed;
    std::string label;
    std::vector<Series>* series;
};

inline json run_spectrum(const TaskContext& ctx) {
    const QuadraticHamiltonian ham = build(ctx.model, ctx.model.sites);
    const GroundSolution g = quasi_free_ground(ham, ground_options(ctx.tol));
    return json{{"single_particle_energies", vector_json(g.energies)},
                {"ground_energy", g.energy},
                {"gap", g.energies.size() > 0 ? g.energies.minCoeff() : 0.0},
                {"edge_zero_modes", g.edge_zero_modes},
                {"parity", g.covariance.parity()}};
}

inline json run_string_order(const TaskContext& ctx, const json& opt) {
    const long sites = ctx.model.sites;
    const long origin = opt.value("origin", std::max(1L, std::min(20L, sites / 4)));
    const std::string pair = opt.value("pair", std::string("x"));
    const QuadraticHamiltonian ham = build(ctx.model, sites);
    const MajoranaCovariance state = ground_covariance(ham, ground_options(ctx.tol)).relabeled(-origin);

    StringCorrelatorSpec spec = pair == "x" ? string_pair_x() : string_pair_y();
    spec.odd_length = opt.value("odd_length", false);
    const long reach = max_string_k(state, spec);
    const long k_max = opt.contains("k_max") ? opt.at("k_max").get<long>() : reach;
    if (k_max > reach) {
        throw WindowError("k_max " + std::to_string(k_max) + " exceeds the largest admissible k " +
                          std::to_string(reach) + " for origin " + std::to_string(origin));
    }
    spec.k_values = k_range(0, k_max);
    const std::vector<StringPoint> points = string_correlator(state, spec);

    json series = json::array();
    Series csv{ctx.label + "string-order", "k", "value", {}};
    for (const auto& p : points) {
        series.push_back(json::array({p.k, p.value.real(), p.value.imag()}));
        csv.rows.emplace_back(p.k, p.value.real());
    }
    ctx.series->push_back(std::move(csv));
    json out{{"origin", origin},
             {"pair", pair},
             {"odd_length", spec.odd_length},
             {"series_columns", json::array({"k", "re", "im"})},
             {"series", series}};
    if (points.size() >= 20) {
        const StringOrderDetection d = detect_string_order(points, ctx.tol);
        out["detection"] = json{{"detected", d.detected}, {"estimate", d.estimate}, {"period_hint", d.period_hint}};
    } else {
        out["detection"] = nullptr;
    }
    return out;
}

inline json split_json(const SplitDefectSeries& s) {
    json windows = json::array();
    json norms = json::array();
    for (std::size_t i = 0; i < s.windows.size(); ++i) {
        windows.push_back(s.windows[i]);
        norms.push_back(s.hs_norms[i]);
    }
    return json{{"windows", windows}, {"hs_norms", norms}, {"verdict", to_string(s.verdict)}};
}

inline void push_split_series(const TaskContext& ctx, const SplitDefectSeries& s, const std::string& name) {
    Series csv{ctx.label + name, "window", "hs_norm", {}};
    for (std::size_t i = 0; i < s.windows.size(); ++i) csv.rows.emplace_back(s.windows[i], s.hs_norms[i]);
    ctx.series->push_back(std::move(csv));
}

inline json run_split(const TaskContext& ctx, const json& opt) {
    const long cut = opt.value("cut", ctx.model.sites / 2);
    const QuadraticHamiltonian ham = build(ctx.model, ctx.model.sites);
    const MajoranaCovariance state = ground_covariance(ham, ground_options(ctx.tol));
    const std::vector<long> windows =
        opt.contains("windows") ? opt.at("windows").get<std::vector<long>>() : auto_split_windows(state, cut);
    if (windows.empty()) throw WindowError("no split window fits around cut " + std::to_string(cut));
    const SplitDefectSeries s = split_defect(state, SelfDualCut{cut}, windows, ctx.tol.conv_tol);
    push_split_series(ctx, s, "split");
    json out = split_json(s);
    out["cut"] = cut;
    return out;
}

inline json run_z2(const TaskContext& ctx, const json& opt) {
    const long cut = opt.value("cut", ctx.model.sites / 2);
    const QuadraticHamiltonian ham = build(ctx.model, ctx.model.sites);
    const MajoranaCovariance state = ground_covariance(ham, ground_options(ctx.tol));
    Z2Options options;
    options.tolerances = ctx.tol;
    if (opt.contains("windows")) options.windows = opt.at("windows").get<std::vector<long>>();
    options.string_margin = opt.value("string_margin", options.string_margin);
    const Z2IndexResult r = z2_index(state, SelfDualCut{cut}, &ham, options);
    push_split_series(ctx, r.split, "z2-index-split");

    json estimators = json::object();
    for (const auto& [name, value] : r.estimator_values) estimators[name] = value;
    json out{{"cut", cut},
             {"index", r.index},
             {"dim_wedge", r.dim_wedge},
             {"wedge_window", r.wedge_window},
             {"estimators", estimators},
             {"agreement", r.agreement},
             {"intermediate_eigenvalues", r.intermediate_eigenvalues},
             {"split", split_json(r.split)}};
    out["momentum"] = r.momentum ? json{{"pf_zero", r.momentum->pf_zero}, {"pf_pi", r.momentum->pf_pi}} : json(nullptr);
    auto detection = [](const std::optional<StringOrderDetection>& d) {
        return d ? json{{"detected", d->detected}, {"estimate", d->estimate}, {"period_hint", d->period_hint}}
                 : json(nullptr);
    };
    out["string_x"] = detection(r.string_x);
    out["string_y"] = detection(r.string_y);
    return out;
}

inline double max_abs(const SparseMatrixC& m) {
    double out = 0.0;
    for (Index k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
    }
    return out;
}

inline json run_oracle(const TaskContext& ctx, const json& opt, bool& failed) {
    const long sites = opt.value("L", std::min<long>(ctx.model.sites, 8));
    const long probes = opt.value("probes", 50L);
    const std::vector<std::string> checks =
        opt.contains("checks") ? opt.at("checks").get<std::vector<std::string>>()
                               : std::vector<std::string>{"energy", "wick", "jw", "gap"};
    constexpr double tol = 1e-10;
    Rng rng(ctx.seed);

    const QuadraticHamiltonian ham = build(ctx.model, sites);
    const GroundSolution qf = quasi_free_ground(ham, ground_options(ctx.tol));
    const EDOperator op = ed_build(ham);
    // With edge zero modes the quasi-free ground state is the even member of the pair.
    const EDState ed = ed_ground(op, qf.edge_zero_modes > 0 ? Sector::even : Sector::all);

    json out{{"L", sites}, {"tolerance", tol}};
    json results = json::object();
    for (const auto& check : checks) {
        if (check == "energy") {
            const double dev = std::abs(qf.energy - ed.energy);
            results["energy"] = json{{"quasi_free", qf.energy}, {"ed", ed.energy}, {"deviation", dev}, {"pass", dev <= tol}};
            failed = failed || dev > tol;
        } else if (check == "wick") {
            if (ed.parity_sector == ParitySector::mixed) {
                results["wick"] = json{{"skipped", "degenerate ground state"}};
                continue;
            }
            double dev = 0.0;
            for (long p = 0; p < probes; ++p) {
                const MajoranaMonomial m = random_majorana_monomial(rng, sites, 2 * (1 + p % 3));
                dev = std::max(dev, std::abs(wick_expectation(qf.covariance, m) - ed_expectation(ed, to_fermion(m))));
            }
            results["wick"] = json{{"probes", probes}, {"max_deviation", dev}, {"pass", dev <= tol}};
            failed = failed || dev > tol;
        } else if (check == "jw") {
            if (ctx.model.name == "custom") {
                results["jw"] = json{{"skipped", "no Pauli form for custom models"}};
                continue;
            }
            const EDOperator spin = ed_build(pauli_model(ctx.model.name, static_cast<int>(sites), ctx.model.params,
                                                         ctx.model.boundary),
                                             static_cast<int>(sites));
            const double matrix_dev = max_abs(to_frame(op, Frame::spin).matrix - spin.matrix);
            const EDState spin_ground = ed_ground(spin, qf.edge_zero_modes > 0 ? Sector::even : Sector::all);
            double obs_dev = 0.0;
            if (ed.parity_sector != ParitySector::mixed) {
                for (long p = 0; p < probes; ++p) {
                    const MajoranaMonomial m = random_majorana_monomial(rng, sites, 2 * (1 + p % 3));
                    const PauliString s = jw_majorana_to_pauli(m, Window{0, sites - 1}).string;
                    obs_dev = std::max(obs_dev, std::abs(ed_expectation(spin_ground, s) -
                                                         ed_expectation(ed, to_fermion(m))));
                }
            }
            const bool pass = matrix_dev <= 1e-12 && obs_dev <= 1e-12;
            results["jw"] = json{{"matrix_deviation", matrix_dev}, {"observable_deviation", obs_dev}, {"pass", pass}};
            failed = failed || !pass;
        } else if (check == "gap") {
            if (ed.parity_sector == ParitySector::mixed) {
                results["gap"] = json{{"skipped", "degenerate ground state"}};
                continue;
            }
            std::vector<FermionSum> list;
            for (long p = 0; p < probes; ++p) list.push_back(random_local_probe(rng, sites));
            const GapCheck g = gap_inequality_check(ed, op, list, ctx.tol.variance_floor);
            long skipped = 0;
            for (const auto& r : g.ratios) skipped += r ? 0 : 1;
            results["gap"] = json{{"ed_gap", g.gap}, {"m_empirical", g.m_empirical}, {"probes", probes},
                                  {"skipped_probes", skipped}, {"pass", g.satisfied}};
            failed = failed || !g.satisfied;
        }
    }
    out["checks"] = results;
    return out;
}

inline json error_json(const std::exception& e) {
    json err{{"message", e.what()}};
    if (const auto* d = dynamic_cast<const DegenerateGroundState*>(&e)) {
        err["kind"] = "degenerate-ground-state";
        err["critical"] = d->critical();
        err["energies"] = d->energies();
    } else if (dynamic_cast<const IndexUndefined*>(&e) != nullptr) {
        err["kind"] = "index-undefined";
    } else if (dynamic_cast<const WindowError*>(&e) != nullptr) {
        err["kind"] = "window";
    } else if (dynamic_cast<const ModelError*>(&e) != nullptr) {
        err["kind"] = "model";
    } else if (dynamic_cast<const ValidationError*>(&e) != nullptr) {
        err["kind"] = "validation";
    } else {
        err["kind"] = "internal";
    }
    return err;
}

struct TaskOutcome {
    json record;
    json timing;
    bool failed = false;
};

inline TaskOutcome run_task(const TaskSpec& task, const ModelSpec& model, const Tolerances& tol, std::uint64_t seed,
                            const std::string& label, std::vector<Series>& series, int threads);

inline TaskOutcome run_sweep(const TaskSpec& task, const ModelSpec& model, const Tolerances& tol, std::uint64_t seed,
                             const std::string& label, std::vector<Series>& series, int threads) {
    const std::string param = task.options.at("param").get<std::string>();
    const std::vector<double> values = task.options.at("values").get<std::vector<double>>();
    struct Point {
        json record;
        json timing;
        std::vector<Series> series;
        bool failed = false;
    };
    std::vector<Point> points(values.size());
    auto work = [&](std::size_t i) {
        ModelSpec m = model;
        m.params[param] = values[i];
        Point& p = points[i];
        json tasks = json::array();
        json timings = json::array();
        for (std::size_t t = 0; t < task.subtasks.size(); ++t) {
            const std::string sub = label + "point" + std::to_string(i) + "_task" + std::to_string(t) + "_";
            TaskOutcome o = run_task(task.subtasks[t], m, tol, seed + 1000003ULL * (i + 1) + t, sub, p.series, 1);
            tasks.push_back(std::move(o.record));
            timings.push_back(std::move(o.timing));
            p.failed = p.failed || o.failed;
        }
        p.record = json{{"value", values[i]}, {"params", model_json(m)["params"]}, {"tasks", tasks}};
        p.timing = json{{"value", values[i]}, {"tasks", timings}};
    };

    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        for (std::size_t i = 0; i < values.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, values.size()); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < values.size(); i = next++) work(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    TaskOutcome out;
    json records = json::array();
    json timings = json::array();
    for (auto& p : points) {
        records.push_back(std::move(p.record));
        timings.push_back(std::move(p.timing));
        for (auto& s : p.series) series.push_back(std::move(s));
        out.failed = out.failed || p.failed;
    }
    out.record = json{{"param", param}, {"points", records}};
    out.timing = json{{"points", timings}};
    return out;
}

inline TaskOutcome run_task(const TaskSpec& task, const ModelSpec& model, const Tolerances& tol, std::uint64_t seed,
                            const std::string& label, std::vector<Series>& series, int threads) {
    const auto start = std::chrono::steady_clock::now();
    TaskOutcome out;
    json record{{"type", task.type},
                {"provenance", json{{"model", model_json(model)}, {"tolerances", tolerances_json(tol)}, {"seed", seed}}}};
    std::vector<Series> local;
    TaskContext ctx{model, tol, seed, label, &local};
    json timing_detail;
    try {
        json result;
        bool failed = false;
        if (task.type == "spectrum") result = run_spectrum(ctx);
        else if (task.type == "string-order") result = run_string_order(ctx, task.options);
        else if (task.type == "z2-index") result = run_z2(ctx, task.options);
        else if (task.type == "split") result = run_split(ctx, task.options);
        else if (task.type == "oracle") result = run_oracle(ctx, task.options, failed);
        else if (task.type == "sweep") {
            TaskOutcome sweep = run_sweep(task, model, tol, seed, label, local, threads);
            result = std::move(sweep.record);
            timing_detail = std::move(sweep.timing);
            failed = sweep.failed;
        }
        record["status"] = failed ? "failed" : "ok";
        record["result"] = std::move(result);
        out.failed = failed;
        for (auto& s : local) series.push_back(std::move(s));
    } catch (const std::exception& e) {
        record["status"] = "error";
        record["error"] = error_json(e);
        out.failed = true;
    }
    out.record = std::move(record);
    out.timing = json{{"type", task.type},
                      {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    if (!timing_detail.is_null()) out.timing["detail"] = std::move(timing_detail);
    return out;
}

}  // namespace detail

inline Report run(const RunConfig& config, const RunOptions& options = {}) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<TaskSpec> tasks;
    for (const auto& t : config.tasks) {
        if (options.only.empty() || t.type == options.only) tasks.push_back(t);
    }
    if (!options.only.empty() && tasks.empty()) {
        if (options.only == "sweep") throw ConfigError("/tasks", "the sweep command needs a sweep task in the config");
        tasks.push_back(default_task(config, options.only));
    }

    Report report;
    json records = json::array();
    json timings = json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        detail::TaskOutcome o = detail::run_task(tasks[i], config.model, config.tolerances, config.seed + i,
                                                 "task" + std::to_string(i) + "_", report.series, options.threads);
        records.push_back(std::move(o.record));
        timings.push_back(std::move(o.timing));
        report.failed = report.failed || o.failed;
    }
    report.document = json{{"tool", json{{"name", tool_name}, {"version", tool_version}}},
                           {"config", config.source},
                           {"tolerances", detail::tolerances_json(config.tolerances)},
                           {"tasks", records},
                           {"status", report.failed ? "failed" : "ok"},
                           {"timings", json{{"tasks", timings},
                                            {"total_seconds", std::chrono::duration<double>(
                                                                  std::chrono::steady_clock::now() - start)
                                                                  .count()}}}};
    return report;
}

// ---------------------------------------------------------------------------
// Emission

inline std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

inline std::string csv_text(const Series& s) {
    std::string out = s.column + "," + s.value + "\n";
    for (const auto& [key, value] : s.rows) out += std::to_string(key) + "," + format_double(value) + "\n";
    return out;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Writes report.json and/or one CSV per series; returns the paths written.
inline std::vector<std::string> emit(const Report& report, const std::string& dir,
                                     const std::vector<std::string>& formats) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    std::vector<std::string> written;
    const std::set<std::string> wanted(formats.begin(), formats.end());
    if (wanted.count("json")) {
        const std::filesystem::path path = std::filesystem::path(dir) / "report.json";
        detail::write_file(path, report.document.dump(2) + "\n");
        written.push_back(path.string());
    }
    if (wanted.count("csv")) {
        for (const auto& s : report.series) {
            const std::filesystem::path path = std::filesystem::path(dir) / (s.name + ".csv");
            detail::write_file(path, csv_text(s));
            written.push_back(path.string());
        }
    }
    return written;
}

}  // namespace qfchain::cli
