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

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "qfchain/runner.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Invocation {
    int status = -1;
    std::string err;
    fs::path out;
};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qfchain-cli-test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Invocation invoke(const std::string& name, const std::string& args) {
    Invocation inv;
    inv.out = scratch(name);
    const fs::path err = inv.out / "stderr.txt";
    const std::string command = std::string("\"") + QFCHAIN_CLI_PATH + "\" " + args + " --out \"" + inv.out.string() +
                                "\" > /dev/null 2> \"" + err.string() + "\"";
    const int raw = std::system(command.c_str());
    inv.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    inv.err = slurp(err);
    return inv;
}

std::string config(const std::string& file) { return std::string(QFCHAIN_CONFIG_DIR) + "/" + file; }

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path path = scratch(name + "-config") / "config.json";
    std::ofstream(path) << text;
    return path;
}

json report(const Invocation& inv) { return json::parse(slurp(inv.out / "report.json")); }

json without_timings(json doc) {
    doc.erase("timings");
    return doc;
}

}  // namespace

TEST_CASE("full run of the topological example", "[cli]") {
    const Invocation inv = invoke("kitaev", "run --config \"" + config("kitaev_topological.json") + "\"");
    REQUIRE(inv.status == 0);
    const json doc = report(inv);
    CHECK(doc["status"] == "ok");
    CHECK(doc["tool"]["name"] == "qfchain");
    REQUIRE(doc["tasks"].size() == 4);
    CHECK(doc["tasks"][0]["type"] == "spectrum");
    CHECK(doc["tasks"][0]["result"]["edge_zero_modes"] == 1);
    const json& string = doc["tasks"][1]["result"];
    CHECK(string["detection"]["detected"] == true);
    CHECK(string["series"].size() == 101);
    const json& z2 = doc["tasks"][2]["result"];
    CHECK(z2["index"] == -1);
    CHECK(z2["agreement"] == true);
    CHECK(doc["tasks"][3]["result"]["verdict"] == "converged");
    CHECK(doc["tasks"][2]["provenance"]["model"]["params"]["lambda"] == 0.5);

    const std::string csv = slurp(inv.out / "task1_string-order.csv");
    CHECK(csv.rfind("k,value\n0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
    CHECK(slurp(inv.out / "task3_split.csv").rfind("window,hs_norm\n10,", 0) == 0);
}

TEST_CASE("reports are reproducible", "[cli]") {
    const std::string args = "run --config \"" + config("kitaev_topological.json") + "\"";
    const Invocation a = invoke("repeat-a", args);
    const Invocation b = invoke("repeat-b", args);
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(without_timings(report(a)).dump() == without_timings(report(b)).dump());
    CHECK(slurp(a.out / "task1_string-order.csv") == slurp(b.out / "task1_string-order.csv"));

    const Invocation serial = invoke("sweep-1", "sweep --threads 1 --config \"" + config("xy_sweep.json") + "\"");
    const Invocation parallel = invoke("sweep-3", "sweep --threads 3 --config \"" + config("xy_sweep.json") + "\"");
    REQUIRE(serial.status == 0);
    REQUIRE(parallel.status == 0);
    CHECK(without_timings(report(serial)).dump() == without_timings(report(parallel)).dump());
}

TEST_CASE("sweep crosses the phase boundary", "[cli]") {
    const Invocation inv = invoke("sweep", "sweep --config \"" + config("xy_sweep.json") + "\"");
    REQUIRE(inv.status == 0);
    const json doc = report(inv);
    const json& points = doc["tasks"][0]["result"]["points"];
    REQUIRE(points.size() == 6);
    for (const auto& p : points) {
        const int expected = p["value"].get<double>() < 1.0 ? -1 : 1;
        CHECK(p["tasks"][0]["status"] == "ok");
        CHECK(p["tasks"][0]["result"]["index"] == expected);
    }
}

TEST_CASE("single commands fall back to default tasks", "[cli]") {
    const Invocation z2 = invoke("trivial-z2", "z2-index --config \"" + config("trivial.json") + "\"");
    REQUIRE(z2.status == 0);
    const json doc = report(z2);
    REQUIRE(doc["tasks"].size() == 1);
    CHECK(doc["tasks"][0]["result"]["index"] == 1);

    const Invocation split = invoke("trivial-split", "split --format csv --config \"" + config("trivial.json") + "\"");
    REQUIRE(split.status == 0);
    CHECK_FALSE(fs::exists(split.out / "report.json"));
    CHECK(fs::exists(split.out / "task0_split.csv"));

    const Invocation oracle = invoke("oracle", "oracle --config \"" + config("oracle.json") + "\"");
    REQUIRE(oracle.status == 0);
    const json oracle_doc = report(oracle);
    const json& checks = oracle_doc["tasks"][0]["result"]["checks"];
    for (const auto& [name, check] : checks.items()) CHECK(check["pass"] == true);

    CHECK(invoke("no-sweep", "sweep --config \"" + config("trivial.json") + "\"").status == 2);
}

TEST_CASE("task errors are reported", "[cli]") {
    const Invocation inv = invoke("critical", "run --config \"" + config("critical_ring.json") + "\"");
    CHECK(inv.status == 1);
    const json doc = report(inv);
    CHECK(doc["status"] == "failed");
    CHECK(doc["tasks"][0]["status"] == "error");
    CHECK(doc["tasks"][0]["error"]["kind"] == "degenerate-ground-state");
    CHECK(doc["tasks"][0]["error"]["critical"] == true);
}

TEST_CASE("configuration errors carry a JSON pointer", "[cli]") {
    const fs::path unknown = write_config("unknown", R"({"schema_version": 1,
        "model": {"name": "kitaev", "L": 40, "params": {"J": 1.0, "lambda": 0.5}, "colour": "red"}})");
    Invocation inv = invoke("unknown", "run --config \"" + unknown.string() + "\"");
    CHECK(inv.status == 2);
    CHECK(inv.err.find("/model/colour") != std::string::npos);

    const fs::path param = write_config("param", R"({"schema_version": 1,
        "model": {"name": "kitaev", "L": 40, "params": {"J": 1.0}}})");
    inv = invoke("param", "run --config \"" + param.string() + "\"");
    CHECK(inv.status == 2);
    CHECK(inv.err.find("/model/params") != std::string::npos);

    const fs::path task = write_config("task", R"({"schema_version": 1,
        "model": {"name": "trivial", "L": 40, "params": {"mu": 1.0}},
        "tasks": [{"type": "spectrum"}, {"type": "split", "windows": [20, 10]}]})");
    inv = invoke("task", "run --config \"" + task.string() + "\"");
    CHECK(inv.status == 2);
    CHECK(inv.err.find("/tasks/1/windows") != std::string::npos);

    const fs::path broken = write_config("broken", "{\"schema_version\": 1,");
    CHECK(invoke("broken", "run --config \"" + broken.string() + "\"").status == 2);
    CHECK(invoke("missing", "run --config /nonexistent/config.json").status == 2);
    CHECK(invoke("bad-flag", "run --format xml --config \"" + config("trivial.json") + "\"").status == 2);
}

TEST_CASE("config parsing in process", "[cli]") {
    using namespace qfchain::cli;
    const RunConfig c = parse_config(json::parse(slurp(config("xy_sweep.json"))));
    CHECK(c.model.name == "xy");
    CHECK(c.model.sites == 240);
    CHECK(c.seed == 11);
    REQUIRE(c.tasks.size() == 1);
    CHECK(c.tasks[0].subtasks.size() == 2);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"schema_version": 2, "model": {"name": "trivial", "L": 4}})")),
                    qfchain::ConfigError);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(csv_text(Series{"s", "k", "value", {{0, 1.0}, {1, -0.5}}}) == "k,value\n0,1\n1,-0.5\n");
}

TEST_CASE("emission", "[cli]") {
    using namespace qfchain::cli;
    const RunConfig empty =
        parse_config(json::parse(R"({"schema_version": 1, "model": {"name": "trivial", "L": 40, "params": {"mu": 1.0}}})"));
    const Report bare = run(empty);
    CHECK(bare.document["tasks"].empty());
    CHECK(bare.document["config"]["model"]["name"] == "trivial");
    CHECK_FALSE(bare.failed);

    const RunConfig config = parse_config(json::parse(R"({"schema_version": 1,
        "model": {"name": "kitaev", "L": 60, "params": {"J": 1.0, "lambda": 0.0}},
        "tasks": [{"type": "string-order", "k_max": 2, "origin": 10}]})"));
    const Report report = run(config);
    REQUIRE(report.series.size() == 1);
    const std::string csv = csv_text(report.series[0]);
    CHECK(csv.rfind("k,value\n0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    const fs::path a = scratch("emit-a");
    const fs::path b = scratch("emit-b");
    const std::vector<std::string> formats{"json", "csv"};
    const std::vector<std::string> first = emit(report, a.string(), formats);
    const std::vector<std::string> second = emit(report, b.string(), formats);
    REQUIRE(first.size() == 2);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(fs::path(first[i]).filename() == fs::path(second[i]).filename());
        CHECK(slurp(first[i]) == slurp(second[i]));
    }
    CHECK(slurp(a / "report.json").back() == '\n');
}
