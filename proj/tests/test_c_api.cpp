/*
 * Copyright 2026 The cylbo Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cylbo/cylbo.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    cylbo_config* h = nullptr;
    Config() { REQUIRE(cylbo_config_create(&h) == CYLBO_OK); }
    ~Config() { cylbo_config_destroy(h); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "cylbo_c_api_test";
    fs::create_directories(dir);
    return dir / name;
}

void collect(const char* name, int passed, const char*, void* user) {
    auto* out = static_cast<std::vector<std::pair<std::string, int>>*>(user);
    out->emplace_back(name, passed);
}

} // namespace

TEST_CASE("version and status strings") {
    CHECK(std::string(cylbo_version()).size() > 0);
    CHECK(std::string(cylbo_status_string(CYLBO_OK)) != std::string(cylbo_status_string(CYLBO_ERR_CONFIG)));
}

TEST_CASE("config errors map to status codes") {
    Config c;
    CHECK(cylbo_config_load_json(c.h, "{\"schema_version\": 1, \"bogus\": 1}") == CYLBO_ERR_CONFIG);
    CHECK(std::string(cylbo_last_error()).find("bogus") != std::string::npos);
    CHECK(cylbo_config_load_json(c.h, "{\"schema_version\": 1, \"benchmark\": \"nope\"}") == CYLBO_ERR_UNKNOWN_ID);
    CHECK(cylbo_config_set(c.h, "budget", "0") == CYLBO_OK);
    cylbo_trace* t = nullptr;
    CHECK(cylbo_run(c.h, nullptr, &t) == CYLBO_ERR_CONFIG);
    cylbo_trace_destroy(t);
    CHECK(cylbo_config_set(c.h, "no.such", "1") == CYLBO_ERR_CONFIG);
    CHECK(cylbo_config_load_json(nullptr, "{}") == CYLBO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config text is copied with size negotiation") {
    Config c;
    REQUIRE(cylbo_config_load_json(
                c.h, "{\"schema_version\": 1, \"variant\": \"random\", \"output\": {\"trace\": \"a.csv\"}}") ==
            CYLBO_OK);
    size_t needed = 0;
    CHECK(cylbo_config_to_json(c.h, nullptr, 0, &needed) == CYLBO_OK);
    REQUIRE(needed > 1);
    std::vector<char> buf(needed);
    CHECK(cylbo_config_to_json(c.h, buf.data(), buf.size(), &needed) == CYLBO_OK);
    CHECK(std::string(buf.data()).find("\"random\"") != std::string::npos);
    char path[16];
    CHECK(cylbo_config_output(c.h, "trace", path, sizeof path, nullptr) == CYLBO_OK);
    CHECK(std::string(path) == "a.csv");
    CHECK(cylbo_config_output(c.h, "summary", path, sizeof path, nullptr) == CYLBO_OK);
    CHECK(std::string(path).empty());
}

TEST_CASE("run writes trace and summary through the C interface") {
    Config c;
    REQUIRE(cylbo_config_load_json(c.h, "{\"schema_version\": 1, \"variant\": \"random\", \"benchmark\": "
                                        "\"rosenbrock\", \"dim\": 2, \"budget\": 6, \"seed\": 7}") == CYLBO_OK);
    const fs::path trace_path = scratch("run.trace.csv");
    const fs::path summary_path = scratch("run.summary.json");
    const std::string tp = trace_path.string(), sp = summary_path.string();
    cylbo_run_options opts{tp.c_str(), sp.c_str(), 0};
    cylbo_trace* t = nullptr;
    REQUIRE(cylbo_run(c.h, &opts, &t) == CYLBO_OK);
    REQUIRE(t != nullptr);
    CHECK(cylbo_trace_length(t) == 6);
    CHECK(cylbo_trace_dim(t) == 2);
    cylbo_record r{};
    REQUIRE(cylbo_trace_record(t, 0, &r) == CYLBO_OK);
    double x[2] = {0.0, 0.0};
    REQUIRE(cylbo_trace_x(t, 0, x, 2) == CYLBO_OK);
    CHECK(x[0] * x[0] + x[1] * x[1] <= 2.0);
    double expect = 0.0;
    REQUIRE(cylbo_benchmark_eval("rosenbrock", x, 2, &expect) == CYLBO_OK);
    CHECK(r.y == expect);
    CHECK(cylbo_trace_record(t, 6, &r) == CYLBO_ERR_INVALID_ARGUMENT);
    CHECK(cylbo_trace_x(t, 0, x, 3) == CYLBO_ERR_DIMENSION);
    cylbo_trace_destroy(t);

    const std::string trace = slurp(trace_path);
    CHECK(trace.rfind("iter,y,best_y,fit_s,acq_s,eval_s,x0,x1\n", 0) == 0);
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 7);
    CHECK(slurp(summary_path).find("\"completed\": true") != std::string::npos);

    const std::string paths[2] = {sp, sp};
    const char* argv[2] = {paths[0].c_str(), paths[1].c_str()};
    size_t needed = 0;
    CHECK(cylbo_compare(argv, 2, nullptr, nullptr, 0, &needed) == CYLBO_OK);
    std::vector<char> report(needed);
    CHECK(cylbo_compare(argv, 2, nullptr, report.data(), report.size(), nullptr) == CYLBO_OK);
    CHECK(std::string(report.data()).find("random") != std::string::npos);
}

TEST_CASE("benchmark evaluation validates its inputs") {
    const double x[2] = {0.0, 0.0};
    double y = 0.0;
    CHECK(cylbo_benchmark_eval("repeated_branin", x, 2, &y) == CYLBO_OK);
    CHECK(std::isfinite(y));
    CHECK(cylbo_benchmark_eval("repeated_branin", x, 1, &y) != CYLBO_OK);
    CHECK(cylbo_benchmark_eval("sphere", x, 2, &y) == CYLBO_ERR_UNKNOWN_ID);
    CHECK(cylbo_benchmark_eval(nullptr, x, 2, &y) == CYLBO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("selftest reports each check and detects a corrupted benchmark") {
    std::vector<std::pair<std::string, int>> checks;
    int all = 0;
    REQUIRE(cylbo_selftest(0, collect, &checks, &all) == CYLBO_OK);
    CHECK(all == 1);
    CHECK(checks.size() == 4);
    checks.clear();
    REQUIRE(cylbo_selftest(CYLBO_SELFTEST_CORRUPT_BENCHMARK, collect, &checks, &all) == CYLBO_OK);
    CHECK(all == 0);
    int failed = 0;
    for (const auto& [name, passed] : checks) failed += passed ? 0 : 1;
    CHECK(failed == 1);
}
