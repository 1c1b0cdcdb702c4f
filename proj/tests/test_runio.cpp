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

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cylbo/error.hpp"
#include "cylbo/geometry.hpp"
#include "cylbo/runio.hpp"

using namespace cylbo;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::internal;
}

RunConfig random_config(const std::string& bench, int dim, int budget, std::uint64_t seed) {
    RunConfig c;
    c.variant = Variant::random;
    c.benchmark = bench;
    c.dim = dim;
    c.budget = budget;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("run config JSON round trip") {
    RunConfig c;
    c.variant = Variant::bock_b;
    c.benchmark = "levy";
    c.dim = 5;
    c.budget = 17;
    c.seed = 18446744073709551615ull;
    c.mcmc.n_samples = 4;
    c.acquisition.kind = AcquisitionKind::ucb;
    c.acquisition.step_scale = 0.1 / 3.0;
    c.prior.log_alpha.slab_sd = 1.5;
    const RunConfig back = parse_run_config(dump_run_config(c));
    CHECK(dump_run_config(back) == dump_run_config(c));
    CHECK(back.seed == c.seed);
    CHECK(back.acquisition.step_scale == c.acquisition.step_scale);
    CHECK(back.variant == Variant::bock_b);
}

TEST_CASE("run config parsing is strict") {
    CHECK(code_of([] { parse_run_config("{"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config("{}"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 2})"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "budgett": 3})"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "mcmc": {"samples": 3}})"); }) ==
          ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "dim": 2.5})"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "dim": "2"})"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "seed": -1})"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "variant": "tpe"})"); }) == ErrorCode::unknown_id);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "benchmark": "sphere"})"); }) ==
          ErrorCode::unknown_id);
    CHECK(code_of([] { parse_run_config(R"({"schema_version": 1, "budget": 0})"); }) == ErrorCode::config_error);

    std::map<std::string, std::string> outputs;
    const RunConfig c = parse_run_config(
        R"({"schema_version": 1, "variant": "random", "dim": 3, "output": {"trace": "t.csv", "summary": "s.json"}})",
        &outputs);
    CHECK(c.variant == Variant::random);
    CHECK(c.dim == 3);
    CHECK(c.budget == RunConfig{}.budget);
    CHECK(outputs.at("trace") == "t.csv");
    CHECK(outputs.at("summary") == "s.json");
}

TEST_CASE("dotted keys override config values") {
    RunConfig c;
    set_config_value(c, "mcmc.n_samples", "4");
    set_config_value(c, "variant", "matern_cube");
    set_config_value(c, "acquisition.kind", "ucb");
    set_config_value(c, "prior.log_noise.mean", "-6.5");
    set_config_value(c, "seed", "99");
    CHECK(c.mcmc.n_samples == 4);
    CHECK(c.variant == Variant::matern_cube);
    CHECK(c.acquisition.kind == AcquisitionKind::ucb);
    CHECK(c.prior.log_noise.mean == -6.5);
    CHECK(c.seed == 99);
    CHECK(code_of([&] { set_config_value(c, "mcmc.n_sample", "4"); }) == ErrorCode::config_error);
    CHECK(code_of([&] { set_config_value(c, "mcmc", "4"); }) == ErrorCode::config_error);
    CHECK(code_of([&] { set_config_value(c, "dim", "two"); }) == ErrorCode::config_error);
}

TEST_CASE("trace header is exact and timing columns default to zero") {
    CHECK(trace_header(3) == "iter,y,best_y,fit_s,acq_s,eval_s,x0,x1,x2");
    std::ostringstream out;
    TraceWriter w(out, 2, false);
    TraceRecord r;
    r.x = Eigen::Vector2d(0.1, -0.25);
    r.y = 1.5;
    r.best_y = 1.5;
    r.fit_seconds = 3.0;
    w.write(r);
    CHECK(out.str() == "iter,y,best_y,fit_s,acq_s,eval_s,x0,x1\n0,1.5,1.5,0,0,0,0.10000000000000001,-0.25\n");
    std::ostringstream timed;
    TraceWriter wt(timed, 2, true);
    wt.write(r);
    CHECK(timed.str().find(",3,") != std::string::npos);
    TraceRecord wrong;
    wrong.x = Vector::Zero(3);
    CHECK(code_of([&] { w.write(wrong); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("traces parse back losslessly") {
    const RunConfig c = random_config("levy", 3, 40, 4);
    const auto trace = run(c);
    std::stringstream buf;
    TraceWriter w(buf, 3, true);
    for (const TraceRecord& r : trace) w.write(r);
    const auto back = read_trace_csv(buf);
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(back[i].iteration == trace[i].iteration);
        CHECK(back[i].x == trace[i].x);
        CHECK(back[i].y == trace[i].y);
        CHECK(back[i].best_y == trace[i].best_y);
        CHECK(back[i].best_x == trace[i].best_x);
        CHECK(back[i].eval_seconds == trace[i].eval_seconds);
    }
}

TEST_CASE("malformed traces are rejected") {
    std::istringstream bad_header("iter,y,best\n");
    CHECK(code_of([&] { read_trace_csv(bad_header); }) == ErrorCode::io_error);
    std::istringstream short_row("iter,y,best_y,fit_s,acq_s,eval_s,x0\n0,1,1,0,0\n");
    CHECK(code_of([&] { read_trace_csv(short_row); }) == ErrorCode::io_error);
    std::istringstream bad_number("iter,y,best_y,fit_s,acq_s,eval_s,x0\n0,1,1,0,0,0,abc\n");
    CHECK(code_of([&] { read_trace_csv(bad_number); }) == ErrorCode::io_error);
    std::istringstream out_of_order("iter,y,best_y,fit_s,acq_s,eval_s,x0\n1,1,1,0,0,0,0\n");
    CHECK(code_of([&] { read_trace_csv(out_of_order); }) == ErrorCode::io_error);
    std::istringstream empty("");
    CHECK(code_of([&] { read_trace_csv(empty); }) == ErrorCode::io_error);
}

TEST_CASE("summary round trip") {
    const RunConfig c = random_config("rosenbrock", 2, 12, 3);
    const auto trace = run(c);
    const Summary s = make_summary(c, trace, true, {"note"});
    CHECK(s.best_y == trace.back().best_y);
    CHECK(s.argmin == trace.back().best_x);
    CHECK(s.argmin_native == domain_affine("rosenbrock", s.argmin));
    CHECK(s.best_trajectory.size() == 12);
    CHECK(s.code_version == version_string());
    const Summary back = parse_summary(dump_summary(s));
    CHECK(back.variant == "random");
    CHECK(back.benchmark == "rosenbrock");
    CHECK(back.seed == 3);
    CHECK(back.best_y == s.best_y);
    CHECK(back.argmin == s.argmin);
    CHECK(back.best_trajectory == s.best_trajectory);
    CHECK(back.config_json == s.config_json);
    CHECK(back.warnings == s.warnings);
    CHECK(back.completed);
    CHECK(parse_run_config(back.config_json).budget == 12);

    const Summary empty = make_summary(c, {}, false);
    const Summary empty_back = parse_summary(dump_summary(empty));
    CHECK(std::isnan(empty_back.best_y));
    CHECK_FALSE(empty_back.completed);
    CHECK(code_of([] { parse_summary("{\"schema_version\": 1}"); }) == ErrorCode::io_error);
}

TEST_CASE("compare: identical summaries have zero spread") {
    const RunConfig c = random_config("levy", 2, 10, 1);
    const Summary s = make_summary(c, run(c), true);
    const CompareReport r = compare_summaries({s, s});
    REQUIRE(r.variants.size() == 1);
    CHECK(r.variants[0].runs == 2);
    CHECK(r.variants[0].stddev == 0.0);
    CHECK(r.variants[0].mean == s.best_y);
}

TEST_CASE("compare: five random-search seeds match a direct recomputation") {
    std::vector<Summary> summaries;
    std::vector<std::vector<TraceRecord>> traces;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const RunConfig c = random_config("levy", 2, 30, seed);
        traces.push_back(run(c));
        summaries.push_back(parse_summary(dump_summary(make_summary(c, traces.back(), true))));
    }
    double mean = 0.0;
    for (const auto& t : traces) {
        double best = t.front().y;
        for (const TraceRecord& r : t) best = std::min(best, r.y);
        mean += best / 5.0;
    }
    double ss = 0.0;
    for (const auto& t : traces) {
        double best = t.front().y;
        for (const TraceRecord& r : t) best = std::min(best, r.y);
        ss += (best - mean) * (best - mean);
    }
    const CompareReport r = compare_summaries(summaries);
    REQUIRE(r.variants.size() == 1);
    CHECK(r.variants[0].mean == doctest::Approx(mean).epsilon(1e-14));
    CHECK(r.variants[0].stddev == doctest::Approx(std::sqrt(ss / 4.0)).epsilon(1e-12));
    CHECK(r.variants[0].mean_trajectory.size() == 30);
    CHECK(r.variants[0].mean_trajectory.back() == doctest::Approx(mean).epsilon(1e-14));

    const std::string csv = plot_data_csv(r.variants[0]);
    CHECK(csv.rfind("iteration,mean_best,std_best\n0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
    CHECK(format_report(r).find("random") != std::string::npos);
}

TEST_CASE("compare: variants are grouped and mixed benchmarks rejected") {
    const RunConfig a = random_config("levy", 2, 5, 1);
    RunConfig b = a;
    b.variant = Variant::bock;
    Summary sa = make_summary(a, run(a), true);
    Summary sb = sa;
    sb.variant = "bock";
    const CompareReport r = compare_summaries({sa, sb, sa});
    REQUIRE(r.variants.size() == 2);
    CHECK(r.variants[0].variant == "random");
    CHECK(r.variants[0].runs == 2);
    CHECK(r.variants[1].runs == 1);

    Summary other = sa;
    other.benchmark = "rosenbrock";
    CHECK(code_of([&] { compare_summaries({sa, other}); }) == ErrorCode::invalid_argument);
    Summary other_dim = sa;
    other_dim.dim = 3;
    CHECK(code_of([&] { compare_summaries({sa, other_dim}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { compare_summaries({}); }) == ErrorCode::invalid_argument);
}
