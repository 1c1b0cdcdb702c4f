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

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "cylbo/cylbo.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct RunArgs {
    std::string config_path;
    std::string variant;
    std::string benchmark;
    int dim = 0;
    int budget = 0;
    long long seed = -1;
    std::string out_dir;
    int jobs = 1;
    int repeats = 1;
    bool record_timing = false;
    std::vector<std::string> overrides;
};

std::string fetch_text(cylbo_status (*fn)(const cylbo_config*, char*, size_t, size_t*), const cylbo_config* cfg) {
    size_t needed = 0;
    if (fn(cfg, nullptr, 0, &needed) != CYLBO_OK) return {};
    std::string text(needed, '\0');
    fn(cfg, text.data(), text.size(), nullptr);
    text.resize(needed - 1);
    return text;
}

std::string config_output(const cylbo_config* cfg, const char* key) {
    size_t needed = 0;
    if (cylbo_config_output(cfg, key, nullptr, 0, &needed) != CYLBO_OK) return {};
    std::string text(needed, '\0');
    cylbo_config_output(cfg, key, text.data(), text.size(), nullptr);
    text.resize(needed - 1);
    return text;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

int report_error(const char* what, cylbo_status st) {
    std::cerr << "cylbo: " << what << ": " << cylbo_status_string(st);
    if (*cylbo_last_error() != '\0') std::cerr << ": " << cylbo_last_error();
    std::cerr << '\n';
    return st == CYLBO_ERR_CONFIG || st == CYLBO_ERR_UNKNOWN_ID ? kExitConfig : kExitFailure;
}

int cmd_run(const RunArgs& args) {
    cylbo_config* base = nullptr;
    cylbo_config_create(&base);
    std::unique_ptr<cylbo_config, void (*)(cylbo_config*)> guard(base, cylbo_config_destroy);

    if (!args.config_path.empty()) {
        std::string text;
        if (!read_file(args.config_path, text)) {
            std::cerr << "cylbo: cannot read config '" << args.config_path << "'\n";
            return kExitConfig;
        }
        if (const cylbo_status st = cylbo_config_load_json(base, text.c_str()); st != CYLBO_OK) {
            return report_error("config", st);
        }
    }
    std::vector<std::pair<std::string, std::string>> sets;
    if (!args.variant.empty()) sets.emplace_back("variant", args.variant);
    if (!args.benchmark.empty()) sets.emplace_back("benchmark", args.benchmark);
    if (args.dim > 0) sets.emplace_back("dim", std::to_string(args.dim));
    if (args.budget > 0) sets.emplace_back("budget", std::to_string(args.budget));
    if (args.seed >= 0) sets.emplace_back("seed", std::to_string(args.seed));
    for (const std::string& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "cylbo: --set expects key=value, got '" << kv << "'\n";
            return kExitConfig;
        }
        sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : sets) {
        if (const cylbo_status st = cylbo_config_set(base, key.c_str(), value.c_str()); st != CYLBO_OK) {
            return report_error(("--" + key).c_str(), st);
        }
    }

    const std::string effective = fetch_text(cylbo_config_to_json, base);
    {
        cylbo_config* check = nullptr;
        cylbo_config_create(&check);
        const cylbo_status st = cylbo_config_load_json(check, effective.c_str());
        cylbo_config_destroy(check);
        if (st != CYLBO_OK) return report_error("config", st);
    }
    const nlohmann::json echo = nlohmann::json::parse(effective);
    const std::string variant = echo.at("variant").get<std::string>();
    const std::string benchmark = echo.at("benchmark").get<std::string>();
    const std::string dim = std::to_string(echo.at("dim").get<int>());
    const auto first_seed = echo.at("seed").get<unsigned long long>();

    std::string out_dir = args.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("CYLBO_OUT_DIR");
        out_dir = env != nullptr && *env != '\0' ? env : ".";
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    struct Job {
        unsigned long long seed;
        std::string trace_path;
        std::string summary_path;
        cylbo_status status = CYLBO_OK;
        std::string error;
        double best_y = 0.0;
        size_t records = 0;
    };
    std::vector<Job> jobs;
    for (int i = 0; i < args.repeats; ++i) {
        Job job;
        job.seed = first_seed + static_cast<unsigned long long>(i);
        const std::string stem =
            (std::filesystem::path(out_dir) / (variant + "_" + benchmark + "_d" + dim + "_s" + std::to_string(job.seed)))
                .string();
        job.trace_path = stem + ".trace.csv";
        job.summary_path = stem + ".summary.json";
        if (args.repeats == 1) {
            if (const std::string p = config_output(base, "trace"); !p.empty()) job.trace_path = p;
            if (const std::string p = config_output(base, "summary"); !p.empty()) job.summary_path = p;
        }
        jobs.push_back(job);
    }

    std::atomic<size_t> next{0};
    std::mutex print_mutex;
    const auto worker = [&] {
        for (size_t i = next++; i < jobs.size(); i = next++) {
            Job& job = jobs[i];
            cylbo_config* cfg = nullptr;
            cylbo_config_create(&cfg);
            cylbo_config_load_json(cfg, effective.c_str());
            cylbo_config_set(cfg, "seed", std::to_string(job.seed).c_str());
            const cylbo_run_options options{job.trace_path.c_str(), job.summary_path.c_str(),
                                            args.record_timing ? 1 : 0};
            cylbo_trace* trace = nullptr;
            job.status = cylbo_run(cfg, &options, &trace);
            if (job.status != CYLBO_OK) job.error = cylbo_last_error();
            job.records = cylbo_trace_length(trace);
            if (job.records > 0) {
                cylbo_record rec{};
                cylbo_trace_record(trace, job.records - 1, &rec);
                job.best_y = rec.best_y;
            }
            cylbo_trace_destroy(trace);
            cylbo_config_destroy(cfg);

            const std::lock_guard<std::mutex> lock(print_mutex);
            if (job.status == CYLBO_OK) {
                std::printf("seed %llu: best_y %.10g after %zu evaluations\n  trace   %s\n  summary %s\n", job.seed,
                            job.best_y, job.records, job.trace_path.c_str(), job.summary_path.c_str());
            } else {
                std::fprintf(stderr, "cylbo: seed %llu aborted after %zu evaluations: %s: %s\n", job.seed,
                             job.records, cylbo_status_string(job.status), job.error.c_str());
            }
            std::fflush(stdout);
        }
    };
    const int threads = std::max(1, std::min<int>(args.jobs, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    int code = 0;
    for (const Job& job : jobs) {
        if (job.status == CYLBO_ERR_CONFIG || job.status == CYLBO_ERR_UNKNOWN_ID) code = std::max(code, kExitConfig);
        else if (job.status != CYLBO_OK) code = std::max(code, kExitFailure);
    }
    return code;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& plot_prefix) {
    std::vector<const char*> paths;
    for (const std::string& f : files) paths.push_back(f.c_str());
    const char* prefix = plot_prefix.empty() ? nullptr : plot_prefix.c_str();
    size_t needed = 0;
    cylbo_status st = cylbo_compare(paths.data(), paths.size(), prefix, nullptr, 0, &needed);
    if (st != CYLBO_OK) return report_error("compare", st);
    std::string report(needed, '\0');
    st = cylbo_compare(paths.data(), paths.size(), nullptr, report.data(), report.size(), nullptr);
    if (st != CYLBO_OK) return report_error("compare", st);
    report.resize(needed - 1);
    std::cout << report;
    return 0;
}

int cmd_selftest(bool inject_fault) {
    const auto print = [](const char* name, int passed, const char* detail, void*) {
        std::printf("%-26s %s  %s\n", name, passed ? "PASS" : "FAIL", detail);
        std::fflush(stdout);
    };
    int all_passed = 0;
    const cylbo_status st = cylbo_selftest(inject_fault ? CYLBO_SELFTEST_CORRUPT_BENCHMARK : 0u, print, nullptr,
                                           &all_passed);
    if (st != CYLBO_OK) return report_error("selftest", st);
    std::printf("selftest: %s\n", all_passed ? "all checks passed" : "FAILED");
    return all_passed ? 0 : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cylindrical-kernel Bayesian optimization on a ball"};
    app.set_version_flag("--version", std::string(cylbo_version()));
    app.require_subcommand(1);

    RunArgs run;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one optimization (or several seeds) and write trace + summary");
    run_cmd->add_option("--config", run.config_path, "JSON run description")->check(CLI::ExistingFile);
    run_cmd->add_option("--variant", run.variant, "bock, bock_w, bock_b, matern_cube or random");
    run_cmd->add_option("--benchmark", run.benchmark, "repeated_branin, repeated_hartmann6, rosenbrock or levy");
    run_cmd->add_option("--dim", run.dim, "Search-space dimension")->check(CLI::PositiveNumber);
    run_cmd->add_option("--budget", run.budget, "Number of function evaluations")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "RNG seed (first seed when repeating)")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--out", run.out_dir, "Output directory (default $CYLBO_OUT_DIR or .)");
    run_cmd->add_option("--jobs", run.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
    run_cmd->add_option("--repeats", run.repeats, "Consecutive seeds to run")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--record-timing", run.record_timing, "Write wall-clock seconds into the trace");
    run_cmd->add_option("--set", run.overrides, "Override a config key, e.g. mcmc.n_samples=5");

    std::vector<std::string> summaries;
    std::string plot_prefix;
    CLI::App* compare_cmd = app.add_subcommand("compare", "Mean +- std of final best values per variant");
    compare_cmd->add_option("summaries", summaries, "Summary files")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--plot-data", plot_prefix, "Write <prefix><variant>.csv with mean/std trajectories");

    bool inject_fault = false;
    CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the built-in property checks");
    selftest_cmd->add_flag("--inject-fault", inject_fault)->group("");

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) return cmd_run(run);
    if (*compare_cmd) return cmd_compare(summaries, plot_prefix);
    if (*selftest_cmd) return cmd_selftest(inject_fault);
    return kExitFailure;
}
