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

#include "cylbo/cylbo.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

#include "cylbo/benchmarks.hpp"
#include "cylbo/error.hpp"
#include "cylbo/runio.hpp"
#include "cylbo/selftest.hpp"

struct cylbo_config {
    cylbo::RunConfig config;
    std::map<std::string, std::string> outputs;
};

struct cylbo_trace {
    int dim = 0;
    std::vector<cylbo::TraceRecord> records;
};

namespace {

thread_local std::string last_error;

cylbo_status to_status(cylbo::ErrorCode code) {
    using cylbo::ErrorCode;
    switch (code) {
    case ErrorCode::invalid_argument: return CYLBO_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return CYLBO_ERR_DIMENSION;
    case ErrorCode::out_of_domain: return CYLBO_ERR_DOMAIN;
    case ErrorCode::factorization_failed: return CYLBO_ERR_FACTORIZATION;
    case ErrorCode::unknown_id: return CYLBO_ERR_UNKNOWN_ID;
    case ErrorCode::config_error: return CYLBO_ERR_CONFIG;
    case ErrorCode::io_error: return CYLBO_ERR_IO;
    case ErrorCode::internal: return CYLBO_ERR_INTERNAL;
    }
    return CYLBO_ERR_INTERNAL;
}

template <class Fn>
cylbo_status guard(Fn&& fn) noexcept {
    try {
        last_error.clear();
        fn();
        return CYLBO_OK;
    } catch (const cylbo::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return CYLBO_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CYLBO_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return CYLBO_ERR_INTERNAL;
    }
}

void require_arg(const void* p, const char* what) {
    cylbo::require(p != nullptr, cylbo::ErrorCode::invalid_argument, std::string(what) + " is NULL");
}

cylbo_status copy_text(const std::string& text, char* buf, size_t capacity, size_t* needed) {
    if (needed != nullptr) *needed = text.size() + 1;
    if (buf == nullptr || capacity == 0) return needed != nullptr ? CYLBO_OK : CYLBO_ERR_INVALID_ARGUMENT;
    if (capacity < text.size() + 1) {
        last_error = "buffer too small";
        return CYLBO_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return CYLBO_OK;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    cylbo::require(static_cast<bool>(in), cylbo::ErrorCode::io_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    cylbo::require(static_cast<bool>(out), cylbo::ErrorCode::io_error, "cannot write '" + path + "'");
    out << text;
    out.flush();
    cylbo::require(static_cast<bool>(out), cylbo::ErrorCode::io_error, "failed writing '" + path + "'");
}

} // namespace

extern "C" {

const char* cylbo_version(void) {
    static const std::string version = cylbo::version_string();
    return version.c_str();
}

const char* cylbo_status_string(cylbo_status status) {
    switch (status) {
    case CYLBO_OK: return "ok";
    case CYLBO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CYLBO_ERR_DIMENSION: return "dimension mismatch";
    case CYLBO_ERR_DOMAIN: return "out of domain";
    case CYLBO_ERR_FACTORIZATION: return "factorization failed";
    case CYLBO_ERR_UNKNOWN_ID: return "unknown id";
    case CYLBO_ERR_CONFIG: return "config error";
    case CYLBO_ERR_IO: return "i/o error";
    case CYLBO_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cylbo_last_error(void) { return last_error.c_str(); }

cylbo_status cylbo_config_create(cylbo_config** out) {
    return guard([&] {
        require_arg(out, "out");
        *out = new cylbo_config();
    });
}

void cylbo_config_destroy(cylbo_config* config) { delete config; }

cylbo_status cylbo_config_load_json(cylbo_config* config, const char* json_text) {
    return guard([&] {
        require_arg(config, "config");
        require_arg(json_text, "json_text");
        std::map<std::string, std::string> outputs;
        config->config = cylbo::parse_run_config(json_text, &outputs);
        config->outputs = std::move(outputs);
    });
}

cylbo_status cylbo_config_set(cylbo_config* config, const char* key, const char* value) {
    return guard([&] {
        require_arg(config, "config");
        require_arg(key, "key");
        require_arg(value, "value");
        cylbo::set_config_value(config->config, key, value);
    });
}

cylbo_status cylbo_config_to_json(const cylbo_config* config, char* buf, size_t capacity, size_t* needed) {
    std::string text;
    const cylbo_status st = guard([&] {
        require_arg(config, "config");
        text = cylbo::dump_run_config(config->config);
    });
    return st != CYLBO_OK ? st : copy_text(text, buf, capacity, needed);
}

cylbo_status cylbo_config_output(const cylbo_config* config, const char* key, char* buf, size_t capacity,
                                 size_t* needed) {
    std::string text;
    const cylbo_status st = guard([&] {
        require_arg(config, "config");
        require_arg(key, "key");
        const auto it = config->outputs.find(key);
        if (it != config->outputs.end()) text = it->second;
    });
    return st != CYLBO_OK ? st : copy_text(text, buf, capacity, needed);
}

cylbo_status cylbo_run(const cylbo_config* config, const cylbo_run_options* options, cylbo_trace** out) {
    if (out != nullptr) *out = nullptr;
    auto trace = std::make_unique<cylbo_trace>();
    std::string failure;
    cylbo_status st = guard([&] {
        require_arg(config, "config");
        const cylbo::RunConfig& cfg = config->config;
        trace->dim = cfg.dim;
        const bool timing = options != nullptr && options->record_timing != 0;
        std::ofstream trace_file;
        std::unique_ptr<cylbo::TraceWriter> writer;
        if (options != nullptr && options->trace_path != nullptr) {
            trace_file.open(options->trace_path, std::ios::binary | std::ios::trunc);
            cylbo::require(static_cast<bool>(trace_file), cylbo::ErrorCode::io_error,
                           std::string("cannot write '") + options->trace_path + "'");
            writer = std::make_unique<cylbo::TraceWriter>(trace_file, cfg.dim, timing);
        }
        const auto observer = [&](const cylbo::TraceRecord& r) {
            if (writer) writer->write(r);
        };
        bool completed = false;
        std::exception_ptr error;
        try {
            cylbo::run(cfg, trace->records, observer);
            completed = true;
        } catch (const std::exception& e) {
            failure = e.what();
            error = std::current_exception();
        }
        if (options != nullptr && options->summary_path != nullptr) {
            std::vector<std::string> warnings;
            if (!completed) warnings.push_back("aborted: " + failure);
            write_file(options->summary_path,
                       cylbo::dump_summary(cylbo::make_summary(cfg, trace->records, completed, warnings)));
        }
        if (error) std::rethrow_exception(error);
    });
    if (st != CYLBO_OK && !failure.empty()) last_error = failure;
    if (out != nullptr && trace->dim > 0) *out = trace.release();
    return st;
}

size_t cylbo_trace_length(const cylbo_trace* trace) { return trace == nullptr ? 0 : trace->records.size(); }

int cylbo_trace_dim(const cylbo_trace* trace) { return trace == nullptr ? 0 : trace->dim; }

cylbo_status cylbo_trace_record(const cylbo_trace* trace, size_t index, cylbo_record* out) {
    return guard([&] {
        require_arg(trace, "trace");
        require_arg(out, "out");
        cylbo::require(index < trace->records.size(), cylbo::ErrorCode::invalid_argument, "record index out of range");
        const cylbo::TraceRecord& r = trace->records[index];
        *out = cylbo_record{r.iteration,    r.y,           r.best_y,           r.fit_seconds, r.acq_seconds,
                            r.eval_seconds, r.posterior_samples, r.mcmc_evals_per_update};
    });
}

cylbo_status cylbo_trace_x(const cylbo_trace* trace, size_t index, double* x, size_t dim) {
    return guard([&] {
        require_arg(trace, "trace");
        require_arg(x, "x");
        cylbo::require(index < trace->records.size(), cylbo::ErrorCode::invalid_argument, "record index out of range");
        cylbo::require(dim == static_cast<size_t>(trace->dim), cylbo::ErrorCode::dimension_mismatch,
                       "dim does not match the trace");
        const cylbo::Vector& v = trace->records[index].x;
        std::copy(v.data(), v.data() + v.size(), x);
    });
}

void cylbo_trace_destroy(cylbo_trace* trace) { delete trace; }

cylbo_status cylbo_benchmark_eval(const char* name, const double* x, size_t dim, double* out) {
    return guard([&] {
        require_arg(name, "name");
        require_arg(x, "x");
        require_arg(out, "out");
        const cylbo::BenchmarkFn fn = cylbo::make_benchmark(name, static_cast<int>(dim));
        *out = fn(Eigen::Map<const cylbo::Vector>(x, static_cast<Eigen::Index>(dim)));
    });
}

cylbo_status cylbo_compare(const char* const* summary_paths, size_t count, const char* plot_prefix, char* report,
                           size_t capacity, size_t* needed) {
    std::string text;
    const cylbo_status st = guard([&] {
        require_arg(summary_paths, "summary_paths");
        std::vector<cylbo::Summary> summaries;
        for (size_t i = 0; i < count; ++i) {
            require_arg(summary_paths[i], "summary path");
            summaries.push_back(cylbo::parse_summary(read_file(summary_paths[i])));
        }
        const cylbo::CompareReport r = cylbo::compare_summaries(summaries);
        text = cylbo::format_report(r);
        if (plot_prefix != nullptr) {
            for (const cylbo::VariantStats& v : r.variants) {
                write_file(std::string(plot_prefix) + v.variant + ".csv", cylbo::plot_data_csv(v));
            }
        }
    });
    return st != CYLBO_OK ? st : copy_text(text, report, capacity, needed);
}

cylbo_status cylbo_selftest(unsigned flags, cylbo_check_fn callback, void* user, int* all_passed) {
    return guard([&] {
        cylbo::SelftestOptions options;
        options.corrupt_benchmark_constant = (flags & CYLBO_SELFTEST_CORRUPT_BENCHMARK) != 0;
        bool ok = true;
        for (const cylbo::SelftestCheck& c : cylbo::run_selftest(options)) {
            ok = ok && c.passed;
            if (callback != nullptr) callback(c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), user);
        }
        if (all_passed != nullptr) *all_passed = ok ? 1 : 0;
    });
}

} // extern "C"
