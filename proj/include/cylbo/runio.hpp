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

#ifndef CYLBO_RUNIO_HPP
#define CYLBO_RUNIO_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cylbo/boloop.hpp"

namespace cylbo {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kTraceHeaderPrefix = "iter,y,best_y,fit_s,acq_s,eval_s";

std::string version_string();

/// Strict JSON run description; unknown keys and other schema versions are
/// rejected. An optional "output" object carries paths and is returned in
/// `outputs`.
RunConfig parse_run_config(std::string_view json_text, std::map<std::string, std::string>* outputs = nullptr);
std::string dump_run_config(const RunConfig& config);

/// Sets one dotted key (e.g. "mcmc.n_samples") from its text form. Checks
/// keys and types only; cross-field validation happens in run().
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// CSV trace: header `iter,y,best_y,fit_s,acq_s,eval_s,x0..x{d-1}`. Timing
/// columns are zero unless `with_timing`, so traces are reproducible byte for
/// byte.
class TraceWriter {
public:
    TraceWriter(std::ostream& out, int dim, bool with_timing);
    void write(const TraceRecord& record);

private:
    std::ostream& out_;
    int dim_;
    bool with_timing_;
};

std::string trace_header(int dim);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

struct Summary {
    std::string variant;
    std::string benchmark;
    int dim = 0;
    int budget = 0;
    std::uint64_t seed = 0;
    double best_y = 0.0;
    Vector argmin;
    Vector argmin_native;
    std::vector<double> best_trajectory;
    std::string code_version;
    std::string config_json;
    double total_fit_seconds = 0.0;
    double total_acq_seconds = 0.0;
    double total_eval_seconds = 0.0;
    bool completed = true;
    std::vector<std::string> warnings;
};

Summary make_summary(const RunConfig& config, const std::vector<TraceRecord>& trace, bool completed,
                     const std::vector<std::string>& warnings = {});
std::string dump_summary(const Summary& s);
Summary parse_summary(std::string_view json_text);

struct VariantStats {
    std::string variant;
    int runs = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single run
    std::vector<double> mean_trajectory;
    std::vector<double> std_trajectory;
};

struct CompareReport {
    std::string benchmark;
    int dim = 0;
    std::vector<VariantStats> variants;
};

/// Groups summaries by variant. All inputs must share benchmark and dim.
CompareReport compare_summaries(const std::vector<Summary>& summaries);
std::string format_report(const CompareReport& report);
/// `iteration,mean_best,std_best` rows for one variant.
std::string plot_data_csv(const VariantStats& stats);

} // namespace cylbo

#endif
