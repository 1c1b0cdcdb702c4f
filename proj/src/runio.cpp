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

#include "cylbo/runio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cylbo/error.hpp"

namespace cylbo {

using nlohmann::json;

namespace {

void allow_keys(const json& j, std::initializer_list<std::string_view> keys, std::string_view where) {
    require(j.is_object(), ErrorCode::config_error, std::string(where) + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (std::string_view k : keys) known = known || k == key;
        require(known, ErrorCode::config_error, "unknown key '" + key + "' in " + std::string(where));
    }
}

void read_int(const json& j, const char* key, int& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    require(v.is_number_integer(), ErrorCode::config_error, std::string("'") + key + "' must be an integer");
    const auto n = v.get<long long>();
    require(n >= std::numeric_limits<int>::min() && n <= std::numeric_limits<int>::max(), ErrorCode::config_error,
            std::string("'") + key + "' is out of range");
    out = static_cast<int>(n);
}

void read_double(const json& j, const char* key, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    require(v.is_number(), ErrorCode::config_error, std::string("'") + key + "' must be a number");
    out = v.get<double>();
}

void read_bool(const json& j, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    require(v.is_boolean(), ErrorCode::config_error, std::string("'") + key + "' must be a boolean");
    out = v.get<bool>();
}

void read_string(const json& j, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    require(v.is_string(), ErrorCode::config_error, std::string("'") + key + "' must be a string");
    out = v.get<std::string>();
}

std::string_view to_string(AcquisitionKind k) { return k == AcquisitionKind::ucb ? "ucb" : "expected_improvement"; }

AcquisitionKind parse_acquisition_kind(const std::string& s) {
    if (s == "expected_improvement") return AcquisitionKind::expected_improvement;
    if (s == "ucb") return AcquisitionKind::ucb;
    fail(ErrorCode::config_error, "unknown acquisition kind '" + s + "'");
}

void read_spike_slab(const json& j, const char* key, SpikeSlab& out) {
    if (!j.contains(key)) return;
    const json& s = j.at(key);
    allow_keys(s, {"spike_sd", "slab_sd", "spike_weight"}, key);
    read_double(s, "spike_sd", out.spike_sd);
    read_double(s, "slab_sd", out.slab_sd);
    read_double(s, "spike_weight", out.spike_weight);
}

void read_normal(const json& j, const char* key, NormalPrior& out) {
    if (!j.contains(key)) return;
    const json& s = j.at(key);
    allow_keys(s, {"mean", "sd"}, key);
    read_double(s, "mean", out.mean);
    read_double(s, "sd", out.sd);
}

json config_to_json(const RunConfig& c) {
    const auto normal = [](const NormalPrior& p) { return json{{"mean", p.mean}, {"sd", p.sd}}; };
    const auto spike = [](const SpikeSlab& p) {
        return json{{"spike_sd", p.spike_sd}, {"slab_sd", p.slab_sd}, {"spike_weight", p.spike_weight}};
    };
    const AcquisitionConfig& a = c.acquisition;
    return json{
        {"schema_version", kSchemaVersion},
        {"variant", std::string(to_string(c.variant))},
        {"benchmark", c.benchmark},
        {"dim", c.dim},
        {"budget", c.budget},
        {"seed", c.seed},
        {"degree", c.degree},
        {"initial_sobol", c.initial_sobol},
        {"standardize", c.standardize},
        {"mcmc",
         {{"n_samples", c.mcmc.n_samples},
          {"burn_in", c.mcmc.burn_in},
          {"warm_burn_in", c.mcmc.warm_burn_in},
          {"thin", c.mcmc.thin},
          {"width", c.mcmc.width}}},
        {"acquisition",
         {{"kind", std::string(to_string(a.kind))},
          {"n_sobol", a.n_sobol},
          {"n_starts", a.n_starts},
          {"ascent_steps", a.ascent_steps},
          {"step_scale", a.step_scale},
          {"beta1", a.beta1},
          {"beta2", a.beta2},
          {"adam_eps", a.adam_eps},
          {"fd_scale", a.fd_scale},
          {"ucb_kappa", a.ucb_kappa}}},
        {"prior",
         {{"log_alpha", spike(c.prior.log_alpha)},
          {"log_beta", spike(c.prior.log_beta)},
          {"log_c", normal(c.prior.log_c)},
          {"log_ell", normal(c.prior.log_ell)},
          {"log_amp", normal(c.prior.log_amp)},
          {"log_noise", normal(c.prior.log_noise)}}},
    };
}

RunConfig config_from_json(const json& j, std::map<std::string, std::string>* outputs, bool validate = true) {
    allow_keys(j,
               {"schema_version", "variant", "benchmark", "dim", "budget", "seed", "degree", "initial_sobol",
                "standardize", "mcmc", "acquisition", "prior", "output"},
               "run config");
    require(j.contains("schema_version"), ErrorCode::config_error, "missing 'schema_version'");
    int version = 0;
    read_int(j, "schema_version", version);
    require(version == kSchemaVersion, ErrorCode::config_error,
            "unsupported schema_version " + std::to_string(version));

    RunConfig c;
    std::string text;
    if (j.contains("variant")) {
        read_string(j, "variant", text);
        c.variant = parse_variant(text);
    }
    read_string(j, "benchmark", c.benchmark);
    read_int(j, "dim", c.dim);
    read_int(j, "budget", c.budget);
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        require(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0), ErrorCode::config_error,
                "'seed' must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    read_int(j, "degree", c.degree);
    read_int(j, "initial_sobol", c.initial_sobol);
    read_bool(j, "standardize", c.standardize);

    if (j.contains("mcmc")) {
        const json& m = j.at("mcmc");
        allow_keys(m, {"n_samples", "burn_in", "warm_burn_in", "thin", "width"}, "mcmc");
        read_int(m, "n_samples", c.mcmc.n_samples);
        read_int(m, "burn_in", c.mcmc.burn_in);
        read_int(m, "warm_burn_in", c.mcmc.warm_burn_in);
        read_int(m, "thin", c.mcmc.thin);
        read_double(m, "width", c.mcmc.width);
    }
    if (j.contains("acquisition")) {
        const json& a = j.at("acquisition");
        allow_keys(a,
                   {"kind", "n_sobol", "n_starts", "ascent_steps", "step_scale", "beta1", "beta2", "adam_eps",
                    "fd_scale", "ucb_kappa"},
                   "acquisition");
        if (a.contains("kind")) {
            read_string(a, "kind", text);
            c.acquisition.kind = parse_acquisition_kind(text);
        }
        read_int(a, "n_sobol", c.acquisition.n_sobol);
        read_int(a, "n_starts", c.acquisition.n_starts);
        read_int(a, "ascent_steps", c.acquisition.ascent_steps);
        read_double(a, "step_scale", c.acquisition.step_scale);
        read_double(a, "beta1", c.acquisition.beta1);
        read_double(a, "beta2", c.acquisition.beta2);
        read_double(a, "adam_eps", c.acquisition.adam_eps);
        read_double(a, "fd_scale", c.acquisition.fd_scale);
        read_double(a, "ucb_kappa", c.acquisition.ucb_kappa);
    }
    if (j.contains("prior")) {
        const json& p = j.at("prior");
        allow_keys(p, {"log_alpha", "log_beta", "log_c", "log_ell", "log_amp", "log_noise"}, "prior");
        read_spike_slab(p, "log_alpha", c.prior.log_alpha);
        read_spike_slab(p, "log_beta", c.prior.log_beta);
        read_normal(p, "log_c", c.prior.log_c);
        read_normal(p, "log_ell", c.prior.log_ell);
        read_normal(p, "log_amp", c.prior.log_amp);
        read_normal(p, "log_noise", c.prior.log_noise);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        allow_keys(o, {"trace", "summary"}, "output");
        for (const char* key : {"trace", "summary"}) {
            std::string path;
            read_string(o, key, path);
            if (outputs != nullptr && !path.empty()) (*outputs)[key] = path;
        }
    }
    if (validate) c.validate();
    return c;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector json_vector(const json& j) {
    require(j.is_array(), ErrorCode::io_error, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorCode::io_error, "bad number '" + s + "' in trace");
    }
    require(used == s.size(), ErrorCode::io_error, "bad number '" + s + "' in trace");
    return v;
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

#define CYLBO_STR_IMPL(x) #x
#define CYLBO_STR(x) CYLBO_STR_IMPL(x)

std::string version_string() { return CYLBO_STR(CYLBO_VERSION_STRING); }

RunConfig parse_run_config(std::string_view json_text, std::map<std::string, std::string>* outputs) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorCode::config_error, std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return config_from_json(j, outputs);
    } catch (const json::exception& e) {
        fail(ErrorCode::config_error, std::string("bad config value: ") + e.what());
    }
}

std::string dump_run_config(const RunConfig& config) { return config_to_json(config).dump(2); }

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
    require(!key.empty(), ErrorCode::config_error, "empty config key");
    json j = config_to_json(config);
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = std::string(value);

    json* node = &j;
    std::string_view rest = key;
    while (true) {
        const auto dot = rest.find('.');
        const std::string part(rest.substr(0, dot));
        require(node->is_object() && node->contains(part), ErrorCode::config_error,
                "unknown config key '" + std::string(key) + "'");
        node = &(*node)[part];
        if (dot == std::string_view::npos) break;
        rest = rest.substr(dot + 1);
    }
    require(!node->is_object(), ErrorCode::config_error, "config key '" + std::string(key) + "' is a section");
    *node = parsed;
    try {
        config = config_from_json(j, nullptr, false);
    } catch (const json::exception& e) {
        fail(ErrorCode::config_error, "bad value for '" + std::string(key) + "': " + e.what());
    }
}

std::string trace_header(int dim) {
    std::string h(kTraceHeaderPrefix);
    for (int i = 0; i < dim; ++i) h += ",x" + std::to_string(i);
    return h;
}

TraceWriter::TraceWriter(std::ostream& out, int dim, bool with_timing)
    : out_(out), dim_(dim), with_timing_(with_timing) {
    out_ << trace_header(dim_) << '\n';
    out_.flush();
}

void TraceWriter::write(const TraceRecord& r) {
    require(r.x.size() == dim_, ErrorCode::dimension_mismatch, "trace record has the wrong dimension");
    const auto timing = [&](double s) { return with_timing_ ? format_double(s) : std::string("0"); };
    std::string line = std::to_string(r.iteration) + ',' + format_double(r.y) + ',' + format_double(r.best_y) + ',' +
                       timing(r.fit_seconds) + ',' + timing(r.acq_seconds) + ',' + timing(r.eval_seconds);
    for (int i = 0; i < dim_; ++i) line += ',' + format_double(r.x[i]);
    out_ << line << '\n';
    out_.flush();
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::io_error, "trace is empty");
    const std::vector<std::string> header = split_csv(line);
    const auto prefix = split_csv(std::string(kTraceHeaderPrefix));
    require(header.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), header.begin()),
            ErrorCode::io_error, "trace header does not start with '" + std::string(kTraceHeaderPrefix) + "'");
    const int dim = static_cast<int>(header.size() - prefix.size());
    require(line == trace_header(dim), ErrorCode::io_error, "malformed trace header");

    std::vector<TraceRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv(line);
        require(f.size() == header.size(), ErrorCode::io_error,
                "trace row " + std::to_string(out.size()) + " has the wrong number of fields");
        TraceRecord r;
        const double iter = parse_number(f[0]);
        require(iter == static_cast<double>(out.size()), ErrorCode::io_error, "trace rows are out of order");
        r.iteration = static_cast<int>(iter);
        r.y = parse_number(f[1]);
        r.best_y = parse_number(f[2]);
        r.fit_seconds = parse_number(f[3]);
        r.acq_seconds = parse_number(f[4]);
        r.eval_seconds = parse_number(f[5]);
        r.x.resize(dim);
        for (int i = 0; i < dim; ++i) r.x[i] = parse_number(f[prefix.size() + static_cast<std::size_t>(i)]);
        const bool improved = out.empty() || r.y < out.back().best_y;
        r.best_x = improved ? r.x : out.back().best_x;
        out.push_back(std::move(r));
    }
    return out;
}

Summary make_summary(const RunConfig& config, const std::vector<TraceRecord>& trace, bool completed,
                     const std::vector<std::string>& warnings) {
    Summary s;
    s.variant = std::string(to_string(config.variant));
    s.benchmark = config.benchmark;
    s.dim = config.dim;
    s.budget = config.budget;
    s.seed = config.seed;
    s.best_y = std::numeric_limits<double>::quiet_NaN();
    if (!trace.empty()) {
        s.best_y = trace.back().best_y;
        s.argmin = trace.back().best_x;
        s.argmin_native = domain_affine(config.benchmark, s.argmin);
    }
    for (const TraceRecord& r : trace) {
        s.best_trajectory.push_back(r.best_y);
        s.total_fit_seconds += r.fit_seconds;
        s.total_acq_seconds += r.acq_seconds;
        s.total_eval_seconds += r.eval_seconds;
    }
    s.code_version = version_string();
    s.config_json = config_to_json(config).dump();
    s.completed = completed;
    s.warnings = warnings;
    return s;
}

std::string dump_summary(const Summary& s) {
    json traj = json::array();
    for (double v : s.best_trajectory) traj.push_back(number_or_null(v));
    const json j{
        {"schema_version", kSchemaVersion},
        {"variant", s.variant},
        {"benchmark", s.benchmark},
        {"dim", s.dim},
        {"budget", s.budget},
        {"seed", s.seed},
        {"best_y", number_or_null(s.best_y)},
        {"argmin", vector_json(s.argmin)},
        {"argmin_native", vector_json(s.argmin_native)},
        {"best_trajectory", traj},
        {"code_version", s.code_version},
        {"config", s.config_json.empty() ? json::object() : json::parse(s.config_json)},
        {"timing", {{"fit_s", s.total_fit_seconds}, {"acq_s", s.total_acq_seconds}, {"eval_s", s.total_eval_seconds}}},
        {"completed", s.completed},
        {"warnings", s.warnings},
    };
    return j.dump(2) + "\n";
}

Summary parse_summary(std::string_view json_text) {
    try {
        const json j = json::parse(json_text);
        require(j.is_object(), ErrorCode::io_error, "summary must be a JSON object");
        require(j.value("schema_version", 0) == kSchemaVersion, ErrorCode::io_error, "unsupported summary schema");
        Summary s;
        s.variant = j.at("variant").get<std::string>();
        s.benchmark = j.at("benchmark").get<std::string>();
        s.dim = j.at("dim").get<int>();
        s.budget = j.at("budget").get<int>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.best_y = number_from(j.at("best_y"));
        s.argmin = json_vector(j.at("argmin"));
        s.argmin_native = json_vector(j.at("argmin_native"));
        for (const json& v : j.at("best_trajectory")) s.best_trajectory.push_back(number_from(v));
        s.code_version = j.at("code_version").get<std::string>();
        s.config_json = j.at("config").dump();
        const json& t = j.at("timing");
        s.total_fit_seconds = t.at("fit_s").get<double>();
        s.total_acq_seconds = t.at("acq_s").get<double>();
        s.total_eval_seconds = t.at("eval_s").get<double>();
        s.completed = j.at("completed").get<bool>();
        s.warnings = j.at("warnings").get<std::vector<std::string>>();
        return s;
    } catch (const json::exception& e) {
        fail(ErrorCode::io_error, std::string("malformed summary: ") + e.what());
    }
}

CompareReport compare_summaries(const std::vector<Summary>& summaries) {
    require(!summaries.empty(), ErrorCode::invalid_argument, "no summaries to compare");
    CompareReport report;
    report.benchmark = summaries.front().benchmark;
    report.dim = summaries.front().dim;
    std::vector<std::vector<const Summary*>> groups;
    for (const Summary& s : summaries) {
        require(s.benchmark == report.benchmark && s.dim == report.dim, ErrorCode::invalid_argument,
                "inconsistent benchmark/dim across summaries: " + s.benchmark + "/" + std::to_string(s.dim) +
                    " vs " + report.benchmark + "/" + std::to_string(report.dim));
        require(std::isfinite(s.best_y), ErrorCode::invalid_argument, "summary for " + s.variant + " has no result");
        auto it = std::find_if(report.variants.begin(), report.variants.end(),
                               [&](const VariantStats& v) { return v.variant == s.variant; });
        if (it == report.variants.end()) {
            report.variants.push_back(VariantStats{s.variant});
            groups.emplace_back();
            it = report.variants.end() - 1;
        }
        groups[static_cast<std::size_t>(it - report.variants.begin())].push_back(&s);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        VariantStats& v = report.variants[g];
        std::vector<double> finals;
        std::size_t length = std::numeric_limits<std::size_t>::max();
        for (const Summary* s : groups[g]) {
            finals.push_back(s->best_y);
            length = std::min(length, s->best_trajectory.size());
        }
        v.runs = static_cast<int>(finals.size());
        v.mean = mean_of(finals);
        v.stddev = sample_std(finals, v.mean);
        for (std::size_t i = 0; i < length; ++i) {
            std::vector<double> column;
            for (const Summary* s : groups[g]) column.push_back(s->best_trajectory[i]);
            const double m = mean_of(column);
            v.mean_trajectory.push_back(m);
            v.std_trajectory.push_back(sample_std(column, m));
        }
    }
    return report;
}

std::string format_report(const CompareReport& report) {
    std::string out = "benchmark " + report.benchmark + " dim " + std::to_string(report.dim) + "\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %5s  %s\n", "variant", "runs", "final best (mean +- std)");
    out += line;
    for (const VariantStats& v : report.variants) {
        std::snprintf(line, sizeof line, "%-12s %5d  %.6g +- %.6g\n", v.variant.c_str(), v.runs, v.mean, v.stddev);
        out += line;
    }
    return out;
}

std::string plot_data_csv(const VariantStats& stats) {
    std::string out = "iteration,mean_best,std_best\n";
    for (std::size_t i = 0; i < stats.mean_trajectory.size(); ++i) {
        out += std::to_string(i) + ',' + format_double(stats.mean_trajectory[i]) + ',' +
               format_double(stats.std_trajectory[i]) + '\n';
    }
    return out;
}

} // namespace cylbo
