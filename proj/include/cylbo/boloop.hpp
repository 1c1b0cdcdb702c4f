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

#ifndef CYLBO_BOLOOP_HPP
#define CYLBO_BOLOOP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cylbo/acquisition.hpp"
#include "cylbo/hyper.hpp"

namespace cylbo {

enum class Variant { bock, bock_w, bock_b, matern_cube, random };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct RunConfig {
    Variant variant = Variant::bock;
    std::string benchmark = "repeated_branin";
    int dim = 2;
    int budget = 50;
    std::uint64_t seed = 0;
    int degree = kDefaultDegree;
    /// Extra Sobol points evaluated after the origin.
    int initial_sobol = 0;
    /// Standardize observations by their spread before fitting.
    bool standardize = true;
    McmcConfig mcmc;
    AcquisitionConfig acquisition;
    PriorSpec prior;

    void validate() const;
};

struct TraceRecord {
    int iteration = 0;
    Vector x;  // search-space coordinates
    double y = 0.0;
    double best_y = 0.0;
    Vector best_x;
    double fit_seconds = 0.0;
    double acq_seconds = 0.0;
    double eval_seconds = 0.0;
    int posterior_samples = 0;
    double mcmc_evals_per_update = 0.0;
    std::string rng_digest;
};

using TraceObserver = std::function<void(const TraceRecord&)>;

/// Runs the optimization loop and appends one record per evaluation to
/// `trace`. Records appended before an exception remain in `trace`.
void run(const RunConfig& config, std::vector<TraceRecord>& trace, const TraceObserver& observer = {});

std::vector<TraceRecord> run(const RunConfig& config);

/// Search space the variant proposes from.
SearchDomain variant_domain(Variant v);
/// Kernel layout sampled by a BO variant.
HyperLayout variant_layout(Variant v, int degree);

} // namespace cylbo

#endif
