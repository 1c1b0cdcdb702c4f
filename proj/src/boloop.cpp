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

#include "cylbo/boloop.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cylbo/benchmarks.hpp"
#include "cylbo/error.hpp"

namespace cylbo {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kDuplicateTolerance = 1e-9;
constexpr double kDuplicateNudge = 1e-6;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vector gaussian_direction(int d, Rng& rng) {
    std::normal_distribution<double> normal;
    Vector v(d);
    do {
        for (int i = 0; i < d; ++i) v[i] = normal(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

Vector uniform_in_ball(const BallSpace& space, Rng& rng) {
    const Vector dir = gaussian_direction(space.dim(), rng);
    const double r = space.radius() * std::pow(uniform01(rng), 1.0 / space.dim());
    return r * dir;
}

std::vector<double> standardized(const std::vector<double>& ys) {
    const double n = static_cast<double>(ys.size());
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= n;
    double ss = 0.0;
    for (double y : ys) ss += (y - mean) * (y - mean);
    const double sd = ys.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double scale = sd > 1e-12 ? sd : 1.0;
    std::vector<double> out;
    out.reserve(ys.size());
    for (double y : ys) out.push_back((y - mean) / scale);
    return out;
}

bool is_duplicate(const Dataset& data, const Vector& x) {
    for (const Vector& xi : data.xs()) {
        if ((xi - x).norm() <= kDuplicateTolerance) return true;
    }
    return false;
}

} // namespace

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::bock: return "bock";
    case Variant::bock_w: return "bock_w";
    case Variant::bock_b: return "bock_b";
    case Variant::matern_cube: return "matern_cube";
    case Variant::random: return "random";
    }
    return "unknown";
}

Variant parse_variant(std::string_view name) {
    for (Variant v : {Variant::bock, Variant::bock_w, Variant::bock_b, Variant::matern_cube, Variant::random}) {
        if (to_string(v) == name) return v;
    }
    fail(ErrorCode::unknown_id, "unknown variant '" + std::string(name) + "'");
}

SearchDomain variant_domain(Variant v) { return v == Variant::matern_cube ? SearchDomain::cube : SearchDomain::ball; }

HyperLayout variant_layout(Variant v, int degree) {
    switch (v) {
    case Variant::bock:
    case Variant::bock_b: return HyperLayout(SurrogateKind::cylindrical, degree, true);
    case Variant::bock_w: return HyperLayout(SurrogateKind::cylindrical, degree, false);
    case Variant::matern_cube: return HyperLayout(SurrogateKind::matern_cube);
    case Variant::random: break;
    }
    fail(ErrorCode::invalid_argument, "variant has no surrogate model");
}

void RunConfig::validate() const {
    require(budget >= 1, ErrorCode::config_error, "budget must be at least 1");
    require(dim >= 1, ErrorCode::config_error, "dim must be positive");
    require(degree >= 0, ErrorCode::config_error, "degree must be non-negative");
    require(initial_sobol >= 0, ErrorCode::config_error, "initial_sobol must be non-negative");
    require(is_benchmark(benchmark), ErrorCode::unknown_id, "unknown benchmark '" + benchmark + "'");
    mcmc.validate();
    acquisition.validate();
    make_benchmark(benchmark, dim);
}

void run(const RunConfig& config, std::vector<TraceRecord>& trace, const TraceObserver& observer) {
    config.validate();
    const BallSpace space(config.dim);
    const BenchmarkFn bench = make_benchmark(config.benchmark, config.dim);

    Rng master(config.seed);
    Rng mcmc_rng = fork_rng(master);
    Rng acq_rng = fork_rng(master);
    Rng misc_rng = fork_rng(master);

    Dataset data(space);
    double best_y = std::numeric_limits<double>::infinity();
    Vector best_x;

    auto evaluate = [&](const Vector& x, double fit_s, double acq_s, int samples, double evals_per_update) {
        const auto t0 = Clock::now();
        const double y = bench(x);
        const double eval_s = seconds_since(t0);
        require(std::isfinite(y), ErrorCode::internal, "objective returned a non-finite value");
        data.add(x, y);
        if (y < best_y) {
            best_y = y;
            best_x = x;
        }
        TraceRecord rec;
        rec.iteration = static_cast<int>(trace.size());
        rec.x = x;
        rec.y = y;
        rec.best_y = best_y;
        rec.best_x = best_x;
        rec.fit_seconds = fit_s;
        rec.acq_seconds = acq_s;
        rec.eval_seconds = eval_s;
        rec.posterior_samples = samples;
        rec.mcmc_evals_per_update = evals_per_update;
        rec.rng_digest = rng_digest(mcmc_rng) + rng_digest(acq_rng) + rng_digest(misc_rng);
        trace.push_back(rec);
        if (observer) observer(trace.back());
    };
    auto budget_left = [&] { return static_cast<int>(trace.size()) < config.budget; };

    if (config.variant == Variant::random) {
        while (budget_left()) evaluate(uniform_in_ball(space, misc_rng), 0.0, 0.0, 0, 0.0);
        return;
    }

    evaluate(Vector::Zero(config.dim), 0.0, 0.0, 0, 0.0);
    if (config.initial_sobol > 0 && budget_left()) {
        const Matrix init = sobol_candidates(space, config.initial_sobol, SobolScramble::draw(config.dim, misc_rng));
        for (Eigen::Index j = 0; j < init.cols() && budget_left(); ++j) {
            if (!is_duplicate(data, init.col(j))) evaluate(init.col(j), 0.0, 0.0, 0, 0.0);
        }
    }

    HyperChain chain(variant_layout(config.variant, config.degree), config.prior);
    AcquisitionConfig acq_config = config.acquisition;
    acq_config.domain = variant_domain(config.variant);
    acq_config.boundary_point = config.variant == Variant::bock_b;

    while (budget_left()) {
        const auto fit_start = Clock::now();
        const std::vector<double> targets = config.standardize ? standardized(data.ys()) : data.ys();
        const Dataset fit_data = data.with_targets(targets);
        const std::vector<ModelParams> samples = chain.sample_posterior(fit_data, config.mcmc, mcmc_rng);
        std::vector<GPPosterior> posteriors;
        posteriors.reserve(samples.size());
        for (const ModelParams& p : samples) {
            try {
                posteriors.push_back(GPPosterior::fit(fit_data, p));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::factorization_failed) throw;
            }
        }
        if (posteriors.empty()) {
            posteriors.push_back(GPPosterior::fit(
                fit_data, chain.layout().to_model(config.prior.prior_mean(chain.layout().degree()))));
        }
        const double fit_s = seconds_since(fit_start);

        const auto acq_start = Clock::now();
        const double y_best = *std::min_element(targets.begin(), targets.end());
        const IntegratedAcquisition acq(posteriors, y_best, acq_config);
        Vector x = maximize(acq, space, acq_config, acq_rng).x;
        while (is_duplicate(data, x)) {
            const Vector nudged = x + kDuplicateNudge * space.radius() * gaussian_direction(config.dim, misc_rng);
            x = project_to_domain(nudged, space, acq_config.domain, x);
        }
        const double acq_s = seconds_since(acq_start);

        evaluate(x, fit_s, acq_s, static_cast<int>(posteriors.size()), chain.last_stats().evaluations_per_update());
    }
}

std::vector<TraceRecord> run(const RunConfig& config) {
    std::vector<TraceRecord> trace;
    run(config, trace);
    return trace;
}

} // namespace cylbo
