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

#include "cylbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cylbo/error.hpp"

namespace cylbo {

namespace {

constexpr double kMinProposalNorm = 1e-8;
constexpr Eigen::Index kScoreChunk = 4096;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

} // namespace

void AcquisitionConfig::validate() const {
    require(n_sobol >= 1 && n_starts >= 1 && n_starts <= n_sobol, ErrorCode::config_error,
            "AcquisitionConfig: need 1 <= n_starts <= n_sobol");
    require(ascent_steps >= 0, ErrorCode::config_error, "AcquisitionConfig: negative ascent_steps");
    require(step_scale > 0.0 && fd_scale > 0.0 && adam_eps > 0.0, ErrorCode::config_error,
            "AcquisitionConfig: step sizes must be positive");
    require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0, ErrorCode::config_error,
            "AcquisitionConfig: moment constants must lie in [0, 1)");
    require(ucb_kappa >= 0.0 && std::isfinite(ucb_kappa), ErrorCode::config_error,
            "AcquisitionConfig: ucb_kappa must be non-negative");
}

double expected_improvement(double mean, double variance, double y_best) {
    const double sigma = std::sqrt(std::max(variance, 0.0));
    if (sigma <= 0.0) return std::max(y_best - mean, 0.0);
    const double z = (y_best - mean) / sigma;
    return std::max(sigma * (z * normal_cdf(z) + normal_pdf(z)), 0.0);
}

double lower_confidence_score(double mean, double variance, double kappa) {
    return kappa * std::sqrt(std::max(variance, 0.0)) - mean;
}

IntegratedAcquisition::IntegratedAcquisition(std::span<const GPPosterior> posteriors, double y_best,
                                             const AcquisitionConfig& config)
    : posteriors_(posteriors), y_best_(y_best), config_(config) {
    require(!posteriors_.empty(), ErrorCode::invalid_argument, "IntegratedAcquisition: no posterior samples");
}

Vector IntegratedAcquisition::evaluate_batch(const Matrix& xs) const {
    Matrix safe = xs;
    for (Eigen::Index j = 0; j < safe.cols(); ++j) {
        if (safe.col(j).norm() < kOriginNorm) safe.col(j) = kMinProposalNorm * Vector::Unit(safe.rows(), 0);
    }
    Vector total = Vector::Zero(xs.cols());
    Vector mean, var;
    for (const GPPosterior& post : posteriors_) {
        post.predict_batch(safe, mean, var, config_.boundary_point);
        for (Eigen::Index j = 0; j < xs.cols(); ++j) {
            total[j] += config_.kind == AcquisitionKind::expected_improvement
                            ? expected_improvement(mean[j], var[j], y_best_)
                            : lower_confidence_score(mean[j], var[j], config_.ucb_kappa);
        }
    }
    return total / static_cast<double>(posteriors_.size());
}

double IntegratedAcquisition::operator()(const Vector& x) const { return evaluate_batch(x)[0]; }

Matrix IntegratedAcquisition::gradient_batch(const Matrix& xs, double h) const {
    const Eigen::Index d = xs.rows();
    const Eigen::Index s = xs.cols();
    Matrix probes(d, 2 * d * s);
    for (Eigen::Index j = 0; j < s; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            probes.col(2 * (j * d + i)) = xs.col(j);
            probes(i, 2 * (j * d + i)) += h;
            probes.col(2 * (j * d + i) + 1) = xs.col(j);
            probes(i, 2 * (j * d + i) + 1) -= h;
        }
    }
    const Vector f = evaluate_batch(probes);
    Matrix g(d, s);
    for (Eigen::Index j = 0; j < s; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = (f[2 * (j * d + i)] - f[2 * (j * d + i) + 1]) / (2.0 * h);
    }
    return g;
}

Vector IntegratedAcquisition::gradient(const Vector& x, double h) const { return gradient_batch(x, h).col(0); }

Vector project_to_domain(const Vector& x, const BallSpace& space, SearchDomain domain, const Vector& previous) {
    Vector y = x;
    if (domain == SearchDomain::ball) {
        const double norm = y.norm();
        if (norm > space.radius()) y *= space.radius() / norm;
    } else {
        y = y.cwiseMax(-BallSpace::cube_half_width).cwiseMin(BallSpace::cube_half_width);
    }
    if (y.norm() < kMinProposalNorm) {
        const double prev_norm = previous.norm();
        const Vector angle = prev_norm >= kOriginNorm ? Vector(previous / prev_norm) : Vector::Unit(y.size(), 0);
        y = kMinProposalNorm * angle;
    }
    return y;
}

Proposal maximize(const IntegratedAcquisition& acq, const BallSpace& space, const AcquisitionConfig& config, Rng& rng) {
    config.validate();
    const int d = space.dim();
    const Vector e1 = Vector::Unit(d, 0);

    Matrix candidates = sobol_candidates(space, config.n_sobol, SobolScramble::draw(d, rng));
    for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
        candidates.col(j) = project_to_domain(candidates.col(j), space, config.domain, e1);
    }
    Vector scores(candidates.cols());
    for (Eigen::Index begin = 0; begin < candidates.cols(); begin += kScoreChunk) {
        const Eigen::Index len = std::min(kScoreChunk, candidates.cols() - begin);
        scores.segment(begin, len) = acq.evaluate_batch(candidates.middleCols(begin, len));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(candidates.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });

    const int starts = config.n_starts;
    Matrix x(d, starts);
    Vector best_value(starts);
    for (int s = 0; s < starts; ++s) {
        x.col(s) = candidates.col(order[static_cast<std::size_t>(s)]);
        best_value[s] = scores[order[static_cast<std::size_t>(s)]];
    }
    Matrix best_x = x;

    const double lr = config.step_scale * space.radius();
    const double h = config.fd_scale * space.radius();
    Matrix m1 = Matrix::Zero(d, starts);
    Matrix m2 = Matrix::Zero(d, starts);
    auto track = [&](const Vector& values) {
        for (int s = 0; s < starts; ++s) {
            if (values[s] > best_value[s]) {
                best_value[s] = values[s];
                best_x.col(s) = x.col(s);
            }
        }
    };
    for (int t = 1; t <= config.ascent_steps; ++t) {
        const Matrix g = acq.gradient_batch(x, h);
        m1 = config.beta1 * m1 + (1.0 - config.beta1) * g;
        m2 = config.beta2 * m2 + (1.0 - config.beta2) * g.cwiseProduct(g);
        const double c1 = 1.0 - std::pow(config.beta1, t);
        const double c2 = 1.0 - std::pow(config.beta2, t);
        const Matrix step = lr * (m1 / c1).array() / ((m2 / c2).array().sqrt() + config.adam_eps);
        for (int s = 0; s < starts; ++s) {
            x.col(s) = project_to_domain(x.col(s) + step.col(s), space, config.domain, x.col(s));
        }
        track(acq.evaluate_batch(x));
    }

    Proposal out;
    out.best_seed_value = scores[order.front()];
    out.start_index = 0;
    for (int s = 1; s < starts; ++s) {
        if (best_value[s] > best_value[out.start_index]) out.start_index = s;
    }
    out.x = best_x.col(out.start_index);
    out.value = best_value[out.start_index];
    return out;
}

} // namespace cylbo
