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

#ifndef CYLBO_ACQUISITION_HPP
#define CYLBO_ACQUISITION_HPP

#include <span>

#include "cylbo/gp.hpp"
#include "cylbo/random.hpp"

namespace cylbo {

enum class AcquisitionKind { expected_improvement, ucb };
enum class SearchDomain { ball, cube };

struct AcquisitionConfig {
    AcquisitionKind kind = AcquisitionKind::expected_improvement;
    int n_sobol = 20000;
    int n_starts = 20;
    int ascent_steps = 200;
    double step_scale = 0.02;  // Adam step size, in units of R
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double fd_scale = 1e-4;  // central-difference step, in units of R
    double ucb_kappa = 2.0;
    bool boundary_point = false;
    SearchDomain domain = SearchDomain::ball;

    void validate() const;
};

/// Expected improvement below y_best.
double expected_improvement(double mean, double variance, double y_best);

/// Optimistic bound for minimization: kappa sigma - mean.
double lower_confidence_score(double mean, double variance, double kappa);

/// Acquisition averaged over hyperparameter samples.
class IntegratedAcquisition {
public:
    IntegratedAcquisition(std::span<const GPPosterior> posteriors, double y_best, const AcquisitionConfig& config);

    double operator()(const Vector& x) const;
    /// Values for each column of xs.
    Vector evaluate_batch(const Matrix& xs) const;
    /// Central finite-difference gradient with step h.
    Vector gradient(const Vector& x, double h) const;
    /// Gradients for each column of xs (one batched evaluation).
    Matrix gradient_batch(const Matrix& xs, double h) const;

    std::size_t sample_count() const noexcept { return posteriors_.size(); }

private:
    std::span<const GPPosterior> posteriors_;
    double y_best_;
    AcquisitionConfig config_;
};

struct Proposal {
    Vector x;
    double value = 0.0;
    /// Best acquisition value among the Sobol seeds.
    double best_seed_value = 0.0;
    int start_index = 0;
};

/// Keeps x inside the search domain and at least 1e-8 away from the origin.
/// `previous` supplies the angle when x collapses onto the origin.
Vector project_to_domain(const Vector& x, const BallSpace& space, SearchDomain domain, const Vector& previous);

/// Sobol seeding, top-k selection and projected Adam ascent.
Proposal maximize(const IntegratedAcquisition& acq, const BallSpace& space, const AcquisitionConfig& config,
                  Rng& rng);

} // namespace cylbo

#endif
