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

#ifndef CYLBO_GP_HPP
#define CYLBO_GP_HPP

#include <optional>
#include <vector>

#include "cylbo/kernels.hpp"

namespace cylbo {

/// Kernel hyperparameters plus observation noise variance.
struct ModelParams {
    KernelParams kernel;
    double noise_var = 1e-4;

    void validate() const;
    /// Kernel value at coincident points, e.g. amp^2 sum_p c_p.
    double prior_variance() const;
};

/// Ordered observations inside the search ball. At most one point may be the
/// origin; its index is tracked because the cylindrical kernel treats it
/// specially.
class Dataset {
public:
    explicit Dataset(const BallSpace& space) : space_(space) {}

    void add(const Vector& x, double y);

    int size() const noexcept { return static_cast<int>(xs_.size()); }
    bool empty() const noexcept { return xs_.empty(); }
    const BallSpace& space() const noexcept { return space_; }
    const std::vector<Vector>& xs() const noexcept { return xs_; }
    const std::vector<double>& ys() const noexcept { return ys_; }
    std::optional<int> origin_index() const noexcept { return origin_; }

    /// Same inputs with replaced observations.
    Dataset with_targets(const std::vector<double>& ys) const;

private:
    BallSpace space_;
    std::vector<Vector> xs_;
    std::vector<double> ys_;
    std::optional<int> origin_;
};

struct FitOptions {
    /// Relative jitter rungs, scaled by the mean Gram diagonal.
    std::vector<double> jitter_ladder{1e-10, 1e-8, 1e-6};
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    /// Variance before clamping at zero.
    double raw_variance = 0.0;
};

/// Posterior of a GP with constant mean (the average observation).
///
/// With the cylindrical kernel the origin's angle is borrowed from each test
/// point, so the full Gram matrix changes per query. Only the origin-free core
/// K(D', D') + sigma^2 I is factorized; the origin enters every query as a
/// bordered row whose Schur complement costs one extra triangular solve.
class GPPosterior {
public:
    static GPPosterior fit(const Dataset& data, const ModelParams& params, const FitOptions& options = {});

    /// Predictive mean and variance at a nonzero point.
    Prediction predict(const Vector& x) const;

    /// Same as predict() with the variance additionally conditioned on an
    /// output-free pseudo-observation at R x/|x|.
    Prediction predict_with_boundary_point(const Vector& x) const;

    /// Column-wise predictions for a d x q block of query points.
    void predict_batch(const Matrix& xs, Vector& mean, Vector& variance, bool boundary_point = false,
                       Vector* raw_variance = nullptr) const;

    const ModelParams& params() const noexcept { return params_; }
    double mean_const() const noexcept { return mean_const_; }
    /// Absolute jitter added to the diagonal next to the noise.
    double jitter() const noexcept { return jitter_; }
    /// Lower Cholesky factor of the origin-free core plus noise and jitter.
    const Matrix& core_factor() const noexcept { return chol_; }
    /// Core Gram matrix without noise or jitter.
    Matrix core_gram() const;
    int core_size() const noexcept { return static_cast<int>(core_y_.size()); }
    bool has_origin() const noexcept { return has_origin_; }

private:
    GPPosterior(const Dataset& data, const ModelParams& params);

    bool cylindrical() const noexcept { return std::holds_alternative<CylKernelParams>(params_.kernel); }
    Matrix cross_covariance(const Matrix& xs, Matrix* cosines, Vector* warped) const;

    BallSpace space_;
    ModelParams params_;
    double mean_const_ = 0.0;
    double jitter_ = 0.0;

    Matrix core_points_;  // d x m
    Matrix core_angles_;  // d x m, cylindrical only
    Vector core_warped_;  // m, warped normalized radii
    Vector core_y_;       // centered
    Matrix chol_;
    Vector z_;  // L^-1 y

    bool has_origin_ = false;
    double origin_y_ = 0.0;   // centered
    Vector origin_radial_;    // amp^2 K_r(0, w_i)
};

/// Terms of log N(y | 0, C).
struct EvidenceTerms {
    double data_fit = 0.0;       // -1/2 y^T C^-1 y
    double complexity = 0.0;     // -1/2 log |C|
    double normalization = 0.0;  // -n/2 log 2 pi

    double total() const noexcept { return data_fit + complexity + normalization; }
};

/// Gaussian log evidence; nullopt when C is not positive definite.
std::optional<EvidenceTerms> gaussian_log_evidence(const Matrix& cov, const Vector& y);

/// Angle used for the origin inside the likelihood: the direction of the most
/// recent non-origin observation, else e_1.
Vector likelihood_origin_angle(const Dataset& data);

/// Log marginal likelihood of a fixed dataset, caching everything that does
/// not depend on hyperparameters (angular cosines, radii, distances).
class MarginalLikelihood {
public:
    MarginalLikelihood(const Dataset& data, FitOptions options = {});

    /// -inf when every jitter rung fails.
    double operator()(const ModelParams& params) const;

    int size() const noexcept { return static_cast<int>(y_.size()); }

private:
    Matrix gram(const ModelParams& params) const;

    BallSpace space_;
    FitOptions options_;
    Vector y_;  // centered
    Matrix cosines_;
    Vector radii_;  // normalized, origin = 0
    Matrix distances_;
};

double log_marginal_likelihood(const Dataset& data, const ModelParams& params, const FitOptions& options = {});

} // namespace cylbo

#endif
