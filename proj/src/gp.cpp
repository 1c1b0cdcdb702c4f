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

#include "cylbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cylbo/error.hpp"

namespace cylbo {

namespace {

const double kSqrt5 = std::sqrt(5.0);

// Rejects factors whose pivots collapsed to roundoff level.
bool factor_ok(const Eigen::LLT<Matrix>& llt, const Matrix& a) {
    if (llt.info() != Eigen::Success) return false;
    const double scale = a.diagonal().cwiseAbs().maxCoeff();
    const double floor = 100.0 * static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * scale;
    return llt.matrixLLT().diagonal().array().square().minCoeff() > floor;
}

// Elementwise Matern-5/2 of a distance array.
template <typename Derived>
Eigen::ArrayXXd matern_array(const Eigen::ArrayBase<Derived>& dist, double ell) {
    const Eigen::ArrayXXd s = (kSqrt5 / ell) * dist.abs();
    return (1.0 + s + s.square() / 3.0) * (-s).exp();
}

// sum_p c_p t^p elementwise.
Eigen::ArrayXXd poly_array(const Eigen::ArrayXXd& t, const Vector& c) {
    Eigen::ArrayXXd acc = Eigen::ArrayXXd::Constant(t.rows(), t.cols(), c[c.size() - 1]);
    for (Eigen::Index p = c.size() - 2; p >= 0; --p) acc = acc * t + c[p];
    return acc;
}

double normalized_radius(double norm, double radius) { return std::min(norm / radius, 1.0); }

} // namespace

void ModelParams::validate() const {
    std::visit([](const auto& k) { k.validate(); }, kernel);
    require(std::isfinite(noise_var) && noise_var >= 0.0, ErrorCode::invalid_argument,
            "ModelParams: noise variance must be non-negative");
}

double ModelParams::prior_variance() const {
    if (const auto* cyl = std::get_if<CylKernelParams>(&kernel)) return cyl->amp * cyl->amp * cyl->angular_diagonal();
    const auto& cube = std::get<CubeKernelParams>(kernel);
    return cube.amp * cube.amp;
}

void Dataset::add(const Vector& x, double y) {
    space_.check_dim(x);
    require(x.allFinite() && std::isfinite(y), ErrorCode::invalid_argument, "Dataset::add: non-finite entry");
    require(space_.contains(x), ErrorCode::out_of_domain, "Dataset::add: point outside the search ball");
    if (x.norm() < kOriginNorm) {
        require(!origin_.has_value(), ErrorCode::invalid_argument, "Dataset::add: origin already present");
        origin_ = size();
    }
    xs_.push_back(x);
    ys_.push_back(y);
}

Dataset Dataset::with_targets(const std::vector<double>& ys) const {
    require(ys.size() == ys_.size(), ErrorCode::dimension_mismatch, "Dataset::with_targets: size mismatch");
    Dataset out = *this;
    out.ys_ = ys;
    return out;
}

GPPosterior::GPPosterior(const Dataset& data, const ModelParams& params) : space_(data.space()), params_(params) {
    const int n = data.size();
    if (n > 0) {
        double sum = 0.0;
        for (double y : data.ys()) sum += y;
        mean_const_ = sum / n;
    }
    const bool split_origin = cylindrical() && data.origin_index().has_value();
    const int m = split_origin ? n - 1 : n;
    const int d = space_.dim();

    core_points_.resize(d, m);
    core_y_.resize(m);
    int col = 0;
    for (int i = 0; i < n; ++i) {
        const double yc = data.ys()[static_cast<std::size_t>(i)] - mean_const_;
        if (split_origin && i == *data.origin_index()) {
            has_origin_ = true;
            origin_y_ = yc;
            continue;
        }
        core_points_.col(col) = data.xs()[static_cast<std::size_t>(i)];
        core_y_[col] = yc;
        ++col;
    }

    if (const auto* cyl = std::get_if<CylKernelParams>(&params_.kernel)) {
        core_angles_.resize(d, m);
        core_warped_.resize(m);
        for (int j = 0; j < m; ++j) {
            const double norm = core_points_.col(j).norm();
            core_angles_.col(j) = core_points_.col(j) / norm;
            core_warped_[j] = kuma_warp(normalized_radius(norm, space_.radius()), cyl->alpha, cyl->beta);
        }
        if (has_origin_) {
            const double amp2 = cyl->amp * cyl->amp;
            origin_radial_ = amp2 * matern_array(core_warped_.array(), cyl->ell).matrix();
        }
    }
}

Matrix GPPosterior::core_gram() const {
    const int m = core_size();
    if (const auto* cyl = std::get_if<CylKernelParams>(&params_.kernel)) {
        Eigen::ArrayXXd cosines = (core_angles_.transpose() * core_angles_).array().max(-1.0).min(1.0);
        cosines.matrix().diagonal().setOnes();
        const Eigen::ArrayXXd diff = core_warped_.replicate(1, m).array() - core_warped_.transpose().replicate(m, 1).array();
        Matrix k = (cyl->amp * cyl->amp * matern_array(diff, cyl->ell) * poly_array(cosines, cyl->c)).matrix();
        return k.selfadjointView<Eigen::Lower>();
    }
    const auto& cube = std::get<CubeKernelParams>(params_.kernel);
    const Vector sq = core_points_.colwise().squaredNorm().transpose();
    Eigen::ArrayXXd d2 = (sq.replicate(1, m) + sq.transpose().replicate(m, 1) - 2.0 * core_points_.transpose() * core_points_).array();
    d2 = d2.max(0.0);
    d2.matrix().diagonal().setZero();
    Matrix k = (cube.amp * cube.amp * matern_array(d2.sqrt(), cube.ell)).matrix();
    return k.selfadjointView<Eigen::Lower>();
}

GPPosterior GPPosterior::fit(const Dataset& data, const ModelParams& params, const FitOptions& options) {
    params.validate();
    require(!options.jitter_ladder.empty(), ErrorCode::invalid_argument, "GPPosterior::fit: empty jitter ladder");
    GPPosterior post(data, params);
    const int m = post.core_size();
    if (m == 0) {
        post.jitter_ = options.jitter_ladder.front() * params.prior_variance();
        post.chol_.resize(0, 0);
        post.z_.resize(0);
        return post;
    }
    const Matrix k = post.core_gram();
    const double mean_diag = k.diagonal().mean();
    for (double rel : options.jitter_ladder) {
        const double jitter = rel * mean_diag;
        Matrix a = k;
        a.diagonal().array() += params.noise_var + jitter;
        Eigen::LLT<Matrix> llt(a);
        if (!factor_ok(llt, a)) continue;
        post.chol_ = llt.matrixL();
        post.jitter_ = jitter;
        post.z_ = post.chol_.triangularView<Eigen::Lower>().solve(post.core_y_);
        return post;
    }
    fail(ErrorCode::factorization_failed, "GPPosterior::fit: Gram matrix not positive definite after jitter");
}

Prediction GPPosterior::predict(const Vector& x) const {
    Vector mean, var, raw;
    predict_batch(x, mean, var, false, &raw);
    return {mean[0], var[0], raw[0]};
}

Prediction GPPosterior::predict_with_boundary_point(const Vector& x) const {
    Vector mean, var, raw;
    predict_batch(x, mean, var, true, &raw);
    return {mean[0], var[0], raw[0]};
}

void GPPosterior::predict_batch(const Matrix& xs, Vector& mean, Vector& variance, bool boundary_point,
                                Vector* raw_variance) const {
    require(xs.rows() == space_.dim(), ErrorCode::dimension_mismatch, "predict: query dimension mismatch");
    const Eigen::Index q = xs.cols();
    const int m = core_size();
    const auto solve = [&](const Matrix& rhs) -> Matrix {
        if (m == 0) return Matrix(0, rhs.cols());
        return chol_.triangularView<Eigen::Lower>().solve(rhs);
    };

    Vector raw(q);
    mean.resize(q);

    if (const auto* cube = std::get_if<CubeKernelParams>(&params_.kernel)) {
        require(!boundary_point, ErrorCode::invalid_argument, "predict: boundary point needs the cylindrical kernel");
        const double amp2 = cube->amp * cube->amp;
        Matrix kc(m, q);
        if (m > 0) {
            const Vector sq_core = core_points_.colwise().squaredNorm().transpose();
            const Eigen::RowVectorXd sq_q = xs.colwise().squaredNorm();
            Eigen::ArrayXXd d2 = (sq_core.replicate(1, q) + sq_q.replicate(m, 1) - 2.0 * core_points_.transpose() * xs).array();
            kc = (amp2 * matern_array(d2.max(0.0).sqrt(), cube->ell)).matrix();
        }
        const Matrix u = solve(kc);
        for (Eigen::Index j = 0; j < q; ++j) {
            mean[j] = mean_const_ + u.col(j).dot(z_);
            raw[j] = amp2 - u.col(j).squaredNorm();
        }
    } else {
        const auto& cyl = std::get<CylKernelParams>(params_.kernel);
        const double amp2 = cyl.amp * cyl.amp;
        const double diag = amp2 * cyl.angular_diagonal();

        const Eigen::RowVectorXd norms = xs.colwise().norm();
        require((norms.array() >= kOriginNorm).all(), ErrorCode::out_of_domain,
                "predict: test point must not be the origin");
        Matrix angles = xs;
        for (Eigen::Index j = 0; j < q; ++j) angles.col(j) /= norms[j];
        Eigen::ArrayXd warped(q);
        for (Eigen::Index j = 0; j < q; ++j) {
            warped[j] = kuma_warp(normalized_radius(norms[j], space_.radius()), cyl.alpha, cyl.beta);
        }

        Eigen::ArrayXXd ka(m, q);
        Eigen::ArrayXXd radial(m, q);
        if (m > 0) {
            ka = poly_array((core_angles_.transpose() * angles).array().max(-1.0).min(1.0), cyl.c);
            radial = matern_array(core_warped_.array().replicate(1, q) - warped.transpose().replicate(m, 1), cyl.ell);
        }
        const Matrix u = solve((amp2 * radial * ka).matrix());
        for (Eigen::Index j = 0; j < q; ++j) {
            mean[j] = mean_const_ + u.col(j).dot(z_);
            raw[j] = diag - u.col(j).squaredNorm();
        }

        // Origin row with the query's angle: bordered solve against the core factor.
        Matrix w;
        Eigen::ArrayXd schur, gap;
        if (has_origin_) {
            w = solve((origin_radial_.array().replicate(1, q) * ka).matrix());
            const Eigen::ArrayXd k0 = diag * matern_array(warped, cyl.ell).col(0);
            schur.resize(q);
            gap.resize(q);
            const double c0 = diag + params_.noise_var + jitter_;
            for (Eigen::Index j = 0; j < q; ++j) {
                schur[j] = std::max(c0 - w.col(j).squaredNorm(), std::numeric_limits<double>::min());
                gap[j] = k0[j] - w.col(j).dot(u.col(j));
                mean[j] += gap[j] * (origin_y_ - w.col(j).dot(z_)) / schur[j];
                raw[j] -= gap[j] * gap[j] / schur[j];
            }
        }

        // Output-free pseudo-observation at R x/|x|: rank-one variance update.
        if (boundary_point) {
            Eigen::ArrayXXd radial_p(m, q);
            if (m > 0) radial_p = matern_array(core_warped_.array() - 1.0, cyl.ell).replicate(1, q);
            const Matrix p = solve((amp2 * radial_p * ka).matrix());
            const double kp0 = diag * matern52_distance(1.0, cyl.ell);
            for (Eigen::Index j = 0; j < q; ++j) {
                double cov = diag * matern52_distance(warped[j] - 1.0, cyl.ell) - p.col(j).dot(u.col(j));
                double var_p = diag - p.col(j).squaredNorm();
                if (has_origin_) {
                    const double h = kp0 - w.col(j).dot(p.col(j));
                    cov -= gap[j] * h / schur[j];
                    var_p -= h * h / schur[j];
                }
                const double denom = var_p + jitter_;
                if (denom > 0.0) raw[j] -= cov * cov / denom;
            }
        }
    }

    variance = raw.cwiseMax(0.0);
    if (raw_variance) *raw_variance = raw;
}

std::optional<EvidenceTerms> gaussian_log_evidence(const Matrix& cov, const Vector& y) {
    require(cov.rows() == cov.cols() && cov.rows() == y.size(), ErrorCode::dimension_mismatch,
            "gaussian_log_evidence: size mismatch");
    const Eigen::Index n = y.size();
    EvidenceTerms t;
    t.normalization = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    if (n == 0) return t;
    Eigen::LLT<Matrix> llt(cov);
    if (!factor_ok(llt, cov)) return std::nullopt;
    const Matrix l = llt.matrixL();
    const Vector alpha = l.triangularView<Eigen::Lower>().solve(y);
    t.data_fit = -0.5 * alpha.squaredNorm();
    t.complexity = -l.diagonal().array().log().sum();
    if (!std::isfinite(t.data_fit) || !std::isfinite(t.complexity)) return std::nullopt;
    return t;
}

Vector likelihood_origin_angle(const Dataset& data) {
    for (int i = data.size() - 1; i >= 0; --i) {
        const Vector& x = data.xs()[static_cast<std::size_t>(i)];
        const double norm = x.norm();
        if (norm >= kOriginNorm) return x / norm;
    }
    return Vector::Unit(data.space().dim(), 0);
}

MarginalLikelihood::MarginalLikelihood(const Dataset& data, FitOptions options)
    : space_(data.space()), options_(std::move(options)) {
    require(!options_.jitter_ladder.empty(), ErrorCode::invalid_argument, "MarginalLikelihood: empty jitter ladder");
    const int n = data.size();
    const int d = space_.dim();
    y_.resize(n);
    double mean = 0.0;
    for (double y : data.ys()) mean += y;
    if (n > 0) mean /= n;
    for (int i = 0; i < n; ++i) y_[i] = data.ys()[static_cast<std::size_t>(i)] - mean;

    const Vector origin_angle = likelihood_origin_angle(data);
    Matrix angles(d, n), points(d, n);
    radii_.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vector& x = data.xs()[static_cast<std::size_t>(i)];
        points.col(i) = x;
        const double norm = x.norm();
        if (norm < kOriginNorm) {
            angles.col(i) = origin_angle;
            radii_[i] = 0.0;
        } else {
            angles.col(i) = x / norm;
            radii_[i] = normalized_radius(norm, space_.radius());
        }
    }
    cosines_ = (angles.transpose() * angles).array().max(-1.0).min(1.0).matrix();
    cosines_.diagonal().setOnes();
    distances_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            distances_(i, j) = distances_(j, i) = (points.col(i) - points.col(j)).norm();
        }
    }
}

Matrix MarginalLikelihood::gram(const ModelParams& params) const {
    const Eigen::Index n = y_.size();
    if (const auto* cyl = std::get_if<CylKernelParams>(&params.kernel)) {
        Eigen::ArrayXd warped(n);
        for (Eigen::Index i = 0; i < n; ++i) warped[i] = kuma_warp(radii_[i], cyl->alpha, cyl->beta);
        const Eigen::ArrayXXd diff = warped.replicate(1, n) - warped.transpose().replicate(n, 1);
        return (cyl->amp * cyl->amp * matern_array(diff, cyl->ell) * poly_array(cosines_.array(), cyl->c)).matrix();
    }
    const auto& cube = std::get<CubeKernelParams>(params.kernel);
    return (cube.amp * cube.amp * matern_array(distances_.array(), cube.ell)).matrix();
}

double MarginalLikelihood::operator()(const ModelParams& params) const {
    params.validate();
    if (y_.size() == 0) return 0.0;
    const Matrix k = gram(params);
    const double mean_diag = k.diagonal().mean();
    for (double rel : options_.jitter_ladder) {
        Matrix c = k;
        c.diagonal().array() += params.noise_var + rel * mean_diag;
        if (const auto terms = gaussian_log_evidence(c, y_)) return terms->total();
    }
    return -std::numeric_limits<double>::infinity();
}

double log_marginal_likelihood(const Dataset& data, const ModelParams& params, const FitOptions& options) {
    return MarginalLikelihood(data, options)(params);
}

} // namespace cylbo
