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

#include "cylbo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cylbo/error.hpp"

namespace cylbo {

namespace {

constexpr double kUnitTolerance = 1e-6;
const double kSqrt5 = std::sqrt(5.0);

void check_unit(const Vector& a, const char* what) {
    if (std::abs(a.norm() - 1.0) > kUnitTolerance) {
        fail(ErrorCode::invalid_argument, std::string(what) + ": expected a unit vector");
    }
}

// Angle of x, or the context substitute when x is the origin.
Vector angle_or_substitute(const CylPoint& p, const GramContext& ctx) {
    if (!p.angle_deferred()) return p.a;
    require(ctx.a_sub.has_value(), ErrorCode::invalid_argument,
            "cyl_kernel: origin point needs a substitute angle");
    check_unit(*ctx.a_sub, "GramContext::a_sub");
    return *ctx.a_sub;
}

} // namespace

void CylKernelParams::validate() const {
    require(c.size() >= 1, ErrorCode::invalid_argument, "CylKernelParams: need at least c_0");
    require((c.array() >= 0.0).all() && c.allFinite(), ErrorCode::invalid_argument,
            "CylKernelParams: angular coefficients must be non-negative");
    require(c.sum() > 0.0, ErrorCode::invalid_argument, "CylKernelParams: angular coefficients sum to zero");
    require(alpha > 0.0 && beta > 0.0 && ell > 0.0 && amp > 0.0, ErrorCode::invalid_argument,
            "CylKernelParams: alpha, beta, ell and amp must be positive");
    require(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(ell) && std::isfinite(amp),
            ErrorCode::invalid_argument, "CylKernelParams: alpha, beta, ell and amp must be finite");
}

CylKernelParams CylKernelParams::defaults(int degree) {
    require(degree >= 0, ErrorCode::invalid_argument, "CylKernelParams: negative degree");
    CylKernelParams p;
    p.c = Vector::Ones(degree + 1);
    return p;
}

void CubeKernelParams::validate() const {
    require(ell > 0.0 && amp > 0.0 && std::isfinite(ell) && std::isfinite(amp), ErrorCode::invalid_argument,
            "CubeKernelParams: ell and amp must be positive and finite");
}

double kuma_warp(double r, double alpha, double beta) {
    require(alpha > 0.0 && beta > 0.0, ErrorCode::invalid_argument, "kuma_warp: alpha and beta must be positive");
    if (r < -1e-9 || r > 1.0 + 1e-9) {
        fail(ErrorCode::out_of_domain, "kuma_warp: radius " + std::to_string(r) + " outside [0, 1]");
    }
    r = std::clamp(r, 0.0, 1.0);
    // log1p/expm1 keep precision for large beta and small r^alpha.
    const double ra = std::pow(r, alpha);
    if (ra >= 1.0) return 1.0;
    return -std::expm1(beta * std::log1p(-ra));
}

double angular_from_cosine(double cosine, const Vector& c) {
    double acc = 0.0;
    for (Eigen::Index p = c.size() - 1; p >= 0; --p) acc = acc * cosine + c[p];
    return acc;
}

double angular_kernel(const Vector& a1, const Vector& a2, const Vector& c) {
    require(a1.size() == a2.size(), ErrorCode::dimension_mismatch, "angular_kernel: dimension mismatch");
    check_unit(a1, "angular_kernel");
    check_unit(a2, "angular_kernel");
    return angular_from_cosine(std::clamp(a1.dot(a2), -1.0, 1.0), c);
}

double matern52_distance(double dist, double ell) {
    require(ell > 0.0, ErrorCode::invalid_argument, "matern52: lengthscale must be positive");
    const double s = kSqrt5 * std::abs(dist) / ell;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double matern52(double t1, double t2, double ell) { return matern52_distance(t1 - t2, ell); }

double radius_kernel(double r1, double r2, const CylKernelParams& params) {
    return matern52(kuma_warp(r1, params.alpha, params.beta), kuma_warp(r2, params.alpha, params.beta), params.ell);
}

double cyl_kernel(const BallSpace& space, const Vector& x1, const Vector& x2, const CylKernelParams& params,
                  const GramContext& ctx) {
    const CylPoint p1 = cyl_transform(space, x1);
    const CylPoint p2 = cyl_transform(space, x2);
    const double radial = radius_kernel(p1.r / space.radius(), p2.r / space.radius(), params);
    double angular;
    if (p1.angle_deferred() && p2.angle_deferred()) {
        angular = params.angular_diagonal();
    } else {
        angular = angular_kernel(angle_or_substitute(p1, ctx), angle_or_substitute(p2, ctx), params.c);
    }
    return params.amp * params.amp * radial * angular;
}

double cube_kernel(const Vector& x1, const Vector& x2, const CubeKernelParams& params) {
    require(x1.size() == x2.size(), ErrorCode::dimension_mismatch, "cube_kernel: dimension mismatch");
    return params.amp * params.amp * matern52_distance((x1 - x2).norm(), params.ell);
}

Matrix gram_matrix(const BallSpace& space, std::span<const Vector> points, const CylKernelParams& params,
                   const GramContext& ctx) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(points.size());
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        space.check_dim(points[i]);
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = cyl_kernel(space, points[i], points[j], params, ctx);
            k(j, i) = k(i, j);
        }
    }
    return k;
}

GramParts gram_matrix(const BallSpace& space, std::span<const Vector> points, const Vector& x_star,
                      const CylKernelParams& params) {
    space.check_dim(x_star);
    const double norm = x_star.norm();
    require(norm >= kOriginNorm, ErrorCode::out_of_domain, "gram_matrix: test point must not be the origin");
    const GramContext ctx{Vector(x_star / norm)};
    GramParts parts;
    parts.k_dd = gram_matrix(space, points, params, ctx);
    parts.k_star.resize(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        parts.k_star[static_cast<Eigen::Index>(i)] = cyl_kernel(space, x_star, points[i], params, ctx);
    }
    parts.k_star_star = cyl_kernel(space, x_star, x_star, params, ctx);
    return parts;
}

Matrix gram_matrix(std::span<const Vector> points, const CubeKernelParams& params) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(points.size());
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = cube_kernel(points[i], points[j], params);
            k(j, i) = k(i, j);
        }
    }
    return k;
}

} // namespace cylbo
