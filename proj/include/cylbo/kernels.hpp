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

#ifndef CYLBO_KERNELS_HPP
#define CYLBO_KERNELS_HPP

#include <optional>
#include <span>
#include <variant>

#include "cylbo/geometry.hpp"

namespace cylbo {

inline constexpr int kDefaultDegree = 3;

/// Hyperparameters of the cylindrical kernel
///   amp^2 * K_r(r1/R, r2/R) * K_a(a1, a2)
/// with K_r a Matern-5/2 on Kumaraswamy-warped radii and K_a a polynomial in
/// the angular inner product with coefficients c_0..c_P.
struct CylKernelParams {
    Vector c;
    double alpha = 1.0;
    double beta = 1.0;
    double ell = 1.0;
    double amp = 1.0;

    int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
    /// sum_p c_p, i.e. K_a(a, a).
    double angular_diagonal() const { return c.sum(); }
    void validate() const;

    static CylKernelParams defaults(int degree = kDefaultDegree);
};

/// Non-ARD Matern-5/2 on Euclidean distance, used by the cube baseline.
struct CubeKernelParams {
    double ell = 1.0;
    double amp = 1.0;

    void validate() const;
};

using KernelParams = std::variant<CylKernelParams, CubeKernelParams>;

/// Kumaraswamy CDF 1 - (1 - r^alpha)^beta on [0, 1].
double kuma_warp(double r, double alpha, double beta);

/// sum_p c_p t^p by Horner's rule.
double angular_from_cosine(double cosine, const Vector& c);

/// Polynomial kernel in a1 . a2; both inputs must be unit vectors.
double angular_kernel(const Vector& a1, const Vector& a2, const Vector& c);

double matern52_distance(double dist, double ell);
double matern52(double t1, double t2, double ell);

/// Matern-5/2 between warped normalized radii.
double radius_kernel(double r1, double r2, const CylKernelParams& params);

/// Angle substituted for the origin when it appears in a Gram matrix.
struct GramContext {
    std::optional<Vector> a_sub;
};

double cyl_kernel(const BallSpace& space, const Vector& x1, const Vector& x2,
                  const CylKernelParams& params, const GramContext& ctx = {});

double cube_kernel(const Vector& x1, const Vector& x2, const CubeKernelParams& params);

struct GramParts {
    Matrix k_dd;
    Vector k_star;
    double k_star_star = 0.0;
};

/// Gram matrix over `points` plus the cross terms for `x_star`. Any origin row
/// takes the angle of `x_star`, which must therefore be nonzero.
GramParts gram_matrix(const BallSpace& space, std::span<const Vector> points, const Vector& x_star,
                      const CylKernelParams& params);

/// Gram matrix with an explicit context, for use where no test point exists.
Matrix gram_matrix(const BallSpace& space, std::span<const Vector> points,
                   const CylKernelParams& params, const GramContext& ctx);

Matrix gram_matrix(std::span<const Vector> points, const CubeKernelParams& params);

} // namespace cylbo

#endif
