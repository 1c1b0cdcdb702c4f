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

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the Eigen types.

#ifndef CYLBO_TESTS_ORACLES_HPP
#define CYLBO_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Sobol by the direct (non-Gray) definition, visited in Gray-code order.
// Dimension 1 is the base-2 radical inverse; dimension 2 uses the primitive
// polynomial x + 1 with m_1 = 1 from the Joe-Kuo table.
inline double radical_inverse_base2(std::uint32_t i) {
    double result = 0.0;
    double f = 0.5;
    while (i != 0) {
        if ((i & 1u) != 0) result += f;
        i >>= 1;
        f *= 0.5;
    }
    return result;
}

inline double sobol_dim2_direct(std::uint32_t i) {
    // m_k = 2 m_{k-1} xor m_{k-1} with m_1 = 1; v_k = m_k / 2^k.
    std::uint64_t m = 1;
    std::uint32_t acc = 0;
    for (int k = 1; i != 0; ++k, i >>= 1) {
        if (k > 1) m = (m << 1) ^ m;
        if ((i & 1u) != 0) acc ^= static_cast<std::uint32_t>(m << (32 - k));
    }
    return std::ldexp(static_cast<double>(acc), -32);
}

inline std::uint32_t gray(std::uint32_t n) { return n ^ (n >> 1); }

// Star discrepancy of points in [0,1]^2 estimated on a g x g grid of anchored boxes.
inline double grid_star_discrepancy(const std::vector<std::array<double, 2>>& pts, int g) {
    double worst = 0.0;
    const double n = static_cast<double>(pts.size());
    for (int i = 1; i <= g; ++i) {
        for (int j = 1; j <= g; ++j) {
            const double u = static_cast<double>(i) / g;
            const double v = static_cast<double>(j) / g;
            int count = 0;
            for (const auto& p : pts) count += (p[0] < u && p[1] < v) ? 1 : 0;
            worst = std::max(worst, std::abs(count / n - u * v));
        }
    }
    return worst;
}

inline double matern52(double dist, double ell) {
    const double s = std::sqrt(5.0) * std::abs(dist) / ell;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

inline double kuma(double r, double a, double b) { return 1.0 - std::pow(1.0 - std::pow(r, a), b); }

struct CylParams {
    std::vector<double> c;
    double alpha = 1.0;
    double beta = 1.0;
    double ell = 1.0;
    double amp = 1.0;
};

// Full cylindrical kernel from its defining formula. Points with zero norm
// take the angle `a_sub`.
inline double cyl_kernel(const Vec& x1, const Vec& x2, const CylParams& p, const Vec& a_sub) {
    const double big_r = std::sqrt(static_cast<double>(x1.size()));
    const double r1 = x1.norm();
    const double r2 = x2.norm();
    const Vec a1 = r1 < 1e-12 ? a_sub : Vec(x1 / r1);
    const Vec a2 = r2 < 1e-12 ? a_sub : Vec(x2 / r2);
    const double cosine = a1.dot(a2);
    double ang = 0.0;
    for (std::size_t k = 0; k < p.c.size(); ++k) ang += p.c[k] * std::pow(cosine, static_cast<double>(k));
    const double rad = matern52(kuma(r1 / big_r, p.alpha, p.beta) - kuma(r2 / big_r, p.alpha, p.beta), p.ell);
    return p.amp * p.amp * rad * ang;
}

struct NaivePrediction {
    double mean;
    double variance;
};

// Full-matrix GP prediction with an LU solve of the complete Gram, including
// any origin row, at test point xs.
inline NaivePrediction gp_predict(const std::vector<Vec>& xs, const std::vector<double>& ys, const CylParams& p,
                                  double noise_plus_jitter, const Vec& x_star) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    const Vec a_sub = x_star / x_star.norm();
    Mat k(n, n);
    Vec ks(n);
    Vec y(n);
    double mean_const = 0.0;
    for (double v : ys) mean_const += v;
    mean_const /= static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = cyl_kernel(xs[i], xs[j], p, a_sub);
        k(i, i) += noise_plus_jitter;
        ks[i] = cyl_kernel(xs[i], x_star, p, a_sub);
        y[i] = ys[static_cast<std::size_t>(i)] - mean_const;
    }
    const auto lu = k.fullPivLu();
    return {mean_const + ks.dot(lu.solve(y)), cyl_kernel(x_star, x_star, p, a_sub) - ks.dot(lu.solve(ks))};
}

// Five-point central difference of f along coordinate i.
inline double five_point(const std::function<double(const Vec&)>& f, const Vec& x, int i, double h) {
    Vec e = Vec::Zero(x.size());
    e[i] = h;
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline Vec uniform_in_ball(int d, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(rng);
    return v / v.norm() * radius * std::pow(unif(rng), 1.0 / d);
}

inline Vec unit_vector(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(rng);
    return v / v.norm();
}

inline CylParams random_params(std::mt19937_64& rng, int degree = 3) {
    std::normal_distribution<double> normal;
    CylParams p;
    for (int k = 0; k <= degree; ++k) p.c.push_back(std::exp(normal(rng)));
    p.alpha = std::exp(std::abs(normal(rng)));
    p.beta = std::exp(-std::abs(normal(rng)));
    p.ell = std::exp(normal(rng));
    p.amp = std::exp(0.5 * normal(rng));
    return p;
}

inline double min_eigenvalue(const Mat& m) {
    return Eigen::SelfAdjointEigenSolver<Mat>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

} // namespace oracle

#endif
