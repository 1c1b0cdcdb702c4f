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

#include "cylbo/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cylbo/benchmarks.hpp"
#include "cylbo/gp.hpp"
#include "cylbo/kernels.hpp"
#include "cylbo/random.hpp"

namespace cylbo {

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

Vector random_in_ball(const BallSpace& space, Rng& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector v(space.dim());
    for (int i = 0; i < space.dim(); ++i) v[i] = normal(rng);
    return v / v.norm() * space.radius() * std::pow(unif(rng), 1.0 / space.dim());
}

CylKernelParams random_params(Rng& rng) {
    std::normal_distribution<double> normal;
    CylKernelParams p = CylKernelParams::defaults();
    for (Eigen::Index i = 0; i < p.c.size(); ++i) p.c[i] = std::exp(normal(rng));
    p.alpha = std::exp(std::abs(normal(rng)));
    p.beta = std::exp(-std::abs(normal(rng)));
    p.ell = std::exp(normal(rng));
    p.amp = std::exp(normal(rng));
    return p;
}

SelftestCheck psd_spot_check() {
    Rng rng(20260101);
    double worst = std::numeric_limits<double>::infinity();
    int failures = 0;
    int draws = 0;
    for (int d : {2, 5, 20}) {
        const BallSpace space(d);
        for (int t = 0; t < 30; ++t, ++draws) {
            std::vector<Vector> xs;
            if (t % 2 == 0) xs.push_back(Vector::Zero(d));
            while (xs.size() < 6) xs.push_back(random_in_ball(space, rng));
            const Vector x_star = random_in_ball(space, rng);
            const GramParts g = gram_matrix(space, xs, x_star, random_params(rng));
            const Eigen::Index n = g.k_dd.rows();
            Matrix full(n + 1, n + 1);
            full.topLeftCorner(n, n) = g.k_dd;
            full.topRightCorner(n, 1) = g.k_star;
            full.bottomLeftCorner(1, n) = g.k_star.transpose();
            full(n, n) = g.k_star_star;
            const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(full, Eigen::EigenvaluesOnly).eigenvalues()[0];
            const double scaled = min_eig / full.trace();
            worst = std::min(worst, scaled);
            if (scaled < -1e-8) ++failures;
        }
    }
    return {"psd_spot_check", failures == 0,
            format("%.0f draws, worst min-eigenvalue/trace %.3g", draws, worst)};
}

SelftestCheck block_solve_equivalence() {
    Rng rng(20260102);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int d : {2, 10}) {
        const BallSpace space(d);
        for (int t = 0; t < 10; ++t) {
            Dataset data(space);
            data.add(Vector::Zero(d), normal(rng));
            for (int i = 0; i < 7; ++i) data.add(random_in_ball(space, rng), normal(rng));
            ModelParams mp;
            mp.kernel = random_params(rng);
            mp.noise_var = 1e-3;
            const GPPosterior post = GPPosterior::fit(data, mp);
            const Vector x_star = random_in_ball(space, rng);
            const Prediction fast = post.predict(x_star);

            const GramParts g = gram_matrix(space, data.xs(), x_star, std::get<CylKernelParams>(mp.kernel));
            const Eigen::Index n = g.k_dd.rows();
            const Matrix a = g.k_dd + (mp.noise_var + post.jitter()) * Matrix::Identity(n, n);
            Vector y(n);
            for (Eigen::Index i = 0; i < n; ++i) y[i] = data.ys()[static_cast<std::size_t>(i)] - post.mean_const();
            const auto lu = a.fullPivLu();
            const double mean = post.mean_const() + g.k_star.dot(lu.solve(y));
            const double var = g.k_star_star - g.k_star.dot(lu.solve(g.k_star));
            const double scale = mp.prior_variance();
            worst = std::max(worst, std::abs(fast.mean - mean) / std::max(std::abs(mean), 1.0));
            worst = std::max(worst, std::abs(fast.raw_variance - var) / std::max(std::abs(var), scale * 1e-3));
        }
    }
    return {"block_solve_equivalence", worst <= 1e-6, format("20 datasets, worst relative gap %.3g", worst)};
}

SelftestCheck warp_monotonicity() {
    Rng rng(20260103);
    std::normal_distribution<double> normal;
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) {
        const double alpha = std::exp(2.0 * normal(rng));
        const double beta = std::exp(2.0 * normal(rng));
        double prev = kuma_warp(0.0, alpha, beta);
        ok = ok && prev == 0.0 && std::abs(kuma_warp(1.0, alpha, beta) - 1.0) <= 1e-12;
        for (int i = 1; i <= 200 && ok; ++i) {
            const double w = kuma_warp(i / 200.0, alpha, beta);
            ok = w >= prev && w >= 0.0 && w <= 1.0;
            prev = w;
        }
    }
    return {"warp_monotonicity", ok, "50 random (alpha, beta) on a 201-point grid"};
}

SelftestCheck benchmark_minima(bool corrupt) {
    double worst = 0.0;
    for (const std::string& name : benchmark_names()) {
        const int dim = name == "repeated_hartmann6" ? 6 : 2;
        BenchmarkFn fn = make_benchmark(name, dim);
        if (corrupt && name == "repeated_hartmann6") {
            static const Hartmann6Constants broken = [] {
                Hartmann6Constants k = Hartmann6Constants::standard();
                k.alpha[0] += 0.1;
                return k;
            }();
            fn.native = [](const Vector& x) { return repeated_hartmann6(x, broken); };
        }
        if (!fn.known_argmin) continue;
        worst = std::max(worst, std::abs(fn.native(*fn.known_argmin) - fn.known_min));
    }
    return {"benchmark_minima", worst <= 1e-4, format("worst gap to known minimum %.3g", worst)};
}

} // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
    std::vector<SelftestCheck> checks;
    const auto guarded = [&](const char* name, auto&& fn) {
        try {
            checks.push_back(fn());
        } catch (const std::exception& e) {
            checks.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    guarded("psd_spot_check", psd_spot_check);
    guarded("block_solve_equivalence", block_solve_equivalence);
    guarded("warp_monotonicity", warp_monotonicity);
    guarded("benchmark_minima", [&] { return benchmark_minima(options.corrupt_benchmark_constant); });
    return checks;
}

} // namespace cylbo
