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

#include "cylbo/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cylbo/error.hpp"

namespace cylbo {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string> kNames{"repeated_branin", "repeated_hartmann6", "rosenbrock", "levy"};

} // namespace

double branin(double x1, double x2) {
    const double b = 5.1 / (4.0 * kPi * kPi);
    const double c = 5.0 / kPi;
    const double t = 1.0 / (8.0 * kPi);
    const double inner = x2 - b * x1 * x1 + c * x1 - 6.0;
    return inner * inner + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

const Hartmann6Constants& Hartmann6Constants::standard() {
    static const Hartmann6Constants k{
        {1.0, 1.2, 3.0, 3.2},
        {{{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
          {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
          {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
          {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}}},
        {{{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
          {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
          {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
          {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}}},
    };
    return k;
}

double hartmann6(std::span<const double, 6> x, const Hartmann6Constants& k) {
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            const double diff = x[j] - k.p[i][j];
            inner += k.a[i][j] * diff * diff;
        }
        total += k.alpha[i] * std::exp(-inner);
    }
    return -total;
}

double repeated_branin(const Vector& x) {
    const Eigen::Index blocks = x.size() / 2;
    require(blocks >= 1, ErrorCode::invalid_argument, "repeated_branin: needs D >= 2");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < blocks; ++i) sum += branin(x[2 * i], x[2 * i + 1]);
    return sum / static_cast<double>(blocks);
}

double repeated_hartmann6(const Vector& x, const Hartmann6Constants& k) {
    const Eigen::Index blocks = x.size() / 6;
    require(blocks >= 1, ErrorCode::invalid_argument, "repeated_hartmann6: needs D >= 6");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < blocks; ++i) sum += hartmann6(std::span<const double, 6>(x.data() + 6 * i, 6), k);
    return sum / static_cast<double>(blocks);
}

double rosenbrock(const Vector& x) {
    require(x.size() >= 2, ErrorCode::invalid_argument, "rosenbrock: needs D >= 2");
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double levy(const Vector& x) {
    require(x.size() >= 1, ErrorCode::invalid_argument, "levy: needs D >= 1");
    const Eigen::ArrayXd w = 1.0 + (x.array() - 1.0) / 4.0;
    const Eigen::Index n = w.size();
    const double s1 = std::sin(kPi * w[0]);
    double sum = s1 * s1;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double s = std::sin(kPi * w[i] + 1.0);
        sum += (w[i] - 1.0) * (w[i] - 1.0) * (1.0 + 10.0 * s * s);
    }
    const double sd = std::sin(2.0 * kPi * w[n - 1]);
    sum += (w[n - 1] - 1.0) * (w[n - 1] - 1.0) * (1.0 + sd * sd);
    return sum;
}

double BenchmarkFn::operator()(const Vector& x) const {
    require(x.size() == dim, ErrorCode::dimension_mismatch, "benchmark " + name + ": dimension mismatch");
    return native(domain_affine(name, x));
}

std::vector<std::string> benchmark_names() { return kNames; }

bool is_benchmark(std::string_view name) { return std::find(kNames.begin(), kNames.end(), name) != kNames.end(); }

BenchmarkFn make_benchmark(std::string_view name, int dim) {
    require(dim >= 1, ErrorCode::invalid_argument, "benchmark dimension must be positive");
    BenchmarkFn fn;
    fn.name = std::string(name);
    fn.dim = dim;
    if (name == "repeated_branin") {
        require(dim >= 2, ErrorCode::invalid_argument, "repeated_branin: needs D >= 2");
        fn.native = [](const Vector& x) { return repeated_branin(x); };
        fn.known_min = 0.397887357729738;
        Vector arg = Vector::Zero(dim);
        for (int i = 0; i + 1 < dim; i += 2) {
            arg[i] = kPi;
            arg[i + 1] = 2.275;
        }
        fn.known_argmin = arg;
    } else if (name == "repeated_hartmann6") {
        require(dim >= 6, ErrorCode::invalid_argument, "repeated_hartmann6: needs D >= 6");
        fn.native = [](const Vector& x) { return repeated_hartmann6(x); };
        fn.known_min = -3.32236801141551;
        const double opt[6] = {0.20168952, 0.15001069, 0.47687398, 0.27533243, 0.31165162, 0.65730054};
        Vector arg = Vector::Zero(dim);
        for (int i = 0; i < dim; ++i) arg[i] = opt[i % 6];
        fn.known_argmin = arg;
    } else if (name == "rosenbrock") {
        require(dim >= 2, ErrorCode::invalid_argument, "rosenbrock: needs D >= 2");
        fn.native = [](const Vector& x) { return rosenbrock(x); };
        fn.known_min = 0.0;
        fn.known_argmin = Vector::Ones(dim);
    } else if (name == "levy") {
        fn.native = [](const Vector& x) { return levy(x); };
        fn.known_min = 0.0;
        fn.known_argmin = Vector::Ones(dim);
    } else {
        fail(ErrorCode::unknown_id, "unknown benchmark '" + std::string(name) + "'");
    }
    return fn;
}

} // namespace cylbo
