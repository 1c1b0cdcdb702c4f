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

#ifndef CYLBO_BENCHMARKS_HPP
#define CYLBO_BENCHMARKS_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cylbo/geometry.hpp"

namespace cylbo {

// Branin and Hartmann6 constants follow the standard published test-function
// set (Laguna and Marti, 2005).

double branin(double x1, double x2);

struct Hartmann6Constants {
    std::array<double, 4> alpha;
    std::array<std::array<double, 6>, 4> a;
    std::array<std::array<double, 6>, 4> p;

    static const Hartmann6Constants& standard();
};

double hartmann6(std::span<const double, 6> x, const Hartmann6Constants& k = Hartmann6Constants::standard());

// All four take native coordinates.
double repeated_branin(const Vector& x);
double repeated_hartmann6(const Vector& x, const Hartmann6Constants& k = Hartmann6Constants::standard());
double rosenbrock(const Vector& x);
double levy(const Vector& x);

struct BenchmarkFn {
    std::string name;
    int dim = 0;
    std::function<double(const Vector&)> native;
    double known_min = 0.0;
    std::optional<Vector> known_argmin;  // native coordinates

    /// Evaluates at a search-space point via domain_affine().
    double operator()(const Vector& x) const;
};

std::vector<std::string> benchmark_names();
bool is_benchmark(std::string_view name);
BenchmarkFn make_benchmark(std::string_view name, int dim);

} // namespace cylbo

#endif
