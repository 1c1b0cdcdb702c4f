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

#include "cylbo/geometry.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <boost/random/sobol.hpp>

#include "cylbo/error.hpp"

namespace cylbo {

Rng fork_rng(Rng& parent) {
    std::seed_seq seq{parent(), parent(), parent(), parent()};
    return Rng(seq);
}

std::string rng_digest(const Rng& rng) {
    std::ostringstream os;
    os << rng;
    const std::string state = os.str();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : state) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << h;
    return hex.str();
}

BallSpace::BallSpace(int dim) : dim_(dim), radius_(std::sqrt(static_cast<double>(dim))) {
    require(dim >= 1, ErrorCode::invalid_argument, "BallSpace: dimension must be positive");
}

bool BallSpace::contains(const Vector& x, double slack) const {
    return x.size() == dim_ && x.norm() <= radius_ + slack;
}

void BallSpace::check_dim(const Vector& x) const {
    if (x.size() != dim_) {
        fail(ErrorCode::dimension_mismatch, "point has dimension " + std::to_string(x.size()) +
                                                ", space has dimension " + std::to_string(dim_));
    }
}

CylPoint cyl_transform(const BallSpace& space, const Vector& x) {
    space.check_dim(x);
    const double norm = x.norm();
    CylPoint p;
    if (norm < kOriginNorm) return p;
    p.r = std::min(norm, space.radius());
    p.a = x / norm;
    return p;
}

Vector cyl_inverse(const CylPoint& p) {
    require(!p.angle_deferred(), ErrorCode::invalid_argument, "cyl_inverse: origin has no angle");
    return p.r * p.a;
}

SobolScramble SobolScramble::none(int dim) {
    return SobolScramble{std::vector<std::uint32_t>(static_cast<std::size_t>(dim), 0u)};
}

SobolScramble SobolScramble::draw(int dim, Rng& rng) {
    SobolScramble s;
    s.shifts.resize(static_cast<std::size_t>(dim));
    for (auto& v : s.shifts) v = static_cast<std::uint32_t>(rng() >> 32);
    return s;
}

int sobol_max_dimension() { return static_cast<int>(boost::random::default_sobol_table::max_dimension); }

Matrix sobol_candidates(const BallSpace& space, int n, const SobolScramble& scramble) {
    const int d = space.dim();
    require(n >= 1, ErrorCode::invalid_argument, "sobol_candidates: n must be positive");
    require(d <= sobol_max_dimension(), ErrorCode::invalid_argument,
            "sobol_candidates: dimension " + std::to_string(d) + " exceeds the direction-number table");
    require(static_cast<int>(scramble.shifts.size()) == d, ErrorCode::dimension_mismatch,
            "sobol_candidates: scramble has wrong dimension");

    // The engine starts at index 1, so the all-zero point never appears.
    boost::random::sobol_engine<std::uint32_t, 32> engine(static_cast<std::size_t>(d));
    constexpr double scale = 1.0 / 4294967296.0;
    Matrix pts(d, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < d; ++i) {
            const std::uint32_t v = engine() ^ scramble.shifts[static_cast<std::size_t>(i)];
            pts(i, j) = 2.0 * (static_cast<double>(v) * scale) - 1.0;
        }
    }
    return pts;
}

namespace {

struct Interval {
    double lo;
    double hi;
};

} // namespace

NativeBox native_box(std::string_view benchmark, int dim) {
    require(dim >= 1, ErrorCode::invalid_argument, "native_box: dimension must be positive");
    NativeBox box{Vector(dim), Vector(dim)};
    auto fill = [&](auto&& interval_of) {
        for (int i = 0; i < dim; ++i) {
            const Interval iv = interval_of(i);
            box.lower[i] = iv.lo;
            box.upper[i] = iv.hi;
        }
    };
    if (benchmark == "repeated_branin") {
        fill([](int i) { return i % 2 == 0 ? Interval{-5.0, 10.0} : Interval{0.0, 15.0}; });
    } else if (benchmark == "repeated_hartmann6") {
        fill([](int) { return Interval{0.0, 1.0}; });
    } else if (benchmark == "rosenbrock") {
        fill([](int) { return Interval{-5.0, 10.0}; });
    } else if (benchmark == "levy") {
        fill([](int) { return Interval{-10.0, 10.0}; });
    } else {
        fail(ErrorCode::unknown_id, "unknown benchmark '" + std::string(benchmark) + "'");
    }
    return box;
}

Vector domain_affine(std::string_view benchmark, const Vector& x) {
    const NativeBox box = native_box(benchmark, static_cast<int>(x.size()));
    const Vector half = 0.5 * (box.upper - box.lower);
    const Vector mid = 0.5 * (box.upper + box.lower);
    return mid + half.cwiseProduct(x);
}

} // namespace cylbo
