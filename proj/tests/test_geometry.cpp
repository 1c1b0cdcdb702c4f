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

#include "doctest.h"

#include "cylbo/error.hpp"
#include "cylbo/geometry.hpp"
#include "oracles.hpp"

using namespace cylbo;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::internal;
}

} // namespace

TEST_CASE("ball radius squared equals the dimension and cube corners lie on the sphere") {
    for (int d : {1, 2, 3, 7, 100, 500}) {
        const BallSpace space(d);
        CHECK(space.radius() * space.radius() == doctest::Approx(d).epsilon(1e-15));
        const Vector corner = Vector::Ones(d);
        CHECK(corner.norm() == doctest::Approx(space.radius()).epsilon(1e-15));
        CHECK(space.contains(corner));
        CHECK_FALSE(space.contains(corner * 1.001));
    }
    CHECK(BallSpace::cube_half_width == 1.0);
    CHECK(code_of([] { BallSpace(0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("cylindrical transform examples") {
    const CylPoint p = cyl_transform(BallSpace(2), vec({1, 0}));
    CHECK(p.r == 1.0);
    CHECK(p.a == vec({1, 0}));

    const CylPoint o = cyl_transform(BallSpace(2), vec({0, 0}));
    CHECK(o.r == 0.0);
    CHECK(o.angle_deferred());

    Vector x = Vector::Zero(25);
    x[0] = 3;
    x[1] = 4;
    const CylPoint q = cyl_transform(BallSpace(25), x);
    CHECK(q.r == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(q.a[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(q.a[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(q.a.tail(23).isZero(0.0));

    CHECK(code_of([] { cyl_transform(BallSpace(3), vec({1, 0})); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("norms below the origin threshold give the deferred-angle sentinel") {
    CHECK(cyl_transform(BallSpace(2), vec({1e-13, 0})).angle_deferred());
    CHECK_FALSE(cyl_transform(BallSpace(2), vec({1e-11, 0})).angle_deferred());
}

TEST_CASE("radii slightly beyond R are clamped to R") {
    const BallSpace space(2);
    const CylPoint p = cyl_transform(space, Vector::Ones(2) * (1.0 + 1e-12));
    CHECK(p.r == space.radius());
}

TEST_CASE("cylindrical inverse examples") {
    CHECK(cyl_inverse({1.0, vec({1, 0})}) == vec({1, 0}));
    CHECK(cyl_inverse({0.0, vec({0, 1})}) == vec({0, 0}));
    const Vector back = cyl_inverse({5.0, vec({0.6, 0.8})});
    CHECK(back[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(back[1] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(code_of([] { cyl_inverse(CylPoint{}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("round trip and unit angles over 10^4 random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> log_r(std::log(1e-6), 0.0);
    double worst_roundtrip = 0.0;
    double worst_unit = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const int d = 1 + t % 12;
        const BallSpace space(d);
        const Vector x = oracle::unit_vector(d, rng) * space.radius() * std::exp(log_r(rng));
        const CylPoint p = cyl_transform(space, x);
        worst_roundtrip = std::max(worst_roundtrip, (cyl_inverse(p) - x).lpNorm<Eigen::Infinity>());
        worst_unit = std::max(worst_unit, std::abs(p.a.norm() - 1.0));
        REQUIRE(p.r >= 0.0);
        REQUIRE(p.r <= space.radius());
    }
    CHECK(worst_roundtrip <= 1e-10);
    CHECK(worst_unit <= 1e-12);
}

TEST_CASE("first unscrambled Sobol point maps to the cube center") {
    const Matrix pts = sobol_candidates(BallSpace(2), 1, SobolScramble::none(2));
    CHECK(pts.rows() == 2);
    CHECK(pts.cols() == 1);
    CHECK(pts.col(0) == vec({0, 0}));
}

TEST_CASE("three unscrambled one-dimensional Sobol points skip index zero") {
    const Matrix pts = sobol_candidates(BallSpace(1), 3, SobolScramble::none(1));
    // Unit-interval values 0.5, 0.75, 0.25 in Gray-code order.
    CHECK(pts(0, 0) == 0.0);
    CHECK(pts(0, 1) == 0.5);
    CHECK(pts(0, 2) == -0.5);
}

TEST_CASE("unscrambled Sobol matches the direct radical-inverse construction") {
    const Matrix pts = sobol_candidates(BallSpace(2), 1024, SobolScramble::none(2));
    for (std::uint32_t i = 0; i < 1024; ++i) {
        const std::uint32_t g = oracle::gray(i + 1);
        REQUIRE(pts(0, i) == 2.0 * oracle::radical_inverse_base2(g) - 1.0);
        REQUIRE(pts(1, i) == 2.0 * oracle::sobol_dim2_direct(g) - 1.0);
    }
}

TEST_CASE("Sobol star discrepancy beats uniform random sets") {
    const auto to_unit = [](const Matrix& m) {
        std::vector<std::array<double, 2>> out;
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({(m(0, j) + 1) / 2, (m(1, j) + 1) / 2});
        return out;
    };
    Rng rng(3);
    const double sobol = oracle::grid_star_discrepancy(
        to_unit(sobol_candidates(BallSpace(2), 1024, SobolScramble::draw(2, rng))), 64);
    std::mt19937_64 urng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double mean_random = 0.0;
    for (int s = 0; s < 20; ++s) {
        std::vector<std::array<double, 2>> pts(1024);
        for (auto& p : pts) p = {u(urng), u(urng)};
        mean_random += oracle::grid_star_discrepancy(pts, 64) / 20.0;
    }
    CHECK(sobol < mean_random);
}

TEST_CASE("Sobol candidates stay in the cube and fresh scrambles differ") {
    Rng rng(9);
    const BallSpace space(7);
    const Matrix a = sobol_candidates(space, 2000, SobolScramble::draw(7, rng));
    const Matrix b = sobol_candidates(space, 2000, SobolScramble::draw(7, rng));
    CHECK(a.minCoeff() >= -1.0);
    CHECK(a.maxCoeff() <= 1.0);
    CHECK((a - b).cwiseAbs().maxCoeff() > 0.0);

    Rng r1(42), r2(42);
    CHECK(sobol_candidates(space, 50, SobolScramble::draw(7, r1)) ==
          sobol_candidates(space, 50, SobolScramble::draw(7, r2)));
}

TEST_CASE("Sobol supports large dimensions and rejects unsupported ones") {
    CHECK(sobol_max_dimension() >= 500);
    const Matrix big = sobol_candidates(BallSpace(500), 4, SobolScramble::none(500));
    CHECK(big.rows() == 500);
    const int too_many = sobol_max_dimension() + 1;
    CHECK(code_of([&] { sobol_candidates(BallSpace(too_many), 1, SobolScramble::none(too_many)); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { sobol_candidates(BallSpace(2), 0, SobolScramble::none(2)); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { sobol_candidates(BallSpace(2), 1, SobolScramble::none(3)); }) ==
          ErrorCode::dimension_mismatch);
}

TEST_CASE("domain affine examples") {
    CHECK(domain_affine("rosenbrock", vec({-1, 1})) == vec({-5, 10}));
    CHECK(domain_affine("repeated_hartmann6", Vector::Zero(6)) == Vector::Constant(6, 0.5));
    CHECK(domain_affine("levy", vec({0.2}))[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(domain_affine("repeated_branin", vec({-1, -1, 1, 1})) == vec({-5, 0, 10, 15}));
    CHECK(code_of([] { domain_affine("sphere", vec({0})); }) == ErrorCode::unknown_id);
}

TEST_CASE("domain affine is monotone and extrapolates linearly") {
    for (const char* name : {"repeated_branin", "repeated_hartmann6", "rosenbrock", "levy"}) {
        const int d = std::string(name) == "repeated_hartmann6" ? 6 : 4;
        double prev_first = -1e300;
        for (double t = -1.5; t <= 1.5; t += 0.01) {
            const Vector v = domain_affine(name, Vector::Constant(d, t));
            REQUIRE(v[0] > prev_first);
            prev_first = v[0];
        }
        const Vector lo = domain_affine(name, Vector::Constant(d, -1.0));
        const Vector mid = domain_affine(name, Vector::Zero(d));
        const Vector beyond = domain_affine(name, Vector::Constant(d, -1.2));
        CHECK((beyond - (lo + 0.2 * (lo - mid))).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("forked streams are deterministic and independent") {
    Rng a(7), b(7);
    Rng fa = fork_rng(a);
    Rng fb = fork_rng(b);
    CHECK(fa() == fb());
    CHECK(rng_digest(a) == rng_digest(b));
    const std::string before = rng_digest(a);
    a();
    CHECK(rng_digest(a) != before);
    CHECK(rng_digest(a).size() == 16);
}
