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

#ifndef CYLBO_GEOMETRY_HPP
#define CYLBO_GEOMETRY_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cylbo/random.hpp"

namespace cylbo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Norms below this are treated as the origin.
inline constexpr double kOriginNorm = 1e-12;
/// Roundoff slack allowed beyond the ball radius.
inline constexpr double kRadiusSlack = 1e-9;

/// The search ball B(0, sqrt(d)). It circumscribes the cube [-1, 1]^d, so
/// every cube corner lies on its boundary sphere.
class BallSpace {
public:
    explicit BallSpace(int dim);

    int dim() const noexcept { return dim_; }
    double radius() const noexcept { return radius_; }
    static constexpr double cube_half_width = 1.0;

    bool contains(const Vector& x, double slack = kRadiusSlack) const;
    void check_dim(const Vector& x) const;

private:
    int dim_;
    double radius_;
};

/// Radius/angle coordinates of a ball point. The origin has no angle: `a` is
/// left empty and the consumer substitutes one (see kernels).
struct CylPoint {
    double r = 0.0;
    Vector a;

    bool angle_deferred() const noexcept { return a.size() == 0; }
};

/// x -> (|x|, x/|x|). Radii beyond R + slack are clamped to R.
CylPoint cyl_transform(const BallSpace& space, const Vector& x);

/// (r, a) -> r a. Throws on the deferred-angle sentinel.
Vector cyl_inverse(const CylPoint& p);

/// Per-dimension digital (XOR) shift applied to 32-bit Sobol coordinates.
struct SobolScramble {
    std::vector<std::uint32_t> shifts;

    static SobolScramble none(int dim);
    static SobolScramble draw(int dim, Rng& rng);
};

/// Largest dimension the bundled direction numbers support.
int sobol_max_dimension();

/// First n Sobol points (index 0 skipped) mapped to [-1, 1]^d, one point per
/// column.
Matrix sobol_candidates(const BallSpace& space, int n, const SobolScramble& scramble);

/// Per-coordinate native box of a benchmark.
struct NativeBox {
    Vector lower;
    Vector upper;
};

NativeBox native_box(std::string_view benchmark, int dim);

/// Affine map of [-1, 1] onto the benchmark's native interval, applied per
/// coordinate and extended linearly to all of R.
Vector domain_affine(std::string_view benchmark, const Vector& x);

} // namespace cylbo

#endif
