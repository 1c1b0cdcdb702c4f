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

#ifndef CYLBO_HYPER_HPP
#define CYLBO_HYPER_HPP

#include <functional>
#include <string>
#include <vector>

#include "cylbo/gp.hpp"
#include "cylbo/random.hpp"

namespace cylbo {

/// Hyperparameters in log space. Warping entries are ignored by the cube
/// kernel and frozen at zero when warping is disabled.
struct HyperVector {
    Vector log_c;
    double log_alpha = 0.0;
    double log_beta = 0.0;
    double log_ell = 0.0;
    double log_amp = 0.0;
    double log_noise = -4.0;
};

enum class SurrogateKind { cylindrical, matern_cube };

/// Which HyperVector entries are free coordinates of the sampler, and in what
/// order they are packed.
class HyperLayout {
public:
    HyperLayout(SurrogateKind kind, int degree = kDefaultDegree, bool warping = true);

    SurrogateKind kind() const noexcept { return kind_; }
    int degree() const noexcept { return degree_; }
    bool warping() const noexcept { return warping_; }
    int size() const noexcept { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    Vector pack(const HyperVector& h) const;
    HyperVector unpack(const Vector& theta) const;
    ModelParams to_model(const HyperVector& h) const;

private:
    SurrogateKind kind_;
    int degree_;
    bool warping_;
    std::vector<std::string> names_;
};

/// Two half-normals sharing a boundary at 0, opening towards +inf (sign = +1)
/// or -inf (sign = -1): a narrow spike and a wide slab.
struct SpikeSlab {
    double spike_sd = 0.01;
    double slab_sd = 2.0;
    double spike_weight = 0.5;

    double log_density(double t, int sign) const;
    /// Mass on [0, t] for sign = +1 (or [t, 0] for sign = -1).
    double cdf(double t, int sign) const;
};

struct NormalPrior {
    double mean = 0.0;
    double sd = 2.0;

    double log_density(double t) const;
};

struct PriorSpec {
    SpikeSlab log_alpha;  // supported on [0, inf)
    SpikeSlab log_beta;   // supported on (-inf, 0]
    NormalPrior log_c{0.0, 2.0};
    NormalPrior log_ell{0.0, 2.0};
    NormalPrior log_amp{0.0, 2.0};
    NormalPrior log_noise{-4.0, 2.0};

    /// Centre of the prior (spikes at 0), used to start chains.
    HyperVector prior_mean(int degree) const;
};

double log_prior(const HyperVector& h, const HyperLayout& layout, const PriorSpec& spec);

using LogDensity = std::function<double(const Vector&)>;

struct SliceStats {
    long evaluations = 0;
    long updates = 0;

    double evaluations_per_update() const noexcept {
        return updates == 0 ? 0.0 : static_cast<double>(evaluations) / static_cast<double>(updates);
    }
};

/// One sweep of coordinate-wise slice sampling (stepping out, then
/// shrinkage). `widths` are the initial bracket widths per coordinate.
Vector slice_sample_step(const LogDensity& target, const Vector& v, Rng& rng, const Vector& widths,
                         SliceStats* stats = nullptr, int max_step_out = 32);

struct McmcConfig {
    int n_samples = 10;
    int burn_in = 20;
    int warm_burn_in = 5;
    int thin = 2;
    double width = 1.0;

    void validate() const;
};

/// Persistent slice-sampling chain over GP hyperparameters; each call to
/// sample_posterior() continues from the previous state.
class HyperChain {
public:
    HyperChain(HyperLayout layout, PriorSpec prior);

    std::vector<ModelParams> sample_posterior(const Dataset& data, const McmcConfig& config, Rng& rng);
    /// Same, but returns the packed draws.
    std::vector<Vector> sample_packed(const LogDensity& target, const McmcConfig& config, Rng& rng);

    const HyperLayout& layout() const noexcept { return layout_; }
    const PriorSpec& prior() const noexcept { return prior_; }
    const Vector& state() const noexcept { return state_; }
    bool warm() const noexcept { return warm_; }
    const SliceStats& last_stats() const noexcept { return stats_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    HyperLayout layout_;
    PriorSpec prior_;
    Vector state_;
    bool warm_ = false;
    SliceStats stats_;
    std::vector<std::string> warnings_;
};

} // namespace cylbo

#endif
