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

#include "cylbo/hyper.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cylbo/error.hpp"

namespace cylbo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_half_normal(double u, double sd) {
    return std::log(2.0) - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * (u / sd) * (u / sd);
}

double log_sum_exp(double a, double b) {
    const double hi = std::max(a, b);
    if (hi == kNegInf) return kNegInf;
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

} // namespace

HyperLayout::HyperLayout(SurrogateKind kind, int degree, bool warping)
    : kind_(kind), degree_(degree), warping_(warping && kind == SurrogateKind::cylindrical) {
    if (kind_ == SurrogateKind::cylindrical) {
        require(degree >= 0, ErrorCode::invalid_argument, "HyperLayout: negative degree");
        for (int p = 0; p <= degree; ++p) names_.push_back("log_c" + std::to_string(p));
        if (warping_) {
            names_.emplace_back("log_alpha");
            names_.emplace_back("log_beta");
        }
    }
    names_.emplace_back("log_ell");
    names_.emplace_back("log_amp");
    names_.emplace_back("log_noise");
}

Vector HyperLayout::pack(const HyperVector& h) const {
    Vector theta(size());
    Eigen::Index k = 0;
    if (kind_ == SurrogateKind::cylindrical) {
        require(h.log_c.size() == degree_ + 1, ErrorCode::dimension_mismatch, "HyperLayout::pack: wrong degree");
        for (Eigen::Index p = 0; p <= degree_; ++p) theta[k++] = h.log_c[p];
        if (warping_) {
            theta[k++] = h.log_alpha;
            theta[k++] = h.log_beta;
        }
    }
    theta[k++] = h.log_ell;
    theta[k++] = h.log_amp;
    theta[k++] = h.log_noise;
    return theta;
}

HyperVector HyperLayout::unpack(const Vector& theta) const {
    require(theta.size() == size(), ErrorCode::dimension_mismatch, "HyperLayout::unpack: wrong length");
    HyperVector h;
    Eigen::Index k = 0;
    if (kind_ == SurrogateKind::cylindrical) {
        h.log_c = theta.head(degree_ + 1);
        k = degree_ + 1;
        if (warping_) {
            h.log_alpha = theta[k++];
            h.log_beta = theta[k++];
        }
    }
    h.log_ell = theta[k++];
    h.log_amp = theta[k++];
    h.log_noise = theta[k++];
    return h;
}

ModelParams HyperLayout::to_model(const HyperVector& h) const {
    ModelParams m;
    m.noise_var = std::exp(h.log_noise);
    if (kind_ == SurrogateKind::cylindrical) {
        CylKernelParams k;
        k.c = h.log_c.array().exp().matrix();
        k.alpha = warping_ ? std::exp(h.log_alpha) : 1.0;
        k.beta = warping_ ? std::exp(h.log_beta) : 1.0;
        k.ell = std::exp(h.log_ell);
        k.amp = std::exp(h.log_amp);
        m.kernel = k;
    } else {
        m.kernel = CubeKernelParams{std::exp(h.log_ell), std::exp(h.log_amp)};
    }
    return m;
}

double SpikeSlab::log_density(double t, int sign) const {
    const double u = sign >= 0 ? t : -t;
    if (!(u >= 0.0)) return kNegInf;
    return log_sum_exp(std::log(spike_weight) + log_half_normal(u, spike_sd),
                       std::log1p(-spike_weight) + log_half_normal(u, slab_sd));
}

double SpikeSlab::cdf(double t, int sign) const {
    const double u = sign >= 0 ? t : -t;
    if (u <= 0.0) return 0.0;
    return spike_weight * std::erf(u / (spike_sd * std::numbers::sqrt2)) +
           (1.0 - spike_weight) * std::erf(u / (slab_sd * std::numbers::sqrt2));
}

double NormalPrior::log_density(double t) const {
    const double z = (t - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

HyperVector PriorSpec::prior_mean(int degree) const {
    HyperVector h;
    h.log_c = Vector::Constant(degree + 1, log_c.mean);
    h.log_alpha = 0.0;
    h.log_beta = 0.0;
    h.log_ell = log_ell.mean;
    h.log_amp = log_amp.mean;
    h.log_noise = log_noise.mean;
    return h;
}

double log_prior(const HyperVector& h, const HyperLayout& layout, const PriorSpec& spec) {
    double lp = 0.0;
    if (layout.kind() == SurrogateKind::cylindrical) {
        for (Eigen::Index p = 0; p < h.log_c.size(); ++p) lp += spec.log_c.log_density(h.log_c[p]);
        if (layout.warping()) {
            lp += spec.log_alpha.log_density(h.log_alpha, +1);
            lp += spec.log_beta.log_density(h.log_beta, -1);
        }
    }
    lp += spec.log_ell.log_density(h.log_ell);
    lp += spec.log_amp.log_density(h.log_amp);
    lp += spec.log_noise.log_density(h.log_noise);
    return std::isnan(lp) ? kNegInf : lp;
}

Vector slice_sample_step(const LogDensity& target, const Vector& v, Rng& rng, const Vector& widths,
                         SliceStats* stats, int max_step_out) {
    require(widths.size() == v.size(), ErrorCode::dimension_mismatch, "slice_sample_step: widths size mismatch");
    require((widths.array() > 0.0).all(), ErrorCode::invalid_argument, "slice_sample_step: widths must be positive");
    Vector x = v;
    double fx = target(x);
    require(std::isfinite(fx), ErrorCode::invalid_argument, "slice_sample_step: target not finite at start");
    long evals = 1;

    auto eval_at = [&](Eigen::Index i, double xi) {
        Vector y = x;
        y[i] = xi;
        ++evals;
        return target(y);
    };

    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double level = fx + std::log(1.0 - uniform01(rng));
        const double w = widths[i];
        const double x0 = x[i];
        double lo = x0 - w * uniform01(rng);
        double hi = lo + w;
        int j = static_cast<int>(std::floor(max_step_out * uniform01(rng)));
        int k = max_step_out - 1 - j;
        while (j-- > 0 && eval_at(i, lo) > level) lo -= w;
        while (k-- > 0 && eval_at(i, hi) > level) hi += w;

        for (;;) {
            const double x1 = lo + uniform01(rng) * (hi - lo);
            const double f1 = eval_at(i, x1);
            if (f1 > level) {
                x[i] = x1;
                fx = f1;
                break;
            }
            if (x1 < x0) {
                lo = x1;
            } else {
                hi = x1;
            }
            if (hi - lo <= 1e-12 * std::max(1.0, std::abs(x0))) break;  // bracket collapsed onto x0
        }
    }
    if (stats) {
        stats->evaluations += evals;
        stats->updates += x.size();
    }
    return x;
}

void McmcConfig::validate() const {
    require(n_samples >= 1 && burn_in >= 0 && warm_burn_in >= 0 && thin >= 1 && width > 0.0,
            ErrorCode::config_error, "McmcConfig: invalid schedule");
}

HyperChain::HyperChain(HyperLayout layout, PriorSpec prior)
    : layout_(std::move(layout)), prior_(prior), state_(layout_.pack(prior_.prior_mean(layout_.degree()))) {}

std::vector<Vector> HyperChain::sample_packed(const LogDensity& target, const McmcConfig& config, Rng& rng) {
    config.validate();
    stats_ = {};
    std::vector<Vector> draws;
    if (!std::isfinite(target(state_))) {
        warnings_.emplace_back("chain state rejected; restarting from prior means");
        state_ = layout_.pack(prior_.prior_mean(layout_.degree()));
        warm_ = false;
        if (!std::isfinite(target(state_))) return draws;
    }
    const Vector widths = Vector::Constant(layout_.size(), config.width);
    const int burn = warm_ ? config.warm_burn_in : config.burn_in;
    for (int b = 0; b < burn; ++b) state_ = slice_sample_step(target, state_, rng, widths, &stats_);
    draws.reserve(static_cast<std::size_t>(config.n_samples));
    for (int s = 0; s < config.n_samples; ++s) {
        for (int t = 0; t < config.thin; ++t) state_ = slice_sample_step(target, state_, rng, widths, &stats_);
        draws.push_back(state_);
    }
    warm_ = true;
    return draws;
}

std::vector<ModelParams> HyperChain::sample_posterior(const Dataset& data, const McmcConfig& config, Rng& rng) {
    require(!data.empty(), ErrorCode::invalid_argument, "sample_posterior: empty dataset");
    const MarginalLikelihood likelihood(data);
    const LogDensity target = [&](const Vector& theta) {
        const HyperVector h = layout_.unpack(theta);
        const double lp = log_prior(h, layout_, prior_);
        if (!std::isfinite(lp)) return kNegInf;
        try {
            const double ll = likelihood(layout_.to_model(h));
            return std::isnan(ll) ? kNegInf : lp + ll;
        } catch (const Error&) {
            return kNegInf;
        }
    };
    std::vector<ModelParams> out;
    for (const Vector& theta : sample_packed(target, config, rng)) out.push_back(layout_.to_model(layout_.unpack(theta)));
    if (out.empty()) {
        warnings_.emplace_back("all candidate states rejected; using prior means");
        const ModelParams fallback = layout_.to_model(prior_.prior_mean(layout_.degree()));
        out.assign(static_cast<std::size_t>(config.n_samples), fallback);
    }
    return out;
}

} // namespace cylbo
