// Copyright 2026 The loopsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loopsynth/loop_engine.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "loopsynth/angles.h"

namespace loopsynth {

namespace {

Eigen::Matrix2d rotation(double theta_rad) {
    double c = std::cos(theta_rad);
    double s = std::sin(theta_rad);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

GaussianState source_state(Source source, const SqueezerSpec &spec) {
    if (source == Source::squeezer) {
        return squeezed_vacuum(spec);
    }
    return vacuum(1);
}

}  // namespace

Eigen::Matrix4d variable_beamsplitter(double transmissivity, bool invert_coupling_sign) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::invalid_argument(fmt::format("variable_beamsplitter: T = {} outside [0, 1]", transmissivity));
    }
    double t = std::sqrt(transmissivity);
    double r = std::sqrt(1.0 - transmissivity);
    if (transmissivity < 0.5) {
        r = -r;
    }
    if (invert_coupling_sign) {
        r = -r;
    }
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s.block<2, 2>(0, 0) = t * Eigen::Matrix2d::Identity();
    s.block<2, 2>(0, 2) = -r * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 0) = r * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 2) = t * Eigen::Matrix2d::Identity();
    return s;
}

std::optional<std::size_t> ModeWindow::position(int label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

LoopRun::LoopRun(ControlSchedule schedule, SqueezerSpec source, LoopOptions options)
    : schedule_(std::move(schedule)), source_(source), options_(std::move(options)), live_(vacuum(1)) {
    schedule_.validate();
    source_.validate();
    noise_ = schedule_.noise.effective();
    if (options_.window < 3) {
        throw std::invalid_argument(fmt::format("run_loop: window must be >= 3, got {}", options_.window));
    }
    if (options_.sampling) {
        options_.sampling->validate();
        if (options_.sampling->num_modes() != schedule_.num_outputs()) {
            throw std::invalid_argument(fmt::format("run_loop: measurement plan has {} bases but the schedule has {} outputs",
                                                    options_.sampling->num_modes(), schedule_.num_outputs()));
        }
        auto shots = static_cast<std::size_t>(options_.sampling->shots);
        rng_.seed(options_.seed);
        loop_mean_.assign(shots, Eigen::Vector2d::Zero());
        std::size_t covs = noise_.phase_jitter_deg_per_trip > 0.0 ? shots : 1;
        loop_cov_.assign(covs, kVacuumVariance * Eigen::Matrix2d::Identity());
    }
}

GaussianState LoopRun::incoming_state(const BinSetting &bin) const {
    return source_state(bin.source, source_);
}

std::optional<RunRecord> LoopRun::next() {
    while (bin_ < schedule_.bins.size()) {
        auto record = options_.sampling ? step_sampling() : step_analytic();
        ++bin_;
        if (record) {
            return record;
        }
    }
    return std::nullopt;
}

std::optional<RunRecord> LoopRun::step_analytic() {
    const BinSetting &bin = schedule_.bins[bin_];
    GaussianState st = tensor(live_, incoming_state(bin));
    std::size_t loop = st.num_modes() - 1;
    std::size_t pair[] = {0, loop};
    st = apply_symplectic(st, variable_beamsplitter(bin.T, options_.invert_coupling_sign), pair);
    st = apply_phase(st, loop, bin.theta_deg);
    if (noise_.loop_loss_per_trip > 0.0) {
        st = apply_loss(st, loop, 1.0 - noise_.loop_loss_per_trip);
    }
    st = apply_dephasing(st, loop, noise_.phase_jitter_deg_per_trip);

    // Reorder to [new loop, kept exited modes..., newly exited mode].
    std::vector<std::size_t> order{loop};
    std::size_t first_kept = 1;
    if (bin_ > 0) {
        if (noise_.detection_efficiency < 1.0) {
            st = apply_loss(st, 0, noise_.detection_efficiency);
        }
        labels_.push_back(static_cast<int>(bin_));
        if (labels_.size() > options_.window) {
            labels_.erase(labels_.begin());
            first_kept = 2;
        }
    }
    for (std::size_t m = first_kept; m < loop; ++m) {
        order.push_back(m);
    }
    if (bin_ > 0) {
        order.push_back(0);
    }
    live_ = marginalize(st, order);
    if (bin_ == 0) {
        return std::nullopt;
    }

    std::vector<std::size_t> exited(labels_.size());
    std::iota(exited.begin(), exited.end(), std::size_t{1});
    RunRecord rec;
    rec.mode = static_cast<int>(bin_);
    rec.exit_bin = static_cast<int>(bin_) + 1;
    rec.phi_deg = bin.phi_deg;
    rec.window = ModeWindow{marginalize(live_, exited), labels_};
    return rec;
}

std::optional<RunRecord> LoopRun::step_sampling() {
    const BinSetting &bin = schedule_.bins[bin_];
    const MeasurementPlan &plan = *options_.sampling;
    const bool measure = bin_ > 0;
    const double phi = measure ? plan.bases_deg[bin_ - 1] : 0.0;
    const double sigma = deg_to_rad(noise_.phase_jitter_deg_per_trip);
    const double loop_gain = std::sqrt(1.0 - noise_.loop_loss_per_trip);
    const double det_gain = std::sqrt(noise_.detection_efficiency);

    Eigen::Matrix2d in_cov = Eigen::Matrix2d::Identity() * kVacuumVariance;
    if (bin.source == Source::squeezer) {
        in_cov(0, 0) = source_.var_x();
        in_cov(1, 1) = source_.var_p();
    }
    const Eigen::Matrix4d coupling = variable_beamsplitter(bin.T, options_.invert_coupling_sign);
    Eigen::Vector2d h(std::cos(deg_to_rad(phi)), std::sin(deg_to_rad(phi)));

    // Linear map on (loop, incoming) followed by loss on both outputs.
    auto transfer = [&](double theta_rad) {
        Eigen::Matrix4d m = coupling;
        m.block<2, 4>(2, 0) = loop_gain * rotation(theta_rad) * coupling.block<2, 4>(2, 0);
        m.block<2, 4>(0, 0) *= det_gain;
        return m;
    };
    auto propagate = [&](const Eigen::Matrix4d &m, const Eigen::Matrix2d &loop_cov) {
        Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
        c.block<2, 2>(0, 0) = loop_cov;
        c.block<2, 2>(2, 2) = in_cov;
        c = m * c * m.transpose();
        c.block<2, 2>(2, 2) += (1.0 - loop_gain * loop_gain) * kVacuumVariance * Eigen::Matrix2d::Identity();
        if (measure) {
            c.block<2, 2>(0, 0) += (1.0 - det_gain * det_gain) * kVacuumVariance * Eigen::Matrix2d::Identity();
        }
        return c;
    };

    RunRecord rec;
    if (measure) {
        rec.mode = static_cast<int>(bin_);
        rec.exit_bin = static_cast<int>(bin_) + 1;
        rec.phi_deg = phi;
        rec.samples.resize(loop_mean_.size());
    }

    const bool shared = loop_cov_.size() == 1;
    Eigen::Matrix4d m_shared;
    Eigen::Matrix4d c_shared;
    Eigen::Vector2d gain_shared;
    double var_shared = 0.0;
    if (shared) {
        m_shared = transfer(deg_to_rad(bin.theta_deg));
        c_shared = propagate(m_shared, loop_cov_[0]);
        gain_shared = c_shared.block<2, 2>(2, 0) * h;
        var_shared = h.dot(c_shared.block<2, 2>(0, 0) * h);
        if (measure && var_shared < kSingularVariance) {
            throw std::runtime_error(fmt::format("run_loop: singular measured variance at output {}", bin_));
        }
        loop_cov_[0] = c_shared.block<2, 2>(2, 2);
        if (measure) {
            loop_cov_[0] -= gain_shared * gain_shared.transpose() / var_shared;
        }
    }

    for (std::size_t s = 0; s < loop_mean_.size(); ++s) {
        Eigen::Matrix4d m;
        Eigen::Vector2d gain;
        double var;
        if (shared) {
            m = m_shared;
            gain = gain_shared;
            var = var_shared;
        } else {
            m = transfer(deg_to_rad(bin.theta_deg) + sigma * normal_(rng_));
            Eigen::Matrix4d c = propagate(m, loop_cov_[s]);
            gain = c.block<2, 2>(2, 0) * h;
            var = h.dot(c.block<2, 2>(0, 0) * h);
            loop_cov_[s] = c.block<2, 2>(2, 2);
            if (measure) {
                if (var < kSingularVariance) {
                    throw std::runtime_error(fmt::format("run_loop: singular measured variance at output {}", bin_));
                }
                loop_cov_[s] -= gain * gain.transpose() / var;
            }
        }
        Eigen::Vector4d mu = m.block<4, 2>(0, 0) * loop_mean_[s];
        loop_mean_[s] = mu.tail<2>();
        if (measure) {
            double predicted = h.dot(mu.head<2>());
            double outcome = predicted + std::sqrt(var) * normal_(rng_);
            loop_mean_[s] += gain * ((outcome - predicted) / var);
            rec.samples[s] = outcome;
        }
    }
    if (!measure) {
        return std::nullopt;
    }
    return rec;
}

LoopRun run_loop(const ControlSchedule &schedule, const SqueezerSpec &source, const LoopOptions &options) {
    return LoopRun(schedule, source, options);
}

GaussianState run_unrolled(const ControlSchedule &schedule, const SqueezerSpec &source) {
    schedule.validate();
    source.validate();
    const std::size_t bins = schedule.bins.size();
    if (bins > kMaxUnrolledBins) {
        throw std::invalid_argument(
            fmt::format("run_unrolled: {} bins exceed the dense reference limit of {}", bins, kMaxUnrolledBins));
    }
    const NoiseConfig noise = schedule.noise.effective();

    // Mode 0 is the initial loop content; mode k is the pulse injected at bin k.
    GaussianState st = vacuum(1);
    for (const auto &bin : schedule.bins) {
        st = tensor(st, source_state(bin.source, source));
    }
    std::size_t loop = 0;
    for (std::size_t k = 1; k <= bins; ++k) {
        const BinSetting &bin = schedule.bins[k - 1];
        std::size_t pair[] = {loop, k};
        st = apply_symplectic(st, variable_beamsplitter(bin.T), pair);
        st = apply_phase(st, k, bin.theta_deg);
        if (noise.loop_loss_per_trip > 0.0) {
            st = apply_loss(st, k, 1.0 - noise.loop_loss_per_trip);
        }
        st = apply_dephasing(st, k, noise.phase_jitter_deg_per_trip);
        if (k > 1 && noise.detection_efficiency < 1.0) {
            st = apply_loss(st, loop, noise.detection_efficiency);
        }
        loop = k;
    }
    std::vector<std::size_t> outputs(bins - 1);
    std::iota(outputs.begin(), outputs.end(), std::size_t{1});
    return marginalize(st, outputs);
}

ControlSchedule memory_schedule(int n_delay, const NoiseConfig &noise) {
    if (n_delay < 0) {
        throw std::invalid_argument(fmt::format("memory_schedule: n_delay must be >= 0, got {}", n_delay));
    }
    ControlSchedule s;
    s.noise = noise;
    s.bins.push_back({1.0, 90.0, 0.0, Source::squeezer});
    s.bins.push_back({0.5, 0.0, 0.0, Source::squeezer});
    for (int i = 0; i < n_delay; ++i) {
        s.bins.push_back({0.0, 180.0, 0.0, Source::blocked});
    }
    s.bins.push_back({1.0, 0.0, 0.0, Source::vacuum});
    return s;
}

double memory_experiment(int n_delay, const SqueezerSpec &source, const NoiseConfig &noise) {
    ControlSchedule s = memory_schedule(n_delay, noise);
    LoopOptions opts;
    opts.window = static_cast<std::size_t>(n_delay) + 2;
    if (opts.window < 3) {
        opts.window = 3;
    }
    LoopRun run(s, source, opts);
    std::optional<RunRecord> last;
    while (auto rec = run.next()) {
        last = std::move(rec);
    }
    const ModeWindow &w = *last->window;
    auto first = w.position(1);
    auto second = w.position(static_cast<int>(n_delay) + 2);
    const Eigen::MatrixXd &c = w.state.cov();
    auto x1 = static_cast<Eigen::Index>(x_index(*first));
    auto x2 = static_cast<Eigen::Index>(x_index(*second));
    double dx = c(x1, x1) + c(x2, x2) - 2.0 * c(x1, x2);
    double sp = c(x1 + 1, x1 + 1) + c(x2 + 1, x2 + 1) + 2.0 * c(x1 + 1, x2 + 1);
    return dx + sp;
}

}  // namespace loopsynth
