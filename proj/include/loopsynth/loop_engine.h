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

#ifndef LOOPSYNTH_LOOP_ENGINE_H
#define LOOPSYNTH_LOOP_ENGINE_H

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "loopsynth/gaussian_state.h"
#include "loopsynth/sampling.h"
#include "loopsynth/schedule.h"

namespace loopsynth {

/// Largest schedule accepted by the dense unrolled reference.
inline constexpr std::size_t kMaxUnrolledBins = 24;

/// Symplectic of the variable beam splitter on (loop, incoming) quadratures.
///
/// The electro-optic beam splitter realizes T = sin^2(delta + 45 deg). For
/// T >= 1/2 (delta in [0, 45]) it is the plain beam splitter; for T < 1/2
/// (delta in [90, 135]) the off-diagonal signs flip, which equals a 180 deg
/// phase on the incoming pulse before and on the loop mode after the plain one.
/// After the coupling, position 0 holds the exiting mode and position 1 the new loop mode.
Eigen::Matrix4d variable_beamsplitter(double transmissivity, bool invert_coupling_sign = false);

/// Joint state of recently exited output modes; labels[i] is the 1-based
/// output number of state mode i.
struct ModeWindow {
    GaussianState state;
    std::vector<int> labels;

    /// Position of an output label in the window, if present.
    std::optional<std::size_t> position(int label) const;
};

struct RunRecord {
    int mode = 0;
    int exit_bin = 0;
    double phi_deg = 0.0;
    /// Analytic runs: the windowed joint state ending with this mode.
    std::optional<ModeWindow> window;
    /// Sampling runs: one measured quadrature per shot.
    std::vector<double> samples;
};

struct LoopOptions {
    std::size_t window = 8;
    std::uint64_t seed = 0;
    /// When set, every exiting mode is measured at its planned angle and the
    /// live state is conditioned on the outcome, shot by shot.
    std::optional<MeasurementPlan> sampling;
    /// Fault injection for self-checks: flips the coupling sign of the loop beam splitter.
    bool invert_coupling_sign = false;
};

/// Streaming simulation of the loop circuit, one bin per call to next().
///
/// The live state holds the loop mode plus the last `window` exited modes;
/// older modes are marginalized out, so memory does not grow with the
/// schedule length. With sampling enabled only the loop mode is live: each
/// exiting mode is drawn from its conditional marginal and then conditioned
/// away, which reproduces exact joint statistics across the whole run.
class LoopRun {
   public:
    LoopRun(ControlSchedule schedule, SqueezerSpec source, LoopOptions options);

    /// Record of the next output mode, or nullopt once the schedule is exhausted.
    std::optional<RunRecord> next();

    const ControlSchedule &schedule() const {
        return schedule_;
    }

   private:
    GaussianState incoming_state(const BinSetting &bin) const;
    std::optional<RunRecord> step_analytic();
    std::optional<RunRecord> step_sampling();

    ControlSchedule schedule_;
    NoiseConfig noise_;
    SqueezerSpec source_;
    LoopOptions options_;
    std::size_t bin_ = 0;

    // Analytic path: modes ordered [loop, oldest exited, ..., newest exited].
    GaussianState live_;
    std::vector<int> labels_;

    // Sampling path: per-shot conditional moments of the loop mode.
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::vector<Eigen::Vector2d> loop_mean_;
    std::vector<Eigen::Matrix2d> loop_cov_;
};

LoopRun run_loop(const ControlSchedule &schedule, const SqueezerSpec &source, const LoopOptions &options);

/// Dense reference implementation of the equivalent chain circuit: inputs
/// a'_1..a'_B and the initial loop mode are mixed bin by bin with no
/// windowing. Returns the joint state of outputs 1..B-1.
GaussianState run_unrolled(const ControlSchedule &schedule, const SqueezerSpec &source);

/// Schedule that generates an EPR pair, keeps one half in the loop for
/// n_delay extra round trips at T = 0 and then releases it.
ControlSchedule memory_schedule(int n_delay, const NoiseConfig &noise);

/// var(x1 - x2) + var(p1 + p2) of the delayed EPR pair.
double memory_experiment(int n_delay, const SqueezerSpec &source, const NoiseConfig &noise);

}  // namespace loopsynth

#endif
