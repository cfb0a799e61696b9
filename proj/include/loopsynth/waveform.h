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

#ifndef LOOPSYNTH_WAVEFORM_H
#define LOOPSYNTH_WAVEFORM_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "loopsynth/sampling.h"

namespace loopsynth {

struct WaveformConfig {
    double sample_rate_hz = 1.25e9;
    double frame_T_ns = 46.0;
    double gamma_per_s = 6e7;
    double tau_ns = 66.0;
    /// Center of mode 1; defaults to frame_T_ns / 2.
    std::optional<double> t0_ns;

    void validate() const;
    double dt_s() const {
        return 1.0 / sample_rate_hz;
    }
    double dt_ns() const {
        return 1e9 / sample_rate_hz;
    }
    double center_ns(int k) const;
    /// Number of samples in a trace that covers modes 1..num_modes.
    std::size_t samples_for(int num_modes) const;
};

struct TraceFrame {
    double start_ns = 0.0;
    Eigen::VectorXd samples;
};

/// f_k(t) proportional to exp(-gamma^2 (t - t_k)^2) (t - t_k) on |t - t_k| <= T/2,
/// sampled on the trace grid t_i = i dt and renormalized so sum f^2 dt = 1.
Eigen::VectorXd mode_function(const WaveformConfig &config, int k, std::size_t num_samples);

/// Builds one frame per shot carrying the quadratures of the sample set.
/// With noise enabled, white shot noise of per-sample variance 1/(4 dt) is
/// added on the complement of the mode functions, so every projection onto a
/// normalized in-window function still has the quadrature statistics.
std::vector<TraceFrame> synthesize_frames(const SampleSet &quadratures, const WaveformConfig &config,
                                          std::uint64_t seed, bool noise = true);

/// Frames of pure shot noise (per-sample variance 1/(4 dt)).
std::vector<TraceFrame> shot_noise_frames(int frames, int num_modes, const WaveformConfig &config,
                                          std::uint64_t seed);

/// q_k = sum_i f_k(t_i) s(t_i) dt, reported as x-quadrature samples.
SampleSet extract_quadratures(const std::vector<TraceFrame> &frames, const WaveformConfig &config, int num_modes);

/// Gram matrix <f_j, f_k> = sum f_j f_k dt for j, k = 1..k_max.
Eigen::MatrixXd orthogonality_matrix(const WaveformConfig &config, int k_max);

/// Columnar text: one "time_ns,value" line per sample, frames separated by a blank line.
void write_frames_csv(const std::vector<TraceFrame> &frames, const WaveformConfig &config, const std::string &path);
std::vector<TraceFrame> read_frames_csv(const std::string &path);

}  // namespace loopsynth

#endif
