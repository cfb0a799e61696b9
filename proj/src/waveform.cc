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

#include "loopsynth/waveform.h"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/os.h>

namespace loopsynth {

namespace {

constexpr std::size_t kMinWindowSamples = 8;

Eigen::MatrixXd mode_matrix(const WaveformConfig &config, int num_modes, std::size_t num_samples) {
    Eigen::MatrixXd f(static_cast<Eigen::Index>(num_samples), num_modes);
    for (int k = 1; k <= num_modes; ++k) {
        f.col(k - 1) = mode_function(config, k, num_samples);
    }
    return f;
}

// Orthonormal basis (Euclidean) of the span of the sampled mode functions.
Eigen::MatrixXd span_basis(const Eigen::MatrixXd &f) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(f);
    return qr.householderQ() * Eigen::MatrixXd::Identity(f.rows(), f.cols());
}

}  // namespace

void WaveformConfig::validate() const {
    if (!(sample_rate_hz > 0.0) || !(frame_T_ns > 0.0) || !(tau_ns > 0.0)) {
        throw std::invalid_argument("WaveformConfig: sample rate, frame length and tau must be positive");
    }
    if (!(gamma_per_s > 0.0)) {
        throw std::invalid_argument(fmt::format("WaveformConfig: gamma must be positive, got {}", gamma_per_s));
    }
    if (frame_T_ns * 1e-9 * sample_rate_hz < static_cast<double>(kMinWindowSamples)) {
        throw std::invalid_argument(
            fmt::format("WaveformConfig: a {} ns frame at {} Hz has fewer than {} samples", frame_T_ns, sample_rate_hz,
                        kMinWindowSamples));
    }
    if (t0_ns && *t0_ns < frame_T_ns / 2.0) {
        throw std::invalid_argument("WaveformConfig: t0 leaves the first window before the trace start");
    }
}

double WaveformConfig::center_ns(int k) const {
    return t0_ns.value_or(frame_T_ns / 2.0) + (k - 1) * tau_ns;
}

std::size_t WaveformConfig::samples_for(int num_modes) const {
    double end = center_ns(num_modes) + frame_T_ns / 2.0;
    return static_cast<std::size_t>(std::ceil(end / dt_ns())) + 1;
}

Eigen::VectorXd mode_function(const WaveformConfig &config, int k, std::size_t num_samples) {
    config.validate();
    if (k < 1) {
        throw std::invalid_argument(fmt::format("mode_function: k must be >= 1, got {}", k));
    }
    const double tk = config.center_ns(k);
    const double half = config.frame_T_ns / 2.0;
    if ((tk + half) / config.dt_ns() > static_cast<double>(num_samples - 1) + 1e-9) {
        throw std::invalid_argument(
            fmt::format("mode_function: a {}-sample trace is too short for mode {}", num_samples, k));
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_samples));
    std::size_t in_window = 0;
    for (std::size_t i = 0; i < num_samples; ++i) {
        double offset_ns = static_cast<double>(i) * config.dt_ns() - tk;
        if (std::abs(offset_ns) > half) {
            continue;
        }
        double u = offset_ns * 1e-9;
        f(static_cast<Eigen::Index>(i)) = std::exp(-config.gamma_per_s * config.gamma_per_s * u * u) * u;
        ++in_window;
    }
    if (in_window < kMinWindowSamples) {
        throw std::invalid_argument(fmt::format("mode_function: only {} samples fall in the window", in_window));
    }
    double norm = f.squaredNorm() * config.dt_s();
    return f / std::sqrt(norm);
}

std::vector<TraceFrame> synthesize_frames(const SampleSet &quadratures, const WaveformConfig &config,
                                          std::uint64_t seed, bool noise) {
    quadratures.validate();
    config.validate();
    const int modes = static_cast<int>(quadratures.plan.num_modes());
    const std::size_t n = config.samples_for(modes);
    Eigen::MatrixXd f = mode_matrix(config, modes, n);
    Eigen::MatrixXd basis;
    if (noise) {
        basis = span_basis(f);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.25 / config.dt_s()));

    std::vector<TraceFrame> frames;
    frames.reserve(static_cast<std::size_t>(quadratures.values.rows()));
    for (Eigen::Index s = 0; s < quadratures.values.rows(); ++s) {
        TraceFrame frame;
        frame.samples = f * quadratures.values.row(s).transpose();
        if (noise) {
            Eigen::VectorXd w(static_cast<Eigen::Index>(n));
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                w(i) = normal(rng);
            }
            w -= basis * (basis.transpose() * w);
            frame.samples += w;
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

std::vector<TraceFrame> shot_noise_frames(int frames, int num_modes, const WaveformConfig &config, std::uint64_t seed) {
    config.validate();
    if (frames < 1 || num_modes < 1) {
        throw std::invalid_argument("shot_noise_frames: need at least one frame and one mode");
    }
    const std::size_t n = config.samples_for(num_modes);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.25 / config.dt_s()));
    std::vector<TraceFrame> out(static_cast<std::size_t>(frames));
    for (auto &frame : out) {
        frame.samples.resize(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < frame.samples.size(); ++i) {
            frame.samples(i) = normal(rng);
        }
    }
    return out;
}

SampleSet extract_quadratures(const std::vector<TraceFrame> &frames, const WaveformConfig &config, int num_modes) {
    config.validate();
    if (frames.size() < 2) {
        throw std::invalid_argument("extract_quadratures: need at least 2 frames");
    }
    if (num_modes < 1) {
        throw std::invalid_argument("extract_quadratures: need at least one mode");
    }
    const std::size_t n = static_cast<std::size_t>(frames.front().samples.size());
    const std::size_t needed = config.samples_for(num_modes);
    if (n < needed) {
        throw std::invalid_argument(
            fmt::format("extract_quadratures: frames have {} samples but mode {} needs {}", n, num_modes, needed));
    }
    Eigen::MatrixXd f = mode_matrix(config, num_modes, n);
    SampleSet out;
    out.plan.bases_deg.assign(static_cast<std::size_t>(num_modes), 0.0);
    out.plan.shots = static_cast<int>(frames.size());
    out.values.resize(static_cast<Eigen::Index>(frames.size()), num_modes);
    for (std::size_t s = 0; s < frames.size(); ++s) {
        if (static_cast<std::size_t>(frames[s].samples.size()) != n) {
            throw std::invalid_argument(fmt::format("extract_quadratures: frame {} has a different length", s));
        }
        out.values.row(static_cast<Eigen::Index>(s)) = (f.transpose() * frames[s].samples).transpose() * config.dt_s();
    }
    return out;
}

Eigen::MatrixXd orthogonality_matrix(const WaveformConfig &config, int k_max) {
    if (k_max < 2) {
        throw std::invalid_argument(fmt::format("orthogonality_matrix: k_max must be >= 2, got {}", k_max));
    }
    Eigen::MatrixXd f = mode_matrix(config, k_max, config.samples_for(k_max));
    return f.transpose() * f * config.dt_s();
}

void write_frames_csv(const std::vector<TraceFrame> &frames, const WaveformConfig &config, const std::string &path) {
    auto out = fmt::output_file(path);
    out.print("time_ns,value\n");
    for (std::size_t s = 0; s < frames.size(); ++s) {
        if (s > 0) {
            out.print("\n");
        }
        const auto &fr = frames[s];
        for (Eigen::Index i = 0; i < fr.samples.size(); ++i) {
            out.print("{:.17g},{:.17g}\n", fr.start_ns + static_cast<double>(i) * config.dt_ns(), fr.samples(i));
        }
    }
}

std::vector<TraceFrame> read_frames_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open trace file '{}'", path));
    }
    std::vector<TraceFrame> frames;
    std::vector<double> current;
    double start = 0.0;
    auto flush = [&] {
        if (!current.empty()) {
            TraceFrame f;
            f.start_ns = start;
            f.samples = Eigen::Map<Eigen::VectorXd>(current.data(), static_cast<Eigen::Index>(current.size()));
            frames.push_back(std::move(f));
            current.clear();
        }
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line == "time_ns,value") {
            continue;
        }
        if (line.empty()) {
            flush();
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(fmt::format("{}:{}: expected 'time_ns,value'", path, lineno));
        }
        try {
            double t = std::stod(line.substr(0, comma));
            double v = std::stod(line.substr(comma + 1));
            if (current.empty()) {
                start = t;
            }
            current.push_back(v);
        } catch (const std::exception &) {
            throw std::runtime_error(fmt::format("{}:{}: malformed number", path, lineno));
        }
    }
    flush();
    return frames;
}

}  // namespace loopsynth
