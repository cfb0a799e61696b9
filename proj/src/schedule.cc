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

#include "loopsynth/schedule.h"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace loopsynth {

std::string_view to_string(Source source) {
    switch (source) {
        case Source::squeezer:
            return "squeezer";
        case Source::vacuum:
            return "vacuum";
        case Source::blocked:
            return "blocked";
    }
    return "?";
}

std::string_view to_string(NoiseMode mode) {
    return mode == NoiseMode::ideal ? "ideal" : "realistic";
}

std::optional<Source> parse_source(std::string_view text) {
    if (text == "squeezer") {
        return Source::squeezer;
    }
    if (text == "vacuum") {
        return Source::vacuum;
    }
    if (text == "blocked") {
        return Source::blocked;
    }
    return std::nullopt;
}

std::optional<NoiseMode> parse_noise_mode(std::string_view text) {
    if (text == "ideal") {
        return NoiseMode::ideal;
    }
    if (text == "realistic") {
        return NoiseMode::realistic;
    }
    return std::nullopt;
}

void NoiseConfig::validate() const {
    if (!(loop_loss_per_trip >= 0.0 && loop_loss_per_trip <= 1.0)) {
        throw std::invalid_argument(fmt::format("noise.loop_loss_per_trip = {} outside [0, 1]", loop_loss_per_trip));
    }
    if (!(phase_jitter_deg_per_trip >= 0.0) || !std::isfinite(phase_jitter_deg_per_trip)) {
        throw std::invalid_argument(
            fmt::format("noise.phase_jitter_deg_per_trip = {} must be finite and >= 0", phase_jitter_deg_per_trip));
    }
    if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0)) {
        throw std::invalid_argument(
            fmt::format("noise.detection_efficiency = {} outside (0, 1]", detection_efficiency));
    }
}

NoiseConfig NoiseConfig::effective() const {
    if (mode == NoiseMode::realistic) {
        return *this;
    }
    NoiseConfig n = *this;
    n.loop_loss_per_trip = 0.0;
    n.phase_jitter_deg_per_trip = 0.0;
    n.detection_efficiency = 1.0;
    return n;
}

void ControlSchedule::validate() const {
    if (!(tau_ns > 0.0) || !std::isfinite(tau_ns)) {
        throw std::invalid_argument(fmt::format("tau_ns = {} must be positive", tau_ns));
    }
    if (bins.size() < 2) {
        throw std::invalid_argument(fmt::format("schedule needs at least 2 bins, got {}", bins.size()));
    }
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const auto &bin = bins[b];
        if (!(bin.T >= 0.0 && bin.T <= 1.0)) {
            throw std::invalid_argument(fmt::format("bins[{}].T = {} outside [0, 1]", b, bin.T));
        }
        if (!std::isfinite(bin.theta_deg) || !std::isfinite(bin.phi_deg)) {
            throw std::invalid_argument(fmt::format("bins[{}]: angles must be finite", b));
        }
        if (bin.source == Source::blocked && bin.T != 0.0) {
            throw std::invalid_argument(
                fmt::format("bins[{}]: source 'blocked' is only valid on storage bins (T = 0), got T = {}", b, bin.T));
        }
    }
    noise.validate();
}

}  // namespace loopsynth
