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

#ifndef LOOPSYNTH_SCHEDULE_H
#define LOOPSYNTH_SCHEDULE_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loopsynth {

/// Pulse entering the loop at a bin.
enum class Source { squeezer, vacuum, blocked };

enum class NoiseMode { ideal, realistic };

std::string_view to_string(Source source);
std::string_view to_string(NoiseMode mode);
std::optional<Source> parse_source(std::string_view text);
std::optional<NoiseMode> parse_noise_mode(std::string_view text);

struct NoiseConfig {
    double loop_loss_per_trip = 0.07;
    double phase_jitter_deg_per_trip = 7.0;
    double detection_efficiency = 1.0;
    NoiseMode mode = NoiseMode::realistic;

    void validate() const;

    /// The values the simulator actually applies: ideal mode forces a lossless,
    /// jitter-free loop and unit detection efficiency.
    NoiseConfig effective() const;

    static NoiseConfig ideal() {
        NoiseConfig n;
        n.mode = NoiseMode::ideal;
        return n;
    }

    bool operator==(const NoiseConfig &) const = default;
};

/// Settings applied during one time bin. phi_deg is the homodyne basis for the
/// mode that exits the loop at this bin.
struct BinSetting {
    double T = 0.5;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    Source source = Source::squeezer;

    bool operator==(const BinSetting &) const = default;
};

/// The program run by the synthesizer: one BinSetting per 66 ns time bin.
/// Bin b (1-based) releases output mode b-1; the mode leaving at bin 1 is the
/// initial loop content and is discarded, so n+1 bins yield outputs 1..n.
struct ControlSchedule {
    double tau_ns = 66.0;
    std::vector<BinSetting> bins;
    NoiseConfig noise;

    void validate() const;

    std::size_t num_outputs() const {
        return bins.empty() ? 0 : bins.size() - 1;
    }

    bool operator==(const ControlSchedule &) const = default;
};

}  // namespace loopsynth

#endif
