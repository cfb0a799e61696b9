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

#ifndef LOOPSYNTH_HARDWARE_H
#define LOOPSYNTH_HARDWARE_H

#include <optional>
#include <string>
#include <vector>

#include "loopsynth/schedule.h"

namespace loopsynth {

/// Drive electronics of the two electro-optic modulators. Each can only be
/// switched among net voltages {0, V1, V2, V1 + V2}, so the induced values
/// are {0, v1, v2, v1 + v2} for free v1, v2 > 0. The beam-splitter EOM sets
/// delta with T = sin^2(delta + 45 deg); the phase EOM sets theta.
struct HardwareModel {
    double switch_ns = 20.0;
    double processing_ns = 46.0;
    double tolerance = 1e-9;
};

/// delta in degrees realizing T on the appropriate branch:
/// [0, 45] for T >= 1/2 and [90, 135] for T < 1/2.
double delta_for_transmissivity(double T);

/// Transmissivity produced by delta.
double transmissivity_for_delta(double delta_deg);

struct LevelReport {
    std::string parameter;  // "delta" or "theta"
    std::vector<double> required;  // distinct non-default values, ascending
    bool feasible = false;
    std::optional<double> v1;
    std::optional<double> v2;
};

struct FeasibilityReport {
    bool feasible = false;
    LevelReport delta;
    LevelReport theta;

    /// Human-readable multi-line summary.
    std::string summary() const;
};

/// Checks whether every delta and theta level required by the schedule is
/// one of {0, v1, v2, v1 + v2} for some choice of v1, v2.
FeasibilityReport hardware_check(const ControlSchedule &schedule, const HardwareModel &model = {});

}  // namespace loopsynth

#endif
