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

#ifndef LOOPSYNTH_SCHEDULE_IO_H
#define LOOPSYNTH_SCHEDULE_IO_H

#include <stdexcept>
#include <string>
#include <string_view>

#include "loopsynth/schedule.h"

namespace loopsynth {

/// Raised for malformed schedule documents. `where` is either a field path
/// such as "bins[3].T" or a "line L, column C" position for syntax errors.
class ScheduleParseError : public std::runtime_error {
   public:
    ScheduleParseError(std::string where, const std::string &message)
        : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

    const std::string &where() const {
        return where_;
    }

   private:
    std::string where_;
};

/// Parses a JSON schedule document:
///
///   {
///     "tau_ns": 66,
///     "noise": {"loop_loss_per_trip": 0.07, "phase_jitter_deg_per_trip": 7,
///               "detection_efficiency": 1, "mode": "realistic"},
///     "bins": [{"T": 1, "theta_deg": 90, "phi_deg": 0, "source": "squeezer"}, ...]
///   }
///
/// `bins` and each bin's `T` are required; other fields take their defaults.
/// Unknown keys are rejected.
ControlSchedule parse_schedule(std::string_view text);

/// Writes every field, with enough digits that parse_schedule reproduces the schedule exactly.
std::string serialize_schedule(const ControlSchedule &schedule);

ControlSchedule load_schedule(const std::string &path);
void save_schedule(const ControlSchedule &schedule, const std::string &path);

}  // namespace loopsynth

#endif
