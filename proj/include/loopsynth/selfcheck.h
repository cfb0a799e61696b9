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

#ifndef LOOPSYNTH_SELFCHECK_H
#define LOOPSYNTH_SELFCHECK_H

#include <cstdint>
#include <string>
#include <vector>

#include "loopsynth/schedule.h"

namespace loopsynth {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelfcheckOptions {
    std::uint64_t seed = 2026;
    int random_schedules = 200;
    /// Fault injection: flip the coupling sign of the loop beam splitter.
    bool inject_bs_sign_fault = false;
};

/// Random schedule with `outputs` outputs: random T in [0, 1] and theta in
/// [0, 360) on every bin, squeezed inputs, ideal or default realistic noise.
ControlSchedule random_schedule(int outputs, std::uint64_t seed, bool realistic);

/// Streaming loop simulation against the dense chain, random schedules.
CheckResult check_loop_chain(const SelfcheckOptions &options);
/// Linear-cluster circuit against the closed-form transform, n = 2..8.
CheckResult check_linear_oracle();
/// Star cluster equals GHZ plus a 90 deg phase on the last mode, n = 2..6.
CheckResult check_ghz_star();
/// Gram matrix, noiseless synthesize/extract, and the shot-noise floor.
CheckResult check_waveform_roundtrip(std::uint64_t seed);

/// Runs every suite in order.
std::vector<CheckResult> run_selfcheck(const SelfcheckOptions &options = {});

}  // namespace loopsynth

#endif
