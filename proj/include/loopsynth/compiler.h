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

#ifndef LOOPSYNTH_COMPILER_H
#define LOOPSYNTH_COMPILER_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "loopsynth/schedule.h"

namespace loopsynth {

enum class TargetKind { epr, ghz, linear_cluster, star_cluster, infinite_cluster };

/// A state the synthesizer can be programmed to produce.
///
/// `n` is the number of output modes. For infinite clusters it is the
/// length at which the (otherwise unbounded) schedule is truncated.
/// EPR is the two-mode GHZ state and always has n = 2.
struct TargetState {
    TargetKind kind = TargetKind::epr;
    int n = 2;

    static TargetState epr() {
        return {TargetKind::epr, 2};
    }
    static TargetState ghz(int n) {
        return {TargetKind::ghz, n};
    }
    static TargetState linear_cluster(int n) {
        return {TargetKind::linear_cluster, n};
    }
    static TargetState star_cluster(int n) {
        return {TargetKind::star_cluster, n};
    }
    static TargetState infinite_cluster(int length) {
        return {TargetKind::infinite_cluster, length};
    }

    void validate() const;
    /// e.g. "ghz(3)", "epr".
    std::string describe() const;

    bool operator==(const TargetState &) const = default;
};

/// CLI / file spelling: epr, ghz, cluster1d, star, infinite.
std::optional<TargetKind> parse_target_kind(std::string_view text);
std::string_view to_string(TargetKind kind);

/// Largest k whose Fibonacci number fits in 64 bits.
inline constexpr int kMaxFibonacciIndex = 93;

/// F_0 = 0, F_1 = 1, F_k = F_{k-1} + F_{k-2}.
std::uint64_t fibonacci(int k);

/// Binet's formula, rounded to the nearest integer. Exact for k <= 70.
std::uint64_t fibonacci_closed_form(int k);

/// F_m / F_{m+1}, which converges to (sqrt 5 - 1)/2.
double fibonacci_ratio(int m);

/// (sqrt 5 - 1)/2, the asymptotic transmissivity of the linear cluster.
double golden_transmissivity();

/// Builds the control schedule for a target. Bin 1 loads the loop (T = 1),
/// bins 2..n couple, and bin n+1 releases the last mode (T = 1). Bins with
/// T < 1/2 carry an extra 180 deg on theta to undo the beam-splitter sign flip.
ControlSchedule compile(const TargetState &target);

/// Recovers the target whose compiled (T, theta) sequence matches the schedule.
std::optional<TargetState> identify_target(const ControlSchedule &schedule);

}  // namespace loopsynth

#endif
