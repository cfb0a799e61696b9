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

#include "loopsynth/compiler.h"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "loopsynth/angles.h"

namespace loopsynth {

namespace {

constexpr int kRatioExactLimit = 78;

BinSetting coupling_bin(double T, double theta_deg) {
    if (T < 0.5) {
        theta_deg += 180.0;
    }
    return {T, theta_deg, 0.0, Source::squeezer};
}

ControlSchedule frame(std::vector<BinSetting> inner) {
    ControlSchedule s;
    s.bins.push_back({1.0, 90.0, 0.0, Source::squeezer});
    for (auto &b : inner) {
        s.bins.push_back(b);
    }
    s.bins.push_back({1.0, 0.0, 0.0, Source::vacuum});
    return s;
}

bool same_settings(const ControlSchedule &a, const ControlSchedule &b) {
    if (a.bins.size() != b.bins.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.bins.size(); ++i) {
        if (std::abs(a.bins[i].T - b.bins[i].T) > 1e-12 ||
            angular_distance(a.bins[i].theta_deg, b.bins[i].theta_deg) > 1e-9) {
            return false;
        }
    }
    return true;
}

}  // namespace

void TargetState::validate() const {
    if (kind == TargetKind::epr && n != 2) {
        throw std::invalid_argument(fmt::format("epr target has exactly 2 modes, got n = {}", n));
    }
    if (n < 2) {
        throw std::invalid_argument(fmt::format("{} target needs n >= 2, got n = {}", to_string(kind), n));
    }
}

std::string TargetState::describe() const {
    if (kind == TargetKind::epr) {
        return "epr";
    }
    return fmt::format("{}({})", to_string(kind), n);
}

std::optional<TargetKind> parse_target_kind(std::string_view text) {
    if (text == "epr") return TargetKind::epr;
    if (text == "ghz") return TargetKind::ghz;
    if (text == "cluster1d" || text == "linear") return TargetKind::linear_cluster;
    if (text == "star") return TargetKind::star_cluster;
    if (text == "infinite") return TargetKind::infinite_cluster;
    return std::nullopt;
}

std::string_view to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::epr:
            return "epr";
        case TargetKind::ghz:
            return "ghz";
        case TargetKind::linear_cluster:
            return "cluster1d";
        case TargetKind::star_cluster:
            return "star";
        case TargetKind::infinite_cluster:
            return "infinite";
    }
    return "?";
}

std::uint64_t fibonacci(int k) {
    if (k < 0) {
        throw std::invalid_argument(fmt::format("fibonacci: index must be >= 0, got {}", k));
    }
    if (k > kMaxFibonacciIndex) {
        throw std::overflow_error(fmt::format("fibonacci: F_{} does not fit in 64 bits", k));
    }
    std::uint64_t a = 0;
    std::uint64_t b = 1;
    for (int i = 0; i < k; ++i) {
        std::uint64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

std::uint64_t fibonacci_closed_form(int k) {
    if (k < 0) {
        throw std::invalid_argument(fmt::format("fibonacci_closed_form: index must be >= 0, got {}", k));
    }
    const long double root5 = std::sqrt(5.0L);
    const long double phi = (1.0L + root5) / 2.0L;
    const long double psi = (1.0L - root5) / 2.0L;
    return static_cast<std::uint64_t>(std::llround((std::pow(phi, k) - std::pow(psi, k)) / root5));
}

double golden_transmissivity() {
    return (std::sqrt(5.0) - 1.0) / 2.0;
}

double fibonacci_ratio(int m) {
    if (m < 1) {
        throw std::invalid_argument(fmt::format("fibonacci_ratio: index must be >= 1, got {}", m));
    }
    if (m <= kRatioExactLimit) {
        return static_cast<double>(fibonacci(m)) / static_cast<double>(fibonacci(m + 1));
    }
    return golden_transmissivity();
}

ControlSchedule compile(const TargetState &target) {
    target.validate();
    const int n = target.n;
    std::vector<BinSetting> inner;
    switch (target.kind) {
        case TargetKind::epr:
        case TargetKind::ghz:
        case TargetKind::star_cluster: {
            for (int k = 2; k <= n; ++k) {
                double theta = (target.kind == TargetKind::star_cluster && k == n) ? 90.0 : 0.0;
                inner.push_back(coupling_bin(1.0 / (n - k + 2), theta));
            }
            break;
        }
        case TargetKind::linear_cluster:
            for (int k = 2; k <= n; ++k) {
                inner.push_back(coupling_bin(fibonacci_ratio(n - k + 2), 90.0));
            }
            break;
        case TargetKind::infinite_cluster:
            for (int k = 2; k <= n; ++k) {
                inner.push_back(coupling_bin(golden_transmissivity(), 90.0));
            }
            break;
    }
    return frame(std::move(inner));
}

std::optional<TargetState> identify_target(const ControlSchedule &schedule) {
    if (schedule.bins.size() < 3) {
        return std::nullopt;
    }
    const int n = static_cast<int>(schedule.bins.size()) - 1;
    const TargetState candidates[] = {
        TargetState::ghz(n), TargetState::star_cluster(n), TargetState::linear_cluster(n),
        TargetState::infinite_cluster(n)};
    for (const auto &c : candidates) {
        if (same_settings(compile(c), schedule)) {
            return c.kind == TargetKind::ghz && n == 2 ? TargetState::epr() : c;
        }
    }
    return std::nullopt;
}

}  // namespace loopsynth
