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

#include "loopsynth/hardware.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "loopsynth/compiler.h"
#include "oracles.h"

using namespace loopsynth;

namespace {

bool witness_reproduces(const LevelReport &r) {
    for (double v : r.required) {
        bool hit = (r.v1 && std::abs(*r.v1 - v) <= 1e-9) || (r.v2 && std::abs(*r.v2 - v) <= 1e-9) ||
                   (r.v1 && r.v2 && std::abs(*r.v1 + *r.v2 - v) <= 1e-9);
        if (!hit) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST(Hardware, DeltaBranches) {
    EXPECT_NEAR(delta_for_transmissivity(1.0), 45.0, 1e-12);
    EXPECT_NEAR(delta_for_transmissivity(0.5), 0.0, 1e-12);
    EXPECT_NEAR(delta_for_transmissivity(1.0 / 3.0), 99.7356103, 1e-6);
    EXPECT_NEAR(delta_for_transmissivity(0.0), 135.0, 1e-12);
    for (double t : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.618, 0.9, 1.0}) {
        double d = delta_for_transmissivity(t);
        EXPECT_NEAR(transmissivity_for_delta(d), t, 1e-12);
        if (t < 0.5) {
            EXPECT_GE(d, 90.0);
            EXPECT_LE(d, 135.0);
        } else {
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 45.0);
        }
    }
}

TEST(Hardware, SmallTargetsAreFeasible) {
    for (auto t : {TargetState::epr(), TargetState::ghz(3), TargetState::linear_cluster(3),
                   TargetState::star_cluster(3), TargetState::linear_cluster(2), TargetState::infinite_cluster(1008)}) {
        auto rep = hardware_check(compile(t));
        EXPECT_TRUE(rep.feasible) << t.describe() << "\n" << rep.summary();
        EXPECT_TRUE(witness_reproduces(rep.delta));
    }
}

TEST(Hardware, GhzThreeWitness) {
    auto rep = hardware_check(compile(TargetState::ghz(3)));
    ASSERT_EQ(rep.delta.required.size(), 2u);
    EXPECT_NEAR(rep.delta.required[0], 45.0, 1e-9);
    EXPECT_NEAR(rep.delta.required[1], 99.7356103, 1e-6);
}

TEST(Hardware, FourModeTargetsAreInfeasible) {
    for (int n = 4; n <= 8; ++n) {
        for (auto t : {TargetState::ghz(n), TargetState::linear_cluster(n), TargetState::star_cluster(n)}) {
            auto rep = hardware_check(compile(t));
            EXPECT_FALSE(rep.feasible) << t.describe();
            EXPECT_FALSE(oracles::brute_force_two_levels(rep.delta.required)) << t.describe();
        }
    }
    auto ghz4 = hardware_check(compile(TargetState::ghz(4)));
    ASSERT_EQ(ghz4.delta.required.size(), 3u);
    EXPECT_NEAR(ghz4.delta.required[0], 45.0, 1e-9);
    EXPECT_NEAR(ghz4.delta.required[1], 99.7356103, 1e-6);
    EXPECT_NEAR(ghz4.delta.required[2], 105.0, 1e-9);
}

TEST(Hardware, AgreesWithBruteForceOnRandomLevelSets) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(1, 40);
    for (int trial = 0; trial < 500; ++trial) {
        ControlSchedule s;
        int values = 1 + trial % 4;
        std::vector<double> deltas;
        for (int i = 0; i < values; ++i) {
            deltas.push_back(pick(rng));
        }
        if (trial % 3 == 0 && values == 3) {
            deltas[2] = deltas[0] + deltas[1];
        }
        for (double d : deltas) {
            double t = std::min(1.0, transmissivity_for_delta(d));
            s.bins.push_back({t, 0.0, 0.0, Source::squeezer});
        }
        auto rep = hardware_check(s);
        EXPECT_EQ(rep.delta.feasible, oracles::brute_force_two_levels(rep.delta.required, 1e-7));
        if (rep.delta.feasible) {
            EXPECT_TRUE(witness_reproduces(rep.delta));
        }
    }
}

TEST(Hardware, ThetaLevelsWrapAround) {
    ControlSchedule s;
    for (double th : {90.0, 180.0, 270.0, 630.0, 0.0, 360.0}) {
        s.bins.push_back({0.5, th, 0.0, Source::squeezer});
    }
    auto rep = hardware_check(s);
    EXPECT_TRUE(rep.theta.feasible);
    EXPECT_EQ(rep.theta.required.size(), 3u);
    s.bins.push_back({0.5, 45.0, 0.0, Source::squeezer});
    EXPECT_FALSE(hardware_check(s).theta.feasible);
}
