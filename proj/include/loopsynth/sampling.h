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

#ifndef LOOPSYNTH_SAMPLING_H
#define LOOPSYNTH_SAMPLING_H

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "loopsynth/gaussian_state.h"

namespace loopsynth {

/// Number of data frames recorded per inseparability parameter in the experiment.
inline constexpr int kDefaultShots = 5000;

/// Per-mode homodyne angles (degrees; 0 measures x, 90 measures p).
struct MeasurementPlan {
    std::vector<double> bases_deg;
    int shots = kDefaultShots;

    void validate() const;
    std::size_t num_modes() const {
        return bases_deg.size();
    }
    bool operator==(const MeasurementPlan &) const = default;
};

/// Shot-by-shot homodyne outcomes; values is shots x modes.
struct SampleSet {
    MeasurementPlan plan;
    Eigen::MatrixXd values;

    void validate() const;
};

/// Draws plan.shots i.i.d. samples of the planned quadratures from the joint
/// normal distribution of the state. Deterministic for a fixed seed.
SampleSet sample_quadratures(const GaussianState &state, const MeasurementPlan &plan, std::uint64_t seed);

/// Unbiased sample variance of a column combination; shared by the verifier
/// and the waveform layer.
double sample_variance(const Eigen::VectorXd &values);

}  // namespace loopsynth

#endif
