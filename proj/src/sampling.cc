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

#include "loopsynth/sampling.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "loopsynth/angles.h"

namespace loopsynth {

void MeasurementPlan::validate() const {
    if (bases_deg.empty()) {
        throw std::invalid_argument("MeasurementPlan: no measured modes");
    }
    if (shots < 2) {
        throw std::invalid_argument(fmt::format("MeasurementPlan: shots must be >= 2, got {}", shots));
    }
    for (auto b : bases_deg) {
        if (!std::isfinite(b)) {
            throw std::invalid_argument("MeasurementPlan: non-finite basis angle");
        }
    }
}

void SampleSet::validate() const {
    plan.validate();
    if (values.rows() != plan.shots || values.cols() != static_cast<Eigen::Index>(plan.num_modes())) {
        throw std::invalid_argument(fmt::format(
            "SampleSet: values are {}x{} but the plan has {} shots x {} modes", values.rows(), values.cols(),
            plan.shots, plan.num_modes()));
    }
    if (!values.allFinite()) {
        throw std::invalid_argument("SampleSet: non-finite sample");
    }
}

SampleSet sample_quadratures(const GaussianState &state, const MeasurementPlan &plan, std::uint64_t seed) {
    plan.validate();
    auto n = state.num_modes();
    if (plan.num_modes() != n) {
        throw std::invalid_argument(
            fmt::format("sample_quadratures: plan has {} bases for a {}-mode state", plan.num_modes(), n));
    }
    auto modes = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(modes, 2 * modes);
    for (Eigen::Index m = 0; m < modes; ++m) {
        double phi = deg_to_rad(plan.bases_deg[m]);
        h(m, 2 * m) = std::cos(phi);
        h(m, 2 * m + 1) = std::sin(phi);
    }
    Eigen::VectorXd mean = h * state.mean();
    Eigen::MatrixXd cov = h * state.cov() * h.transpose();

    // Eigen square root tolerates the rank-deficient covariances of ideal states.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (cov + cov.transpose()));
    Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd factor = solver.eigenvectors() * root.asDiagonal();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SampleSet out{plan, Eigen::MatrixXd(plan.shots, modes)};
    Eigen::VectorXd z(modes);
    for (int s = 0; s < plan.shots; ++s) {
        for (Eigen::Index m = 0; m < modes; ++m) {
            z(m) = normal(rng);
        }
        out.values.row(s) = (mean + factor * z).transpose();
    }
    return out;
}

double sample_variance(const Eigen::VectorXd &values) {
    auto n = values.size();
    if (n < 2) {
        throw std::invalid_argument("sample_variance: need at least two samples");
    }
    double mean = values.mean();
    return (values.array() - mean).square().sum() / static_cast<double>(n - 1);
}

}  // namespace loopsynth
