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

#ifndef LOOPSYNTH_VERIFIER_H
#define LOOPSYNTH_VERIFIER_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "loopsynth/compiler.h"
#include "loopsynth/gaussian_state.h"
#include "loopsynth/nullifier.h"
#include "loopsynth/schedule.h"

namespace loopsynth {

/// Entanglement criteria certifying a target.
///
///  - EPR / GHZ(n): var(x_k - x_l) + var(p_1 + ... + p_n) < 1
///    (all pairs for n = 3, consecutive pairs otherwise).
///  - Two-mode cluster: var(p1 - x2) + var(p2 - x1) < 1.
///  - Three-mode linear cluster: pairs built on p2 - x1 - x3.
///  - Star(n >= 3): the GHZ(n) criteria with x_n -> p_n and p_n -> -x_n,
///    i.e. in the frame where the final 90 deg phase is undone.
///  - Linear(n >= 4) and infinite clusters: each nullifier
///    p_k - x_{k-1} - x_{k+1} on its own, threshold 1/2.
std::vector<Criterion> nullifiers_for(const TargetState &target);

/// n x n unitary relating outputs to the squeezed inputs of the linear-cluster
/// schedule, built directly from its closed-form Fibonacci coefficients.
Eigen::MatrixXcd linear_cluster_transform(int n);

/// Output state of the n-mode linear cluster from the closed-form transform.
GaussianState linear_cluster_oracle_cov(int n, const SqueezerSpec &source);

/// One measured reference value for a compiled target and criterion.
struct ReferenceRow {
    std::string label;
    TargetState target;
    Criterion criterion;
    double measured = 0.0;
};

/// The eleven measured inseparability values: EPR, GHZ (3), two-mode cluster,
/// three-mode linear cluster (3) and three-mode star cluster (3).
std::vector<ReferenceRow> reference_rows();

struct CalibrationRow {
    std::string label;
    std::string criterion;
    double measured = 0.0;
    double unit_efficiency = 0.0;  // model value at efficiency 1
    double vacuum = 0.0;           // model value at efficiency 0
    double model = 0.0;
    double residual = 0.0;         // model - measured
    double row_efficiency = 0.0;   // efficiency that would fit this row alone
};

struct Calibration {
    double efficiency = 1.0;
    std::vector<CalibrationRow> rows;
    double sum_squared = 0.0;
    double max_abs_residual = 0.0;
};

/// Residuals of the simulated rows at a given detection efficiency. The loop
/// part of `noise` is used as is; its detection efficiency is ignored.
Calibration evaluate_efficiency(std::span<const ReferenceRow> rows, const SqueezerSpec &source,
                                const NoiseConfig &noise, double efficiency);

/// Least-squares detection efficiency. Detection loss mixes every criterion
/// linearly toward its vacuum value, v(eta) = eta V + (1 - eta) B, so the
/// optimum is closed form. Throws if it falls outside (0, 1].
Calibration calibrate_efficiency(std::span<const ReferenceRow> rows, const SqueezerSpec &source,
                                 const NoiseConfig &noise);

/// Criterion values computed while streaming the loop simulation.
std::vector<double> analytic_criteria(const ControlSchedule &schedule, const SqueezerSpec &source,
                                      std::span<const Criterion> criteria);

/// Criterion estimates from sequential homodyne sampling. Nullifiers are
/// grouped into as few measurement plans as possible; each plan is one
/// independent run of `shots` shots.
std::vector<Estimate> sampled_criteria(const ControlSchedule &schedule, const SqueezerSpec &source,
                                       std::span<const Criterion> criteria, int shots, std::uint64_t seed);

struct CriterionResult {
    std::string name;
    double analytic = 0.0;
    std::optional<Estimate> sampled;
    double threshold = 1.0;
    bool pass = false;
};

struct EvaluationOptions {
    int shots = kDefaultShots;  // 0 skips sampling
    std::uint64_t seed = 1;
};

/// Evaluates every criterion of the target on the schedule. A row passes when
/// its sampled value (or analytic value, without sampling) is below threshold.
std::vector<CriterionResult> evaluate_schedule(const ControlSchedule &schedule, const TargetState &target,
                                               const SqueezerSpec &source, const EvaluationOptions &options = {});

struct MemoryPoint {
    int n = 0;
    double delay_ns = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    bool sampled = false;
};

/// Inseparability of the stored EPR pair for n = 1..max_n. Without sampling
/// the standard error is the one expected at kDefaultShots shots.
std::vector<MemoryPoint> memory_sweep(int max_n, const SqueezerSpec &source, const NoiseConfig &noise,
                                      double tau_ns = 66.0, int shots = 0, std::uint64_t seed = 1);

/// Standard error of a criterion estimated from `shots` shots per plan,
/// given the analytic part variances.
/// Per-trip phase jitter (degrees) at which the memory signal for `n` stored
/// trips reaches `target`; bisects within [lo_deg, hi_deg]. Throws
/// std::runtime_error when the target is not bracketed.
double fit_memory_jitter(int n, const SqueezerSpec &source, const NoiseConfig &noise, double lo_deg,
                         double hi_deg, double target = 1.0);

double expected_std_error(std::span<const double> part_variances, int shots);

}  // namespace loopsynth

#endif
