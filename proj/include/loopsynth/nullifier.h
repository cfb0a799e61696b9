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

#ifndef LOOPSYNTH_NULLIFIER_H
#define LOOPSYNTH_NULLIFIER_H

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "loopsynth/gaussian_state.h"
#include "loopsynth/sampling.h"

namespace loopsynth {

enum class Quadrature { x, p };

/// Homodyne angle that measures a quadrature: 0 for x, 90 for p.
double basis_deg(Quadrature q);

struct Term {
    int mode = 1;  // 1-based output index
    Quadrature quadrature = Quadrature::x;
    double coeff = 1.0;

    bool operator==(const Term &) const = default;
};

/// A linear combination of output-mode quadratures, e.g. p2 - x1 - x3.
struct NullifierSpec {
    std::vector<Term> terms;

    /// Nonempty, finite coefficients, modes >= 1, one quadrature kind per mode.
    void validate() const;
    int min_mode() const;
    int max_mode() const;
    /// Canonical text form, e.g. "p2-x1-x3".
    std::string text() const;
    /// Variance of this combination on vacuum: sum of c^2 / 4.
    double vacuum_variance() const;

    /// Parses expressions such as "p2 - x1 - x3" or "x1 - 0.5*p2".
    static NullifierSpec parse(std::string_view expression);

    bool operator==(const NullifierSpec &) const = default;
};

/// Entanglement criterion: the sum of the variances of its parts is compared
/// against the threshold. Pairs carry threshold 1, single nullifiers 1/2.
struct Criterion {
    std::string name;
    std::vector<NullifierSpec> parts;
    double threshold = 1.0;

    double vacuum_value() const;
    int max_mode() const;
    int min_mode() const;
};

Criterion pair_criterion(const NullifierSpec &a, const NullifierSpec &b);
Criterion single_criterion(const NullifierSpec &a);

/// <delta^2> = c^T Sigma c + (c^T mu)^2. `labels[i]` gives the output index
/// held by state mode i; when empty, state mode i holds output i + 1.
double variance_analytic(const GaussianState &state, const NullifierSpec &spec, std::span<const int> labels = {});

double criterion_analytic(const GaussianState &state, const Criterion &c, std::span<const int> labels = {});

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    int shots = 0;
};

/// Unbiased sample variance with the Gaussian standard error s^2 sqrt(2 / (N - 1)).
Estimate variance_estimate(const Eigen::VectorXd &values);

/// Variance of `spec` from measured samples; column i of the samples holds
/// output i + 1. Every term must have been measured in the matching basis.
Estimate estimate(const SampleSet &samples, const NullifierSpec &spec);

/// Assigns one homodyne angle per output so that all specs can be estimated
/// from a single run. Modes the specs do not touch are measured in x.
MeasurementPlan measurement_plan(std::span<const NullifierSpec> specs, std::size_t num_outputs,
                                 int shots = kDefaultShots);

/// Splits specs into the fewest greedy groups that each admit one plan.
/// Returns, for each group, the indices of its specs.
std::vector<std::vector<std::size_t>> group_compatible(std::span<const NullifierSpec> specs);

}  // namespace loopsynth

#endif
