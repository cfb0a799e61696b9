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

#include <gtest/gtest.h>

#include "oracles.h"

using namespace loopsynth;

namespace {

double se_of_variance(double v, int n) {
    return v * std::sqrt(2.0 / (n - 1));
}

GaussianState epr() {
    auto s = tensor(apply_phase(squeezed_vacuum(SqueezerSpec::pure(5)), 0, 90), squeezed_vacuum(SqueezerSpec::pure(5)));
    return apply_beamsplitter(s, 0, 1, 0.5);
}

}  // namespace

TEST(Sampling, VacuumVarianceIsQuarter) {
    MeasurementPlan plan{{0.0, 37.0}, 5000};
    auto set = sample_quadratures(vacuum(2), plan, 1);
    for (Eigen::Index k = 0; k < 2; ++k) {
        EXPECT_NEAR(sample_variance(set.values.col(k)), 0.25, 4 * se_of_variance(0.25, 5000));
    }
}

TEST(Sampling, EprDifferenceMatchesAnalytic) {
    auto s = epr();
    MeasurementPlan plan{{0.0, 0.0}, 5000};
    auto set = sample_quadratures(s, plan, 2);
    Eigen::VectorXd d = set.values.col(0) - set.values.col(1);
    double analytic = s.cov()(0, 0) + s.cov()(2, 2) - 2 * s.cov()(0, 2);
    EXPECT_NEAR(sample_variance(d), analytic, 3 * se_of_variance(analytic, 5000));
}

TEST(Sampling, SameSeedSameSamples) {
    MeasurementPlan plan{{0.0, 90.0}, 100};
    auto a = sample_quadratures(epr(), plan, 42);
    auto b = sample_quadratures(epr(), plan, 42);
    auto c = sample_quadratures(epr(), plan, 43);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(Sampling, EmpiricalCovarianceConverges) {
    auto s = oracles::random_state(3, 9);
    MeasurementPlan plan{{0.0, 90.0, 45.0}, 100000};
    auto set = sample_quadratures(s, plan, 3);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 6);
    for (int k = 0; k < 3; ++k) {
        double phi = plan.bases_deg[k] * oracles::kPi / 180.0;
        h(k, 2 * k) = std::cos(phi);
        h(k, 2 * k + 1) = std::sin(phi);
    }
    Eigen::MatrixXd expected = h * s.cov() * h.transpose();
    Eigen::VectorXd expected_mean = h * s.mean();
    Eigen::MatrixXd centered = set.values.rowwise() - set.values.colwise().mean();
    Eigen::MatrixXd emp = centered.transpose() * centered / (plan.shots - 1);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(set.values.col(i).mean(), expected_mean(i), 5 * std::sqrt(expected(i, i) / plan.shots));
        for (int j = 0; j < 3; ++j) {
            double se = std::sqrt((expected(i, i) * expected(j, j) + expected(i, j) * expected(i, j)) / plan.shots);
            EXPECT_NEAR(emp(i, j), expected(i, j), 5 * se);
        }
    }
}

TEST(Sampling, PlanValidation) {
    EXPECT_THROW(sample_quadratures(vacuum(2), {{0.0}, 10}, 1), std::invalid_argument);
    EXPECT_THROW(sample_quadratures(vacuum(1), {{0.0}, 1}, 1), std::invalid_argument);
    EXPECT_THROW(MeasurementPlan({}, 10).validate(), std::invalid_argument);
    EXPECT_THROW(sample_variance(Eigen::VectorXd::Zero(1)), std::invalid_argument);
}
