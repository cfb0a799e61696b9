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

#ifndef LOOPSYNTH_GAUSSIAN_STATE_H
#define LOOPSYNTH_GAUSSIAN_STATE_H

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace loopsynth {

/// Quadrature variance of the vacuum. Quadratures are normalized with
/// hbar = 1/2, so a = x + i p and [x, p] = i/2.
inline constexpr double kVacuumVariance = 0.25;

/// Covariance symmetry is restored after every transform; anything farther
/// from symmetric than this on construction is rejected.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Smallest covariance eigenvalue accepted as positive semidefinite.
inline constexpr double kPsdTolerance = 1e-9;

/// Measured quadrature variances below this cannot be conditioned on.
inline constexpr double kSingularVariance = 1e-12;

/// Index of x_m in the interleaved ordering (x1, p1, x2, p2, ...).
inline constexpr std::size_t x_index(std::size_t mode) {
    return 2 * mode;
}
inline constexpr std::size_t p_index(std::size_t mode) {
    return 2 * mode + 1;
}

/// First and second moments of an N-mode Gaussian state.
///
/// Modes are addressed by zero-based position. The state is an immutable
/// value: every operation below returns a new state.
class GaussianState {
   public:
    /// Validates dimensions, finiteness, symmetry and positive semidefiniteness.
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

    /// Zero-mode state; the terminal result of measuring every mode.
    static GaussianState empty();

    /// Skips the eigenvalue check. Only for transforms that preserve
    /// positivity by construction.
    static GaussianState from_trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov);

    std::size_t num_modes() const {
        return static_cast<std::size_t>(mean_.size() / 2);
    }
    const Eigen::VectorXd &mean() const {
        return mean_;
    }
    const Eigen::MatrixXd &cov() const {
        return cov_;
    }

    /// 2x2 covariance block of one mode.
    Eigen::Matrix2d mode_block(std::size_t mode) const;

    double min_eigenvalue() const;
    bool is_psd(double tol = kPsdTolerance) const;

    /// Variance of x cos(phi) + p sin(phi) on one mode.
    double quadrature_variance(std::size_t mode, double phi_deg) const;

    bool approx_equal(const GaussianState &other, double tol) const;

   private:
    GaussianState() = default;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

/// Single-mode source: x squeezed by squeeze_db, p anti-squeezed by antisqueeze_db.
struct SqueezerSpec {
    double squeeze_db = 5.0;
    double antisqueeze_db = 8.0;

    void validate() const;
    double var_x() const;
    double var_p() const;

    /// Default source: 5 dB squeezing, 8 dB anti-squeezing.
    static SqueezerSpec experimental() {
        return {5.0, 8.0};
    }
    static SqueezerSpec pure(double db) {
        return {db, db};
    }
};

GaussianState vacuum(std::size_t n);
GaussianState squeezed_vacuum(const SqueezerSpec &spec);

/// Rotates one mode: x' = x cos(theta) - p sin(theta), p' = x sin(theta) + p cos(theta).
GaussianState apply_phase(const GaussianState &state, std::size_t mode, double theta_deg);

/// Beam splitter acting identically on the x and p blocks:
///   out_i =  sqrt(T) in_i - sqrt(1-T) in_j
///   out_j = sqrt(1-T) in_i + sqrt(T) in_j
GaussianState apply_beamsplitter(const GaussianState &state, std::size_t i, std::size_t j, double transmissivity);

/// Pure-loss channel with transmittance eta on one mode.
GaussianState apply_loss(const GaussianState &state, std::size_t mode, double eta);

/// Moments averaged over random rotations of one mode with phi ~ Normal(0, sigma^2).
GaussianState apply_dephasing(const GaussianState &state, std::size_t mode, double sigma_deg);

/// Applies a real 2k x 2k symplectic matrix to the listed modes (in that order).
GaussianState apply_symplectic(
    const GaussianState &state, const Eigen::MatrixXd &symplectic, std::span<const std::size_t> modes);

/// Block-diagonal composition; a's modes come first.
GaussianState tensor(const GaussianState &a, const GaussianState &b);

/// Keeps the listed modes in the listed order. Also serves as a mode permutation.
GaussianState marginalize(const GaussianState &state, std::span<const std::size_t> keep);

/// Conditions on the outcome of a homodyne measurement of x cos(phi) + p sin(phi)
/// on `mode`, and removes the measured mode.
GaussianState homodyne_condition(const GaussianState &state, std::size_t mode, double phi_deg, double outcome);

}  // namespace loopsynth

#endif
