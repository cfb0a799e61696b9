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

#include "loopsynth/gaussian_state.h"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "loopsynth/angles.h"

namespace loopsynth {

namespace {

void symmetrize(Eigen::MatrixXd &cov) {
    cov = 0.5 * (cov + cov.transpose()).eval();
}

void check_mode(const GaussianState &state, std::size_t mode, const char *op) {
    if (mode >= state.num_modes()) {
        throw std::out_of_range(
            fmt::format("{}: mode {} out of range for a {}-mode state", op, mode, state.num_modes()));
    }
}

std::vector<std::size_t> quadrature_indices(std::span<const std::size_t> modes) {
    std::vector<std::size_t> idx;
    idx.reserve(2 * modes.size());
    for (auto m : modes) {
        idx.push_back(x_index(m));
        idx.push_back(p_index(m));
    }
    return idx;
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (mean_.size() % 2 != 0) {
        throw std::invalid_argument("GaussianState: mean vector must have even length");
    }
    if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
        throw std::invalid_argument(fmt::format(
            "GaussianState: covariance is {}x{} but mean has length {}", cov_.rows(), cov_.cols(), mean_.size()));
    }
    if (!mean_.allFinite() || !cov_.allFinite()) {
        throw std::invalid_argument("GaussianState: moments must be finite");
    }
    if (cov_.size() > 0) {
        double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
        if (asym > kSymmetryTolerance) {
            throw std::invalid_argument(fmt::format("GaussianState: covariance not symmetric (max |S - S^T| = {})", asym));
        }
    }
    symmetrize(cov_);
    if (!is_psd()) {
        throw std::invalid_argument(
            fmt::format("GaussianState: covariance not positive semidefinite (min eigenvalue {})", min_eigenvalue()));
    }
}

GaussianState GaussianState::empty() {
    return from_trusted(Eigen::VectorXd(0), Eigen::MatrixXd(0, 0));
}

GaussianState GaussianState::from_trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
    GaussianState s;
    s.mean_ = std::move(mean);
    s.cov_ = std::move(cov);
    symmetrize(s.cov_);
    return s;
}

Eigen::Matrix2d GaussianState::mode_block(std::size_t mode) const {
    check_mode(*this, mode, "mode_block");
    return cov_.block<2, 2>(x_index(mode), x_index(mode));
}

double GaussianState::min_eigenvalue() const {
    if (cov_.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool GaussianState::is_psd(double tol) const {
    return cov_.size() == 0 || min_eigenvalue() >= -tol;
}

double GaussianState::quadrature_variance(std::size_t mode, double phi_deg) const {
    Eigen::Vector2d h(std::cos(deg_to_rad(phi_deg)), std::sin(deg_to_rad(phi_deg)));
    return h.dot(mode_block(mode) * h);
}

bool GaussianState::approx_equal(const GaussianState &other, double tol) const {
    if (num_modes() != other.num_modes()) {
        return false;
    }
    if (cov_.size() == 0) {
        return true;
    }
    return (mean_ - other.mean_).cwiseAbs().maxCoeff() <= tol && (cov_ - other.cov_).cwiseAbs().maxCoeff() <= tol;
}

void SqueezerSpec::validate() const {
    if (!std::isfinite(squeeze_db) || !std::isfinite(antisqueeze_db)) {
        throw std::invalid_argument("SqueezerSpec: levels must be finite");
    }
    if (squeeze_db < 0) {
        throw std::invalid_argument(fmt::format("SqueezerSpec: squeeze_db must be >= 0, got {}", squeeze_db));
    }
    if (antisqueeze_db < squeeze_db) {
        throw std::invalid_argument(fmt::format(
            "SqueezerSpec: unphysical source, anti-squeezing {} dB below squeezing {} dB", antisqueeze_db, squeeze_db));
    }
}

double SqueezerSpec::var_x() const {
    return kVacuumVariance * std::pow(10.0, -squeeze_db / 10.0);
}

double SqueezerSpec::var_p() const {
    return kVacuumVariance * std::pow(10.0, antisqueeze_db / 10.0);
}

GaussianState vacuum(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("vacuum: mode count must be at least 1");
    }
    return GaussianState::from_trusted(
        Eigen::VectorXd::Zero(2 * n), kVacuumVariance * Eigen::MatrixXd::Identity(2 * n, 2 * n));
}

GaussianState squeezed_vacuum(const SqueezerSpec &spec) {
    spec.validate();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = spec.var_x();
    cov(1, 1) = spec.var_p();
    return GaussianState::from_trusted(Eigen::VectorXd::Zero(2), std::move(cov));
}

GaussianState apply_symplectic(
    const GaussianState &state, const Eigen::MatrixXd &symplectic, std::span<const std::size_t> modes) {
    for (auto m : modes) {
        check_mode(state, m, "apply_symplectic");
    }
    auto idx = quadrature_indices(modes);
    auto k = static_cast<Eigen::Index>(idx.size());
    if (symplectic.rows() != k || symplectic.cols() != k) {
        throw std::invalid_argument("apply_symplectic: matrix size does not match the mode list");
    }
    Eigen::VectorXd mean = state.mean();
    Eigen::MatrixXd cov = state.cov();
    auto dim = cov.rows();

    Eigen::VectorXd local_mean(k);
    Eigen::MatrixXd rows(k, dim);
    for (Eigen::Index a = 0; a < k; ++a) {
        local_mean(a) = mean(idx[a]);
        rows.row(a) = cov.row(idx[a]);
    }
    local_mean = symplectic * local_mean;
    rows = symplectic * rows;
    for (Eigen::Index a = 0; a < k; ++a) {
        mean(idx[a]) = local_mean(a);
        cov.row(idx[a]) = rows.row(a);
    }
    Eigen::MatrixXd cols(dim, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        cols.col(a) = cov.col(idx[a]);
    }
    cols = cols * symplectic.transpose();
    for (Eigen::Index a = 0; a < k; ++a) {
        cov.col(idx[a]) = cols.col(a);
    }
    return GaussianState::from_trusted(std::move(mean), std::move(cov));
}

GaussianState apply_phase(const GaussianState &state, std::size_t mode, double theta_deg) {
    check_mode(state, mode, "apply_phase");
    double c = std::cos(deg_to_rad(theta_deg));
    double s = std::sin(deg_to_rad(theta_deg));
    Eigen::MatrixXd r(2, 2);
    r << c, -s, s, c;
    std::size_t modes[] = {mode};
    return apply_symplectic(state, r, modes);
}

GaussianState apply_beamsplitter(const GaussianState &state, std::size_t i, std::size_t j, double transmissivity) {
    check_mode(state, i, "apply_beamsplitter");
    check_mode(state, j, "apply_beamsplitter");
    if (i == j) {
        throw std::invalid_argument("apply_beamsplitter: modes must differ");
    }
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::invalid_argument(fmt::format("apply_beamsplitter: T = {} outside [0, 1]", transmissivity));
    }
    double t = std::sqrt(transmissivity);
    double r = std::sqrt(1.0 - transmissivity);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
    s.block<2, 2>(0, 0) = t * Eigen::Matrix2d::Identity();
    s.block<2, 2>(0, 2) = -r * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 0) = r * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 2) = t * Eigen::Matrix2d::Identity();
    std::size_t modes[] = {i, j};
    return apply_symplectic(state, s, modes);
}

GaussianState apply_loss(const GaussianState &state, std::size_t mode, double eta) {
    check_mode(state, mode, "apply_loss");
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument(fmt::format("apply_loss: transmittance {} outside [0, 1]", eta));
    }
    double g = std::sqrt(eta);
    Eigen::VectorXd mean = state.mean();
    Eigen::MatrixXd cov = state.cov();
    auto x = static_cast<Eigen::Index>(x_index(mode));
    mean.segment<2>(x) *= g;
    cov.middleRows(x, 2) *= g;
    cov.middleCols(x, 2) *= g;
    cov(x, x) += (1.0 - eta) * kVacuumVariance;
    cov(x + 1, x + 1) += (1.0 - eta) * kVacuumVariance;
    return GaussianState::from_trusted(std::move(mean), std::move(cov));
}

GaussianState apply_dephasing(const GaussianState &state, std::size_t mode, double sigma_deg) {
    check_mode(state, mode, "apply_dephasing");
    if (!(sigma_deg >= 0.0)) {
        throw std::invalid_argument(fmt::format("apply_dephasing: sigma {} must be >= 0", sigma_deg));
    }
    if (sigma_deg == 0.0) {
        return state;
    }
    // For phi ~ N(0, s^2): E[cos phi] = exp(-s^2/2), E[cos 2phi] = exp(-2 s^2), E[sin] = 0.
    // Work on the raw second moments M = cov + mean mean^T so the mixture is exact.
    double s = deg_to_rad(sigma_deg);
    double first = std::exp(-0.5 * s * s);
    double second = std::exp(-2.0 * s * s);
    auto x = static_cast<Eigen::Index>(x_index(mode));

    Eigen::MatrixXd moments = state.cov() + state.mean() * state.mean().transpose();
    Eigen::Matrix2d block = moments.block<2, 2>(x, x);
    moments.middleRows(x, 2) *= first;
    moments.middleCols(x, 2) *= first;
    double avg = 0.5 * (block(0, 0) + block(1, 1));
    double diff = 0.5 * (block(0, 0) - block(1, 1));
    double off = 0.5 * (block(0, 1) + block(1, 0));
    moments(x, x) = avg + second * diff;
    moments(x + 1, x + 1) = avg - second * diff;
    moments(x, x + 1) = second * off;
    moments(x + 1, x) = second * off;

    Eigen::VectorXd mean = state.mean();
    mean.segment<2>(x) *= first;
    Eigen::MatrixXd cov = moments - mean * mean.transpose();
    return GaussianState::from_trusted(std::move(mean), std::move(cov));
}

GaussianState tensor(const GaussianState &a, const GaussianState &b) {
    auto na = a.mean().size();
    auto nb = b.mean().size();
    Eigen::VectorXd mean(na + nb);
    mean << a.mean(), b.mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return GaussianState::from_trusted(std::move(mean), std::move(cov));
}

GaussianState marginalize(const GaussianState &state, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("marginalize: keep list is empty");
    }
    for (auto m : keep) {
        check_mode(state, m, "marginalize");
    }
    auto idx = quadrature_indices(keep);
    auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXd mean(k);
    Eigen::MatrixXd cov(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        mean(a) = state.mean()(idx[a]);
        for (Eigen::Index b = 0; b < k; ++b) {
            cov(a, b) = state.cov()(idx[a], idx[b]);
        }
    }
    return GaussianState::from_trusted(std::move(mean), std::move(cov));
}

GaussianState homodyne_condition(const GaussianState &state, std::size_t mode, double phi_deg, double outcome) {
    check_mode(state, mode, "homodyne_condition");
    auto dim = state.mean().size();
    auto x = static_cast<Eigen::Index>(x_index(mode));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(dim);
    h(x) = std::cos(deg_to_rad(phi_deg));
    h(x + 1) = std::sin(deg_to_rad(phi_deg));

    double var = h.dot(state.cov() * h);
    if (var < kSingularVariance) {
        throw std::invalid_argument(
            fmt::format("homodyne_condition: measured quadrature variance {} is singular", var));
    }
    double predicted = h.dot(state.mean());
    Eigen::VectorXd gain = state.cov() * h;

    Eigen::VectorXd mean = state.mean() + gain * ((outcome - predicted) / var);
    Eigen::MatrixXd cov = state.cov() - gain * gain.transpose() / var;

    std::vector<std::size_t> rest;
    for (std::size_t m = 0; m < state.num_modes(); ++m) {
        if (m != mode) {
            rest.push_back(m);
        }
    }
    if (rest.empty()) {
        return GaussianState::empty();
    }
    return marginalize(GaussianState::from_trusted(std::move(mean), std::move(cov)), rest);
}

}  // namespace loopsynth
