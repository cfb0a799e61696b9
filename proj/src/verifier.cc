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

#include "loopsynth/verifier.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <stdexcept>

#include <fmt/format.h>

#include "loopsynth/loop_engine.h"

namespace loopsynth {

namespace {

NullifierSpec spec(std::initializer_list<Term> terms) {
    NullifierSpec s{terms};
    s.validate();
    return s;
}

Term x(int mode, double c = 1.0) {
    return {mode, Quadrature::x, c};
}

Term p(int mode, double c = 1.0) {
    return {mode, Quadrature::p, c};
}

NullifierSpec momentum_sum(int n) {
    NullifierSpec s;
    for (int k = 1; k <= n; ++k) {
        s.terms.push_back(p(k));
    }
    return s;
}

NullifierSpec cluster_nullifier(int k, int n) {
    NullifierSpec s;
    s.terms.push_back(p(k));
    if (k > 1) {
        s.terms.push_back(x(k - 1, -1.0));
    }
    if (k < n) {
        s.terms.push_back(x(k + 1, -1.0));
    }
    return s;
}

std::vector<Criterion> ghz_criteria(int n) {
    std::vector<Criterion> out;
    NullifierSpec sum = momentum_sum(n);
    if (n == 3) {
        out.push_back(pair_criterion(spec({x(1), x(2, -1)}), sum));
        out.push_back(pair_criterion(spec({x(2), x(3, -1)}), sum));
        out.push_back(pair_criterion(spec({x(1), x(3, -1)}), sum));
        return out;
    }
    for (int k = 1; k < n; ++k) {
        out.push_back(pair_criterion(spec({x(k), x(k + 1, -1)}), sum));
    }
    return out;
}

// Re-expresses a GHZ nullifier on the star state, whose last mode carries an extra 90 deg phase.
NullifierSpec to_star_frame(const NullifierSpec &s, int n) {
    NullifierSpec out = s;
    for (auto &t : out.terms) {
        if (t.mode != n) {
            continue;
        }
        if (t.quadrature == Quadrature::x) {
            t.quadrature = Quadrature::p;
        } else {
            t.quadrature = Quadrature::x;
            t.coeff = -t.coeff;
        }
    }
    return out;
}

int span_of(const Criterion &c) {
    return c.max_mode() - c.min_mode() + 1;
}

void check_fits(const ControlSchedule &schedule, std::span<const Criterion> criteria) {
    for (const auto &c : criteria) {
        if (c.parts.empty()) {
            throw std::invalid_argument(fmt::format("criterion '{}' has no parts", c.name));
        }
        if (static_cast<std::size_t>(c.max_mode()) > schedule.num_outputs()) {
            throw std::invalid_argument(fmt::format("criterion '{}' refers to output {} but the schedule has {} outputs",
                                                    c.name, c.max_mode(), schedule.num_outputs()));
        }
    }
}

std::vector<std::vector<double>> analytic_parts(const ControlSchedule &schedule, const SqueezerSpec &source,
                                                std::span<const Criterion> criteria) {
    check_fits(schedule, criteria);
    LoopOptions opts;
    opts.window = 3;
    for (const auto &c : criteria) {
        opts.window = std::max<std::size_t>(opts.window, static_cast<std::size_t>(span_of(c)));
    }
    std::vector<std::vector<double>> values(criteria.size());
    LoopRun run(schedule, source, opts);
    while (auto rec = run.next()) {
        for (std::size_t i = 0; i < criteria.size(); ++i) {
            if (criteria[i].max_mode() != rec->mode) {
                continue;
            }
            for (const auto &part : criteria[i].parts) {
                values[i].push_back(variance_analytic(rec->window->state, part, rec->window->labels));
            }
        }
    }
    return values;
}

std::uint64_t plan_seed(std::uint64_t seed, std::size_t group) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(group) + 1));
}

double efficiency_fit(double measured, double v, double b) {
    return std::abs(v - b) > 0 ? (measured - b) / (v - b) : 1.0;
}

}  // namespace

std::vector<Criterion> nullifiers_for(const TargetState &target) {
    target.validate();
    const int n = target.n;
    switch (target.kind) {
        case TargetKind::epr:
        case TargetKind::ghz:
            return ghz_criteria(n);
        case TargetKind::star_cluster: {
            if (n == 2) {
                return {pair_criterion(spec({p(1), x(2, -1)}), spec({p(2), x(1, -1)}))};
            }
            auto out = ghz_criteria(n);
            for (auto &c : out) {
                for (auto &part : c.parts) {
                    part = to_star_frame(part, n);
                }
                c = pair_criterion(c.parts[0], c.parts[1]);
            }
            return out;
        }
        case TargetKind::linear_cluster:
            if (n == 2) {
                return {pair_criterion(spec({p(1), x(2, -1)}), spec({p(2), x(1, -1)}))};
            }
            if (n == 3) {
                NullifierSpec centre = cluster_nullifier(2, 3);
                return {pair_criterion(spec({p(1), x(2, -1)}), centre),
                        pair_criterion(spec({p(3), x(2, -1)}), centre),
                        pair_criterion(spec({p(1), p(3, -1)}), centre)};
            }
            {
                std::vector<Criterion> out;
                for (int k = 1; k <= n; ++k) {
                    out.push_back(single_criterion(cluster_nullifier(k, n)));
                }
                return out;
            }
        case TargetKind::infinite_cluster: {
            std::vector<Criterion> out;
            for (int k = 1; k < n; ++k) {
                out.push_back(single_criterion(cluster_nullifier(k, n + 1)));
            }
            return out;
        }
    }
    throw std::invalid_argument("nullifiers_for: unsupported target");
}

Eigen::MatrixXcd linear_cluster_transform(int n) {
    if (n < 2) {
        throw std::invalid_argument(fmt::format("linear_cluster_transform: n must be >= 2, got {}", n));
    }
    auto F = [](int k) { return static_cast<double>(fibonacci(k)); };
    auto ipow = [](int e) {
        static const std::complex<double> cycle[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return cycle[((e % 4) + 4) % 4];
    };
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        u(k - 1, 0) = ipow(k) * F(n - k + 1) / std::sqrt(F(n) * F(n + 1));
        for (int l = 2; l <= k; ++l) {
            u(k - 1, l - 1) = ipow(k - l + 1) * F(n - k + 1) / std::sqrt(F(n - l + 1) * F(n - l + 3));
        }
        if (k < n) {
            u(k - 1, k) = -std::sqrt(F(n - k) / F(n - k + 2));
        }
    }
    return u;
}

GaussianState linear_cluster_oracle_cov(int n, const SqueezerSpec &source) {
    source.validate();
    Eigen::MatrixXcd u = linear_cluster_transform(n);
    double unitarity = (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-10) {
        throw std::logic_error(fmt::format("linear_cluster_oracle_cov: transform not unitary ({})", unitarity));
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            double a = u(k, l).real();
            double b = u(k, l).imag();
            s(2 * k, 2 * l) = a;
            s(2 * k, 2 * l + 1) = -b;
            s(2 * k + 1, 2 * l) = b;
            s(2 * k + 1, 2 * l + 1) = a;
        }
    }
    Eigen::VectorXd diag(2 * n);
    for (int l = 0; l < n; ++l) {
        diag(2 * l) = source.var_x();
        diag(2 * l + 1) = source.var_p();
    }
    Eigen::MatrixXd cov = s * diag.asDiagonal() * s.transpose();
    return GaussianState(Eigen::VectorXd::Zero(2 * n), 0.5 * (cov + cov.transpose()));
}

std::vector<ReferenceRow> reference_rows() {
    std::vector<ReferenceRow> rows;
    auto add = [&](const std::string &label, const TargetState &t, std::initializer_list<double> measured) {
        auto criteria = nullifiers_for(t);
        std::size_t i = 0;
        for (double m : measured) {
            rows.push_back({label, t, criteria.at(i++), m});
        }
    };
    add("EPR", TargetState::epr(), {0.44});
    add("3-mode GHZ", TargetState::ghz(3), {0.65, 0.67, 0.70});
    add("2-mode cluster", TargetState::linear_cluster(2), {0.42});
    add("3-mode linear cluster", TargetState::linear_cluster(3), {0.56, 0.54, 0.60});
    // Star criteria are ordered as the GHZ ones: (x1-x2), (x2-p3), (x1-p3).
    add("3-mode star cluster", TargetState::star_cluster(3), {0.63, 0.65, 0.69});
    return rows;
}

Calibration evaluate_efficiency(std::span<const ReferenceRow> rows, const SqueezerSpec &source, const NoiseConfig &noise,
                                double efficiency) {
    Calibration cal;
    cal.efficiency = efficiency;
    for (const auto &row : rows) {
        ControlSchedule s = compile(row.target);
        s.noise = noise;
        s.noise.detection_efficiency = 1.0;
        GaussianState st = run_unrolled(s, source);
        CalibrationRow r;
        r.label = row.label;
        r.criterion = row.criterion.name;
        r.measured = row.measured;
        r.unit_efficiency = criterion_analytic(st, row.criterion);
        r.vacuum = row.criterion.vacuum_value();
        r.model = efficiency * r.unit_efficiency + (1.0 - efficiency) * r.vacuum;
        r.residual = r.model - r.measured;
        r.row_efficiency = efficiency_fit(r.measured, r.unit_efficiency, r.vacuum);
        cal.sum_squared += r.residual * r.residual;
        cal.max_abs_residual = std::max(cal.max_abs_residual, std::abs(r.residual));
        cal.rows.push_back(std::move(r));
    }
    return cal;
}

Calibration calibrate_efficiency(std::span<const ReferenceRow> rows, const SqueezerSpec &source,
                                 const NoiseConfig &noise) {
    if (rows.empty()) {
        throw std::invalid_argument("calibrate_efficiency: no rows");
    }
    Calibration unit = evaluate_efficiency(rows, source, noise, 1.0);
    double num = 0.0;
    double den = 0.0;
    for (const auto &r : unit.rows) {
        double d = r.unit_efficiency - r.vacuum;
        num += (r.measured - r.vacuum) * d;
        den += d * d;
    }
    if (den == 0.0) {
        throw std::runtime_error("calibrate_efficiency: rows do not depend on the efficiency");
    }
    double eta = num / den;
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::runtime_error(fmt::format("calibrate_efficiency: optimum {} is not bracketed in (0, 1]", eta));
    }
    return evaluate_efficiency(rows, source, noise, eta);
}

std::vector<double> analytic_criteria(const ControlSchedule &schedule, const SqueezerSpec &source,
                                      std::span<const Criterion> criteria) {
    auto parts = analytic_parts(schedule, source, criteria);
    std::vector<double> out;
    for (const auto &v : parts) {
        double sum = 0.0;
        for (double x : v) {
            sum += x;
        }
        out.push_back(sum);
    }
    return out;
}

std::vector<Estimate> sampled_criteria(const ControlSchedule &schedule, const SqueezerSpec &source,
                                       std::span<const Criterion> criteria, int shots, std::uint64_t seed) {
    check_fits(schedule, criteria);
    std::vector<NullifierSpec> parts;
    std::vector<std::vector<std::size_t>> uses(criteria.size());
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        for (const auto &part : criteria[i].parts) {
            auto it = std::find(parts.begin(), parts.end(), part);
            uses[i].push_back(static_cast<std::size_t>(it - parts.begin()));
            if (it == parts.end()) {
                parts.push_back(part);
            }
        }
    }
    std::vector<Estimate> part_estimates(parts.size());
    auto groups = group_compatible(parts);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<NullifierSpec> members;
        std::size_t span = 1;
        for (auto i : groups[g]) {
            members.push_back(parts[i]);
            span = std::max<std::size_t>(span, static_cast<std::size_t>(parts[i].max_mode() - parts[i].min_mode() + 1));
        }
        LoopOptions opts;
        opts.seed = plan_seed(seed, g);
        opts.sampling = measurement_plan(members, schedule.num_outputs(), shots);
        LoopRun run(schedule, source, opts);

        std::deque<std::vector<double>> recent;
        int newest = 0;
        while (auto rec = run.next()) {
            recent.push_back(std::move(rec->samples));
            newest = rec->mode;
            if (recent.size() > span) {
                recent.pop_front();
            }
            for (auto i : groups[g]) {
                if (parts[i].max_mode() != newest) {
                    continue;
                }
                Eigen::VectorXd combo = Eigen::VectorXd::Zero(shots);
                for (const auto &t : parts[i].terms) {
                    const auto &col = recent[recent.size() - 1 - static_cast<std::size_t>(newest - t.mode)];
                    combo += t.coeff * Eigen::Map<const Eigen::VectorXd>(col.data(), shots);
                }
                part_estimates[i] = variance_estimate(combo);
            }
        }
    }
    std::vector<Estimate> out;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Estimate e;
        double var = 0.0;
        for (auto j : uses[i]) {
            e.value += part_estimates[j].value;
            var += part_estimates[j].std_error * part_estimates[j].std_error;
        }
        e.std_error = std::sqrt(var);
        e.shots = shots;
        out.push_back(e);
    }
    return out;
}

std::vector<CriterionResult> evaluate_schedule(const ControlSchedule &schedule, const TargetState &target,
                                               const SqueezerSpec &source, const EvaluationOptions &options) {
    auto criteria = nullifiers_for(target);
    auto analytic = analytic_criteria(schedule, source, criteria);
    std::vector<Estimate> sampled;
    if (options.shots > 0) {
        sampled = sampled_criteria(schedule, source, criteria, options.shots, options.seed);
    }
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        CriterionResult r;
        r.name = criteria[i].name;
        r.analytic = analytic[i];
        r.threshold = criteria[i].threshold;
        if (!sampled.empty()) {
            r.sampled = sampled[i];
        }
        r.pass = (r.sampled ? r.sampled->value : r.analytic) < r.threshold;
        out.push_back(std::move(r));
    }
    return out;
}

double expected_std_error(std::span<const double> part_variances, int shots) {
    if (shots < 2) {
        throw std::invalid_argument("expected_std_error: shots must be >= 2");
    }
    double var = 0.0;
    for (double v : part_variances) {
        var += v * v * 2.0 / (shots - 1);
    }
    return std::sqrt(var);
}

double fit_memory_jitter(int n, const SqueezerSpec &source, const NoiseConfig &noise, double lo_deg,
                         double hi_deg, double target) {
    if (!(lo_deg >= 0.0) || !(hi_deg > lo_deg)) {
        throw std::invalid_argument("fit_memory_jitter: need 0 <= lo < hi");
    }
    auto excess = [&](double sigma) {
        NoiseConfig trial = noise;
        trial.phase_jitter_deg_per_trip = sigma;
        return memory_experiment(n, source, trial) - target;
    };
    double f_lo = excess(lo_deg);
    double f_hi = excess(hi_deg);
    if (f_lo > 0.0 || f_hi < 0.0) {
        throw std::runtime_error(fmt::format("fit_memory_jitter: target {} not reached within [{}, {}] deg", target,
                                             lo_deg, hi_deg));
    }
    for (int it = 0; it < 200 && hi_deg - lo_deg > 1e-13; ++it) {
        double mid = 0.5 * (lo_deg + hi_deg);
        if (excess(mid) < 0.0) {
            lo_deg = mid;
        } else {
            hi_deg = mid;
        }
    }
    return 0.5 * (lo_deg + hi_deg);
}

std::vector<MemoryPoint> memory_sweep(int max_n, const SqueezerSpec &source, const NoiseConfig &noise, double tau_ns,
                                      int shots, std::uint64_t seed) {
    if (max_n < 1) {
        throw std::invalid_argument(fmt::format("memory_sweep: max_n must be >= 1, got {}", max_n));
    }
    std::vector<MemoryPoint> out;
    for (int n = 1; n <= max_n; ++n) {
        ControlSchedule s = memory_schedule(n, noise);
        s.tau_ns = tau_ns;
        int last = n + 2;
        std::vector<Criterion> c{pair_criterion(spec({x(1), x(last, -1)}), spec({p(1), p(last)}))};
        MemoryPoint pt;
        pt.n = n;
        pt.delay_ns = n * tau_ns;
        if (shots > 0) {
            auto e = sampled_criteria(s, source, c, shots, seed + static_cast<std::uint64_t>(n)).front();
            pt.value = e.value;
            pt.std_error = e.std_error;
            pt.sampled = true;
        } else {
            auto parts = analytic_parts(s, source, c).front();
            pt.value = parts[0] + parts[1];
            pt.std_error = expected_std_error(parts, kDefaultShots);
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace loopsynth
