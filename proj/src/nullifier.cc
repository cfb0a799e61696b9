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

#include "loopsynth/nullifier.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace loopsynth {

namespace {

char letter(Quadrature q) {
    return q == Quadrature::x ? 'x' : 'p';
}

std::size_t quadrature_position(const NullifierSpec &spec, const Term &t, std::span<const int> labels,
                                std::size_t num_modes) {
    std::size_t mode;
    if (labels.empty()) {
        mode = static_cast<std::size_t>(t.mode - 1);
    } else {
        auto it = std::find(labels.begin(), labels.end(), t.mode);
        if (it == labels.end()) {
            throw std::out_of_range(fmt::format("{}: output {} is not present in the state", spec.text(), t.mode));
        }
        mode = static_cast<std::size_t>(it - labels.begin());
    }
    if (mode >= num_modes) {
        throw std::out_of_range(
            fmt::format("{}: output {} is not present in a {}-mode state", spec.text(), t.mode, num_modes));
    }
    return t.quadrature == Quadrature::x ? x_index(mode) : p_index(mode);
}

// Basis requirements of a spec as (mode, quadrature) pairs.
bool compatible(const std::map<int, Quadrature> &assigned, const NullifierSpec &spec) {
    for (const auto &t : spec.terms) {
        auto it = assigned.find(t.mode);
        if (it != assigned.end() && it->second != t.quadrature) {
            return false;
        }
    }
    return true;
}

}  // namespace

double basis_deg(Quadrature q) {
    return q == Quadrature::x ? 0.0 : 90.0;
}

void NullifierSpec::validate() const {
    if (terms.empty()) {
        throw std::invalid_argument("nullifier has no terms");
    }
    std::map<int, Quadrature> seen;
    for (const auto &t : terms) {
        if (t.mode < 1) {
            throw std::invalid_argument(fmt::format("nullifier term refers to mode {}; modes start at 1", t.mode));
        }
        if (!std::isfinite(t.coeff)) {
            throw std::invalid_argument("nullifier coefficient is not finite");
        }
        auto [it, inserted] = seen.emplace(t.mode, t.quadrature);
        if (!inserted && it->second != t.quadrature) {
            throw std::invalid_argument(fmt::format("nullifier uses both x and p of mode {}", t.mode));
        }
    }
}

int NullifierSpec::min_mode() const {
    int m = terms.front().mode;
    for (const auto &t : terms) {
        m = std::min(m, t.mode);
    }
    return m;
}

int NullifierSpec::max_mode() const {
    int m = terms.front().mode;
    for (const auto &t : terms) {
        m = std::max(m, t.mode);
    }
    return m;
}

std::string NullifierSpec::text() const {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto &t = terms[i];
        double mag = std::abs(t.coeff);
        if (t.coeff < 0) {
            out += "-";
        } else if (i > 0) {
            out += "+";
        }
        if (mag != 1.0) {
            out += fmt::format("{:g}*", mag);
        }
        out += fmt::format("{}{}", letter(t.quadrature), t.mode);
    }
    return out;
}

double NullifierSpec::vacuum_variance() const {
    double v = 0.0;
    for (const auto &t : terms) {
        v += t.coeff * t.coeff * kVacuumVariance;
    }
    return v;
}

NullifierSpec NullifierSpec::parse(std::string_view expr) {
    NullifierSpec spec;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < expr.size() && std::isspace(static_cast<unsigned char>(expr[i]))) {
            ++i;
        }
    };
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument(fmt::format("cannot parse nullifier '{}' at offset {}: {}", expr, i, why));
    };
    skip();
    while (i < expr.size()) {
        double sign = 1.0;
        if (expr[i] == '+' || expr[i] == '-') {
            sign = expr[i] == '-' ? -1.0 : 1.0;
            ++i;
            skip();
        } else if (!spec.terms.empty()) {
            fail("expected '+' or '-'");
        }
        double coeff = 1.0;
        if (i < expr.size() && (std::isdigit(static_cast<unsigned char>(expr[i])) || expr[i] == '.')) {
            std::size_t used = 0;
            coeff = std::stod(std::string(expr.substr(i)), &used);
            i += used;
            skip();
            if (i >= expr.size() || expr[i] != '*') {
                fail("expected '*' after coefficient");
            }
            ++i;
            skip();
        }
        if (i >= expr.size() || (expr[i] != 'x' && expr[i] != 'p')) {
            fail("expected quadrature 'x' or 'p'");
        }
        Quadrature q = expr[i] == 'x' ? Quadrature::x : Quadrature::p;
        ++i;
        std::size_t start = i;
        while (i < expr.size() && std::isdigit(static_cast<unsigned char>(expr[i]))) {
            ++i;
        }
        if (start == i) {
            fail("expected mode number");
        }
        int mode = std::stoi(std::string(expr.substr(start, i - start)));
        spec.terms.push_back({mode, q, sign * coeff});
        skip();
    }
    spec.validate();
    return spec;
}

double Criterion::vacuum_value() const {
    double v = 0.0;
    for (const auto &p : parts) {
        v += p.vacuum_variance();
    }
    return v;
}

int Criterion::max_mode() const {
    int m = 0;
    for (const auto &p : parts) {
        m = std::max(m, p.max_mode());
    }
    return m;
}

int Criterion::min_mode() const {
    int m = parts.front().min_mode();
    for (const auto &p : parts) {
        m = std::min(m, p.min_mode());
    }
    return m;
}

Criterion pair_criterion(const NullifierSpec &a, const NullifierSpec &b) {
    return {fmt::format("var({})+var({})", a.text(), b.text()), {a, b}, 1.0};
}

Criterion single_criterion(const NullifierSpec &a) {
    return {fmt::format("var({})", a.text()), {a}, 0.5};
}

double variance_analytic(const GaussianState &state, const NullifierSpec &spec, std::span<const int> labels) {
    spec.validate();
    if (!labels.empty() && labels.size() != state.num_modes()) {
        throw std::invalid_argument("variance_analytic: label count does not match the state");
    }
    std::vector<std::pair<std::size_t, double>> c;
    for (const auto &t : spec.terms) {
        c.emplace_back(quadrature_position(spec, t, labels, state.num_modes()), t.coeff);
    }
    double var = 0.0;
    double mean = 0.0;
    for (const auto &[i, ci] : c) {
        mean += ci * state.mean()(static_cast<Eigen::Index>(i));
        for (const auto &[j, cj] : c) {
            var += ci * cj * state.cov()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return var + mean * mean;
}

double criterion_analytic(const GaussianState &state, const Criterion &c, std::span<const int> labels) {
    double v = 0.0;
    for (const auto &p : c.parts) {
        v += variance_analytic(state, p, labels);
    }
    return v;
}

Estimate variance_estimate(const Eigen::VectorXd &values) {
    auto n = values.size();
    if (n < 2) {
        throw std::invalid_argument("variance_estimate: need at least 2 shots");
    }
    double s2 = sample_variance(values);
    return {s2, s2 * std::sqrt(2.0 / static_cast<double>(n - 1)), static_cast<int>(n)};
}

Estimate estimate(const SampleSet &samples, const NullifierSpec &spec) {
    spec.validate();
    const auto &bases = samples.plan.bases_deg;
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(samples.values.rows());
    for (const auto &t : spec.terms) {
        auto col = static_cast<std::size_t>(t.mode - 1);
        if (col >= bases.size()) {
            throw std::invalid_argument(fmt::format("estimate: output {} was not measured", t.mode));
        }
        if (std::abs(bases[col] - basis_deg(t.quadrature)) > 1e-9) {
            throw std::invalid_argument(fmt::format("estimate: {} needs {} of output {} but the plan measured at {} deg",
                                                    spec.text(), letter(t.quadrature), t.mode, bases[col]));
        }
        combo += t.coeff * samples.values.col(static_cast<Eigen::Index>(col));
    }
    return variance_estimate(combo);
}

MeasurementPlan measurement_plan(std::span<const NullifierSpec> specs, std::size_t num_outputs, int shots) {
    MeasurementPlan plan;
    plan.shots = shots;
    plan.bases_deg.assign(num_outputs, 0.0);
    std::map<int, Quadrature> assigned;
    for (const auto &spec : specs) {
        spec.validate();
        for (const auto &t : spec.terms) {
            if (static_cast<std::size_t>(t.mode) > num_outputs) {
                throw std::invalid_argument(
                    fmt::format("measurement_plan: {} refers to output {} of {}", spec.text(), t.mode, num_outputs));
            }
            auto [it, inserted] = assigned.emplace(t.mode, t.quadrature);
            if (!inserted && it->second != t.quadrature) {
                throw std::invalid_argument(fmt::format(
                    "measurement_plan: output {} would need both x and p in one run", t.mode));
            }
            plan.bases_deg[static_cast<std::size_t>(t.mode - 1)] = basis_deg(t.quadrature);
        }
    }
    plan.validate();
    return plan;
}

std::vector<std::vector<std::size_t>> group_compatible(std::span<const NullifierSpec> specs) {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::map<int, Quadrature>> assigned;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        std::size_t g = 0;
        while (g < groups.size() && !compatible(assigned[g], specs[i])) {
            ++g;
        }
        if (g == groups.size()) {
            groups.emplace_back();
            assigned.emplace_back();
        }
        groups[g].push_back(i);
        for (const auto &t : specs[i].terms) {
            assigned[g].emplace(t.mode, t.quadrature);
        }
    }
    return groups;
}

}  // namespace loopsynth
