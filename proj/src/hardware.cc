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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "loopsynth/angles.h"

namespace loopsynth {

namespace {

using Distance = double (*)(double, double);

double linear_distance(double a, double b) {
    return std::abs(a - b);
}

std::vector<double> distinct_nonzero(const std::vector<double> &values, double tol, Distance dist) {
    std::vector<double> out;
    for (double v : values) {
        if (dist(v, 0.0) <= tol) {
            continue;
        }
        bool seen = std::any_of(out.begin(), out.end(), [&](double u) { return dist(u, v) <= tol; });
        if (!seen) {
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

LevelReport solve_levels(std::string name, const std::vector<double> &values, double tol, Distance dist) {
    LevelReport r;
    r.parameter = std::move(name);
    r.required = distinct_nonzero(values, tol, dist);
    const auto &req = r.required;
    switch (req.size()) {
        case 0:
            r.feasible = true;
            break;
        case 1:
            r.feasible = true;
            r.v1 = req[0];
            break;
        case 2:
            r.feasible = true;
            r.v1 = req[0];
            r.v2 = req[1];
            break;
        case 3:
            for (int s = 0; s < 3 && !r.feasible; ++s) {
                double a = req[(s + 1) % 3];
                double b = req[(s + 2) % 3];
                if (dist(a + b, req[s]) <= tol) {
                    r.feasible = true;
                    r.v1 = std::min(a, b);
                    r.v2 = std::max(a, b);
                }
            }
            break;
        default:
            break;
    }
    return r;
}

std::string describe(const LevelReport &r) {
    if (r.feasible) {
        std::string witness = "no switching needed";
        if (r.v1 && r.v2) {
            witness = fmt::format("v1 = {:.6g}, v2 = {:.6g}", *r.v1, *r.v2);
        } else if (r.v1) {
            witness = fmt::format("v1 = {:.6g}", *r.v1);
        }
        return fmt::format("{}: feasible, required {{{:.6g}}}, {}", r.parameter, fmt::join(r.required, ", "), witness);
    }
    return fmt::format("{}: infeasible, required {{{:.6g}}} is not of the form {{v1, v2, v1 + v2}}", r.parameter,
                       fmt::join(r.required, ", "));
}

}  // namespace

double delta_for_transmissivity(double T) {
    if (!(T >= 0.0 && T <= 1.0)) {
        throw std::invalid_argument(fmt::format("delta_for_transmissivity: T = {} outside [0, 1]", T));
    }
    double a = rad_to_deg(std::asin(std::sqrt(T)));
    return T >= 0.5 ? a - 45.0 : 135.0 - a;
}

double transmissivity_for_delta(double delta_deg) {
    double s = std::sin(deg_to_rad(delta_deg + 45.0));
    return s * s;
}

std::string FeasibilityReport::summary() const {
    return fmt::format("hardware: {}\n  {}\n  {}\n", feasible ? "feasible" : "INFEASIBLE", describe(delta),
                       describe(theta));
}

FeasibilityReport hardware_check(const ControlSchedule &schedule, const HardwareModel &model) {
    std::vector<double> deltas;
    std::vector<double> thetas;
    for (const auto &b : schedule.bins) {
        double d = delta_for_transmissivity(b.T);
        deltas.push_back(std::abs(d) <= model.tolerance ? 0.0 : d);
        thetas.push_back(wrap_degrees(b.theta_deg));
    }
    FeasibilityReport rep;
    rep.delta = solve_levels("delta", deltas, model.tolerance, linear_distance);
    rep.theta = solve_levels("theta", thetas, model.tolerance, angular_distance);
    rep.feasible = rep.delta.feasible && rep.theta.feasible;
    return rep;
}

}  // namespace loopsynth
