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

// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "loopsynth/compiler.h"
#include "loopsynth/hardware.h"
#include "loopsynth/loop_engine.h"
#include "loopsynth/nullifier.h"
#include "loopsynth/selfcheck.h"
#include "loopsynth/verifier.h"
#include "loopsynth/waveform.h"
#include "oracles.h"

using namespace loopsynth;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + fmt::format("failed: {}", what);
        }
    }
    void note(const std::string &what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

const SqueezerSpec kSource = SqueezerSpec::experimental();

struct ExpectedSequence {
    TargetState target;
    std::vector<double> T;
    std::vector<double> theta;
};

Outcome schedule_fidelity() {
    Outcome o;
    auto start = Clock::now();
    const std::vector<ExpectedSequence> expected = {
        {TargetState::epr(), {1.0, 1.0 / 2.0, 1.0}, {90, 0, 0}},
        {TargetState::ghz(3), {1.0, 1.0 / 3.0, 1.0 / 2.0, 1.0}, {90, 180, 0, 0}},
        {TargetState::linear_cluster(2), {1.0, 1.0 / 2.0, 1.0}, {90, 90, 0}},
        {TargetState::linear_cluster(3), {1.0, 2.0 / 3.0, 1.0 / 2.0, 1.0}, {90, 90, 90, 0}},
        {TargetState::star_cluster(3), {1.0, 1.0 / 3.0, 1.0 / 2.0, 1.0}, {90, 180, 90, 0}},
    };
    for (const auto &e : expected) {
        auto s = compile(e.target);
        bool same = s.bins.size() == e.T.size();
        for (std::size_t i = 0; same && i < e.T.size(); ++i) {
            same = s.bins[i].T == e.T[i] && s.bins[i].theta_deg == e.theta[i] && s.bins[i].phi_deg == 0.0;
        }
        o.require(same, e.target.describe());
    }
    double t = seconds_since(start);
    o.require(t < 1.0, fmt::format("runtime {:.3f} s", t));
    o.note(fmt::format("5 sequences, {:.4f} s", t));
    return o;
}

Outcome loop_chain() {
    Outcome o;
    auto start = Clock::now();
    SelfcheckOptions opts;
    opts.random_schedules = 200;
    auto r = check_loop_chain(opts);
    double t = seconds_since(start);
    o.require(r.passed, r.detail);
    o.require(t < 30.0, fmt::format("runtime {:.2f} s", t));
    o.note(fmt::format("{} ({:.2f} s)", r.detail, t));
    return o;
}

Outcome oracle() {
    Outcome o;
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        auto s = compile(TargetState::linear_cluster(n));
        s.noise = NoiseConfig::ideal();
        auto circuit = run_unrolled(s, kSource);
        auto closed = linear_cluster_oracle_cov(n, kSource);
        double d = (circuit.cov() - closed.cov()).cwiseAbs().maxCoeff();
        worst = std::max(worst, d);
        o.require(d <= 1e-10, fmt::format("n={} differs by {:.3g}", n, d));
    }
    o.note(fmt::format("n=2..8, max |diff| {:.3g}", worst));
    return o;
}

Outcome anchors() {
    Outcome o;
    auto s = compile(TargetState::epr());
    s.noise = NoiseConfig::ideal();
    double epr = evaluate_schedule(s, TargetState::epr(), SqueezerSpec::pure(5.0), {0, 1})[0].analytic;
    o.require(std::abs(epr - std::pow(10.0, -0.5)) <= 1e-9, fmt::format("EPR {:.12f}", epr));
    auto vac = vacuum(3);
    double epr_vac = criterion_analytic(vac, nullifiers_for(TargetState::epr())[0]);
    double two = variance_analytic(vac, NullifierSpec::parse("p1-x2"));
    double three = variance_analytic(vac, NullifierSpec::parse("p2-x1-x3"));
    o.require(epr_vac == 1.0, fmt::format("vacuum EPR {}", epr_vac));
    o.require(two == 0.5, fmt::format("vacuum 2-term {}", two));
    o.require(three == 0.75, fmt::format("vacuum 3-term {}", three));
    o.note(fmt::format("EPR {:.10f}, vacuum {:g}/{:g}/{:g}", epr, epr_vac, two, three));
    return o;
}

Outcome table_reproduction(double &eta_out) {
    Outcome o;
    auto rows = reference_rows();
    auto cal = calibrate_efficiency(rows, kSource, NoiseConfig{});
    eta_out = cal.efficiency;
    o.require(rows.size() == 11, "row count");
    o.require(cal.max_abs_residual <= 0.08, fmt::format("max residual {:.4f}", cal.max_abs_residual));
    o.require(cal.efficiency > 0.0 && cal.efficiency <= 1.0, "efficiency range");

    std::span<const ReferenceRow> epr_row(rows.data(), 1);
    double eta_epr = calibrate_efficiency(epr_row, kSource, NoiseConfig::ideal()).efficiency;
    o.require(std::abs(eta_epr - 0.82) <= 0.05, fmt::format("EPR-row efficiency {:.4f}", eta_epr));

    double max_se = 0.0;
    double min_se = 1.0;
    for (auto t : {TargetState::epr(), TargetState::ghz(3), TargetState::linear_cluster(2),
                   TargetState::linear_cluster(3), TargetState::star_cluster(3)}) {
        auto s = compile(t);
        s.noise.detection_efficiency = cal.efficiency;
        for (const auto &r : evaluate_schedule(s, t, kSource, {kDefaultShots, 17})) {
            max_se = std::max(max_se, r.sampled->std_error);
            min_se = std::min(min_se, r.sampled->std_error);
            o.require(std::abs(r.sampled->value - r.analytic) <= 3.5 * r.sampled->std_error,
                      fmt::format("{} sampled {:.4f} vs {:.4f}", r.name, r.sampled->value, r.analytic));
        }
    }
    o.require(min_se >= 0.003 && max_se <= 0.02, fmt::format("stderr range [{:.4f}, {:.4f}]", min_se, max_se));
    o.note(fmt::format("eta {:.4f} (loop 7%/7deg), max residual {:.4f}; EPR-row eta {:.4f}; stderr {:.4f}..{:.4f}",
                       cal.efficiency, cal.max_abs_residual, eta_epr, min_se, max_se));
    return o;
}

Outcome large_cluster(double eta) {
    Outcome o;
    const int n = 1008;
    auto target = TargetState::linear_cluster(n);
    auto s = compile(target);
    s.noise.detection_efficiency = eta;
    auto criteria = nullifiers_for(target);
    auto analytic = analytic_criteria(s, kSource, criteria);
    auto sampled = sampled_criteria(s, kSource, criteria, kDefaultShots, 1008);
    double worst_analytic = 0.0;
    double worst_sampled = 0.0;
    int outside = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        worst_analytic = std::max(worst_analytic, analytic[i]);
        worst_sampled = std::max(worst_sampled, sampled[i].value);
        if (std::abs(sampled[i].value - analytic[i]) > 3.0 * sampled[i].std_error) {
            ++outside;
        }
    }
    const auto count = static_cast<int>(criteria.size());
    o.require(count == n, "nullifier count");
    o.require(worst_analytic < 0.5, fmt::format("analytic max {:.4f}", worst_analytic));
    o.require(worst_sampled < 0.5, fmt::format("sampled max {:.4f}", worst_sampled));
    o.require(outside <= count / 100, fmt::format("{} of {} sampled values outside 3 stderr", outside, count));

    auto start = Clock::now();
    auto big = compile(TargetState::infinite_cluster(10000));
    big.noise.detection_efficiency = eta;
    LoopRun run(big, kSource, {8, 0, std::nullopt, false});
    std::size_t records = 0;
    std::size_t max_dim = 0;
    while (auto rec = run.next()) {
        ++records;
        max_dim = std::max(max_dim, rec->window->state.num_modes());
    }
    double t = seconds_since(start);
    o.require(records == 10000, fmt::format("{} records", records));
    o.require(max_dim <= 9, fmt::format("window grew to {} modes", max_dim));
    o.require(t < 5.0, fmt::format("10000-mode run {:.2f} s", t));
    o.note(fmt::format("analytic max {:.4f}, sampled max {:.4f}, {} of {} outside 3 stderr; 10000 modes in {:.2f} s, "
                       "window <= {} modes",
                       worst_analytic, worst_sampled, outside, count, t, max_dim));
    return o;
}

std::vector<double> sweep(const NoiseConfig &noise, int max_n) {
    std::vector<double> out;
    for (const auto &p : memory_sweep(max_n, kSource, noise)) {
        out.push_back(p.value);
    }
    return out;
}

Outcome memory(double eta, std::string &info) {
    Outcome o;
    NoiseConfig base;
    base.loop_loss_per_trip = 0.07;
    base.detection_efficiency = eta;
    const double sigma = fit_memory_jitter(7, kSource, base, 0.0, 30.0);
    o.require(sigma >= 3.5 && sigma <= 14.0, fmt::format("fitted jitter {:.2f} deg outside the 7-deg scale", sigma));
    NoiseConfig noise = base;
    noise.phase_jitter_deg_per_trip = sigma;
    auto curve = sweep(noise, 11);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        o.require(curve[i] >= curve[i - 1], fmt::format("not monotone at n={}", i + 1));
    }
    for (int k = 1; k <= 6; ++k) {
        o.require(curve[static_cast<std::size_t>(k - 1)] < 1.0, fmt::format("n={} value {:.4f}", k, curve[k - 1]));
    }
    NoiseConfig jitter_only = noise;
    jitter_only.loop_loss_per_trip = 0.0;
    NoiseConfig loss_only = noise;
    loss_only.phase_jitter_deg_per_trip = 0.0;
    auto j = sweep(jitter_only, 11);
    auto l = sweep(loss_only, 11);
    double dj = j.back() - j.front();
    double dl = l.back() - l.front();
    o.require(dj > dl, fmt::format("jitter-only rise {:.4f} <= loss-only rise {:.4f}", dj, dl));
    o.note(fmt::format("eta {:.4f}, loss 7%, fitted jitter {:.2f} deg/trip; n=6 {:.4f}, n=7 {:.4f}; rise n=1..11 "
                       "jitter-only {:.4f} vs loss-only {:.4f}",
                       eta, sigma, curve[5], curve[6], dj, dl));

    NoiseConfig literal = base;
    literal.phase_jitter_deg_per_trip = 7.0;
    auto lit = sweep(literal, 11);
    NoiseConfig lit_j = literal;
    lit_j.loop_loss_per_trip = 0.0;
    NoiseConfig lit_l = literal;
    lit_l.phase_jitter_deg_per_trip = 0.0;
    auto lj = sweep(lit_j, 11);
    auto ll = sweep(lit_l, 11);
    info = fmt::format("7 deg/trip: n=6 {:.4f}, n=11 {:.4f}; rise jitter-only {:.4f} vs loss-only {:.4f}", lit[5],
                       lit.back(), lj.back() - lj.front(), ll.back() - ll.front());
    return o;
}

Outcome waveform() {
    Outcome o;
    WaveformConfig cfg;
    double gram = (orthogonality_matrix(cfg, 15) - Eigen::MatrixXd::Identity(15, 15)).cwiseAbs().maxCoeff();
    o.require(gram <= 1e-9, fmt::format("Gram deviation {:.3g}", gram));

    SampleSet q;
    q.plan.bases_deg = {0, 90, 0, 90};
    q.plan.shots = 50;
    q.values = Eigen::MatrixXd::Random(50, 4);
    auto back = extract_quadratures(synthesize_frames(q, cfg, 3, false), cfg, 4);
    double rt = (back.values - q.values).cwiseAbs().maxCoeff();
    o.require(rt <= 1e-10, fmt::format("round trip {:.3g}", rt));

    const int frames = 5000;
    auto floor = extract_quadratures(shot_noise_frames(frames, 3, cfg, 8), cfg, 3);
    const double se = 0.25 * std::sqrt(2.0 / (frames - 1));
    std::string vars;
    for (int k = 0; k < 3; ++k) {
        double v = sample_variance(floor.values.col(k));
        o.require(std::abs(v - 0.25) <= 3 * se, fmt::format("mode {} variance {:.4f}", k + 1, v));
        vars += fmt::format("{}{:.4f}", k ? "/" : "", v);
    }
    o.note(fmt::format("Gram {:.2g}, round trip {:.2g}, floor {} (SE {:.4f})", gram, rt, vars, se));
    return o;
}

Outcome hardware() {
    Outcome o;
    for (auto t : {TargetState::ghz(3), TargetState::linear_cluster(3), TargetState::epr(),
                   TargetState::infinite_cluster(50)}) {
        auto rep = hardware_check(compile(t));
        std::vector<double> allowed;
        for (auto v : {rep.delta.v1, rep.delta.v2}) {
            if (v) {
                allowed.push_back(*v);
            }
        }
        if (allowed.size() == 2) {
            allowed.push_back(allowed[0] + allowed[1]);
        }
        bool witness = true;
        for (double d : rep.delta.required) {
            bool covered = false;
            for (double a : allowed) {
                covered = covered || std::abs(d - a) < 1e-9;
            }
            witness = witness && covered;
        }
        o.require(rep.feasible && witness, t.describe() + " should be feasible with a valid witness");
    }
    std::string levels;
    for (auto t : {TargetState::ghz(4), TargetState::linear_cluster(4)}) {
        auto rep = hardware_check(compile(t));
        o.require(!rep.feasible && !rep.delta.feasible, t.describe() + " should be infeasible");
        o.require(!oracles::brute_force_two_levels(rep.delta.required), t.describe() + " brute force found levels");
        levels += fmt::format(" {} delta {{{}}}", t.describe(), fmt::join(rep.delta.required, ", "));
    }
    o.note("ghz(3), cluster1d(3), epr, infinite(50) feasible;" + levels + " infeasible");
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const std::string &title, const std::function<Outcome()> &fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = fmt::format("exception: {}", e.what());
        }
        if (!o.pass) {
            ++failures;
        }
        fmt::print("{} [{}] {}: {}\n", o.pass ? "PASS" : "FAIL", id, title, o.detail);
        std::fflush(stdout);
    };

    double eta = 1.0;
    std::string memory_info;
    report(1, "schedule fidelity", schedule_fidelity);
    report(2, "loop/chain equivalence", loop_chain);
    report(3, "linear-cluster closed form", oracle);
    report(4, "ideal anchors", anchors);
    report(5, "calibrated table reproduction", [&] { return table_reproduction(eta); });
    report(6, "1008-mode cluster and streaming", [&] { return large_cluster(eta); });
    report(7, "memory sweep", [&] { return memory(eta, memory_info); });
    if (!memory_info.empty()) {
        fmt::print("INFO [7] {}\n", memory_info);
    }
    report(8, "waveform round trip", waveform);
    report(9, "hardware levels", hardware);
    fmt::print("{} of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
