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

#include "loopsynth/selfcheck.h"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "loopsynth/compiler.h"
#include "loopsynth/loop_engine.h"
#include "loopsynth/verifier.h"
#include "loopsynth/waveform.h"

namespace loopsynth {

namespace {

double max_abs_diff(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return INFINITY;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

ControlSchedule random_schedule(int outputs, std::uint64_t seed, bool realistic) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ControlSchedule s;
    for (int b = 0; b <= outputs; ++b) {
        s.bins.push_back({unit(rng), 360.0 * unit(rng), 0.0, Source::squeezer});
    }
    s.noise = realistic ? NoiseConfig{} : NoiseConfig::ideal();
    if (realistic) {
        s.noise.detection_efficiency = 0.9;
    }
    return s;
}

CheckResult check_loop_chain(const SelfcheckOptions &options) {
    CheckResult r{"loop-chain equivalence", true, ""};
    const SqueezerSpec source = SqueezerSpec::experimental();
    double worst = 0.0;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<int> size(2, 6);
    for (int i = 0; i < options.random_schedules; ++i) {
        int n = size(rng);
        ControlSchedule s = random_schedule(n, rng(), i % 2 == 1);
        LoopOptions opts;
        opts.window = static_cast<std::size_t>(std::max(3, n));
        opts.invert_coupling_sign = options.inject_bs_sign_fault;
        LoopRun run(s, source, opts);
        std::optional<RunRecord> last;
        while (auto rec = run.next()) {
            last = std::move(rec);
        }
        GaussianState chain = run_unrolled(s, source);
        double d = max_abs_diff(last->window->state.cov(), chain.cov());
        worst = std::max(worst, d);
        if (!(d <= 1e-10)) {
            r.passed = false;
            r.detail = fmt::format("schedule {} ({} outputs): max covariance difference {:.3e}", i, n, d);
            return r;
        }
    }
    r.detail = fmt::format("{} schedules, max difference {:.3e}", options.random_schedules, worst);
    return r;
}

CheckResult check_linear_oracle() {
    CheckResult r{"linear-cluster closed form", true, ""};
    const SqueezerSpec source = SqueezerSpec::experimental();
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        ControlSchedule s = compile(TargetState::linear_cluster(n));
        s.noise = NoiseConfig::ideal();
        double d = max_abs_diff(run_unrolled(s, source).cov(), linear_cluster_oracle_cov(n, source).cov());
        worst = std::max(worst, d);
        if (!(d <= 1e-10)) {
            r.passed = false;
            r.detail = fmt::format("n = {}: max covariance difference {:.3e}", n, d);
            return r;
        }
    }
    r.detail = fmt::format("n = 2..8, max difference {:.3e}", worst);
    return r;
}

CheckResult check_ghz_star() {
    CheckResult r{"ghz-star local equivalence", true, ""};
    const SqueezerSpec source = SqueezerSpec::experimental();
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        ControlSchedule ghz = compile(TargetState::ghz(n));
        ControlSchedule star = compile(TargetState::star_cluster(n));
        ghz.noise = star.noise = NoiseConfig::ideal();
        GaussianState expected = apply_phase(run_unrolled(ghz, source), static_cast<std::size_t>(n - 1), 90.0);
        double d = max_abs_diff(run_unrolled(star, source).cov(), expected.cov());
        worst = std::max(worst, d);
        if (!(d <= 1e-12)) {
            r.passed = false;
            r.detail = fmt::format("n = {}: max covariance difference {:.3e}", n, d);
            return r;
        }
    }
    r.detail = fmt::format("n = 2..6, max difference {:.3e}", worst);
    return r;
}

CheckResult check_waveform_roundtrip(std::uint64_t seed) {
    CheckResult r{"waveform round trip", true, ""};
    const WaveformConfig config;

    Eigen::MatrixXd gram = orthogonality_matrix(config, 15);
    double gram_err = (gram - Eigen::MatrixXd::Identity(15, 15)).cwiseAbs().maxCoeff();
    if (!(gram_err <= 1e-9)) {
        r.passed = false;
        r.detail = fmt::format("Gram matrix deviates from identity by {:.3e}", gram_err);
        return r;
    }

    SampleSet q;
    q.plan.bases_deg.assign(4, 0.0);
    q.plan.shots = 50;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    q.values.resize(50, 4);
    for (Eigen::Index i = 0; i < q.values.size(); ++i) {
        q.values.data()[i] = normal(rng);
    }
    SampleSet back = extract_quadratures(synthesize_frames(q, config, seed, false), config, 4);
    double trip_err = (back.values - q.values).cwiseAbs().maxCoeff();
    if (!(trip_err <= 1e-10)) {
        r.passed = false;
        r.detail = fmt::format("noiseless round trip error {:.3e}", trip_err);
        return r;
    }

    const int frames = kDefaultShots;
    SampleSet noise = extract_quadratures(shot_noise_frames(frames, 3, config, seed + 1), config, 3);
    for (Eigen::Index k = 0; k < 3; ++k) {
        double v = sample_variance(noise.values.col(k));
        double se = 0.25 * std::sqrt(2.0 / (frames - 1));
        if (!(std::abs(v - 0.25) <= 3.0 * se)) {
            r.passed = false;
            r.detail = fmt::format("noise projection on mode {} has variance {:.4f} (expected 0.25 +- {:.4f})", k + 1,
                                   v, 3.0 * se);
            return r;
        }
    }
    r.detail = fmt::format("Gram error {:.1e}, round trip error {:.1e}, noise floor within 3 SE", gram_err, trip_err);
    return r;
}

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions &options) {
    return {check_loop_chain(options), check_linear_oracle(), check_ghz_star(), check_waveform_roundtrip(options.seed)};
}

}  // namespace loopsynth
