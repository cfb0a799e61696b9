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

#include "loopsynth/cli.h"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "loopsynth/compiler.h"
#include "loopsynth/hardware.h"
#include "loopsynth/loop_engine.h"
#include "loopsynth/schedule_io.h"
#include "loopsynth/selfcheck.h"
#include "loopsynth/verifier.h"
#include "loopsynth/waveform.h"

namespace loopsynth {

namespace {

struct CompileArgs {
    std::string target;
    int n = 0;
    std::string output;
    bool strict = false;
};

struct VerifyArgs {
    std::string schedule;
    int shots = kDefaultShots;
    std::uint64_t seed = 1;
    bool ideal = false;
    bool realistic = false;
    std::optional<double> efficiency;
    std::optional<double> loss;
    std::optional<double> jitter;
    double squeeze_db = 5.0;
    double antisqueeze_db = 8.0;
    bool vacuum = false;
    std::string csv;
};

struct MemoryArgs {
    int max_n = 11;
    double loss = 0.07;
    double jitter = 7.0;
    double efficiency = 1.0;
    bool ideal = false;
    bool sample = false;
    int shots = kDefaultShots;
    std::uint64_t seed = 1;
    double squeeze_db = 5.0;
    double antisqueeze_db = 8.0;
    std::string output;
};

struct FramesArgs {
    std::string schedule;
    int modes = 3;
    int frames = 1000;
    std::uint64_t seed = 1;
    std::string output;
};

struct SelfcheckArgs {
    std::string inject_fault;
    std::uint64_t seed = 2026;
};

std::string command_line(int argc, const char *const *argv) {
    std::string line = "loopsynth";
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        bool quote = a.empty() || a.find_first_of(" \t\"'") != std::string::npos;
        line += " ";
        line += quote ? "'" + a + "'" : a;
    }
    return line;
}

std::string noise_text(const NoiseConfig &n) {
    NoiseConfig e = n.effective();
    return fmt::format("{} (loop loss {:g}/trip, jitter {:g} deg/trip, detection efficiency {:g})", to_string(n.mode),
                       e.loop_loss_per_trip, e.phase_jitter_deg_per_trip, e.detection_efficiency);
}

std::string fmt_value(double v) {
    return fmt::format("{:.6f}", v);
}

void print_schedule(std::ostream &out, const ControlSchedule &s) {
    fmt::print(out, "{:>5}  {:>12}  {:>10}  {:>8}  {}\n", "bin", "T", "theta_deg", "phi_deg", "source");
    const std::size_t limit = 24;
    for (std::size_t b = 0; b < s.bins.size(); ++b) {
        if (s.bins.size() > limit && b == limit / 2) {
            fmt::print(out, "  ... {} bins omitted ...\n", s.bins.size() - limit);
            b = s.bins.size() - limit / 2;
        }
        const auto &bin = s.bins[b];
        fmt::print(out, "{:>5}  {:>12.10g}  {:>10g}  {:>8g}  {}\n", b + 1, bin.T, bin.theta_deg, bin.phi_deg,
                   to_string(bin.source));
    }
}

int do_compile(const CompileArgs &a, const std::string &cmd, std::ostream &out, std::ostream &err) {
    auto kind = parse_target_kind(a.target);
    if (!kind) {
        fmt::print(err, "error: unknown target '{}' (expected epr, ghz, cluster1d, star or infinite)\n", a.target);
        return kExitUsage;
    }
    TargetState t{*kind, *kind == TargetKind::epr ? 2 : a.n};
    if (*kind != TargetKind::epr && a.n == 0) {
        fmt::print(err, "error: target '{}' needs --n\n", a.target);
        return kExitUsage;
    }
    ControlSchedule s;
    try {
        s = compile(t);
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    FeasibilityReport rep = hardware_check(s);
    fmt::print(out, "# {}\n", cmd);
    fmt::print(out, "target: {}  bins: {}  outputs: {}\n", t.describe(), s.bins.size(), s.num_outputs());
    print_schedule(out, s);
    out << rep.summary();
    if (a.output.empty()) {
        out << serialize_schedule(s);
    } else {
        save_schedule(s, a.output);
        fmt::print(out, "wrote {}\n", a.output);
    }
    if (a.strict && !rep.feasible) {
        fmt::print(err, "error: schedule is not realizable with two EOM voltage levels\n");
        return kExitInfeasible;
    }
    return kExitOk;
}

int do_verify(const VerifyArgs &a, const std::string &cmd, std::ostream &out, std::ostream &err) {
    ControlSchedule s;
    try {
        s = load_schedule(a.schedule);
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}: {}\n", a.schedule, e.what());
        return kExitUsage;
    }
    auto target = identify_target(s);
    if (!target) {
        fmt::print(err, "error: {}: schedule does not match any compiled target (epr, ghz, cluster1d, star, infinite)\n",
                   a.schedule);
        return kExitUsage;
    }
    if (a.ideal) {
        s.noise.mode = NoiseMode::ideal;
    }
    if (a.realistic) {
        s.noise.mode = NoiseMode::realistic;
    }
    if (a.loss) {
        s.noise.loop_loss_per_trip = *a.loss;
    }
    if (a.jitter) {
        s.noise.phase_jitter_deg_per_trip = *a.jitter;
    }
    if (a.efficiency) {
        if (s.noise.mode == NoiseMode::ideal) {
            // Lossless loop, lossy detector.
            s.noise.mode = NoiseMode::realistic;
            s.noise.loop_loss_per_trip = 0.0;
            s.noise.phase_jitter_deg_per_trip = 0.0;
        }
        s.noise.detection_efficiency = *a.efficiency;
    }
    if (a.vacuum) {
        for (auto &b : s.bins) {
            if (b.source == Source::squeezer) {
                b.source = Source::vacuum;
            }
        }
    }
    SqueezerSpec source{a.squeeze_db, a.antisqueeze_db};
    std::vector<CriterionResult> rows;
    try {
        s.validate();
        source.validate();
        rows = evaluate_schedule(s, *target, source, {a.shots, a.seed});
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }

    fmt::print(out, "# {}\n", cmd);
    fmt::print(out, "target: {}  source: {:g} dB / {:g} dB{}  shots: {}  seed: {}\n", target->describe(), a.squeeze_db,
               a.antisqueeze_db, a.vacuum ? " (blocked: vacuum inputs)" : "", a.shots, a.seed);
    fmt::print(out, "noise: {}\n", noise_text(s.noise));
    std::size_t width = 9;
    for (const auto &r : rows) {
        width = std::max(width, r.name.size());
    }
    fmt::print(out, "{:<{}}  {:>9}  {:>9}  {:>8}  {:>9}  {}\n", "criterion", width, "analytic", "sampled", "stderr",
               "threshold", "result");
    std::size_t passed = 0;
    for (const auto &r : rows) {
        std::string sampled = r.sampled ? fmt::format("{:.4f}", r.sampled->value) : "-";
        std::string se = r.sampled ? fmt::format("{:.4f}", r.sampled->std_error) : "-";
        fmt::print(out, "{:<{}}  {:>9.4f}  {:>9}  {:>8}  {:>9g}  {}\n", r.name, width, r.analytic, sampled, se,
                   r.threshold, r.pass ? "PASS" : "FAIL");
        passed += r.pass ? 1 : 0;
    }
    fmt::print(out, "{}/{} criteria below threshold\n", passed, rows.size());

    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv) {
            fmt::print(err, "error: cannot write '{}'\n", a.csv);
            return kExitUsage;
        }
        fmt::print(csv, "# {}\n", cmd);
        csv << "criterion,analytic,sampled,stderr,pass\n";
        for (const auto &r : rows) {
            fmt::print(csv, "{},{},{},{},{}\n", r.name, fmt_value(r.analytic),
                       r.sampled ? fmt_value(r.sampled->value) : "", r.sampled ? fmt_value(r.sampled->std_error) : "",
                       r.pass ? "true" : "false");
        }
        fmt::print(out, "wrote {}\n", a.csv);
    }
    return kExitOk;
}

int do_memory(const MemoryArgs &a, const std::string &cmd, std::ostream &out, std::ostream &err) {
    NoiseConfig noise;
    noise.mode = a.ideal ? NoiseMode::ideal : NoiseMode::realistic;
    noise.loop_loss_per_trip = a.loss;
    noise.phase_jitter_deg_per_trip = a.jitter;
    noise.detection_efficiency = a.efficiency;
    std::vector<MemoryPoint> pts;
    try {
        noise.validate();
        pts = memory_sweep(a.max_n, {a.squeeze_db, a.antisqueeze_db}, noise, 66.0, a.sample ? a.shots : 0, a.seed);
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    std::ofstream file;
    std::ostream *sink = &out;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) {
            fmt::print(err, "error: cannot write '{}'\n", a.output);
            return kExitUsage;
        }
        sink = &file;
    }
    fmt::print(*sink, "# {}\n", cmd);
    *sink << "n,delay_ns,inseparability,stderr\n";
    for (const auto &p : pts) {
        fmt::print(*sink, "{},{:g},{},{}\n", p.n, p.delay_ns, fmt_value(p.value), fmt_value(p.std_error));
    }
    if (!a.output.empty()) {
        fmt::print(out, "# {}\nwrote {}\n", cmd, a.output);
    }
    return kExitOk;
}

int do_frames(const FramesArgs &a, const std::string &cmd, std::ostream &out, std::ostream &err) {
    WaveformConfig config;
    std::vector<TraceFrame> frames;
    int modes = a.modes;
    try {
        if (a.schedule.empty()) {
            frames = shot_noise_frames(a.frames, modes, config, a.seed);
        } else {
            ControlSchedule s = load_schedule(a.schedule);
            modes = static_cast<int>(s.num_outputs());
            config.tau_ns = s.tau_ns;
            LoopOptions opts;
            opts.seed = a.seed;
            MeasurementPlan plan;
            plan.shots = a.frames;
            for (std::size_t b = 1; b < s.bins.size(); ++b) {
                plan.bases_deg.push_back(s.bins[b].phi_deg);
            }
            opts.sampling = plan;
            SampleSet q;
            q.plan = plan;
            q.values.resize(a.frames, modes);
            LoopRun run(s, SqueezerSpec::experimental(), opts);
            while (auto rec = run.next()) {
                for (int i = 0; i < a.frames; ++i) {
                    q.values(i, rec->mode - 1) = rec->samples[static_cast<std::size_t>(i)];
                }
            }
            frames = synthesize_frames(q, config, a.seed + 1);
        }
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    SampleSet back = extract_quadratures(frames, config, modes);
    fmt::print(out, "# {}\n", cmd);
    fmt::print(out, "frames: {}  modes: {}  samples/frame: {}  dt: {:g} ns\n", frames.size(), modes,
               frames.front().samples.size(), config.dt_ns());
    out << "mode,extracted_variance\n";
    for (int k = 0; k < modes; ++k) {
        fmt::print(out, "{},{}\n", k + 1, fmt_value(sample_variance(back.values.col(k))));
    }
    if (!a.output.empty()) {
        write_frames_csv(frames, config, a.output);
        fmt::print(out, "wrote {}\n", a.output);
    }
    return kExitOk;
}

int do_selfcheck(const SelfcheckArgs &a, const std::string &cmd, std::ostream &out, std::ostream &err) {
    SelfcheckOptions opts;
    opts.seed = a.seed;
    if (!a.inject_fault.empty()) {
        if (a.inject_fault != "bs-sign") {
            fmt::print(err, "error: unknown fault '{}' (expected bs-sign)\n", a.inject_fault);
            return kExitUsage;
        }
        opts.inject_bs_sign_fault = true;
    }
    fmt::print(out, "# {}\n", cmd);
    std::optional<std::string> first_failure;
    for (const auto &r : run_selfcheck(opts)) {
        fmt::print(out, "{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
        if (!r.passed && !first_failure) {
            first_failure = r.name;
        }
    }
    if (first_failure) {
        fmt::print(err, "selfcheck failed: {}\n", *first_failure);
        return kExitSelfcheckFailed;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Loop-based photonic entanglement synthesizer: compile, simulate and verify"};
    app.require_subcommand(1);

    CompileArgs ca;
    auto *compile_cmd = app.add_subcommand("compile", "Compile a target state into a control schedule");
    compile_cmd->add_option("target", ca.target, "epr, ghz, cluster1d, star or infinite")->required();
    compile_cmd->add_option("--n", ca.n, "Number of output modes")->check(CLI::PositiveNumber);
    compile_cmd->add_option("-o,--output", ca.output, "Schedule file to write (default: print to stdout)");
    compile_cmd->add_flag("--strict-hardware", ca.strict, "Exit with status 2 if the EOMs cannot realize the schedule");

    VerifyArgs va;
    auto *verify_cmd = app.add_subcommand("verify", "Simulate a schedule and evaluate its entanglement criteria");
    verify_cmd->add_option("schedule", va.schedule, "Schedule file")->required();
    verify_cmd->add_option("--shots", va.shots, "Homodyne shots per measurement plan (0: analytic only)")
        ->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--seed", va.seed, "Random seed");
    auto *ideal = verify_cmd->add_flag("--ideal", va.ideal, "Noiseless loop and detector");
    auto *realistic = verify_cmd->add_flag("--realistic", va.realistic, "Use the loop noise model");
    ideal->excludes(realistic);
    verify_cmd->add_option("--efficiency", va.efficiency, "Detection efficiency")->check(CLI::Range(0.0, 1.0));
    verify_cmd->add_option("--loss", va.loss, "Loop loss per round trip")->check(CLI::Range(0.0, 1.0));
    verify_cmd->add_option("--jitter", va.jitter, "Loop phase jitter per round trip (deg)")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--squeeze-db", va.squeeze_db, "Source squeezing (dB)");
    verify_cmd->add_option("--antisqueeze-db", va.antisqueeze_db, "Source anti-squeezing (dB)");
    verify_cmd->add_flag("--vacuum", va.vacuum, "Replace every squeezed input with vacuum");
    verify_cmd->add_option("--csv", va.csv, "Write criterion rows as CSV");

    MemoryArgs ma;
    auto *memory_cmd = app.add_subcommand("memory", "Sweep the storage time of one half of an EPR pair");
    memory_cmd->add_option("--max-n", ma.max_n, "Largest number of storage round trips")->check(CLI::PositiveNumber);
    memory_cmd->add_option("--loss", ma.loss, "Loop loss per round trip")->check(CLI::Range(0.0, 1.0));
    memory_cmd->add_option("--jitter", ma.jitter, "Loop phase jitter per round trip (deg)")
        ->check(CLI::NonNegativeNumber);
    memory_cmd->add_option("--efficiency", ma.efficiency, "Detection efficiency")->check(CLI::Range(0.0, 1.0));
    memory_cmd->add_flag("--ideal", ma.ideal, "Noiseless loop and detector");
    memory_cmd->add_flag("--sample", ma.sample, "Estimate by homodyne sampling instead of analytically");
    memory_cmd->add_option("--shots", ma.shots, "Shots per plan when sampling")->check(CLI::Range(2, 100000000));
    memory_cmd->add_option("--seed", ma.seed, "Random seed");
    memory_cmd->add_option("--squeeze-db", ma.squeeze_db, "Source squeezing (dB)");
    memory_cmd->add_option("--antisqueeze-db", ma.antisqueeze_db, "Source anti-squeezing (dB)");
    memory_cmd->add_option("-o,--output", ma.output, "CSV file to write (default: stdout)");

    FramesArgs fa;
    auto *frames_cmd = app.add_subcommand("frames", "Synthesize homodyne trace frames and re-extract quadratures");
    frames_cmd->add_option("--schedule", fa.schedule, "Sample the outputs of this schedule (default: vacuum)");
    frames_cmd->add_option("--modes", fa.modes, "Number of modes for vacuum frames")->check(CLI::PositiveNumber);
    frames_cmd->add_option("--frames", fa.frames, "Number of frames")->check(CLI::Range(2, 10000000));
    frames_cmd->add_option("--seed", fa.seed, "Random seed");
    frames_cmd->add_option("-o,--output", fa.output, "Trace CSV to write (time_ns,value)");

    SelfcheckArgs sa;
    auto *selfcheck_cmd = app.add_subcommand("selfcheck", "Run the built-in consistency suites");
    selfcheck_cmd->add_option("--inject-fault", sa.inject_fault, "Deliberately break a component (bs-sign)");
    selfcheck_cmd->add_option("--seed", sa.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::string cmd = command_line(argc, argv);
    try {
        if (compile_cmd->parsed()) return do_compile(ca, cmd, out, err);
        if (verify_cmd->parsed()) return do_verify(va, cmd, out, err);
        if (memory_cmd->parsed()) return do_memory(ma, cmd, out, err);
        if (frames_cmd->parsed()) return do_frames(fa, cmd, out, err);
        if (selfcheck_cmd->parsed()) return do_selfcheck(sa, cmd, out, err);
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace loopsynth
