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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "loopsynth/cli.h"
#include "loopsynth/compiler.h"
#include "loopsynth/gaussian_state.h"
#include "loopsynth/hardware.h"
#include "loopsynth/loop_engine.h"
#include "loopsynth/nullifier.h"
#include "loopsynth/schedule_io.h"
#include "loopsynth/selfcheck.h"
#include "loopsynth/verifier.h"
#include "loopsynth/waveform.h"

namespace py = pybind11;
using namespace loopsynth;

namespace {

std::vector<RunRecord> collect(LoopRun run) {
    std::vector<RunRecord> out;
    while (auto rec = run.next()) {
        out.push_back(std::move(*rec));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-multiplexed loop simulator, schedule compiler and entanglement verifier";

    py::register_exception<ScheduleParseError>(m, "ScheduleParseError", PyExc_ValueError);

    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("mean"), py::arg("cov"))
        .def_property_readonly("mean", &GaussianState::mean)
        .def_property_readonly("cov", &GaussianState::cov)
        .def_property_readonly("num_modes", &GaussianState::num_modes)
        .def("quadrature_variance", &GaussianState::quadrature_variance, py::arg("mode"), py::arg("phi_deg"))
        .def("is_psd", &GaussianState::is_psd, py::arg("tol") = kPsdTolerance)
        .def("approx_equal", &GaussianState::approx_equal, py::arg("other"), py::arg("tol"));

    py::class_<SqueezerSpec>(m, "SqueezerSpec")
        .def(py::init([](double s, double a) { return SqueezerSpec{s, a}; }), py::arg("squeeze_db") = 5.0,
             py::arg("antisqueeze_db") = 8.0)
        .def_readwrite("squeeze_db", &SqueezerSpec::squeeze_db)
        .def_readwrite("antisqueeze_db", &SqueezerSpec::antisqueeze_db)
        .def_property_readonly("var_x", &SqueezerSpec::var_x)
        .def_property_readonly("var_p", &SqueezerSpec::var_p)
        .def_static("experimental", &SqueezerSpec::experimental)
        .def_static("pure", &SqueezerSpec::pure, py::arg("db"));

    m.def("vacuum", &vacuum, py::arg("n"));
    m.def("squeezed_vacuum", &squeezed_vacuum, py::arg("spec"));
    m.def("apply_phase", &apply_phase, py::arg("state"), py::arg("mode"), py::arg("theta_deg"));
    m.def("apply_beamsplitter", &apply_beamsplitter, py::arg("state"), py::arg("i"), py::arg("j"),
          py::arg("transmissivity"));
    m.def("apply_loss", &apply_loss, py::arg("state"), py::arg("mode"), py::arg("eta"));
    m.def("apply_dephasing", &apply_dephasing, py::arg("state"), py::arg("mode"), py::arg("sigma_deg"));
    m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
    m.def(
        "marginalize",
        [](const GaussianState &s, const std::vector<std::size_t> &keep) { return marginalize(s, keep); },
        py::arg("state"), py::arg("keep"));

    py::enum_<Source>(m, "Source")
        .value("squeezer", Source::squeezer)
        .value("vacuum", Source::vacuum)
        .value("blocked", Source::blocked);
    py::enum_<NoiseMode>(m, "NoiseMode").value("ideal", NoiseMode::ideal).value("realistic", NoiseMode::realistic);

    py::class_<NoiseConfig>(m, "NoiseConfig")
        .def(py::init<>())
        .def_readwrite("loop_loss_per_trip", &NoiseConfig::loop_loss_per_trip)
        .def_readwrite("phase_jitter_deg_per_trip", &NoiseConfig::phase_jitter_deg_per_trip)
        .def_readwrite("detection_efficiency", &NoiseConfig::detection_efficiency)
        .def_readwrite("mode", &NoiseConfig::mode)
        .def_static("ideal", &NoiseConfig::ideal);

    py::class_<BinSetting>(m, "BinSetting")
        .def(py::init([](double T, double theta, double phi, Source src) { return BinSetting{T, theta, phi, src}; }),
             py::arg("T"), py::arg("theta_deg") = 0.0, py::arg("phi_deg") = 0.0, py::arg("source") = Source::squeezer)
        .def_readwrite("T", &BinSetting::T)
        .def_readwrite("theta_deg", &BinSetting::theta_deg)
        .def_readwrite("phi_deg", &BinSetting::phi_deg)
        .def_readwrite("source", &BinSetting::source)
        .def("__eq__", [](const BinSetting &a, const BinSetting &b) { return a == b; });

    py::class_<ControlSchedule>(m, "ControlSchedule")
        .def(py::init<>())
        .def_readwrite("tau_ns", &ControlSchedule::tau_ns)
        .def_readwrite("bins", &ControlSchedule::bins)
        .def_readwrite("noise", &ControlSchedule::noise)
        .def_property_readonly("num_outputs", &ControlSchedule::num_outputs)
        .def("validate", &ControlSchedule::validate)
        .def("to_json", &serialize_schedule)
        .def_static("from_json", &parse_schedule, py::arg("text"))
        .def("__eq__", [](const ControlSchedule &a, const ControlSchedule &b) { return a == b; });

    py::enum_<TargetKind>(m, "TargetKind")
        .value("epr", TargetKind::epr)
        .value("ghz", TargetKind::ghz)
        .value("linear_cluster", TargetKind::linear_cluster)
        .value("star_cluster", TargetKind::star_cluster)
        .value("infinite_cluster", TargetKind::infinite_cluster);

    py::class_<TargetState>(m, "TargetState")
        .def_readonly("kind", &TargetState::kind)
        .def_readonly("n", &TargetState::n)
        .def_static("epr", &TargetState::epr)
        .def_static("ghz", &TargetState::ghz, py::arg("n"))
        .def_static("linear_cluster", &TargetState::linear_cluster, py::arg("n"))
        .def_static("star_cluster", &TargetState::star_cluster, py::arg("n"))
        .def_static("infinite_cluster", &TargetState::infinite_cluster, py::arg("length"))
        .def("__repr__", &TargetState::describe)
        .def("__eq__", [](const TargetState &a, const TargetState &b) { return a == b; });

    m.def("compile", &compile, py::arg("target"));
    m.def("identify_target", &identify_target, py::arg("schedule"));
    m.def("fibonacci", &fibonacci, py::arg("k"));
    m.def("golden_transmissivity", &golden_transmissivity);

    py::class_<LevelReport>(m, "LevelReport")
        .def_readonly("parameter", &LevelReport::parameter)
        .def_readonly("required", &LevelReport::required)
        .def_readonly("feasible", &LevelReport::feasible)
        .def_readonly("v1", &LevelReport::v1)
        .def_readonly("v2", &LevelReport::v2);
    py::class_<FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("feasible", &FeasibilityReport::feasible)
        .def_readonly("delta", &FeasibilityReport::delta)
        .def_readonly("theta", &FeasibilityReport::theta)
        .def("summary", &FeasibilityReport::summary);
    m.def(
        "hardware_check", [](const ControlSchedule &s) { return hardware_check(s); }, py::arg("schedule"));

    py::class_<ModeWindow>(m, "ModeWindow")
        .def_readonly("state", &ModeWindow::state)
        .def_readonly("labels", &ModeWindow::labels);
    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("mode", &RunRecord::mode)
        .def_readonly("exit_bin", &RunRecord::exit_bin)
        .def_readonly("window", &RunRecord::window);
    m.def(
        "run_loop",
        [](const ControlSchedule &s, const SqueezerSpec &src, std::size_t window) {
            LoopOptions opts;
            opts.window = window;
            return collect(run_loop(s, src, opts));
        },
        py::arg("schedule"), py::arg("source") = SqueezerSpec::experimental(), py::arg("window") = 8);
    m.def("run_unrolled", &run_unrolled, py::arg("schedule"), py::arg("source") = SqueezerSpec::experimental());
    m.def("memory_experiment", &memory_experiment, py::arg("n"), py::arg("source") = SqueezerSpec::experimental(),
          py::arg("noise") = NoiseConfig{});

    py::class_<Criterion>(m, "Criterion")
        .def_readonly("name", &Criterion::name)
        .def_readonly("threshold", &Criterion::threshold)
        .def("vacuum_value", &Criterion::vacuum_value);
    m.def("nullifiers_for", &nullifiers_for, py::arg("target"));
    m.def(
        "variance",
        [](const GaussianState &s, const std::string &expr) { return variance_analytic(s, NullifierSpec::parse(expr)); },
        py::arg("state"), py::arg("expression"));

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("value", &Estimate::value)
        .def_readonly("std_error", &Estimate::std_error)
        .def_readonly("shots", &Estimate::shots);
    py::class_<CriterionResult>(m, "CriterionResult")
        .def_readonly("name", &CriterionResult::name)
        .def_readonly("analytic", &CriterionResult::analytic)
        .def_readonly("sampled", &CriterionResult::sampled)
        .def_readonly("threshold", &CriterionResult::threshold)
        .def_readonly("passed", &CriterionResult::pass);
    m.def(
        "evaluate_schedule",
        [](const ControlSchedule &s, const TargetState &t, const SqueezerSpec &src, int shots, std::uint64_t seed) {
            return evaluate_schedule(s, t, src, {shots, seed});
        },
        py::arg("schedule"), py::arg("target"), py::arg("source") = SqueezerSpec::experimental(),
        py::arg("shots") = kDefaultShots, py::arg("seed") = 1);

    py::class_<Calibration>(m, "Calibration")
        .def_readonly("efficiency", &Calibration::efficiency)
        .def_readonly("sum_squared", &Calibration::sum_squared)
        .def_readonly("max_abs_residual", &Calibration::max_abs_residual);
    m.def(
        "calibrate_table",
        [](const SqueezerSpec &src, const NoiseConfig &noise) { return calibrate_efficiency(reference_rows(), src, noise); },
        py::arg("source") = SqueezerSpec::experimental(), py::arg("noise") = NoiseConfig{});

    py::class_<WaveformConfig>(m, "WaveformConfig")
        .def(py::init<>())
        .def_readwrite("sample_rate_hz", &WaveformConfig::sample_rate_hz)
        .def_readwrite("frame_T_ns", &WaveformConfig::frame_T_ns)
        .def_readwrite("gamma_per_s", &WaveformConfig::gamma_per_s)
        .def_readwrite("tau_ns", &WaveformConfig::tau_ns)
        .def_readwrite("t0_ns", &WaveformConfig::t0_ns);
    m.def("orthogonality_matrix", &orthogonality_matrix, py::arg("config"), py::arg("k_max"));

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("detail", &CheckResult::detail);
    m.def(
        "selfcheck", [](std::uint64_t seed) { return run_selfcheck({seed, 200, false}); }, py::arg("seed") = 2026);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "loopsynth");
            std::vector<const char *> argv;
            for (const auto &a : args) {
                argv.push_back(a.c_str());
            }
            std::ostringstream out, err;
            int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
