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

#include "loopsynth/schedule_io.h"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace loopsynth {

namespace {

using nlohmann::json;

void reject_unknown(const json &obj, const std::string &path, std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (auto a : allowed) {
            known = known || it.key() == a;
        }
        if (!known) {
            std::string where = path.empty() ? it.key() : path + "." + it.key();
            throw ScheduleParseError(where, "unknown field");
        }
    }
}

const json &require_object(const json &value, const std::string &path) {
    if (!value.is_object()) {
        throw ScheduleParseError(path.empty() ? "document" : path, "expected an object");
    }
    return value;
}

double read_number(const json &obj, const std::string &path, std::string_view key, double fallback, bool required) {
    std::string where = path.empty() ? std::string(key) : path + "." + std::string(key);
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) {
            throw ScheduleParseError(where, "missing required field");
        }
        return fallback;
    }
    if (!it->is_number()) {
        throw ScheduleParseError(where, fmt::format("expected a number, got {}", it->dump()));
    }
    double v = it->get<double>();
    if (!std::isfinite(v)) {
        throw ScheduleParseError(where, "number is not finite");
    }
    return v;
}

std::string read_string(const json &obj, const std::string &path, std::string_view key, std::string fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_string()) {
        throw ScheduleParseError(path + "." + std::string(key), fmt::format("expected a string, got {}", it->dump()));
    }
    return it->get<std::string>();
}

NoiseConfig read_noise(const json &value) {
    const std::string path = "noise";
    require_object(value, path);
    reject_unknown(value, path, {"loop_loss_per_trip", "phase_jitter_deg_per_trip", "detection_efficiency", "mode"});
    NoiseConfig n;
    n.loop_loss_per_trip = read_number(value, path, "loop_loss_per_trip", n.loop_loss_per_trip, false);
    n.phase_jitter_deg_per_trip =
        read_number(value, path, "phase_jitter_deg_per_trip", n.phase_jitter_deg_per_trip, false);
    n.detection_efficiency = read_number(value, path, "detection_efficiency", n.detection_efficiency, false);
    std::string mode = read_string(value, path, "mode", "realistic");
    auto parsed = parse_noise_mode(mode);
    if (!parsed) {
        throw ScheduleParseError("noise.mode", fmt::format("unknown mode '{}' (expected ideal or realistic)", mode));
    }
    n.mode = *parsed;
    try {
        n.validate();
    } catch (const std::invalid_argument &e) {
        throw ScheduleParseError(path, e.what());
    }
    return n;
}

BinSetting read_bin(const json &value, std::size_t index) {
    const std::string path = fmt::format("bins[{}]", index);
    require_object(value, path);
    reject_unknown(value, path, {"T", "theta_deg", "phi_deg", "source"});
    BinSetting b;
    b.T = read_number(value, path, "T", 0.0, true);
    if (!(b.T >= 0.0 && b.T <= 1.0)) {
        throw ScheduleParseError(path + ".T", fmt::format("transmissivity {} outside [0, 1] in bin {}", b.T, index));
    }
    b.theta_deg = read_number(value, path, "theta_deg", 0.0, false);
    b.phi_deg = read_number(value, path, "phi_deg", 0.0, false);
    std::string source = read_string(value, path, "source", "squeezer");
    auto parsed = parse_source(source);
    if (!parsed) {
        throw ScheduleParseError(path + ".source",
                                 fmt::format("unknown source '{}' (expected squeezer, vacuum or blocked)", source));
    }
    b.source = *parsed;
    return b;
}

std::string position_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return fmt::format("line {}, column {}", line, column);
}

}  // namespace

ControlSchedule parse_schedule(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw ScheduleParseError(position_of(text, e.byte), pos == std::string::npos ? msg : msg.substr(pos));
    }
    require_object(doc, "");
    reject_unknown(doc, "", {"tau_ns", "noise", "bins"});

    ControlSchedule s;
    s.tau_ns = read_number(doc, "", "tau_ns", s.tau_ns, false);
    if (!(s.tau_ns > 0.0)) {
        throw ScheduleParseError("tau_ns", fmt::format("must be positive, got {}", s.tau_ns));
    }
    if (auto it = doc.find("noise"); it != doc.end()) {
        s.noise = read_noise(*it);
    }
    auto bins = doc.find("bins");
    if (bins == doc.end()) {
        throw ScheduleParseError("bins", "missing required field");
    }
    if (!bins->is_array()) {
        throw ScheduleParseError("bins", "expected an array of bin objects");
    }
    for (std::size_t i = 0; i < bins->size(); ++i) {
        s.bins.push_back(read_bin((*bins)[i], i));
    }
    if (s.bins.size() < 2) {
        throw ScheduleParseError("bins", fmt::format("a schedule needs at least 2 bins, got {}", s.bins.size()));
    }
    try {
        s.validate();
    } catch (const std::invalid_argument &e) {
        throw ScheduleParseError("schedule", e.what());
    }
    return s;
}

std::string serialize_schedule(const ControlSchedule &schedule) {
    json doc = json::object();
    doc["tau_ns"] = schedule.tau_ns;
    doc["noise"] = {
        {"loop_loss_per_trip", schedule.noise.loop_loss_per_trip},
        {"phase_jitter_deg_per_trip", schedule.noise.phase_jitter_deg_per_trip},
        {"detection_efficiency", schedule.noise.detection_efficiency},
        {"mode", std::string(to_string(schedule.noise.mode))},
    };
    json bins = json::array();
    for (const auto &b : schedule.bins) {
        bins.push_back({
            {"T", b.T},
            {"theta_deg", b.theta_deg},
            {"phi_deg", b.phi_deg},
            {"source", std::string(to_string(b.source))},
        });
    }
    doc["bins"] = std::move(bins);
    return doc.dump(2) + "\n";
}

ControlSchedule load_schedule(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open schedule file '{}'", path));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schedule(buf.str());
}

void save_schedule(const ControlSchedule &schedule, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write schedule file '{}'", path));
    }
    out << serialize_schedule(schedule);
}

}  // namespace loopsynth
