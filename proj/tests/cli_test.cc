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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "loopsynth/schedule_io.h"

using namespace loopsynth;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "loopsynth");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Outcome o;
    o.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("loopsynth_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string &name) const {
        return (path_ / name).string();
    }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, CompileWritesScheduleAndHeader) {
    TempDir dir;
    auto path = dir.file("ghz3.json");
    auto o = run({"compile", "ghz", "--n", "3", "-o", path});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_EQ(o.out.rfind("# loopsynth compile ghz --n 3", 0), 0u) << o.out;
    EXPECT_NE(o.out.find("hardware: feasible"), std::string::npos);
    auto s = load_schedule(path);
    EXPECT_EQ(s.num_outputs(), 3u);
}

TEST(Cli, CompileToStdoutContainsJson) {
    auto o = run({"compile", "epr"});
    ASSERT_EQ(o.code, kExitOk);
    auto brace = o.out.find("\n{");
    ASSERT_NE(brace, std::string::npos);
    auto s = parse_schedule(o.out.substr(brace + 1));
    EXPECT_EQ(s.bins.size(), 3u);
}

TEST(Cli, CompileErrors) {
    EXPECT_EQ(run({"compile", "ghz"}).code, kExitUsage);
    EXPECT_EQ(run({"compile", "torus", "--n", "3"}).code, kExitUsage);
    EXPECT_EQ(run({"compile", "ghz", "--n", "0"}).code, kExitUsage);
    EXPECT_EQ(run({"compile", "ghz", "--n", "4"}).code, kExitOk);
    auto o = run({"compile", "ghz", "--n", "4", "--strict-hardware"});
    EXPECT_EQ(o.code, kExitInfeasible);
    EXPECT_NE(o.out.find("hardware: INFEASIBLE"), std::string::npos);
}

TEST(Cli, CompileLargeLinearCluster) {
    TempDir dir;
    auto path = dir.file("c1008.json");
    ASSERT_EQ(run({"compile", "cluster1d", "--n", "1008", "-o", path}).code, kExitOk);
    EXPECT_EQ(load_schedule(path).bins.size(), 1009u);
}

TEST(Cli, VerifyCsvFormat) {
    TempDir dir;
    auto sched = dir.file("epr.json");
    auto csv = dir.file("epr.csv");
    ASSERT_EQ(run({"compile", "epr", "-o", sched}).code, kExitOk);
    auto o = run({"verify", sched, "--ideal", "--shots", "1000", "--seed", "3", "--csv", csv});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    auto rows = lines(slurp(csv));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].rfind("# loopsynth verify", 0), 0u);
    EXPECT_EQ(rows[1], "criterion,analytic,sampled,stderr,pass");
    EXPECT_EQ(rows[2].rfind("var(x1-x2)+var(p1+p2),0.316228,", 0), 0u) << rows[2];
    EXPECT_EQ(rows[2].substr(rows[2].size() - 5), ",true");
}

TEST(Cli, VerifyAnalyticOnlyLeavesSampledEmpty) {
    TempDir dir;
    auto sched = dir.file("epr.json");
    auto csv = dir.file("epr.csv");
    ASSERT_EQ(run({"compile", "epr", "-o", sched}).code, kExitOk);
    ASSERT_EQ(run({"verify", sched, "--shots", "0", "--vacuum", "--csv", csv}).code, kExitOk);
    auto rows = lines(slurp(csv));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2], "var(x1-x2)+var(p1+p2),1.000000,,,false");
}

TEST(Cli, VerifyIsDeterministic) {
    TempDir dir;
    auto sched = dir.file("lin3.json");
    ASSERT_EQ(run({"compile", "cluster1d", "--n", "3", "-o", sched}).code, kExitOk);
    auto a = run({"verify", sched, "--shots", "500", "--seed", "42"});
    auto b = run({"verify", sched, "--shots", "500", "--seed", "42"});
    auto c = run({"verify", sched, "--shots", "500", "--seed", "43"});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, VerifyErrors) {
    TempDir dir;
    EXPECT_EQ(run({"verify", dir.file("missing.json")}).code, kExitUsage);
    auto bad = dir.file("bad.json");
    {
        std::ofstream(bad) << "{\"bins\": [{\"T\": 2.0}]}";
    }
    auto o = run({"verify", bad});
    EXPECT_EQ(o.code, kExitUsage);
    EXPECT_NE(o.err.find("bins[0].T"), std::string::npos) << o.err;
    auto sched = dir.file("epr.json");
    ASSERT_EQ(run({"compile", "epr", "-o", sched}).code, kExitOk);
    EXPECT_EQ(run({"verify", sched, "--ideal", "--realistic"}).code, kExitUsage);
    EXPECT_EQ(run({"verify", sched, "--efficiency", "1.5"}).code, kExitUsage);
}

TEST(Cli, MemoryCsv) {
    auto o = run({"memory", "--max-n", "4"});
    ASSERT_EQ(o.code, kExitOk);
    auto rows = lines(o.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].rfind("# loopsynth memory", 0), 0u);
    EXPECT_EQ(rows[1], "n,delay_ns,inseparability,stderr");
    EXPECT_EQ(rows[2].rfind("1,66,", 0), 0u);
    EXPECT_EQ(rows[5].rfind("4,264,", 0), 0u);
    auto s1 = run({"memory", "--max-n", "3", "--sample", "--shots", "300", "--seed", "5"});
    auto s2 = run({"memory", "--max-n", "3", "--sample", "--shots", "300", "--seed", "5"});
    EXPECT_EQ(s1.out, s2.out);
}

TEST(Cli, FramesReportsVacuumFloor) {
    TempDir dir;
    auto trace = dir.file("frames.csv");
    auto o = run({"frames", "--modes", "2", "--frames", "2000", "--seed", "1", "-o", trace});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_NE(o.out.find("mode,extracted_variance"), std::string::npos);
    EXPECT_EQ(lines(slurp(trace)).front(), "time_ns,value");
}

TEST(Cli, SelfcheckExitCodes) {
    auto ok = run({"selfcheck"});
    EXPECT_EQ(ok.code, kExitOk) << ok.out;
    EXPECT_NE(ok.out.find("PASS loop-chain equivalence"), std::string::npos);
    auto bad = run({"selfcheck", "--inject-fault", "bs-sign"});
    EXPECT_EQ(bad.code, kExitSelfcheckFailed);
    EXPECT_NE(bad.err.find("selfcheck failed: loop-chain equivalence"), std::string::npos);
    EXPECT_EQ(run({"selfcheck", "--inject-fault", "nonsense"}).code, kExitUsage);
}
