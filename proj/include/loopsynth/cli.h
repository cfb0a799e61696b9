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

#ifndef LOOPSYNTH_CLI_H
#define LOOPSYNTH_CLI_H

#include <ostream>

namespace loopsynth {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInfeasible = 2,
    kExitSelfcheckFailed = 3,
};

/// Entry point of the `loopsynth` tool:
///
///   loopsynth compile <epr|ghz|cluster1d|star|infinite> [--n N] [-o file] [--strict-hardware]
///   loopsynth verify <schedule.json> [--shots 5000] [--seed S] [--ideal|--realistic]
///                    [--efficiency E] [--csv file]
///   loopsynth memory [--max-n 11] [--loss 0.07] [--jitter 7] [--sample --shots N] [-o file]
///   loopsynth frames [--schedule file] [--frames N] [-o traces.csv]
///   loopsynth selfcheck [--inject-fault bs-sign]
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace loopsynth

#endif
