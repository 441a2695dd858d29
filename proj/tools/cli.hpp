// Copyright 2026 The sparseswaps Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sparseswaps::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitResource = 3,
};

// Entry point shared by the binary and the tests. `args` excludes the
// program name; the first element is the subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Appends "--key value" tokens for every key of the JSON object in the file
// named by --config that is not already given on the command line.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args);

}  // namespace sparseswaps::cli
