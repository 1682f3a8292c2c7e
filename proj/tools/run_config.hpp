// Copyright 2026 The spindir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Run configuration for the spindir command line: the complete set of
// inputs that determines a command's payload. Every output embeds it.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace spindir_cli {

/// Bad user input: flags, config files, state files.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct StateSpec {
    std::string kind = "mixed"; // basis | coherent | rotated | mixed | matrix
    int twice_m = 0;
    double theta = 0.0;
    double phi = 0.0;
    /// Row-major (re, im) pairs for kind == "matrix".
    std::vector<double> entries;

    /// Parses basis:<m2> | coherent:<theta>,<phi> | rotated:<m2>,<theta>,<phi>
    /// | mixed | file:<path>. File states are inlined as kind "matrix".
    static StateSpec parse(const std::string &text, int twice_j);
};

struct Tolerances {
    double monotone_slack = 1e-12;
    double state_trace = 1e-8;
};

struct RunConfig {
    std::string command;
    int twice_j = 1;
    double t = 1.0;
    double lambda = 0.1;
    std::size_t eta_nodes = 64;
    std::size_t phi_nodes = 128;
    std::size_t radial_nodes = 2048;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    Tolerances tolerances;

    // command parameters
    double x = 0.25;
    double theta = 0.0;
    double phi = 0.0;
    std::vector<double> lambdas{0.1, 0.05, 0.02};
    std::size_t count = 10000;
    std::string model = "limit";
    StateSpec state;
};

nlohmann::ordered_json to_json(const RunConfig &config);
RunConfig config_from_json(const nlohmann::json &j);

/// Reads a config from a bare config JSON, a JSON output with a "config"
/// field, or a CSV output with a "# config:" header line.
RunConfig load_config(const std::string &path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Current UTC time, ISO 8601.
std::string timestamp_now();

} // namespace spindir_cli
