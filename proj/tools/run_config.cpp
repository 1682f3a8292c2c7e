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


#include "run_config.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace spindir_cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        parts.push_back(item);
    }
    return parts;
}

double parse_real(const std::string &s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError("not a number: '" + s + "'");
    }
    return v;
}

int parse_int(const std::string &s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError("not an integer: '" + s + "'");
    }
    return v;
}

std::vector<double> read_state_file(const std::string &path, int twice_j) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open state file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception &e) {
        throw UsageError("state file '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        const int file_j = doc.at("twice_j").get<int>();
        if (file_j != twice_j) {
            throw UsageError("state file twice_j=" + std::to_string(file_j) +
                             " does not match --j2=" + std::to_string(twice_j));
        }
        std::vector<double> entries;
        for (const auto &z : doc.at("entries")) {
            entries.push_back(z.at("re").get<double>());
            entries.push_back(z.at("im").get<double>());
        }
        const auto d = static_cast<std::size_t>(twice_j + 1);
        if (entries.size() != 2 * d * d) {
            throw UsageError("state file must hold (twice_j+1)^2 entries");
        }
        return entries;
    } catch (const json::exception &e) {
        throw UsageError("state file '" + path + "' is malformed: " + e.what());
    }
}

ordered_json state_to_json(const StateSpec &s) {
    ordered_json j;
    j["kind"] = s.kind;
    if (s.kind == "basis" || s.kind == "rotated") {
        j["m_times_2"] = s.twice_m;
    }
    if (s.kind == "coherent" || s.kind == "rotated") {
        j["theta"] = s.theta;
        j["phi"] = s.phi;
    }
    if (s.kind == "matrix") {
        ordered_json entries = ordered_json::array();
        for (std::size_t i = 0; i + 1 < s.entries.size(); i += 2) {
            entries.push_back({{"re", s.entries[i]}, {"im", s.entries[i + 1]}});
        }
        j["entries"] = entries;
    }
    return j;
}

StateSpec state_from_json(const json &j) {
    StateSpec s;
    s.kind = j.at("kind").get<std::string>();
    s.twice_m = j.value("m_times_2", 0);
    s.theta = j.value("theta", 0.0);
    s.phi = j.value("phi", 0.0);
    if (j.contains("entries")) {
        for (const auto &z : j.at("entries")) {
            s.entries.push_back(z.at("re").get<double>());
            s.entries.push_back(z.at("im").get<double>());
        }
    }
    return s;
}

} // namespace

StateSpec StateSpec::parse(const std::string &text, int twice_j) {
    StateSpec s;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    const auto args = split(tail, ',');
    s.kind = head;
    if (head == "mixed" && colon == std::string::npos) {
        return s;
    }
    if (head == "basis" && args.size() == 1) {
        s.twice_m = parse_int(args[0]);
    } else if (head == "coherent" && args.size() == 2) {
        s.theta = parse_real(args[0]);
        s.phi = parse_real(args[1]);
    } else if (head == "rotated" && args.size() == 3) {
        s.twice_m = parse_int(args[0]);
        s.theta = parse_real(args[1]);
        s.phi = parse_real(args[2]);
    } else if (head == "file" && !tail.empty()) {
        s.kind = "matrix";
        s.entries = read_state_file(tail, twice_j);
    } else {
        throw UsageError("bad state spec '" + text +
                         "' (basis:M2 | coherent:T,P | rotated:M2,T,P | mixed | "
                         "file:PATH)");
    }
    return s;
}

ordered_json to_json(const RunConfig &c) {
    ordered_json j;
    j["command"] = c.command;
    j["twice_j"] = c.twice_j;
    j["t"] = c.t;
    j["lambda"] = c.lambda;
    j["eta_nodes"] = c.eta_nodes;
    j["phi_nodes"] = c.phi_nodes;
    j["radial_nodes"] = c.radial_nodes;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["format"] = c.format;
    j["tolerances"] = {{"monotone_slack", c.tolerances.monotone_slack},
                       {"state_trace", c.tolerances.state_trace}};
    j["x"] = c.x;
    j["theta"] = c.theta;
    j["phi"] = c.phi;
    j["lambdas"] = c.lambdas;
    j["count"] = c.count;
    j["model"] = c.model;
    j["state"] = state_to_json(c.state);
    return j;
}

RunConfig config_from_json(const json &j) {
    RunConfig c;
    try {
        c.command = j.value("command", c.command);
        c.twice_j = j.value("twice_j", c.twice_j);
        c.t = j.value("t", c.t);
        c.lambda = j.value("lambda", c.lambda);
        c.eta_nodes = j.value("eta_nodes", c.eta_nodes);
        c.phi_nodes = j.value("phi_nodes", c.phi_nodes);
        c.radial_nodes = j.value("radial_nodes", c.radial_nodes);
        c.seed = j.value("seed", c.seed);
        c.out = j.value("out", c.out);
        c.format = j.value("format", c.format);
        if (j.contains("tolerances")) {
            const auto &t = j.at("tolerances");
            c.tolerances.monotone_slack =
                t.value("monotone_slack", c.tolerances.monotone_slack);
            c.tolerances.state_trace = t.value("state_trace", c.tolerances.state_trace);
        }
        c.x = j.value("x", c.x);
        c.theta = j.value("theta", c.theta);
        c.phi = j.value("phi", c.phi);
        c.lambdas = j.value("lambdas", c.lambdas);
        c.count = j.value("count", c.count);
        c.model = j.value("model", c.model);
        if (j.contains("state")) {
            c.state = state_from_json(j.at("state"));
        }
    } catch (const json::exception &e) {
        throw UsageError(std::string("invalid config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string marker = "# config: ";
    try {
        if (text.rfind(marker, 0) == 0) {
            const auto end = text.find('\n');
            return config_from_json(json::parse(text.substr(marker.size(), end - marker.size())));
        }
        const json doc = json::parse(text);
        return config_from_json(doc.contains("config") ? doc.at("config") : doc);
    } catch (const json::exception &e) {
        throw UsageError("config '" + path + "' is not valid: " + e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::string timestamp_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace spindir_cli
