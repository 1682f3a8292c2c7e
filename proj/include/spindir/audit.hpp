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


/**
 * @file
 * Invariant suite run by the audit command: algebraic identities, Kraus
 * operator structure, positivity and the three completeness relations.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spindir/montecarlo.hpp"

namespace spindir {

struct AuditConfig {
    HalfInteger j = spin(1);
    ModelParams params;
    std::size_t eta_nodes = 64;
    std::size_t phi_nodes = 128;
    std::size_t radial_nodes = 2048;
    std::uint64_t seed = 0;
    std::size_t random_directions = 100;
    std::size_t random_outcomes = 20;
};

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool warning = false;
    std::string note;
};

struct AuditReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const;
};

/**
 * Runs every check. Grid construction failures are reported as failed
 * checks rather than thrown, so a sabotaged configuration still yields a
 * full report.
 */
AuditReport run_audit(const AuditConfig &config);

} // namespace spindir
