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


#pragma once

#include <stdexcept>
#include <string>

#include "run_config.hpp"
#include "spindir/spindir.h"

namespace spindir_cli {

/// Failure reported by the library, carrying its status code.
class ApiError : public std::runtime_error {
  public:
    ApiError(sd_status status, const std::string &what)
        : std::runtime_error(what), status_(status) {}
    [[nodiscard]] sd_status status() const { return status_; }

  private:
    sd_status status_;
};

/// Runs config.command and writes its outputs; returns the exit code.
int run_command(const RunConfig &config);

} // namespace spindir_cli
