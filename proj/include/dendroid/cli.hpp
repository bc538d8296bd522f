// Copyright 2026 The Dendroid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dendroid/error.hpp"
#include "dendroid/quadrature.hpp"

namespace dendroid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string data_path;
  std::string schema_path;
  std::string criterion = "mdl";
  std::optional<double> d_n;
  QuadratureSpec quad;
  std::string format;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::string model_path;
  std::string model_out_path;
  std::string mi_table_path;
  std::optional<std::size_t> n_override;
  unsigned threads = 1;
};

/// Exit status for an error raised while running a command.
int exit_code_for(ErrorCode code);

/// Entry point behind the `dendroid` executable. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dendroid::cli
