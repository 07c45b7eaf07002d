// Copyright 2026 The rapidborel Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "rapidborel/io.hpp"

namespace rapidborel::cli {

struct RunConfig {
  std::string command;
  double tau = 1.0;
  double sigma = 1.5;
  double delta = 1.0;
  double rmin = 1e-3;
  double rmax = 1e3;
  std::string grid = "200x65";
  double tol = 1e-10;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::string input;

  std::vector<std::string> points;  // lambert: explicit "re,im" arguments
  std::size_t p_max = 60;           // moments: table size; extend: round-trip order
  bool fit = true;                  // moments: run the bound fit
  std::string series = "moment";    // extend: built-in series when no --input
  std::size_t length = 41;
  std::size_t n_max = 12;
  std::size_t count = 40;

  // Effective parameters of this command. The output location is left out
  // so that identical runs produce identical files wherever they are written.
  io::Json to_json() const;
  io::Json meta(const io::Json& grid_spec) const;
  std::filesystem::path path(const std::string& name) const;
  SectorSpec sector() const;
};

// Each returns the process exit code.
int cmd_lambert(const RunConfig& cfg, std::ostream& out);
int cmd_kernel(const RunConfig& cfg, std::ostream& out);
int cmd_moments(const RunConfig& cfg, std::ostream& out);
int cmd_extend(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

// One line per check, "ok" or "FAILED".
void report_line(std::ostream& out, const std::string& name, bool holds,
                 const std::string& detail);

}  // namespace rapidborel::cli
