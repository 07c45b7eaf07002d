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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rapidborel/extension.hpp"
#include "rapidborel/kernel.hpp"
#include "rapidborel/moments.hpp"
#include "rapidborel/sector.hpp"
#include "rapidborel/weight_sequence.hpp"

namespace rapidborel::io {

using Json = nlohmann::json;

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// Finite doubles as numbers, everything else as null.
Json number(double x);
Json complex_pair(Complex z);

// Writes `doc` with two-space indentation, sorted keys and a trailing LF.
void write_json(const std::filesystem::path& path, const Json& doc);

// Comment lines "# key=value" for each top-level entry of `meta`, a header
// row, then one line per row.
void write_csv(const std::filesystem::path& path, const Json& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

Json to_json(const SectorSpec& sector);
Json to_json(const GridSpec& grid);
GridSpec parse_grid(const std::string& text);  // "200x65"

Json to_json(const LcReport& r);
Json to_json(const DcReport& r);
Json to_json(const MgReport& r);
Json to_json(const GammaDefect& r);

Json to_json(const BoundFit& fit);
Json to_json(const SandwichFit& fit);
Json to_json(const MonotonicityProbe& probe);

Json to_json(const MomentTable& table);
Json to_json(const MomentBoundFit& fit);

Json to_json(const ScaledComplex& c);
Json to_json(const FormalSeries& series);
Json to_json(const GrowthCertificate& cert);
Json to_json(const BorelSeries& borel);
Json to_json(const RemainderReport& report);
Json to_json(const RoundtripEntry& entry);

// {"tau": t, "sigma": s, "coefficients": [[re, im], ...]}. An entry may carry
// a third element, the natural log of a common scale factor, for
// coefficients outside the double range. Throws ParamError on malformed input.
FormalSeries parse_formal_series(const Json& doc);
ScaledComplex parse_coefficient(const Json& entry);

}  // namespace rapidborel::io
