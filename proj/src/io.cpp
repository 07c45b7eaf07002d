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

#include "rapidborel/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "rapidborel/errors.hpp"

namespace rapidborel::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json complex_pair(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

namespace {
std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParamError("cannot open " + path.string() + " for writing");
  return out;
}
}  // namespace

void write_json(const std::filesystem::path& path, const Json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

void write_csv(const std::filesystem::path& path, const Json& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_output(path);
  for (const auto& [key, value] : meta.items()) {
    out << "# " << key << '=' << value.dump() << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw Error("CSV row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

Json to_json(const SectorSpec& s) {
  return {{"opening_delta", number(s.opening_delta)},
          {"r_min", number(s.r_min)},
          {"r_max", number(s.r_max)}};
}

Json to_json(const GridSpec& g) {
  return {{"radial", g.radial}, {"angular", g.angular}};
}

GridSpec parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ParamError("grid must look like 200x65");
  GridSpec g;
  auto parse = [&](std::string_view part, std::size_t& v) {
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size() || v == 0) {
      throw ParamError("grid must look like 200x65, got '" + text + "'");
    }
  };
  const std::string_view view(text);
  parse(view.substr(0, x), g.radial);
  parse(view.substr(x + 1), g.angular);
  return g;
}

namespace {
Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}
}  // namespace

Json to_json(const LcReport& r) {
  Json j = {{"horizon", r.horizon}, {"holds", r.holds}};
  j["first_violation"] = r.first_violation ? Json(*r.first_violation) : Json(nullptr);
  return j;
}

Json to_json(const DcReport& r) {
  return {{"horizon", r.horizon},
          {"log_constant", number(r.log_constant)},
          {"argmax", r.argmax},
          {"log_profile", numbers(r.log_profile)}};
}

Json to_json(const MgReport& r) {
  return {{"horizon", r.horizon},
          {"log_profile", numbers(r.log_profile)},
          {"unbounded_trend", r.unbounded_trend}};
}

Json to_json(const GammaDefect& r) {
  return {{"gamma", number(r.gamma)},
          {"log_defect", number(r.log_defect)},
          {"log_defect_by_horizon", numbers(r.log_defect_by_horizon)}};
}

Json to_json(const BoundFit& f) {
  return {{"kind", f.kind},
          {"tau", number(f.tau)},
          {"sigma", number(f.sigma)},
          {"sector", to_json(f.sector)},
          {"grid", to_json(f.grid)},
          {"lower_c", number(f.lower_c)},
          {"lower_k", number(f.lower_k)},
          {"upper_c", number(f.upper_c)},
          {"upper_k", number(f.upper_k)},
          {"max_residual", number(f.max_residual)},
          {"points", f.points}};
}

Json to_json(const SandwichFit& f) {
  return {{"lower", number(f.lower)},
          {"upper", number(f.upper)},
          {"log_ratio", numbers(f.log_ratio)}};
}

Json to_json(const MonotonicityProbe& p) {
  return {{"min_derivative", number(p.min_derivative)},
          {"argmin", number(p.argmin)},
          {"tail_x", number(p.tail_x)},
          {"tail_derivative", number(p.tail_derivative)}};
}

Json to_json(const MomentTable& t) {
  Json entries = Json::array();
  for (std::size_t p = 0; p < t.entries().size(); ++p) {
    entries.push_back({{"p", p},
                       {"log_value", number(t.entries()[p].log_value)},
                       {"rel_error", number(t.entries()[p].rel_error)}});
  }
  return {{"tau", number(t.params().tau())},
          {"sigma", number(t.params().sigma())},
          {"p_max", t.p_max()},
          {"entries", entries}};
}

Json to_json(const MomentBoundFit& f) {
  return {{"log_b1", number(f.log_b1)},
          {"log_b2", number(f.log_b2)},
          {"b1", number(f.b1())},
          {"b2", number(f.b2())},
          {"log_m0", number(f.log_m0)},
          {"profile", numbers(f.profile)}};
}

Json to_json(const ScaledComplex& c) {
  if (c.log_scale == 0.0) return complex_pair(c.mantissa);
  return Json::array({number(c.mantissa.real()), number(c.mantissa.imag()),
                      number(c.log_scale)});
}

Json to_json(const FormalSeries& s) {
  Json coeffs = Json::array();
  for (const auto& c : s.coefficients()) coeffs.push_back(to_json(c));
  return {{"tau", number(s.sequence().tau())},
          {"sigma", number(s.sequence().sigma())},
          {"coefficients", coeffs}};
}

Json to_json(const GrowthCertificate& c) {
  return {{"c1", number(c.c1())}, {"log_c1", number(c.log_c1)}, {"d1", number(c.d1)}};
}

Json to_json(const BorelSeries& b) {
  Json gamma = Json::array();
  for (Complex g : b.gamma) gamma.push_back(complex_pair(g));
  return {{"gamma", gamma},
          {"c2", number(b.c2)},
          {"d2", number(b.d2)},
          {"d1_factor", number(b.d1_factor)},
          {"measured_rate", number(b.measured_rate)}};
}

Json to_json(const RemainderReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"n", e.n},
                       {"z", complex_pair(e.z)},
                       {"remainder", number(e.remainder)},
                       {"log_ratio", number(e.log_ratio)},
                       {"cancellation_flag", e.cancellation_flag},
                       {"route_gap", number(e.route_gap)}});
  }
  return {{"sector", to_json(r.sector)},
          {"n_max", r.n_max},
          {"c1", number(r.c1)},
          {"d1", number(r.d1)},
          {"r0", number(r.r0)},
          {"d", number(r.d)},
          {"b", number(r.b)},
          {"k6", number(r.k6)},
          {"d1_factor", number(r.d1_factor)},
          {"d2_factor", number(r.d2_factor)},
          {"c", number(r.c)},
          {"log_sup_ratio", numbers(r.log_sup_ratio)},
          {"flagged", r.flagged},
          {"entries", entries}};
}

Json to_json(const RoundtripEntry& e) {
  return {{"p", e.p},
          {"radius", number(e.radius)},
          {"estimate_coarse", complex_pair(e.estimate_coarse)},
          {"estimate_fine", complex_pair(e.estimate_fine)},
          {"extrapolated", complex_pair(e.extrapolated)},
          {"expected", complex_pair(e.expected)},
          {"abs_error", number(e.abs_error)},
          {"rel_error", number(e.rel_error)}};
}

ScaledComplex parse_coefficient(const Json& entry) {
  if (!entry.is_array() || entry.size() < 2 || entry.size() > 3) {
    throw ParamError("coefficient must be [re, im] or [re, im, log_scale]");
  }
  for (const auto& v : entry) {
    if (!v.is_number()) throw ParamError("coefficient parts must be numbers");
  }
  ScaledComplex c;
  c.mantissa = {entry[0].get<double>(), entry[1].get<double>()};
  if (entry.size() == 3) c.log_scale = entry[2].get<double>();
  return c;
}

FormalSeries parse_formal_series(const Json& doc) {
  if (!doc.is_object()) throw ParamError("series document must be an object");
  for (const char* key : {"tau", "sigma", "coefficients"}) {
    if (!doc.contains(key)) throw ParamError(std::string("series is missing '") + key + "'");
  }
  if (!doc["tau"].is_number() || !doc["sigma"].is_number()) {
    throw ParamError("tau and sigma must be numbers");
  }
  const auto& list = doc["coefficients"];
  if (!list.is_array() || list.empty()) {
    throw ParamError("coefficients must be a non-empty array");
  }
  std::vector<ScaledComplex> coeffs;
  coeffs.reserve(list.size());
  for (const auto& e : list) coeffs.push_back(parse_coefficient(e));
  return FormalSeries(WeightSequence(doc["tau"].get<double>(), doc["sigma"].get<double>()),
                      std::move(coeffs));
}

}  // namespace rapidborel::io
