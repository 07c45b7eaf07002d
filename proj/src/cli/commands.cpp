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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "rapidborel/errors.hpp"
#include "rapidborel/extension.hpp"
#include "rapidborel/kernel.hpp"
#include "rapidborel/lambert_w.hpp"
#include "rapidborel/moments.hpp"
#include "rapidborel/weight_sequence.hpp"
#include "run_config.hpp"

#ifndef RAPIDBOREL_VERSION
#define RAPIDBOREL_VERSION "unknown"
#endif

namespace rapidborel::cli {

using io::Json;
using io::number;

namespace {

constexpr double kReconstructionTol = 1e-10;
constexpr double kFitResidualTol = 1e-9;
constexpr double kSchemeAgreementTol = 1e-8;
constexpr double kRoundtripTol = 1e-4;
constexpr double kRouteGapTol = 1e-6;

Complex parse_point(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  double re = 0.0, im = 0.0;
  if (!(in >> re)) throw ParamError("cannot read a point from '" + text + "'");
  if (!(in >> im)) im = 0.0;
  std::string rest;
  if (in >> rest) throw ParamError("cannot read a point from '" + text + "'");
  return {re, im};
}

std::vector<Complex> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open input " + path);
  std::vector<Complex> out;
  if (std::filesystem::path(path).extension() == ".json") {
    const Json doc = Json::parse(in);
    if (!doc.is_array()) throw ParamError("point list must be a JSON array");
    for (const auto& e : doc) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParamError("points must be [re, im] pairs");
      }
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
  }
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const bool header = first && line.find_first_of("0123456789") != 0 &&
                        line[0] != '-' && line[0] != '+' && line[0] != '.';
    first = false;
    if (header) continue;
    out.push_back(parse_point(line));
  }
  return out;
}

std::vector<double> moment_logs_normalised(const MomentTable& table) {
  std::vector<double> logs;
  for (const auto& e : table.entries()) logs.push_back(e.log_value - table.log_m(0));
  return logs;
}

}  // namespace

void report_line(std::ostream& out, const std::string& name, bool holds,
                 const std::string& detail) {
  out << (holds ? "ok      " : "FAILED  ") << name;
  if (!detail.empty()) out << "  " << detail;
  out << '\n';
}

Json RunConfig::to_json() const {
  Json j = {{"tau", number(tau)}, {"sigma", number(sigma)}, {"seed", seed}};
  if (command != "moments") {
    j["delta"] = number(delta);
    j["rmin"] = number(rmin);
    j["rmax"] = number(rmax);
  }
  if (command == "lambert" || command == "kernel") j["grid"] = grid;
  j["tol"] = number(tol);
  if (command == "lambert") {
    j["input"] = input;
    j["points"] = points;
  }
  if (command == "moments") {
    j["p_max"] = p_max;
    j["fit"] = fit;
  }
  if (command == "extend") {
    j["input"] = input;
    j["series"] = input.empty() ? series : std::string("input");
    j["length"] = length;
    j["n_max"] = n_max;
    j["count"] = count;
    j["p_max"] = p_max;
  }
  return j;
}

Json RunConfig::meta(const Json& grid_spec) const {
  return {{"version", RAPIDBOREL_VERSION},
          {"command", command},
          {"config", to_json()},
          {"grid", grid_spec}};
}

std::filesystem::path RunConfig::path(const std::string& name) const {
  return std::filesystem::path(out) / name;
}

SectorSpec RunConfig::sector() const {
  SectorSpec s{delta, rmin, rmax};
  s.validate();
  return s;
}

int cmd_lambert(const RunConfig& cfg, std::ostream& out) {
  std::vector<Complex> zs;
  Json grid_spec;
  if (!cfg.input.empty() || !cfg.points.empty()) {
    if (!cfg.input.empty()) zs = read_points(cfg.input);
    for (const auto& p : cfg.points) zs.push_back(parse_point(p));
    grid_spec = {{"kind", "points"}, {"count", zs.size()}};
  } else {
    const auto g = io::parse_grid(cfg.grid);
    zs = sector_grid(cfg.sector(), g);
    grid_spec = {{"kind", "sector"}, {"sector", io::to_json(cfg.sector())}, {"resolution", io::to_json(g)}};
  }
  const double tol = cfg.tol;
  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  double worst_rebuild = 0.0;
  bool principal = true;
  for (Complex z : zs) {
    const Complex w = lambert_w0(z);
    const Complex dw = std::exp(-w) / (1.0 + w);
    const double residual = std::abs(w * std::exp(w) - z) / (1.0 + std::abs(z));
    const double rebuild =
        z == Complex{} ? std::abs(reconstruct_from_w(w)) : std::abs(reconstruct_from_w(w) - z) / std::abs(z);
    worst = std::max(worst, residual);
    worst_rebuild = std::max(worst_rebuild, rebuild);
    principal = principal && in_principal_image(w, 1e-10);
    rows.push_back({z.real(), z.imag(), w.real(), w.imag(), dw.real(), dw.imag(), residual});
  }
  const Json meta = cfg.meta(grid_spec);
  io::write_csv(cfg.path("lambert.csv"), meta,
                {"re_z", "im_z", "re_w", "im_w", "re_dw", "im_dw", "residual"}, rows);
  const bool ok_identity = worst <= tol;
  const bool ok_rebuild = worst_rebuild <= kReconstructionTol;
  Json doc = meta;
  doc["summary"] = {{"points", zs.size()},
                    {"max_scaled_residual", number(worst)},
                    {"residual_tolerance", number(tol)},
                    {"max_reconstruction_error", number(worst_rebuild)},
                    {"in_principal_image", principal}};
  if (cfg.input.empty() && cfg.points.empty() && cfg.rmin > 0.0) {
    doc["summary"]["slow_variation"] = number(slow_variation_probe(cfg.sector(), io::parse_grid(cfg.grid)));
  }
  io::write_json(cfg.path("lambert.json"), doc);
  report_line(out, "lambert identity", ok_identity, "max residual " + io::format_double(worst));
  report_line(out, "lambert reconstruction", ok_rebuild, "max error " + io::format_double(worst_rebuild));
  report_line(out, "principal image", principal, "");
  return ok_identity && ok_rebuild && principal ? 0 : 1;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const KernelParams params(cfg.tau, cfg.sigma);
  const auto sector = cfg.sector();
  if (!sector.bounded() || !(sector.r_min > 0.0)) {
    throw ParamError("kernel needs 0 < rmin < rmax < inf");
  }
  const auto grid = io::parse_grid(cfg.grid);
  const Json grid_spec = {{"kind", "sector"}, {"sector", io::to_json(sector)}, {"resolution", io::to_json(grid)}};
  const Json meta = cfg.meta(grid_spec);

  std::vector<std::vector<double>> rows;
  for (Complex z : sector_grid(sector, grid)) {
    const Complex log_e = log_kernel_e(params, z);
    const Complex e = std::exp(log_e);
    rows.push_back({z.real(), z.imag(), e.real(), e.imag(), log_e.real()});
  }
  io::write_csv(cfg.path("kernel.csv"), meta, {"re_z", "im_z", "re_e", "im_e", "log_abs_e"}, rows);

  Json doc = meta;
  doc["constants"] = {{"a", number(params.a())}, {"b", number(params.b())}};
  const auto probe = g_real_monotonicity_probe(params, log_space(1.0 + 1e-6, 1e12, 1000));
  doc["monotonicity"] = io::to_json(probe);
  const auto fit = sector_bound_fit(params, sector, grid);
  doc["sector_fit"] = io::to_json(fit);
  bool ok = fit.max_residual <= kFitResidualTol;
  report_line(out, "sector fit", ok,
              "C1 " + io::format_double(fit.lower_c) + " C2 " + io::format_double(fit.upper_c));
  if (params.bounds_regime()) {
    const auto flat = flatness_fit(params, sector, grid);
    doc["flatness_fit"] = io::to_json(flat);
    const bool flat_ok = flat.max_residual <= kFitResidualTol;
    report_line(out, "flatness fit", flat_ok,
                "C3 " + io::format_double(flat.lower_c) + " C4 " + io::format_double(flat.upper_c));
    ok = ok && flat_ok;
  } else {
    doc["flatness_fit"] = nullptr;
    out << "skipped flatness fit: sigma >= 2\n";
  }
  const bool mono = probe.min_derivative > 0.0;
  report_line(out, "g increasing", mono, "min g' " + io::format_double(probe.min_derivative));
  io::write_json(cfg.path("kernel.json"), doc);
  return ok && mono ? 0 : 1;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
  const KernelParams params(cfg.tau, cfg.sigma);
  if (cfg.fit && !params.bounds_regime()) {
    throw ParamError("moment bounds are only established for sigma in (1, 2); "
                     "rerun with --no-fit to tabulate moments only");
  }
  QuadratureConfig qc;
  qc.rel_tol = cfg.tol;
  qc.validate();
  const auto table = MomentTable::build(params, cfg.p_max, qc);
  const WeightSequence seq(cfg.tau, cfg.sigma);
  const Json grid_spec = {{"kind", "moments"}, {"p_max", cfg.p_max}};
  const Json meta = cfg.meta(grid_spec);

  double gap = 0.0;
  for (std::size_t p = 0; p <= cfg.p_max; ++p) {
    gap = std::max(gap, std::abs(moment_tanh_sinh(params, p, qc).log_value - table.log_m(p)));
  }
  const auto lc = check_lc(LogSequence::from_logs(moment_logs_normalised(table)), cfg.p_max);

  std::vector<std::vector<double>> rows;
  for (std::size_t p = 0; p <= cfg.p_max; ++p) {
    const double r = p == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : (table.log_m(p) - seq.log_m(p)) / static_cast<double>(p);
    rows.push_back({static_cast<double>(p), table.log_m(p), table.at(p).rel_error, seq.log_m(p), r});
  }
  io::write_csv(cfg.path("moments.csv"), meta, {"p", "log_m", "rel_error", "log_M", "r_p"}, rows);

  Json doc = meta;
  doc["table"] = io::to_json(table);
  doc["scheme_gap"] = number(gap);
  doc["log_convexity"] = io::to_json(lc);
  if (cfg.fit) doc["bound_fit"] = io::to_json(moment_bound_fit(table, seq));
  io::write_json(cfg.path("moments.json"), doc);

  const bool agree = gap <= kSchemeAgreementTol;
  report_line(out, "quadrature schemes agree", agree, "max log gap " + io::format_double(gap));
  report_line(out, "moments log-convex", lc.holds, "");
  return agree && lc.holds ? 0 : 1;
}

int cmd_extend(const RunConfig& cfg, std::ostream& out) {
  std::optional<FormalSeries> series;
  double tau = cfg.tau;
  double sigma = cfg.sigma;
  if (!cfg.input.empty()) {
    std::ifstream in(cfg.input);
    if (!in) throw ParamError("cannot open input " + cfg.input);
    series = io::parse_formal_series(Json::parse(in));
    tau = series->sequence().tau();
    sigma = series->sequence().sigma();
  }
  const KernelParams params(tau, sigma);
  if (!params.bounds_regime()) {
    throw ParamError("the extension operator needs sigma in (1, 2)");
  }
  const std::size_t length = series ? series->size() : cfg.length;
  if (length == 0) throw ParamError("series length must be positive");
  QuadratureConfig qc;
  qc.rel_tol = cfg.tol;
  const auto table = MomentTable::build(params, std::max<std::size_t>(length - 1, 1), qc);
  const WeightSequence seq(tau, sigma);
  if (!series) {
    if (cfg.series == "moment") {
      series = FormalSeries::moment_series(seq, table, length);
    } else if (cfg.series == "single") {
      series = FormalSeries::single_mode(seq, table, std::min<std::size_t>(1, length - 1), length);
    } else if (cfg.series == "zero") {
      series = FormalSeries::zero(seq, length);
    } else {
      throw ParamError("unknown series '" + cfg.series + "' (moment, single, zero)");
    }
  }
  if (cfg.n_max > length) throw ParamError("--nmax exceeds the series length");
  if (cfg.p_max + 1 > length) throw ParamError("--pmax must be below the series length");

  const auto sector = cfg.sector();
  const auto moment_fit = moment_bound_fit(table, seq);
  const auto sector_fit =
      sector_bound_fit(params, SectorSpec{sector.opening_delta, 1e-3, 1e3});
  const ExtensionOperator op(*series, table);
  const auto zs = remainder_grid(sector, cfg.count, cfg.seed);
  const Json grid_spec = {{"kind", "quasi-random"},
                          {"sector", io::to_json(sector)},
                          {"count", cfg.count},
                          {"seed", cfg.seed}};
  const Json meta = cfg.meta(grid_spec);

  std::vector<std::vector<double>> f_rows;
  for (Complex z : zs) {
    const auto f = op.evaluate(z);
    f_rows.push_back({z.real(), z.imag(), f.value.real(), f.value.imag(), f.error});
  }
  io::write_csv(cfg.path("extend.csv"), meta, {"re_z", "im_z", "re_f", "im_f", "f_error"}, f_rows);

  const auto report = remainder_scan(op, sector, cfg.n_max, zs, moment_fit, sector_fit);
  std::vector<std::vector<double>> r_rows;
  for (const auto& e : report.entries) {
    r_rows.push_back({static_cast<double>(e.n), e.z.real(), e.z.imag(), std::abs(e.z),
                      e.remainder, std::exp(e.log_ratio)});
  }
  io::write_csv(cfg.path("remainder.csv"), meta,
                {"N", "re_z", "im_z", "abs_z", "remainder", "ratio"}, r_rows);

  const auto roundtrip = borel_roundtrip(op, SectorSpec{1.0, 0.0, 1.0}, cfg.p_max);
  double worst_roundtrip = 0.0;
  Json rt = Json::array();
  for (const auto& e : roundtrip) {
    worst_roundtrip = std::max(worst_roundtrip, e.rel_error);
    rt.push_back(io::to_json(e));
  }
  double worst_gap = 0.0;
  for (const auto& e : report.entries) {
    if (!e.cancellation_flag) worst_gap = std::max(worst_gap, e.route_gap);
  }

  Json doc = meta;
  doc["series"] = io::to_json(*series);
  doc["certificate"] = io::to_json(series->certificate());
  doc["borel"] = io::to_json(op.borel());
  doc["r0"] = number(op.r0());
  doc["epsilon"] = number(op.epsilon());
  doc["moment_fit"] = io::to_json(moment_fit);
  doc["sector_fit"] = io::to_json(sector_fit);
  doc["remainder"] = io::to_json(report);
  doc["roundtrip"] = rt;
  io::write_json(cfg.path("extend.json"), doc);

  const bool gap_ok = worst_gap <= kRouteGapTol;
  const bool rt_ok = worst_roundtrip <= kRoundtripTol;
  report_line(out, "remainder routes agree", gap_ok,
              "max gap " + io::format_double(worst_gap) + ", flagged " + std::to_string(report.flagged));
  report_line(out, "borel round-trip", rt_ok, "max rel error " + io::format_double(worst_roundtrip));
  out << "fitted c " << io::format_double(report.c) << ", d " << io::format_double(report.d) << '\n';
  return gap_ok && rt_ok ? 0 : 1;
}

}  // namespace rapidborel::cli
