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
#include <numbers>
#include <random>

#include "rapidborel/extension.hpp"
#include "rapidborel/kernel.hpp"
#include "rapidborel/lambert_w.hpp"
#include "rapidborel/moments.hpp"
#include "rapidborel/weight_sequence.hpp"
#include "run_config.hpp"

namespace rapidborel::cli {

using io::Json;
using io::number;

namespace {

struct Suite {
  Json checks = Json::array();
  Json diagnostics = Json::object();
  bool all = true;
  std::ostream& out;

  void check(const std::string& name, bool holds, double value, double limit) {
    checks.push_back({{"name", name}, {"holds", holds}, {"value", number(value)},
                      {"limit", number(limit)}});
    all = all && holds;
    report_line(out, name, holds, io::format_double(value) + " vs " + io::format_double(limit));
  }
};

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0 / static_cast<double>(base);
  const double step = f;
  double v = 0.0;
  for (; i > 0; i /= base, f *= step) v += f * static_cast<double>(i % base);
  return v;
}

// Halton points with a seeded shift: log-uniform radius in [lo, hi], angle
// uniform in (-max_angle, max_angle).
std::vector<Complex> halton_points(std::size_t n, double lo, double hi,
                                   double max_angle, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double sr = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double sa = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = radical_inverse(i + 1, 2) + sr;
    double v = radical_inverse(i + 1, 3) + sa;
    u -= std::floor(u);
    v -= std::floor(v);
    const double r = std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
    double theta = max_angle * (2.0 * v - 1.0);
    if (std::abs(theta) >= max_angle) theta = 0.0;
    out.push_back(std::polar(r, theta));
  }
  return out;
}

void lambert_checks(Suite& s, std::uint64_t seed) {
  double worst = 0.0;
  for (Complex z : halton_points(100000, 1e-6, 1e6, std::numbers::pi, seed)) {
    const Complex w = lambert_w0(z);
    worst = std::max(worst, std::abs(w * std::exp(w) - z) / (1.0 + std::abs(z)));
  }
  s.check("lambert identity", worst <= 1e-12, worst, 1e-12);
  const double special = std::max(std::abs(lambert_w0(Complex{})),
                                  std::abs(lambert_w0(std::numbers::e) - 1.0));
  s.check("lambert special values", special <= 1e-14, special, 1e-14);

  double rebuild = 0.0;
  for (Complex z : halton_points(10000, 1e-6, 1e6, std::numbers::pi, seed + 1)) {
    rebuild = std::max(rebuild, std::abs(reconstruct_from_w(lambert_w0(z)) - z) / std::abs(z));
  }
  s.check("lambert reconstruction", rebuild <= 1e-10, rebuild, 1e-10);
  std::size_t misses = 0;
  for (Complex z : halton_points(10000, 10.0, 1e6, std::numbers::pi / 2.0, seed + 2)) {
    if (!image_region_predicate(lambert_w0(z), 10.0)) ++misses;
  }
  s.check("lambert image region", misses == 0, static_cast<double>(misses), 0.0);
}

void kernel_checks(Suite& s, const KernelParams& params) {
  double min_e = std::numeric_limits<double>::infinity();
  for (double x : log_space(1e-6, 1e6, 1000)) {
    min_e = std::min(min_e, kernel_e(params, Complex{x, 0.0}).real() / x);
  }
  s.check("kernel positive on the axis", min_e > 0.0, min_e, 0.0);
  double origin = 0.0;
  for (int k = -16; k <= 16; ++k) {
    const Complex z = std::polar(1e-6, 0.9 * std::numbers::pi * k / 16.0);
    origin = std::max(origin, std::abs(kernel_e(params, z) / z - 1.0));
  }
  s.check("kernel ~ z at the origin", origin <= 1e-3, origin, 1e-3);
  const auto grid = log_space(1.0 + 1e-6, 1e12, 1000);
  const auto probe = g_real_monotonicity_probe(params, grid);
  s.check("g increasing", probe.min_derivative > 0.0, probe.min_derivative, 0.0);
  double fd = 0.0;
  for (double x : log_space(1.01, 1e12, 1000)) {
    const double h = 1e-5 * (x - 1.0);
    const double approx = (g_real(params, x + h) - g_real(params, x - h)) / (2.0 * h);
    fd = std::max(fd, std::abs(approx / g_prime_real(params, x) - 1.0));
  }
  s.check("g' matches finite differences", fd <= 1e-6, fd, 1e-6);
}

double relative_change(double a, double b) { return std::abs(a - b) / std::abs(a); }

void fit_checks(Suite& s, const KernelParams& params) {
  Json fits = Json::array();
  for (double delta : {0.5, 1.0, 1.5}) {
    const SectorSpec sector{delta, 1e-3, 1e3};
    const auto coarse = sector_bound_fit(params, sector, GridSpec{200, 65});
    const auto fine = sector_bound_fit(params, sector, GridSpec{400, 129});
    const std::string tag = "sector fit delta=" + io::format_double(delta);
    s.check(tag + " certifies grid", coarse.max_residual <= 1e-9, coarse.max_residual, 1e-9);
    const double change = std::max(relative_change(coarse.lower_c, fine.lower_c),
                                   relative_change(coarse.upper_c, fine.upper_c));
    s.check(tag + " stable under refinement", change < 0.05, change, 0.05);
    fits.push_back(io::to_json(coarse));
  }
  s.diagnostics["sector_fits"] = fits;
  if (!params.bounds_regime()) return;
  const auto flat = flatness_fit(params, SectorSpec{1.0, 1e-3, 1e6}, GridSpec{200, 65});
  const bool finite = std::isfinite(flat.lower_c) && std::isfinite(flat.upper_c) &&
                      flat.lower_c > 0.0 && flat.upper_c > 0.0;
  s.check("flatness fit certifies grid", finite && flat.max_residual <= 1e-9,
          flat.max_residual, 1e-9);
  s.diagnostics["flatness_fit"] = io::to_json(flat);
  const WeightSequence seq(params.tau(), params.sigma());
  auto xs = log_space(1.0 + 1e-6, 1e6, 500);
  const auto sandwich = sandwich_fit(params, seq, xs);
  s.check("sandwich constants finite", sandwich.lower > 0.0 && std::isfinite(sandwich.upper),
          std::log(sandwich.upper / sandwich.lower), std::numeric_limits<double>::infinity());
  s.diagnostics["sandwich"] = {{"lower", number(sandwich.lower)}, {"upper", number(sandwich.upper)}};
}

void moment_checks(Suite& s, const KernelParams& params, double tol) {
  QuadratureConfig qc;
  qc.rel_tol = tol;
  const auto table = MomentTable::build(params, 60, qc);
  double gap = 0.0;
  for (std::size_t p = 0; p <= 60; ++p) {
    gap = std::max(gap, std::abs(moment_tanh_sinh(params, p, qc).log_value - table.log_m(p)));
  }
  s.check("moment schemes agree", gap <= 1e-8, gap, 1e-8);
  std::vector<double> logs;
  for (const auto& e : table.entries()) logs.push_back(e.log_value - table.log_m(0));
  const auto lc = check_lc(LogSequence::from_logs(logs), 60);
  s.check("moments log-convex", lc.holds, lc.first_violation ? double(*lc.first_violation) : 0.0, 0.0);
  if (!params.bounds_regime()) return;
  const auto fit = moment_bound_fit(table, WeightSequence(params.tau(), params.sigma()));
  const auto& prof = fit.profile;
  bool monotone = true;
  for (std::size_t i = prof.size() - 19; i < prof.size(); ++i) monotone = monotone && prof[i] < prof[i - 1];
  s.diagnostics["moment_profile"] = {{"spread", number(fit.log_b2 - fit.log_b1)},
                                     {"spread_limit", number(2.0 * std::numbers::ln10)},
                                     {"last20_strictly_decreasing", monotone},
                                     {"b1", number(fit.b1())},
                                     {"b2", number(fit.b2())}};
}

void extension_checks(Suite& s, const KernelParams& params, double tol, std::uint64_t seed) {
  if (!params.bounds_regime()) return;
  QuadratureConfig qc;
  qc.rel_tol = tol;
  const WeightSequence seq(params.tau(), params.sigma());
  const auto table = MomentTable::build(params, 40, qc);
  const auto mfit = moment_bound_fit(table, seq);
  const auto sfit = sector_bound_fit(params, SectorSpec{1.0, 1e-3, 1e3});
  const SectorSpec s1{1.0, 1e-3, 1.0};
  const auto zs = remainder_grid(s1, 40, seed);

  const auto zero = FormalSeries::zero(seq, 41);
  const ExtensionOperator zero_op(zero, table);
  double zero_max = 0.0;
  for (Complex z : zs) zero_max = std::max(zero_max, std::abs(zero_op(z)));
  s.check("zero series extends to zero", zero_max <= 1e-12, zero_max, 1e-12);

  Json reports = Json::array();
  std::vector<double> sup(13, -std::numeric_limits<double>::infinity());
  for (const auto& series : {FormalSeries::single_mode(seq, table, 1, 41),
                             FormalSeries::moment_series(seq, table, 41)}) {
    const ExtensionOperator op(series, table);
    const auto rep = remainder_scan(op, s1, 12, zs, mfit, sfit);
    double gap = 0.0;
    for (const auto& e : rep.entries) {
      if (!e.cancellation_flag) gap = std::max(gap, e.route_gap);
    }
    s.check("remainder routes agree", gap <= 1e-6, gap, 1e-6);
    s.check("fitted c finite", std::isfinite(rep.c), rep.c, std::numeric_limits<double>::infinity());
    for (std::size_t n = 0; n <= 12; ++n) sup[n] = std::max(sup[n], rep.log_sup_ratio[n]);
    reports.push_back({{"c", number(rep.c)}, {"d", number(rep.d)}, {"flagged", rep.flagged},
                       {"log_sup_ratio", rep.log_sup_ratio}});
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t n = 6; n <= 12; ++n) {
    const double root = std::exp(sup[n] / static_cast<double>(n));
    lo = std::min(lo, root);
    hi = std::max(hi, root);
  }
  s.diagnostics["remainder"] = {{"reports", reports},
                                {"root_variation", number(hi / lo - 1.0)},
                                {"root_variation_limit", 0.2}};

  const auto moments = FormalSeries::moment_series(seq, table, 41);
  const ExtensionOperator op(moments, table);
  double worst = 0.0;
  for (const auto& e : borel_roundtrip(op, SectorSpec{1.0, 0.0, 1.0}, 5)) {
    worst = std::max(worst, e.rel_error);
  }
  s.check("borel round-trip", worst <= 1e-4, worst, 1e-4);
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const KernelParams params(cfg.tau, cfg.sigma);
  Suite s{.out = out};
  lambert_checks(s, cfg.seed);
  kernel_checks(s, params);
  fit_checks(s, params);
  moment_checks(s, params, cfg.tol);
  extension_checks(s, params, cfg.tol, cfg.seed);
  Json doc = cfg.meta({{"kind", "suite"}});
  doc["checks"] = s.checks;
  doc["diagnostics"] = s.diagnostics;
  doc["all_hold"] = s.all;
  io::write_json(cfg.path("verify.json"), doc);
  return s.all ? 0 : 1;
}

}  // namespace rapidborel::cli
