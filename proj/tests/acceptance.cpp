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

// Acceptance run: one PASS/FAIL line per criterion. Every tolerance and time
// budget is a named constant below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rapidborel/cli.hpp"
#include "rapidborel/extension.hpp"
#include "rapidborel/kernel.hpp"
#include "rapidborel/lambert_w.hpp"
#include "rapidborel/moments.hpp"
#include "rapidborel/weight_sequence.hpp"

namespace rb = rapidborel;
using rb::Complex;

namespace {

// Criterion 1
constexpr std::size_t kLambertPoints = 100000;
constexpr double kLambertResidual = 1e-12;
constexpr double kLambertSpecial = 1e-14;
constexpr double kLambertOracle = 1e-12;
constexpr double kLambertBudget = 5.0;
// Criterion 2
constexpr std::size_t kImagePoints = 10000;
constexpr double kReconstruction = 1e-10;
constexpr double kImageRadius = 10.0;
constexpr double kImageBudget = 5.0;
// Criterion 3
constexpr double kSmallZ = 1e-6;
constexpr double kSmallZLimit = 1e-3;
constexpr double kMaxAngle = 0.9;  // in units of pi
constexpr double kGPrimeAt1e8 = 1e-3;
constexpr double kFiniteDifference = 1e-6;
constexpr double kKernelBudget = 10.0;
// Criterion 4
constexpr double kRefinementChange = 0.05;
constexpr double kSectorBudget = 60.0;  // per opening
// Criterion 5
constexpr std::size_t kSandwichPoints = 500;
constexpr double kSandwichXmax = 1e6;
// The interval [A, A~] is fitted on x <= 1e3; the points on (1e3, 1e6) must
// stay inside [A / 10, 10 A~].
constexpr double kSandwichSplit = 1e3;
constexpr double kSandwichSlack = std::numbers::ln10;
constexpr double kSandwichBudget = 120.0;
// Criterion 6
constexpr std::size_t kMomentPmax = 60;
constexpr double kSchemeAgreement = 1e-8;
constexpr double kProfileSpread = 2.0 * std::numbers::ln10;
constexpr std::size_t kTrendWindow = 20;
constexpr double kMomentBudget = 120.0;
// Criterion 7
constexpr std::size_t kExtensionPoints = 40;
constexpr std::size_t kExtensionNmax = 12;
constexpr std::size_t kSeriesLength = 41;
constexpr double kZeroSeries = 1e-12;
constexpr double kRootVariation = 0.2;
constexpr double kRatioSlack = 1e-12;  // relative, on the comparison with c
constexpr double kExtensionBudget = 600.0;
// Criterion 8
constexpr std::size_t kRoundtripPmax = 5;
constexpr double kRoundtripError = 1e-4;
constexpr double kRoundtripBudget = 120.0;

constexpr double kInf = std::numeric_limits<double>::infinity();

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0 / static_cast<double>(base);
  const double step = f;
  double v = 0.0;
  for (; i > 0; i /= base, f *= step) v += f * static_cast<double>(i % base);
  return v;
}

// Halton points in (log radius, angle), radius in [lo, hi], |angle| < max_angle.
std::vector<Complex> halton(std::size_t n, double lo, double hi, double max_angle) {
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double u = radical_inverse(i, 2);
    const double v = radical_inverse(i, 3);
    const double r = std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
    out.push_back(std::polar(r, max_angle * (2.0 * v - 1.0)));
  }
  return out;
}

// W(1) as the root of w e^w = 1 on [0, 1] by bisection.
double omega_by_bisection() {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid * std::exp(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::function<Outcome()>& body, double budget) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget <= 0.0 || secs <= budget;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %d: %s | %s | %.2f s%s\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
              in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// True if the last `window` entries are strictly monotone in either direction.
bool monotone_tail(const std::vector<double>& v, std::size_t window) {
  if (v.size() < window) return false;
  bool up = true;
  bool down = true;
  for (std::size_t i = v.size() - window + 1; i < v.size(); ++i) {
    up = up && v[i] > v[i - 1];
    down = down && v[i] < v[i - 1];
  }
  return up || down;
}

Outcome lambert_identity() {
  double worst = 0.0;
  for (const Complex z : halton(kLambertPoints, 1e-6, 1e6, std::numbers::pi)) {
    const Complex w = rb::lambert_w0(z);
    worst = std::max(worst, std::abs(w * std::exp(w) - z) / (1.0 + std::abs(z)));
  }
  const double w0 = std::abs(rb::lambert_w0(Complex{}));
  const double we = std::abs(rb::lambert_w0(Complex(std::numbers::e, 0.0)) - 1.0);
  const double w1 = std::abs(rb::lambert_w0(Complex(1.0, 0.0)) - omega_by_bisection());
  const bool pass = worst <= kLambertResidual && w0 <= kLambertSpecial && we <= kLambertSpecial &&
                    w1 <= kLambertOracle;
  return {pass, fmt("max scaled residual %.3g, |W(0)| %.3g, |W(e)-1| %.3g", worst, w0, we) +
                    fmt(", |W(1)-oracle| %.3g", w1)};
}

Outcome reconstruction_and_image() {
  double worst = 0.0;
  for (const Complex z : halton(kImagePoints, 1e-6, 1e6, std::numbers::pi)) {
    const Complex back = rb::reconstruct_from_w(rb::lambert_w0(z));
    worst = std::max(worst, std::abs(back - z) / std::abs(z));
  }
  std::size_t misses = 0;
  for (const Complex z : halton(kImagePoints, kImageRadius * (1 + 1e-12), 1e6, std::numbers::pi / 2)) {
    if (!rb::image_region_predicate(rb::lambert_w0(z), kImageRadius)) ++misses;
  }
  return {worst <= kReconstruction && misses == 0,
          fmt("max relative reconstruction error %.3g, predicate misses %.0f", worst, double(misses))};
}

Outcome kernel_basics() {
  const rb::KernelParams k(1.0, 1.5);
  std::size_t nonpositive = 0;
  for (const double x : rb::log_space(1e-6, 1e6, 1000)) {
    if (!(rb::kernel_e(k, x).real() > 0.0)) ++nonpositive;
  }
  double limit = 0.0;
  for (int i = 0; i <= 180; ++i) {
    const double theta = kMaxAngle * std::numbers::pi * (i / 90.0 - 1.0);
    const Complex z = std::polar(kSmallZ, theta);
    limit = std::max(limit, std::abs(rb::kernel_e(k, z) / z - 1.0));
  }
  double min_gp = kInf;
  double fd_err = 0.0;
  for (const double x : rb::log_space(1.0 + 1e-9, 1e12, 1002)) {
    if (x <= 1.0 + 1e-9 || x >= 1e12) continue;  // open interval
    const double gp = rb::g_prime_real(k, x);
    min_gp = std::min(min_gp, gp);
    const double h = (x - 1.0) * 1e-5;
    const double fd = (rb::g_real(k, x + h) - rb::g_real(k, x - h)) / (2.0 * h);
    fd_err = std::max(fd_err, std::abs(fd - gp) / gp);
  }
  const double gp8 = rb::g_prime_real(k, 1e8);
  const bool pass = nonpositive == 0 && limit <= kSmallZLimit && min_gp > 0.0 && gp8 < kGPrimeAt1e8 &&
                    fd_err <= kFiniteDifference;
  return {pass, fmt("max |e(z)/z-1| %.3g, min g' %.3g, g'(1e8) %.3g", limit, min_gp, gp8) +
                    fmt(", finite-difference gap %.3g, nonpositive %.0f", fd_err, double(nonpositive))};
}

Outcome sector_fit(double delta) {
  const rb::KernelParams k(1.0, 1.5);
  const rb::SectorSpec s{delta, 1e-3, 1e3};
  const auto coarse = rb::sector_bound_fit(k, s, {200, 65});
  const auto fine = rb::sector_bound_fit(k, s, {400, 129});
  const double dl = std::abs(fine.lower_c / coarse.lower_c - 1.0);
  const double du = std::abs(fine.upper_c / coarse.upper_c - 1.0);
  return {dl < kRefinementChange && du < kRefinementChange,
          fmt("delta %g: C1 %.6g, C2 %.6g", delta, coarse.lower_c, coarse.upper_c) +
              fmt(", refinement change %.3g / %.3g", dl, du)};
}

Outcome sandwich_and_flatness() {
  bool pass = true;
  std::string detail;
  std::vector<double> xs;
  for (const double x : rb::log_space(1.0, kSandwichXmax, kSandwichPoints + 2)) {
    if (x > 1.0 && x < kSandwichXmax) xs.push_back(x);
  }
  for (const double sigma : {1.25, 1.5, 1.75}) {
    const rb::KernelParams k(1.0, sigma);
    const rb::WeightSequence seq(1.0, sigma);
    const auto fit = rb::sandwich_fit(k, seq, xs);
    double lo = kInf;
    double hi = -kInf;
    double late_lo = kInf;
    double late_hi = -kInf;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = fit.log_ratio[i];
      if (xs[i] <= kSandwichSplit) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      } else {
        late_lo = std::min(late_lo, v);
        late_hi = std::max(late_hi, v);
      }
    }
    const bool held = late_lo >= lo - kSandwichSlack && late_hi <= hi + kSandwichSlack;
    const auto flat = rb::flatness_fit(k, {1.0, 1e-3, 1e3}, {200, 65});
    const bool certified = std::isfinite(flat.lower_c) && std::isfinite(flat.upper_c) &&
                           std::isfinite(flat.lower_k) && std::isfinite(flat.upper_k) &&
                           flat.max_residual == 0.0;
    pass = pass && held && certified;
    detail += fmt("sigma %g: ln ratio on x<=1e3 in [%.3g, ", sigma, lo) +
              fmt("%.3g], beyond in [%.3g, %.3g]", hi, late_lo, late_hi) +
              (certified ? ", flatness certified; " : ", flatness NOT certified; ");
  }
  return {pass, detail};
}

Outcome moment_bounds() {
  const rb::KernelParams k(1.0, 1.5);
  const auto table = rb::MomentTable::build(k, kMomentPmax);
  double gap = 0.0;
  for (std::size_t p = 0; p <= kMomentPmax; ++p) {
    const double b = rb::moment_tanh_sinh(k, p).log_value;
    gap = std::max(gap, std::abs(std::expm1(table.log_m(p) - b)));
  }
  std::size_t lc_violations = 0;
  for (std::size_t p = 1; p < kMomentPmax; ++p) {
    if (2.0 * table.log_m(p) > table.log_m(p - 1) + table.log_m(p + 1)) ++lc_violations;
  }
  const auto fit = rb::moment_bound_fit(table, rb::WeightSequence(1.0, 1.5));
  const double spread = fit.log_b2 - fit.log_b1;
  const bool trend = monotone_tail(fit.profile, kTrendWindow);
  const bool pass = gap <= kSchemeAgreement && lc_violations == 0 && spread <= kProfileSpread && !trend;
  return {pass, fmt("scheme gap %.3g, r_p in [%.4g, %.4g]", gap, fit.log_b1, fit.log_b2) +
                    fmt(", spread %.4g (limit %.4g)", spread, kProfileSpread) +
                    (trend ? ", last 20 monotone" : ", no monotone tail") +
                    fmt(", log-convexity violations %.0f", double(lc_violations))};
}

Outcome extension_operator() {
  const rb::KernelParams k(1.0, 1.5);
  const rb::WeightSequence seq(1.0, 1.5);
  const auto table = rb::MomentTable::build(k, kSeriesLength - 1);
  const auto mfit = rb::moment_bound_fit(table, seq);
  const auto sfit = rb::sector_bound_fit(k, {1.0, 1e-3, 1e3}, {200, 65});
  const rb::SectorSpec s1{1.0, 1e-3, 1.0};
  const auto zs = rb::remainder_grid(s1, kExtensionPoints, 0);

  const rb::ExtensionOperator zero_op(rb::FormalSeries::zero(seq, kSeriesLength), table);
  double zero_max = 0.0;
  for (const Complex z : zs) zero_max = std::max(zero_max, std::abs(zero_op(z)));

  std::vector<double> sup(kExtensionNmax + 1, -kInf);
  bool bounded = true;
  std::string detail;
  for (const auto& series : {rb::FormalSeries::single_mode(seq, table, 1, kSeriesLength),
                             rb::FormalSeries::moment_series(seq, table, kSeriesLength)}) {
    const rb::ExtensionOperator op(series, table);
    const auto rep = rb::remainder_scan(op, s1, kExtensionNmax, zs, mfit, sfit);
    const double log_cap = std::log(rep.c) + std::log(rep.c1);
    bounded = bounded && std::isfinite(rep.c);
    for (const auto& e : rep.entries) {
      bounded = bounded && e.log_ratio <= log_cap + kRatioSlack * std::max(1.0, std::abs(log_cap));
    }
    for (std::size_t n = 0; n <= kExtensionNmax; ++n) sup[n] = std::max(sup[n], rep.log_sup_ratio[n]);
    detail += fmt("c %.3g (d %.3g, D1 %.3g); ", rep.c, rep.d, rep.d1);
  }
  double lo = kInf;
  double hi = 0.0;
  for (std::size_t n = 6; n <= kExtensionNmax; ++n) {
    const double root = std::exp(sup[n] / static_cast<double>(n));
    lo = std::min(lo, root);
    hi = std::max(hi, root);
  }
  const double variation = hi / lo - 1.0;
  const bool pass = zero_max <= kZeroSeries && bounded && variation < kRootVariation;
  return {pass, detail + fmt("zero series max |f| %.3g", zero_max) +
                    (bounded ? ", ratios <= c" : ", ratios exceed c") +
                    fmt(", N-th root of sup ratio over N=6..12 in [%.4g, %.4g], variation %.3g", lo, hi,
                        variation)};
}

Outcome borel_roundtrip() {
  const rb::KernelParams k(1.0, 1.5);
  const rb::WeightSequence seq(1.0, 1.5);
  const auto table = rb::MomentTable::build(k, kSeriesLength - 1);
  const rb::ExtensionOperator op(rb::FormalSeries::moment_series(seq, table, kSeriesLength), table);
  double worst = 0.0;
  for (const auto& e : rb::borel_roundtrip(op, {1.0, 0.0, 1.0}, kRoundtripPmax)) {
    worst = std::max(worst, e.rel_error);
  }
  return {worst <= kRoundtripError, fmt("max relative error p=0..5: %.3g", worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "rapidborel_acceptance";
  std::string reports[2];
  std::string stdout_text[2];
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const auto dir = base / (i == 0 ? "a" : "b");
    std::filesystem::remove_all(dir);
    const std::string out = dir.string();
    const char* argv[] = {"rapidborel", "verify", "--seed", "7", "--out", out.c_str()};
    std::ostringstream so;
    std::ostringstream se;
    codes[i] = rb::cli::run(6, argv, so, se);
    reports[i] = slurp(dir / "verify.json");
    stdout_text[i] = so.str();
  }
  const bool same = !reports[0].empty() && reports[0] == reports[1] && stdout_text[0] == stdout_text[1];
  return {same, fmt("verify exit codes %.0f / %.0f, report %.0f bytes, ", codes[0], codes[1],
                    double(reports[0].size())) +
                    (same ? "byte-identical" : "reports differ")};
}

}  // namespace

int main() {
  report(1, lambert_identity, kLambertBudget);
  report(2, reconstruction_and_image, kImageBudget);
  report(3, kernel_basics, kKernelBudget);
  report(4, [] {
    Outcome all{true, ""};
    for (const double delta : {0.5, 1.0, 1.5}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto o = sector_fit(delta);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      all.pass = all.pass && o.pass && secs <= kSectorBudget;
      all.detail += o.detail + fmt(" (%.2f s); ", secs);
    }
    return all;
  }, 0.0);
  report(5, sandwich_and_flatness, kSandwichBudget);
  report(6, moment_bounds, kMomentBudget);
  report(7, extension_operator, kExtensionBudget);
  report(8, borel_roundtrip, kRoundtripBudget);
  report(9, determinism, 0.0);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
