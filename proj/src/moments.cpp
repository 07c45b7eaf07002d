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

#include "rapidborel/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "parallel.hpp"
#include "rapidborel/errors.hpp"
#include "rapidborel/weight_sequence.hpp"

namespace rapidborel {
namespace {

constexpr double kLn10 = std::numbers::ln10;

// psi(u) = (p+1) u - a g(1 + e^u), the log of the integrand in u = ln t
// including the Jacobian.
struct LogDensity {
  const KernelParams& params;
  double weight;  // p + 1

  double operator()(double u) const {
    return weight * u - a_g_shifted_log(params, u);
  }
  double slope(double u) const { return weight - a_g_shifted_log_prime(params, u); }
};

// Point where psi falls `drop` below psi(peak), walking in direction dir.
double drop_point(const LogDensity& psi, double peak, double level, int dir) {
  double inner = peak;
  double step = 1.0;
  double outer = peak + dir * step;
  while (psi(outer) > level) {
    inner = outer;
    step *= 2.0;
    outer = peak + dir * step;
  }
  for (int it = 0; it < 200 && std::abs(outer - inner) > 1e-9 * (1.0 + std::abs(inner)); ++it) {
    const double mid = 0.5 * (inner + outer);
    (psi(mid) > level ? inner : outer) = mid;
  }
  return outer;
}

void require_finite_result(double log_value, const char* who) {
  if (!std::isfinite(log_value)) {
    throw QuadratureError(std::string(who) + ": moment is not finite");
  }
}

}  // namespace

MomentValue moment(const KernelParams& params, std::size_t p,
                   const QuadratureConfig& config) {
  config.validate();
  const LogDensity psi{params, static_cast<double>(p) + 1.0};

  // psi is concave: bracket the zero of psi' and bisect.
  double lo = 0.0;
  double hi = 0.0;
  while (psi.slope(lo) <= 0.0) lo -= 8.0;
  hi = lo;
  do {
    hi += 8.0;
  } while (psi.slope(hi) > 0.0);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi.slope(mid) > 0.0 ? lo : hi) = mid;
  }
  const double peak = 0.5 * (lo + hi);
  const double psi_max = psi(peak);
  const double level = psi_max - config.tail_split * kLn10;
  const double left = drop_point(psi, peak, level, -1);
  const double right = drop_point(psi, peak, level, +1);

  const auto body = integrate_gk(
      [&](double u) { return std::exp(psi(u) - psi_max); },
      left, right, config);
  // Tangent lines at the truncation points dominate a concave psi.
  const double tails = std::exp(psi(left) - psi_max) / psi.slope(left) +
                       std::exp(psi(right) - psi_max) / -psi.slope(right);

  MomentValue out;
  out.log_value = psi_max + std::log(body.value);
  out.rel_error = (body.error + tails) / body.value;
  require_finite_result(out.log_value, "moment");
  if (!(out.rel_error <= config.rel_tol)) {
    throw QuadratureError("moment p = " + std::to_string(p) +
                          " missed its tolerance: rel_error " +
                          std::to_string(out.rel_error));
  }
  return out;
}

MomentValue moment_tanh_sinh(const KernelParams& params, std::size_t p,
                             const QuadratureConfig& config) {
  config.validate();
  const double pd = static_cast<double>(p);
  // Log of the integrand t^p exp(-a g(1+t)) as a function of s = ln t.
  auto phi = [&](double s) { return pd * s - a_g_shifted_log(params, s); };

  // phi is concave, so the peak lies left of the first hi with phi(hi+1) <= phi(hi).
  constexpr double kLowest = -60.0;
  double lo = kLowest;
  double hi = 8.0;
  while (phi(hi + 1.0) > phi(hi)) hi *= 2.0;
  hi += 1.0;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = phi(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = phi(x1);
    }
  }
  const double s_peak = 0.5 * (lo + hi);
  double phi_max = phi(s_peak);
  if (p == 0) phi_max = std::max(phi_max, 0.0);
  const double level = phi_max - config.tail_split * kLn10;

  double s_left = s_peak;
  while (s_left > kLowest && phi(s_left) > level) s_left -= 1.0;
  const bool left_truncated = s_left > kLowest && p > 0;
  double s_right = s_peak;
  do {
    s_right += 1.0;
  } while (phi(s_right) > level);

  // Integrate in x = t / t_peak so the knots stay representable.
  std::vector<double> knots{left_truncated ? std::exp(s_left - s_peak) : 0.0};
  for (double s = s_left + 1.0; s < s_right; s += 1.0) knots.push_back(std::exp(s - s_peak));
  knots.push_back(std::exp(s_right - s_peak));

  auto f = [&](double x) {
    if (x <= 0.0) return p == 0 ? std::exp(-phi_max) : 0.0;
    return std::exp(phi(s_peak + std::log(x)) - phi_max);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double sum = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double piece_err = 0.0;
    double l1 = 0.0;
    const double v = integrator.integrate(f, knots[i], knots[i + 1],
                                          config.rel_tol * 1e-2, &piece_err, &l1);
    sum += v;
    err += piece_err * l1;
  }
  err += std::exp(phi(s_right) - phi_max + s_right - s_peak);
  if (left_truncated) err += std::exp(phi(s_left) - phi_max + s_left - s_peak);

  MomentValue out;
  out.log_value = phi_max + s_peak + std::log(sum);
  out.rel_error = err / sum;
  require_finite_result(out.log_value, "moment_tanh_sinh");
  return out;
}

MomentTable::MomentTable(KernelParams params, std::vector<MomentValue> entries)
    : params_(params), entries_(std::move(entries)) {
  if (entries_.empty()) throw ParamError("moment table is empty");
}

const MomentValue& MomentTable::at(std::size_t p) const {
  if (!covers(p)) {
    throw MomentTableGap("moment " + std::to_string(p) +
                         " requested but the table stops at " +
                         std::to_string(p_max()));
  }
  return entries_[p];
}

MomentTable MomentTable::build(const KernelParams& params, std::size_t p_max,
                               const QuadratureConfig& config) {
  config.validate();
  const std::size_t count = p_max + 1;
  std::vector<MomentValue> entries(count);
  detail::parallel_for(count, [&](std::size_t p) { entries[p] = moment(params, p, config); });
  return MomentTable(params, std::move(entries));
}

double MomentBoundFit::b1() const { return std::exp(log_b1); }
double MomentBoundFit::b2() const { return std::exp(log_b2); }

MomentBoundFit moment_bound_fit(const MomentTable& table,
                                const WeightSequence& seq) {
  const KernelParams& params = table.params();
  if (!params.bounds_regime()) {
    throw ParamError("moment bounds need sigma in (1, 2)");
  }
  if (seq.tau() != params.tau() || seq.sigma() != params.sigma()) {
    throw ParamError("moment table and sequence disagree on (tau, sigma)");
  }
  if (table.p_max() < 1) throw ParamError("moment fit needs p_max >= 1");
  MomentBoundFit fit;
  fit.log_m0 = table.log_m(0);
  fit.log_b1 = std::numeric_limits<double>::infinity();
  fit.log_b2 = -fit.log_b1;
  for (std::size_t p = 1; p <= table.p_max(); ++p) {
    const double r = (table.log_m(p) - seq.log_m(p)) / static_cast<double>(p);
    fit.profile.push_back(r);
    fit.log_b1 = std::min(fit.log_b1, r);
    fit.log_b2 = std::max(fit.log_b2, r);
  }
  return fit;
}

}  // namespace rapidborel
