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

#include "rapidborel/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "complex_log.hpp"
#include "rapidborel/errors.hpp"
#include "rapidborel/lambert_w.hpp"
#include "rapidborel/weight_sequence.hpp"

namespace rapidborel {
namespace {

constexpr double kCutMargin = 1e-6;
constexpr std::size_t kDcHorizon = 200;

void require_kernel_domain(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("kernel argument must be finite");
  }
  if (z == Complex{}) throw DomainError("kernel is not evaluated at z = 0");
  if (std::abs(std::arg(z)) >= std::numbers::pi - kCutMargin) {
    throw DomainError("kernel argument too close to the cut (-inf, 0]");
  }
}

double real_shift_log(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("shifted kernel needs finite t > 0");
  }
  return std::log1p(t);
}

double g_from_real_log(const KernelParams& params, double ell) {
  const double inv = 1.0 / (params.sigma() - 1.0);
  const double w = lambert_w0(params.b() * ell);
  return std::exp(-std::log(w) * inv + params.sigma() * inv * std::log(ell));
}

double g_prime_from_real_log(const KernelParams& params, double ell, double x) {
  const double inv = 1.0 / (params.sigma() - 1.0);
  const double w = lambert_w0(params.b() * ell);
  return inv * std::exp(inv * (std::log(ell) - std::log(w))) / x *
         (params.sigma() - 1.0 / (w + 1.0));
}

double log_e_real(const KernelParams& params, double x) {
  return log_kernel_e(params, Complex{x, 0.0}).real();
}

struct Extremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
};

double checked_exp(double log_c, const char* which) {
  const double c = std::exp(log_c);
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw FitError(std::string(which) + " constant is not finite and positive");
  }
  return c;
}

// Shared driver: `reference(k, r)` is the log of the comparison function.
template <class Ref>
BoundFit fit_two_sided(const KernelParams& params, const SectorSpec& sector,
                       const GridSpec& grid, double lower_k, double upper_k,
                       Ref reference) {
  const auto points = sector_grid(sector, grid);
  std::vector<double> log_e(points.size());
  std::vector<double> ref_lo(points.size());
  std::vector<double> ref_hi(points.size());
  Extremes ex;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = std::abs(points[i]);
    log_e[i] = log_kernel_e(params, points[i]).real();
    ref_lo[i] = reference(lower_k, r);
    ref_hi[i] = reference(upper_k, r);
    ex.lo = std::min(ex.lo, log_e[i] - ref_lo[i]);
    ex.hi = std::max(ex.hi, log_e[i] - ref_hi[i]);
  }
  BoundFit fit;
  fit.tau = params.tau();
  fit.sigma = params.sigma();
  fit.sector = sector;
  fit.grid = grid;
  fit.lower_k = lower_k;
  fit.upper_k = upper_k;
  fit.lower_c = checked_exp(ex.lo, "lower");
  fit.upper_c = checked_exp(ex.hi, "upper");
  fit.points = points.size();
  const double log_lower = std::log(fit.lower_c);
  const double log_upper = std::log(fit.upper_c);
  double residual = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    residual = std::max(residual, log_lower + ref_lo[i] - log_e[i]);
    residual = std::max(residual, log_e[i] - log_upper - ref_hi[i]);
  }
  fit.max_residual = residual;
  return fit;
}

double recipe_lower_k(const SectorSpec& sector, const SectorFitOptions& o) {
  return o.safety * std::exp(std::numbers::pi * sector.opening_delta / 2.0);
}

double recipe_upper_k(const KernelParams& params, const SectorFitOptions& o) {
  return 1.0 / (o.safety * std::exp(1.0 / params.b()));
}

void require_safety(const SectorFitOptions& o) {
  if (!(o.safety >= 1.0) || !std::isfinite(o.safety)) {
    throw ParamError("safety factor must be finite and >= 1");
  }
  if (!(o.lower_k >= 0.0) || !(o.upper_k >= 0.0)) {
    throw ParamError("k overrides must be non-negative");
  }
}

}  // namespace

KernelConstants kernel_constants(double tau, double sigma) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParamError("tau must be positive and finite");
  }
  if (!(sigma > 1.0) || !std::isfinite(sigma)) {
    throw ParamError("sigma must be finite and > 1");
  }
  const double ratio = (sigma - 1.0) / (tau * sigma);
  return {std::pow(ratio, 1.0 / (sigma - 1.0)),
          std::exp((sigma - 1.0) / sigma) * ratio};
}

KernelParams::KernelParams(double tau, double sigma)
    : tau_(tau), sigma_(sigma), constants_(kernel_constants(tau, sigma)) {}

Complex g_of_log(const KernelParams& params, Complex omega) {
  if (!std::isfinite(omega.real()) || !std::isfinite(omega.imag())) {
    throw DomainError("g needs a finite logarithm");
  }
  if (omega.imag() == 0.0 && omega.real() <= 0.0) {
    throw DomainError("g is not holomorphic on (-inf, 1]");
  }
  const double inv = 1.0 / (params.sigma() - 1.0);
  const Complex w = lambert_w0(params.b() * omega);
  return std::exp(-std::log(w) * inv + params.sigma() * inv * std::log(omega));
}

Complex g_complex(const KernelParams& params, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("g needs a finite argument");
  }
  if (z.imag() == 0.0 && z.real() <= 1.0) {
    throw DomainError("g is not holomorphic on (-inf, 1]");
  }
  return g_of_log(params, detail::log1p_complex(z - 1.0));
}

Complex kernel_e_over_z(const KernelParams& params, Complex z) {
  if (z == Complex{}) return {1.0, 0.0};
  require_kernel_domain(z);
  return std::exp(-params.a() * g_of_log(params, detail::log1p_complex(z)));
}

Complex kernel_e(const KernelParams& params, Complex z) {
  require_kernel_domain(z);
  return z * std::exp(-params.a() * g_of_log(params, detail::log1p_complex(z)));
}

Complex log_kernel_e(const KernelParams& params, Complex z) {
  require_kernel_domain(z);
  return std::log(z) - params.a() * g_of_log(params, detail::log1p_complex(z));
}

double g_real(const KernelParams& params, double x) {
  if (!(x > 1.0) || !std::isfinite(x)) {
    throw DomainError("g_real needs finite x > 1");
  }
  return g_from_real_log(params, std::log1p(x - 1.0));
}

double g_prime_real(const KernelParams& params, double x) {
  if (!(x > 1.0) || !std::isfinite(x)) {
    throw DomainError("g_prime_real needs finite x > 1");
  }
  return g_prime_from_real_log(params, std::log1p(x - 1.0), x);
}

double a_g_shifted(const KernelParams& params, double t) {
  return params.a() * g_from_real_log(params, real_shift_log(t));
}

double a_g_shifted_prime(const KernelParams& params, double t) {
  return params.a() * g_prime_from_real_log(params, real_shift_log(t), 1.0 + t);
}

double a_g_shifted_log(const KernelParams& params, double u) {
  if (std::isnan(u) || u == std::numeric_limits<double>::infinity()) {
    throw DomainError("shifted kernel needs u < inf");
  }
  const double ell = u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  if (ell == 0.0) return 0.0;
  return params.a() * g_from_real_log(params, ell);
}

double a_g_shifted_log_prime(const KernelParams& params, double u) {
  if (std::isnan(u) || u == std::numeric_limits<double>::infinity()) {
    throw DomainError("shifted kernel needs u < inf");
  }
  const double ell = u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  if (ell == 0.0) return 0.0;
  const double inv = 1.0 / (params.sigma() - 1.0);
  const double w = lambert_w0(params.b() * ell);
  // d ell / du = t / (1 + t).
  return params.a() * inv * std::exp(inv * (std::log(ell) - std::log(w))) *
         (params.sigma() - 1.0 / (w + 1.0)) / (1.0 + std::exp(-u));
}

MonotonicityProbe g_real_monotonicity_probe(const KernelParams& params,
                                            std::span<const double> grid) {
  if (grid.empty()) throw ParamError("monotonicity probe needs a grid");
  MonotonicityProbe probe;
  probe.min_derivative = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double d = g_prime_real(params, x);
    if (d < probe.min_derivative) {
      probe.min_derivative = d;
      probe.argmin = x;
    }
  }
  probe.tail_x = grid.back();
  probe.tail_derivative = g_prime_real(params, grid.back());
  return probe;
}

BoundFit sector_bound_fit(const KernelParams& params, const SectorSpec& sector,
                          const GridSpec& grid, const SectorFitOptions& options) {
  sector.validate();
  require_safety(options);
  const double k1 = options.lower_k > 0.0 ? options.lower_k
                                          : recipe_lower_k(sector, options);
  const double k2 = options.upper_k > 0.0 ? options.upper_k
                                          : recipe_upper_k(params, options);
  BoundFit fit = fit_two_sided(params, sector, grid, k1, k2,
                               [&](double k, double r) {
                                 return log_e_real(params, k * r);
                               });
  fit.kind = "sector";
  return fit;
}

BoundFit flatness_fit(const KernelParams& params, const SectorSpec& sector,
                      const GridSpec& grid, const SectorFitOptions& options) {
  if (!params.bounds_regime()) {
    throw ParamError("flatness bounds need sigma in (1, 2)");
  }
  sector.validate();
  require_safety(options);
  const WeightSequence seq(params.tau(), params.sigma());
  double k3 = options.lower_k;
  if (!(k3 > 0.0)) k3 = 1.0 / recipe_lower_k(sector, options);
  double k4 = options.upper_k;
  if (!(k4 > 0.0)) {
    const auto logs = seq.log_values(kDcHorizon + 1);
    const double dc = check_dc(LogSequence::from_logs(logs), kDcHorizon).constant();
    k4 = dc / recipe_upper_k(params, options);
  }
  // Bounds are stated for exp(-T), so the reference is -T(r/k).
  BoundFit fit = fit_two_sided(params, sector, grid, k3, k4,
                               [&](double k, double r) {
                                 return -seq.associated_T(r / k);
                               });
  fit.kind = "flatness";
  return fit;
}

SandwichFit sandwich_fit(const KernelParams& params, const WeightSequence& seq,
                         std::span<const double> xs) {
  if (xs.empty()) throw ParamError("sandwich fit needs points");
  if (seq.tau() != params.tau() || seq.sigma() != params.sigma()) {
    throw ParamError("sequence and kernel parameters differ");
  }
  SandwichFit fit;
  fit.log_ratio.reserve(xs.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs) {
    const double v = seq.associated_T(x) - params.a() * g_real(params, x);
    fit.log_ratio.push_back(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  fit.lower = std::exp(lo);
  fit.upper = std::exp(hi);
  return fit;
}

}  // namespace rapidborel
