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
#include <span>
#include <string>
#include <vector>

#include "rapidborel/sector.hpp"

namespace rapidborel {

class WeightSequence;

struct KernelConstants {
  double a = 0.0;
  double b = 0.0;
};

// a = ((sigma-1)/(tau*sigma))^(1/(sigma-1)),
// b = exp((sigma-1)/sigma) * (sigma-1)/(tau*sigma).
// Throws ParamError unless tau > 0 and sigma > 1.
KernelConstants kernel_constants(double tau, double sigma);

// Parameters of the kernel e(z) = z * exp(-a * g(z + 1)). The constants are
// derived once at construction and cannot be set independently.
class KernelParams {
 public:
  KernelParams(double tau, double sigma);

  double tau() const { return tau_; }
  double sigma() const { return sigma_; }
  double a() const { return constants_.a; }
  double b() const { return constants_.b; }

  // sigma in (1, 2): the range where the moment and flatness bounds apply.
  bool bounds_regime() const { return sigma_ < 2.0; }

 private:
  double tau_;
  double sigma_;
  KernelConstants constants_;
};

// g(z) = W0(b Log z)^(-1/(sigma-1)) * (Log z)^(sigma/(sigma-1)) with principal
// powers. Requires z off (-inf, 1] on the real axis; throws DomainError.
Complex g_complex(const KernelParams& params, Complex z);

// g written in terms of omega = Log z. omega must avoid (-inf, 0].
Complex g_of_log(const KernelParams& params, Complex omega);

// e(z) = z * exp(-a g(z+1)) on C \ (-inf, 0]. Evaluation is refused within
// 1e-6 of the cut in angle.
Complex kernel_e(const KernelParams& params, Complex z);

// e(z)/z = exp(-a g(z+1)), extended by 1 at z = 0.
Complex kernel_e_over_z(const KernelParams& params, Complex z);

// Log z - a g(z+1). Its real part is ln|e(z)|, finite where e underflows.
Complex log_kernel_e(const KernelParams& params, Complex z);

// Real restriction of g on (1, inf) and its closed-form derivative.
double g_real(const KernelParams& params, double x);
double g_prime_real(const KernelParams& params, double x);

// a * g(1 + t) for t > 0, accurate as t -> 0.
double a_g_shifted(const KernelParams& params, double t);
// d/dt of a * g(1 + t).
double a_g_shifted_prime(const KernelParams& params, double t);

// The same in u = ln t, usable where t itself overflows; u = -inf gives 0.
double a_g_shifted_log(const KernelParams& params, double u);
// d/du of a_g_shifted_log.
double a_g_shifted_log_prime(const KernelParams& params, double u);

struct MonotonicityProbe {
  double min_derivative = 0.0;
  double argmin = 0.0;
  double tail_x = 0.0;
  double tail_derivative = 0.0;
};

// Closed-form g' on a grid inside (1, inf): its minimum and the value at the
// last grid point.
MonotonicityProbe g_real_monotonicity_probe(const KernelParams& params,
                                            std::span<const double> grid);

// Two-sided bound fitted on a sector grid:
//   lower_c * F(lower_k, |z|) <= |e(z)| <= upper_c * F(upper_k, |z|)
// with F(k, r) = e(k r) for the sector fit and exp(-T(r / k)) for the
// flatness fit. The k's come from fixed recipes (below);
// the c's are the grid extremes.
struct BoundFit {
  std::string kind;
  double tau = 0.0;
  double sigma = 0.0;
  SectorSpec sector;
  GridSpec grid;
  double lower_c = 0.0;
  double lower_k = 0.0;
  double upper_c = 0.0;
  double upper_k = 0.0;
  // Largest violation, in log scale, of either inequality once the fitted
  // constants are re-applied (0 when every grid point is certified).
  double max_residual = 0.0;
  std::size_t points = 0;
};

struct SectorFitOptions {
  double safety = 1.05;
  // When positive, replace the recipe values of the k's.
  double lower_k = 0.0;
  double upper_k = 0.0;
};

// |e(z)| between C1 e(K1|z|) and C2 e(K2|z|) with K1 = safety*exp(pi*delta/2)
// and K2 = 1/(safety*exp(1/b)). Throws FitError if a constant is not finite
// and positive.
BoundFit sector_bound_fit(const KernelParams& params, const SectorSpec& sector,
                          const GridSpec& grid = {},
                          const SectorFitOptions& options = {});

// |e(z)| between C3 exp(-T(|z|/K3)) and C4 exp(-T(|z|/K4)), with
// K3 = 1/K1 and K4 = D/K2 where D is the derivation-closedness constant of
// the sequence. Throws ParamError unless sigma is in (1, 2).
BoundFit flatness_fit(const KernelParams& params, const SectorSpec& sector,
                      const GridSpec& grid = {},
                      const SectorFitOptions& options = {});

// exp(T(x) - a g(x)) over the given points: [A, A~] with A the min, A~ the max.
struct SandwichFit {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> log_ratio;
};

SandwichFit sandwich_fit(const KernelParams& params, const WeightSequence& seq,
                         std::span<const double> xs);

}  // namespace rapidborel
