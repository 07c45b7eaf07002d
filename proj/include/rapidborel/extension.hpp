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
#include <span>
#include <vector>

#include "rapidborel/kernel.hpp"
#include "rapidborel/moments.hpp"
#include "rapidborel/quadrature.hpp"
#include "rapidborel/sector.hpp"
#include "rapidborel/weight_sequence.hpp"

namespace rapidborel {

// mantissa * exp(log_scale). Coefficients of interest (moments, M_p) leave
// the double range long before the series does.
struct ScaledComplex {
  Complex mantissa{};
  double log_scale = 0.0;

  static ScaledComplex from_log(double log_abs, double phase = 0.0);
  bool is_zero() const { return mantissa == Complex{}; }
  // ln |value|, -inf for zero.
  double log_abs() const;
  // May overflow to infinity.
  Complex value() const;
};

// sup_p |c_p| / (D1^p M_p) <= C1.
struct GrowthCertificate {
  double log_c1 = 0.0;  // -inf for the zero series
  double d1 = 1.0;
  double c1() const;
};

// 601 log-spaced points on [1e-3, 1e3]; contains 1 exactly.
std::vector<double> default_d_grid();

// For each D computes C(D) = max_p |c_p| / (D^p M_p) and keeps the smallest D
// whose C(D) lies within a factor (1 + 1e-9) of the minimum over the grid.
GrowthCertificate certify_growth(std::span<const ScaledComplex> coefficients,
                                 const WeightSequence& seq,
                                 std::span<const double> d_grid);

// Leading segment c_0 .. c_P of a series in C[[z]]_{M,A}, with its growth
// certificate computed on construction.
class FormalSeries {
 public:
  FormalSeries(WeightSequence seq, std::vector<ScaledComplex> coefficients,
               std::span<const double> d_grid = {});

  const WeightSequence& sequence() const { return seq_; }
  const std::vector<ScaledComplex>& coefficients() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  const GrowthCertificate& certificate() const { return cert_; }

  // c_p = m(p) for p = 0 .. count-1, read from the table.
  static FormalSeries moment_series(WeightSequence seq, const MomentTable& table,
                                    std::size_t count);
  // c_p = 0 except c_mode = m(mode).
  static FormalSeries single_mode(WeightSequence seq, const MomentTable& table,
                                  std::size_t mode, std::size_t count);
  static FormalSeries zero(WeightSequence seq, std::size_t count);

  FormalSeries scaled(Complex factor) const;

 private:
  WeightSequence seq_;
  std::vector<ScaledComplex> coeffs_;
  GrowthCertificate cert_;
};

// gamma_p = c_p / m(p), with |gamma_p| <= C2 D2^p where D2 = d1 D1,
// d1 = max(1, 1/B1), and C2 = C1 max(1, 1/m(0)).
struct BorelSeries {
  std::vector<Complex> gamma;
  double c2 = 0.0;
  double d2 = 0.0;
  double d1_factor = 1.0;
  // max_{p>=1} |gamma_p|^(1/p), the measured geometric rate.
  double measured_rate = 0.0;
};

// Throws MomentTableGap if the table is shorter than the series.
BorelSeries borel_series(const FormalSeries& series, const MomentTable& table);

struct ExtensionConfig {
  // Upper limit of the truncated transform. 0 selects (1 - epsilon) / D2.
  double r0 = 0.0;
  double epsilon = 0.5;
  // Number of Borel coefficients kept, K. 0 keeps the whole segment.
  std::size_t borel_truncation = 0;
  QuadratureConfig quadrature{1e-13, 1e-300, 4000, 40.0};
};

// f(z) = int_0^R0 e(u/z) g(u) du/u with g the (polynomial) Borel transform of
// a finite series. Pure once constructed.
class ExtensionOperator {
 public:
  ExtensionOperator(const FormalSeries& series, const MomentTable& table,
                    const ExtensionConfig& config = {});

  const FormalSeries& series() const { return series_; }
  const BorelSeries& borel() const { return borel_; }
  const KernelParams& params() const { return params_; }
  double r0() const { return r0_; }
  double epsilon() const { return epsilon_; }
  // C2 (D2 R0)^(K+1) / (1 - D2 R0): bound on the dropped part of g when the
  // segment is truncated below its length.
  double truncation_tail_bound() const { return tail_bound_; }

  QuadResult<Complex> evaluate(Complex z) const;
  Complex operator()(Complex z) const { return evaluate(z).value; }

  // f(z) - sum_{p<N} c_p z^p written without cancellation:
  //   int_0^R0 e(u/z) sum_{k>=N} gamma_k u^k du/u
  //     - int_R0^inf e(u/z) sum_{p<N} gamma_p u^p du/u.
  QuadResult<Complex> remainder(std::size_t n, Complex z) const;

  // int_R0^inf e(u/z) q(u) du/u for a polynomial q given by coefficients.
  QuadResult<Complex> tail_integral(std::span<const Complex> poly,
                                    Complex z) const;

 private:
  FormalSeries series_;
  KernelParams params_;
  BorelSeries borel_;
  std::size_t kept_ = 0;
  double r0_ = 0.0;
  double epsilon_ = 0.5;
  double tail_bound_ = 0.0;
  QuadratureConfig quad_;
};

// f(z) for one point; builds nothing and keeps nothing.
Complex extend(const ExtensionOperator& op, Complex z);

// Sum of c_p z^p for p < n in compensated arithmetic, with a bound on its
// rounding error.
struct CompensatedSum {
  Complex value{};
  double error_bound = 0.0;
  double abs_sum = 0.0;
};
CompensatedSum partial_sum(std::span<const ScaledComplex> coefficients,
                           std::size_t n, Complex z);

struct RemainderEntry {
  std::size_t n = 0;
  Complex z{};
  double remainder = 0.0;
  // ln(remainder / ((d D1)^N M_N |z|^N)); -inf for a zero remainder.
  double log_ratio = 0.0;
  // The direct difference f - S_N is dominated by rounding here.
  bool cancellation_flag = false;
  // Relative gap between the direct difference and the split integral,
  // meaningful only where cancellation_flag is false.
  double route_gap = 0.0;
};

struct RemainderReport {
  SectorSpec sector;
  std::size_t n_max = 0;
  double c1 = 0.0;
  double d1 = 0.0;
  double r0 = 0.0;
  // Recipe scale d = (2 B / K6) max(d1', d2'), with B = B2 from the
  // moment fit, K6 the upper k of the sector fit, d1' = D2 / D1 and
  // d2' = d1' / (1 - epsilon).
  double d = 0.0;
  double b = 0.0;
  double k6 = 0.0;
  double d1_factor = 0.0;
  double d2_factor = 0.0;
  // Fitted c: remainder <= c C1 (d D1)^N M_N |z|^N on the grid.
  double c = 0.0;
  // Per N: ln sup_z ratio.
  std::vector<double> log_sup_ratio;
  std::vector<RemainderEntry> entries;
  std::size_t flagged = 0;
};

// Entries sorted by (N, grid index). Throws ParamError if a grid point is
// outside the sector or n_max exceeds the series length.
RemainderReport remainder_scan(const ExtensionOperator& op,
                               const SectorSpec& sector, std::size_t n_max,
                               std::span<const Complex> z_grid,
                               const MomentBoundFit& moment_fit,
                               const BoundFit& sector_fit);

// Quasi-random points of the sector with |z| in [r_min, r_max].
std::vector<Complex> remainder_grid(const SectorSpec& sector, std::size_t count,
                                    std::uint64_t seed = 0);

struct RoundtripEntry {
  std::size_t p = 0;
  double radius = 0.0;
  Complex estimate_coarse{};
  Complex estimate_fine{};
  Complex extrapolated{};
  Complex expected{};
  double abs_error = 0.0;
  double rel_error = 0.0;
};

struct RoundtripOptions {
  // Half-angle of the Cauchy circles seen from the origin.
  double margin = 0.7853981633974483;
  std::size_t nodes = 64;
  // Base radius; per-p radii are chosen below this from the coefficients.
  double radius = 1e-3;
};

// Recovers c_p for p <= p_max from Cauchy integrals of f at centers x and x/2
// on the positive axis followed by Richardson extrapolation to x -> 0.
std::vector<RoundtripEntry> borel_roundtrip(const ExtensionOperator& op,
                                            const SectorSpec& sector,
                                            std::size_t p_max,
                                            const RoundtripOptions& options = {});

}  // namespace rapidborel
