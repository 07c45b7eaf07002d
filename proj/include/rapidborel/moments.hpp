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
#include <vector>

#include "rapidborel/kernel.hpp"
#include "rapidborel/quadrature.hpp"

namespace rapidborel {

class WeightSequence;

// ln m(p) with a relative error estimate, m(p) = int_0^inf t^p exp(-a g(t+1)) dt.
struct MomentValue {
  double log_value = 0.0;
  double rel_error = 0.0;
};

// Adaptive Gauss-Kronrod in u = ln t between the points where the integrand
// drops `tail_split` decades below its peak, plus a tangent-line bound for the
// two truncated tails. Throws QuadratureError if rel_error > rel_tol.
MomentValue moment(const KernelParams& params, std::size_t p,
                   const QuadratureConfig& config = {});

// Same integral by tanh-sinh in the original variable t. Shares nothing with
// moment() except the integrand, so the two serve as mutual checks.
MomentValue moment_tanh_sinh(const KernelParams& params, std::size_t p,
                             const QuadratureConfig& config = {});

class MomentTable {
 public:
  // Moments for p = 0 .. p_max, computed in parallel and assembled in p order.
  static MomentTable build(const KernelParams& params, std::size_t p_max,
                           const QuadratureConfig& config = {});

  MomentTable(KernelParams params, std::vector<MomentValue> entries);

  const KernelParams& params() const { return params_; }
  std::size_t p_max() const { return entries_.size() - 1; }
  bool covers(std::size_t p) const { return p < entries_.size(); }
  // Throws MomentTableGap when p > p_max.
  const MomentValue& at(std::size_t p) const;
  double log_m(std::size_t p) const { return at(p).log_value; }
  const std::vector<MomentValue>& entries() const { return entries_; }

 private:
  KernelParams params_;
  std::vector<MomentValue> entries_;
};

// r_p = (ln m(p) - ln M_p) / p for p >= 1; B1 = exp(min r_p), B2 = exp(max r_p).
struct MomentBoundFit {
  double log_b1 = 0.0;
  double log_b2 = 0.0;
  // r_p for p = 1 .. p_max (index p-1).
  std::vector<double> profile;
  // p = 0 has no p-th root; m(0) is reported against M_0 = 1 on its own.
  double log_m0 = 0.0;

  double b1() const;
  double b2() const;
};

// Throws ParamError unless sigma is in (1, 2), or if the table and the sequence
// disagree on (tau, sigma).
MomentBoundFit moment_bound_fit(const MomentTable& table,
                                const WeightSequence& seq);

}  // namespace rapidborel
