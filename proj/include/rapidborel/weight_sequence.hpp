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
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace rapidborel {

namespace detail {
struct LogTable;
}

// The sequence M_p = p^(tau * p^sigma), M_0 = 1, held as natural logs.
//
// Values up to `horizon` are memoized in an append-only table shared between
// copies; indices beyond the horizon are evaluated directly.
class WeightSequence {
 public:
  WeightSequence(double tau, double sigma, std::size_t horizon = 512);

  double tau() const { return tau_; }
  double sigma() const { return sigma_; }
  std::size_t horizon() const { return horizon_; }

  // log M_p.
  double log_m(std::size_t p) const;

  // T_h(t) = sup_{p >= 1} ln+( h^(p^sigma) t^p / M_p ), T_h(0) = 0.
  double associated_T(double t, double h = 1.0) const;

  // h(t) = exp(-T(1/t)) = inf_{p >= 0} M_p t^p, h(0) = 0.
  double auxiliary_h(double t) const;

  // log M_0 ... log M_{count-1}.
  std::vector<double> log_values(std::size_t count) const;

 private:
  double tau_;
  double sigma_;
  std::size_t horizon_;
  std::shared_ptr<detail::LogTable> table_;
};

// A positive sequence with M_0 = 1, stored as natural logs.
class LogSequence {
 public:
  // Rejects empty input, non-positive or non-finite values, and M_0 != 1.
  static LogSequence from_values(std::span<const double> values);
  static LogSequence from_logs(std::span<const double> logs);

  std::size_t size() const { return logs_.size(); }
  double operator[](std::size_t p) const { return logs_[p]; }
  std::span<const double> logs() const { return logs_; }

 private:
  explicit LogSequence(std::vector<double> logs) : logs_(std::move(logs)) {}
  std::vector<double> logs_;
};

// The checkers below are finite-horizon evidence about a sequence, not
// statements about its tail. Each report carries the horizon it looked at.

struct LcReport {
  std::size_t horizon = 0;
  bool holds = true;
  std::optional<std::size_t> first_violation;
};

// M_p^2 <= M_{p-1} M_{p+1} for 1 <= p < horizon. Needs size() > horizon.
LcReport check_lc(const LogSequence& seq, std::size_t horizon);

struct DcReport {
  std::size_t horizon = 0;
  // log of max_{p < horizon} (M_{p+1}/M_p)^(1/(p+1)).
  double log_constant = 0.0;
  std::size_t argmax = 0;
  // log (M_{p+1}/M_p)^(1/(p+1)) for p = 0 .. horizon-1.
  std::vector<double> log_profile;

  double constant() const;
};

DcReport check_dc(const LogSequence& seq, std::size_t horizon);

struct MgReport {
  std::size_t horizon = 0;
  // For n = 1 .. horizon: log max_{p+q=n} (M_n / (M_p M_q))^(1/n).
  std::vector<double> log_profile;
  // The last ten values increase strictly and the mean slope near the horizon
  // is at least 2^-1.5 times the one near horizon / 2. Needs horizon >= 40.
  bool unbounded_trend = false;
};

MgReport check_mg_witness(const LogSequence& seq, std::size_t horizon);

struct GammaDefect {
  double gamma = 0.0;
  // log max_{p <= q <= horizon} c_p / c_q, c_p = M_{p+1} / (M_p (p+1)^gamma).
  double log_defect = 0.0;
  // The same maximum restricted to q <= h, for h = 0 .. horizon.
  std::vector<double> log_defect_by_horizon;
};

// Needs size() >= horizon + 2.
std::vector<GammaDefect> gamma_index_estimate(const LogSequence& seq,
                                              std::span<const double> gammas,
                                              std::size_t horizon);

}  // namespace rapidborel
