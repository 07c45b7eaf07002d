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

#include "rapidborel/weight_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "rapidborel/errors.hpp"

namespace rapidborel {

namespace detail {
struct LogTable {
  mutable std::shared_mutex mutex;
  std::vector<double> logs;
};
}  // namespace detail

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kDecreaseRun = 20;

double direct_log_m(double tau, double sigma, std::size_t p) {
  if (p <= 1) return 0.0;
  const double x = static_cast<double>(p);
  return tau * std::pow(x, sigma) * std::log(x);
}

}  // namespace

WeightSequence::WeightSequence(double tau, double sigma, std::size_t horizon)
    : tau_(tau),
      sigma_(sigma),
      horizon_(horizon),
      table_(std::make_shared<detail::LogTable>()) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParamError("tau must be positive and finite");
  }
  if (!(sigma > 1.0) || !std::isfinite(sigma)) {
    throw ParamError("sigma must be finite and > 1");
  }
}

double WeightSequence::log_m(std::size_t p) const {
  if (p >= horizon_) return direct_log_m(tau_, sigma_, p);
  {
    std::shared_lock lock(table_->mutex);
    if (p < table_->logs.size()) return table_->logs[p];
  }
  std::unique_lock lock(table_->mutex);
  auto& logs = table_->logs;
  const std::size_t target = std::min(horizon_, std::max(2 * (p + 1), std::size_t{64}));
  for (std::size_t k = logs.size(); k < target; ++k) {
    logs.push_back(direct_log_m(tau_, sigma_, k));
  }
  return logs[p];
}

std::vector<double> WeightSequence::log_values(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t p = 0; p < count; ++p) out[p] = log_m(p);
  return out;
}

double WeightSequence::associated_T(double t, double h) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("associated_T needs finite t >= 0");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParamError("associated_T needs finite h > 0");
  }
  if (t == 0.0) return 0.0;
  const double ln_t = std::log(t);
  const double ln_h = std::log(h);
  auto term = [&](std::size_t p) {
    const double x = static_cast<double>(p);
    return std::pow(x, sigma_) * ln_h + x * ln_t - log_m(p);
  };
  // d/dp of the term and its bracket, extended to real p >= 1.
  auto bracket = [&](double x) {
    return sigma_ * ln_h - tau_ * sigma_ * std::log(x) - tau_;
  };
  auto slope = [&](double x) {
    return ln_t + std::pow(x, sigma_ - 1.0) * bracket(x);
  };

  if (ln_h <= 0.0) {
    // The term is concave on [1, inf): locate the real maximiser and compare
    // its two integer neighbours.
    if (slope(1.0) <= 0.0) return std::max(0.0, term(1));
    double lo = 1.0;
    double hi = 2.0;
    while (slope(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 0.5; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    const auto p0 = static_cast<std::size_t>(std::floor(lo));
    double best = term(std::max<std::size_t>(p0, 1));
    for (std::size_t p = p0 + 1; p <= static_cast<std::size_t>(std::ceil(hi)); ++p) {
      best = std::max(best, term(p));
    }
    return std::max(0.0, best);
  }

  double best = term(1);
  double previous = best;
  std::size_t run = 0;
  for (std::size_t p = 2;; ++p) {
    const double value = term(p);
    best = std::max(best, value);
    run = value < previous ? run + 1 : 0;
    previous = value;
    const double x = static_cast<double>(p);
    if (run >= kDecreaseRun && bracket(x) < 0.0 && slope(x) < 0.0) break;
  }
  return std::max(0.0, best);
}

double WeightSequence::auxiliary_h(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("auxiliary_h needs finite t >= 0");
  }
  if (t == 0.0) return 0.0;
  return std::exp(-associated_T(1.0 / t));
}

LogSequence LogSequence::from_values(std::span<const double> values) {
  if (values.empty()) throw ParamError("sequence is empty");
  std::vector<double> logs(values.size());
  for (std::size_t p = 0; p < values.size(); ++p) {
    const double v = values[p];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParamError("sequence entry " + std::to_string(p) +
                       " is not positive and finite");
    }
    logs[p] = std::log(v);
  }
  if (values[0] != 1.0) throw ParamError("sequence must start with M_0 = 1");
  return LogSequence(std::move(logs));
}

LogSequence LogSequence::from_logs(std::span<const double> logs) {
  if (logs.empty()) throw ParamError("sequence is empty");
  for (std::size_t p = 0; p < logs.size(); ++p) {
    if (!std::isfinite(logs[p])) {
      throw ParamError("log of sequence entry " + std::to_string(p) +
                       " is not finite");
    }
  }
  if (logs[0] != 0.0) throw ParamError("sequence must start with M_0 = 1");
  return LogSequence(std::vector<double>(logs.begin(), logs.end()));
}

namespace {
void require_size(const LogSequence& seq, std::size_t needed, const char* who) {
  if (seq.size() < needed) {
    throw ParamError(std::string(who) + " needs " + std::to_string(needed) +
                     " entries, got " + std::to_string(seq.size()));
  }
}
}  // namespace

LcReport check_lc(const LogSequence& seq, std::size_t horizon) {
  require_size(seq, horizon + 1, "check_lc");
  LcReport report;
  report.horizon = horizon;
  for (std::size_t p = 1; p < horizon; ++p) {
    const double lhs = 2.0 * seq[p];
    const double rhs = seq[p - 1] + seq[p + 1];
    const double slack =
        8.0 * kEps * (std::abs(seq[p - 1]) + std::abs(lhs) + std::abs(seq[p + 1]));
    if (lhs > rhs + slack) {
      report.holds = false;
      report.first_violation = p;
      break;
    }
  }
  return report;
}

double DcReport::constant() const { return std::exp(log_constant); }

DcReport check_dc(const LogSequence& seq, std::size_t horizon) {
  if (horizon == 0) throw ParamError("check_dc needs horizon >= 1");
  require_size(seq, horizon + 1, "check_dc");
  DcReport report;
  report.horizon = horizon;
  report.log_profile.resize(horizon);
  report.log_constant = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < horizon; ++p) {
    const double v = (seq[p + 1] - seq[p]) / static_cast<double>(p + 1);
    report.log_profile[p] = v;
    if (v > report.log_constant) {
      report.log_constant = v;
      report.argmax = p;
    }
  }
  return report;
}

MgReport check_mg_witness(const LogSequence& seq, std::size_t horizon) {
  require_size(seq, horizon + 1, "check_mg_witness");
  MgReport report;
  report.horizon = horizon;
  report.log_profile.resize(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    double best = 0.0;
    for (std::size_t p = 1; p < n; ++p) {
      best = std::max(best, seq[n] - seq[p] - seq[n - p]);
    }
    report.log_profile[n - 1] = best / static_cast<double>(n);
  }
  // Rising tail whose mean slope decays slower than n^-1.5: bounded profiles
  // such as the one for p! approach their limit with slope O(ln n / n^2).
  constexpr std::size_t kTrend = 10;
  if (horizon >= 4 * kTrend) {
    const auto& prof = report.log_profile;
    bool rising = true;
    for (std::size_t i = horizon - kTrend + 1; i < horizon; ++i) {
      rising = rising && prof[i] > prof[i - 1];
    }
    const std::size_t half = horizon / 2;
    const double late = prof[horizon - 1] - prof[horizon - 1 - kTrend];
    const double early = prof[half - 1] - prof[half - 1 - kTrend];
    report.unbounded_trend = rising && early > 0.0 && late >= early * std::pow(2.0, -1.5);
  }
  return report;
}

std::vector<GammaDefect> gamma_index_estimate(const LogSequence& seq,
                                              std::span<const double> gammas,
                                              std::size_t horizon) {
  require_size(seq, horizon + 2, "gamma_index_estimate");
  std::vector<GammaDefect> out;
  out.reserve(gammas.size());
  for (double gamma : gammas) {
    if (!std::isfinite(gamma)) throw ParamError("gamma must be finite");
    GammaDefect d;
    d.gamma = gamma;
    d.log_defect_by_horizon.resize(horizon + 1);
    double running_max = -std::numeric_limits<double>::infinity();
    double defect = 0.0;
    for (std::size_t q = 0; q <= horizon; ++q) {
      const double log_c =
          seq[q + 1] - seq[q] - gamma * std::log(static_cast<double>(q + 1));
      running_max = std::max(running_max, log_c);
      defect = std::max(defect, running_max - log_c);
      d.log_defect_by_horizon[q] = defect;
    }
    d.log_defect = defect;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace rapidborel
