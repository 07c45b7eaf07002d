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

#include "rapidborel/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "parallel.hpp"
#include "rapidborel/errors.hpp"

namespace rapidborel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLn10 = std::numbers::ln10;
constexpr double kCertificateSlack = 1e-9;
constexpr double kCancellationShare = 1e-3;
constexpr std::size_t kTailScanLimit = 4000;
constexpr double kRichardsonTarget = 1e-6;
constexpr double kLeakTarget = 1e-9;
constexpr int kMaxShrink = 40;

Complex horner(std::span<const Complex> coeffs, double u) {
  Complex acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

// 0, 0.1|z|, |z|, 10|z|, ... up to r0.
std::vector<double> body_breakpoints(double scale, double r0) {
  std::vector<double> pts{0.0};
  for (double v = 0.1 * scale; v < r0; v *= 10.0) pts.push_back(v);
  pts.push_back(r0);
  return pts;
}

void require_operator_point(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == Complex{}) {
    throw DomainError("extension needs a finite nonzero z");
  }
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double out = 0.0;
  while (i > 0) {
    out += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return out;
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScaledComplex ScaledComplex::from_log(double log_abs, double phase) {
  return {std::polar(1.0, phase), log_abs};
}

double ScaledComplex::log_abs() const {
  if (is_zero()) return -kInf;
  return std::log(std::abs(mantissa)) + log_scale;
}

Complex ScaledComplex::value() const {
  if (is_zero()) return {};
  return mantissa * std::exp(log_scale);
}

double GrowthCertificate::c1() const { return std::exp(log_c1); }

std::vector<double> default_d_grid() {
  auto grid = log_space(1e-3, 1e3, 601);
  grid[300] = 1.0;
  return grid;
}

GrowthCertificate certify_growth(std::span<const ScaledComplex> coefficients,
                                 const WeightSequence& seq,
                                 std::span<const double> d_grid) {
  if (d_grid.empty()) throw ParamError("certify_growth needs a D grid");
  std::vector<double> logs(coefficients.size());
  bool all_zero = true;
  for (std::size_t p = 0; p < coefficients.size(); ++p) {
    logs[p] = coefficients[p].log_abs();
    all_zero = all_zero && coefficients[p].is_zero();
  }
  GrowthCertificate cert;
  if (all_zero) {
    cert.log_c1 = -kInf;
    cert.d1 = 1.0;
    return cert;
  }
  std::vector<double> log_c(d_grid.size(), -kInf);
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    if (!(d_grid[i] > 0.0)) throw ParamError("D grid entries must be positive");
    const double ln_d = std::log(d_grid[i]);
    for (std::size_t p = 0; p < logs.size(); ++p) {
      if (logs[p] == -kInf) continue;
      log_c[i] = std::max(log_c[i],
                          logs[p] - static_cast<double>(p) * ln_d - seq.log_m(p));
    }
  }
  const double best = *std::min_element(log_c.begin(), log_c.end());
  const double cap = best + std::log1p(kCertificateSlack);
  std::size_t pick = 0;
  double pick_d = kInf;
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    if (log_c[i] <= cap && d_grid[i] < pick_d) {
      pick = i;
      pick_d = d_grid[i];
    }
  }
  cert.d1 = pick_d;
  cert.log_c1 = log_c[pick];
  return cert;
}

FormalSeries::FormalSeries(WeightSequence seq,
                           std::vector<ScaledComplex> coefficients,
                           std::span<const double> d_grid)
    : seq_(std::move(seq)), coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw ParamError("a series needs at least one coefficient");
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    const auto& c = coeffs_[p];
    if (!std::isfinite(c.mantissa.real()) || !std::isfinite(c.mantissa.imag()) ||
        !std::isfinite(c.log_scale)) {
      throw ParamError("coefficient " + std::to_string(p) + " is not finite");
    }
  }
  if (d_grid.empty()) {
    const auto grid = default_d_grid();
    cert_ = certify_growth(coeffs_, seq_, grid);
  } else {
    cert_ = certify_growth(coeffs_, seq_, d_grid);
  }
}

FormalSeries FormalSeries::moment_series(WeightSequence seq,
                                         const MomentTable& table,
                                         std::size_t count) {
  if (count == 0) throw ParamError("series length must be positive");
  std::vector<ScaledComplex> c(count);
  for (std::size_t p = 0; p < count; ++p) c[p] = ScaledComplex::from_log(table.log_m(p));
  return FormalSeries(std::move(seq), std::move(c));
}

FormalSeries FormalSeries::single_mode(WeightSequence seq,
                                       const MomentTable& table,
                                       std::size_t mode, std::size_t count) {
  if (mode >= count) throw ParamError("mode index outside the series");
  std::vector<ScaledComplex> c(count);
  c[mode] = ScaledComplex::from_log(table.log_m(mode));
  return FormalSeries(std::move(seq), std::move(c));
}

FormalSeries FormalSeries::zero(WeightSequence seq, std::size_t count) {
  if (count == 0) throw ParamError("series length must be positive");
  return FormalSeries(std::move(seq), std::vector<ScaledComplex>(count));
}

FormalSeries FormalSeries::scaled(Complex factor) const {
  std::vector<ScaledComplex> c = coeffs_;
  for (auto& v : c) v.mantissa *= factor;
  return FormalSeries(seq_, std::move(c));
}

BorelSeries borel_series(const FormalSeries& series, const MomentTable& table) {
  const std::size_t n = series.size();
  if (!table.covers(n - 1)) {
    throw MomentTableGap("series of length " + std::to_string(n) +
                         " needs moments up to " + std::to_string(n - 1) +
                         ", table stops at " + std::to_string(table.p_max()));
  }
  const auto fit = moment_bound_fit(table, series.sequence());
  const auto& cert = series.certificate();
  BorelSeries out;
  out.gamma.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& c = series.coefficients()[p];
    out.gamma[p] = c.is_zero() ? Complex{}
                               : c.mantissa * std::exp(c.log_scale - table.log_m(p));
    if (p >= 1 && !c.is_zero()) {
      out.measured_rate = std::max(
          out.measured_rate,
          std::exp(std::log(std::abs(out.gamma[p])) / static_cast<double>(p)));
    }
  }
  out.d1_factor = std::max(1.0, 1.0 / fit.b1());
  out.c2 = cert.c1() * std::max(1.0, std::exp(-table.log_m(0)));
  out.d2 = out.d1_factor * cert.d1;
  return out;
}

ExtensionOperator::ExtensionOperator(const FormalSeries& series,
                                     const MomentTable& table,
                                     const ExtensionConfig& config)
    : series_(series),
      params_(table.params()),
      borel_(borel_series(series, table)),
      epsilon_(config.epsilon),
      quad_(config.quadrature) {
  quad_.validate();
  if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) {
    throw ParamError("epsilon must lie in (0, 1)");
  }
  if (!(config.r0 >= 0.0) || !std::isfinite(config.r0)) {
    throw ParamError("R0 must be finite and non-negative");
  }
  kept_ = config.borel_truncation == 0
              ? series.size()
              : std::min(config.borel_truncation, series.size());
  r0_ = config.r0 > 0.0 ? config.r0 : (1.0 - epsilon_) / borel_.d2;
  if (kept_ < series.size()) {
    const double q = borel_.d2 * r0_;
    tail_bound_ = q < 1.0 ? borel_.c2 * std::pow(q, static_cast<double>(kept_ + 1)) /
                                (1.0 - q)
                          : kInf;
  }
}

QuadResult<Complex> ExtensionOperator::evaluate(Complex z) const {
  require_operator_point(z);
  const std::span<const Complex> g(borel_.gamma.data(), kept_);
  if (std::all_of(g.begin(), g.end(), [](Complex c) { return c == Complex{}; })) {
    return {};
  }
  auto integrand = [&](double u) {
    return kernel_e_over_z(params_, u / z) / z * horner(g, u);
  };
  return integrate_gk_pieces(integrand, body_breakpoints(std::abs(z), r0_), quad_);
}

QuadResult<Complex> ExtensionOperator::tail_integral(std::span<const Complex> poly,
                                                     Complex z) const {
  require_operator_point(z);
  std::vector<std::pair<double, Complex>> terms;  // (ln |gamma_p|, gamma_p), p
  std::vector<std::size_t> powers;
  for (std::size_t p = 0; p < poly.size(); ++p) {
    if (poly[p] == Complex{}) continue;
    terms.emplace_back(std::log(std::abs(poly[p])), poly[p]);
    powers.push_back(p);
  }
  if (terms.empty()) return {};
  const double ln_r0 = std::log(r0_);
  // ln of the largest term magnitude at u = R0 e^s.
  auto envelope = [&](double s) {
    const double log_e = log_kernel_e(params_, r0_ * std::exp(s) / z).real();
    double best = -kInf;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      best = std::max(best, terms[i].first +
                                static_cast<double>(powers[i]) * (ln_r0 + s));
    }
    return log_e + best;
  };
  double peak = envelope(0.0);
  double previous = peak;
  double slope = 0.0;
  std::size_t s_end = 0;
  for (std::size_t k = 1;; ++k) {
    if (k > kTailScanLimit) {
      throw QuadratureError("tail integral does not decay along the ray");
    }
    const double v = envelope(static_cast<double>(k));
    peak = std::max(peak, v);
    slope = v - previous;
    previous = v;
    if (slope < 0.0 && v < peak - quad_.tail_split * kLn10) {
      s_end = k;
      break;
    }
  }
  const double shift = peak;
  auto integrand = [&](double s) {
    const Complex log_e = log_kernel_e(params_, r0_ * std::exp(s) / z);
    Complex acc{};
    for (std::size_t i = 0; i < terms.size(); ++i) {
      acc += terms[i].second *
             std::exp(log_e + static_cast<double>(powers[i]) * (ln_r0 + s) - shift);
    }
    return acc;
  };
  std::vector<double> pts;
  for (std::size_t k = 0; k <= s_end; ++k) pts.push_back(static_cast<double>(k));
  auto r = integrate_gk_pieces(integrand, pts, quad_);
  const double scale = std::exp(shift);
  const double dropped = std::exp(previous - shift) / -slope *
                         static_cast<double>(terms.size());
  r.value *= scale;
  r.error = (r.error + dropped) * scale;
  r.l1 *= scale;
  return r;
}

QuadResult<Complex> ExtensionOperator::remainder(std::size_t n, Complex z) const {
  require_operator_point(z);
  const auto& gamma = borel_.gamma;
  QuadResult<Complex> out;
  if (n < kept_) {
    const std::span<const Complex> high(gamma.data() + n, kept_ - n);
    if (std::any_of(high.begin(), high.end(), [](Complex c) { return c != Complex{}; })) {
      const double power = static_cast<double>(n);
      auto integrand = [&](double u) {
        return kernel_e_over_z(params_, u / z) / z * std::pow(u, power) *
               horner(high, u);
      };
      out = integrate_gk_pieces(integrand, body_breakpoints(std::abs(z), r0_), quad_);
    }
  }
  const std::size_t low = std::min(n, kept_);
  if (low > 0) {
    const auto tail = tail_integral(std::span<const Complex>(gamma.data(), low), z);
    out.value -= tail.value;
    out.error += tail.error;
    out.l1 += tail.l1;
    out.evaluations += tail.evaluations;
  }
  // Coefficients beyond the kept Borel segment are absent from f.
  for (std::size_t p = kept_; p < std::min(n, series_.size()); ++p) {
    const auto& c = series_.coefficients()[p];
    if (!c.is_zero()) {
      out.value -= c.mantissa * std::exp(c.log_scale + static_cast<double>(p) * std::log(z));
    }
  }
  return out;
}

Complex extend(const ExtensionOperator& op, Complex z) { return op(z); }

CompensatedSum partial_sum(std::span<const ScaledComplex> coefficients,
                           std::size_t n, Complex z) {
  if (n > coefficients.size()) {
    throw ParamError("partial sum longer than the series");
  }
  CompensatedSum out;
  double re = 0.0, re_c = 0.0, im = 0.0, im_c = 0.0;
  auto neumaier = [](double& sum, double& comp, double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  };
  const Complex log_z = z == Complex{} ? Complex{} : std::log(z);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& c = coefficients[p];
    if (c.is_zero()) continue;
    Complex term;
    double exponent_size = std::abs(c.log_scale);
    if (p == 0) {
      term = c.value();
    } else if (z == Complex{}) {
      continue;
    } else {
      const Complex e = c.log_scale + static_cast<double>(p) * log_z;
      term = c.mantissa * std::exp(e);
      exponent_size = std::abs(e.real()) + std::abs(e.imag());
    }
    const double mag = std::abs(term);
    out.abs_sum += mag;
    out.error_bound += mag * kEps * (4.0 + exponent_size);
    neumaier(re, re_c, term.real());
    neumaier(im, im_c, term.imag());
  }
  out.value = {re + re_c, im + im_c};
  out.error_bound += 2.0 * kEps * (out.abs_sum + std::abs(out.value));
  return out;
}

std::vector<Complex> remainder_grid(const SectorSpec& sector, std::size_t count,
                                    std::uint64_t seed) {
  sector.validate();
  if (!sector.bounded() || !(sector.r_min > 0.0)) {
    throw ParamError("remainder grids need 0 < r_min and a finite r_max");
  }
  std::mt19937_64 rng(seed);
  const double shift_r = unit_draw(rng);
  const double shift_a = unit_draw(rng);
  const double ln_lo = std::log(sector.r_min);
  const double ln_span = std::log(sector.r_max) - ln_lo;
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double vr = radical_inverse(i + 1, 2) + shift_r;
    double va = radical_inverse(i + 1, 3) + shift_a;
    vr -= std::floor(vr);
    va -= std::floor(va);
    const double r = std::clamp(std::exp(ln_lo + ln_span * vr), sector.r_min, sector.r_max);
    out.push_back(std::polar(r, sector.half_angle() * (2.0 * va - 1.0)));
  }
  return out;
}

RemainderReport remainder_scan(const ExtensionOperator& op,
                               const SectorSpec& sector, std::size_t n_max,
                               std::span<const Complex> z_grid,
                               const MomentBoundFit& moment_fit,
                               const BoundFit& sector_fit) {
  sector.validate();
  const auto& series = op.series();
  if (n_max > series.size()) {
    throw ParamError("n_max exceeds the series length");
  }
  for (Complex z : z_grid) {
    if (!sector.contains(z) || z == Complex{}) {
      throw ParamError("remainder grid point outside the sector");
    }
  }
  if (!(sector_fit.upper_k > 0.0)) throw ParamError("sector fit has no upper k");

  RemainderReport rep;
  rep.sector = sector;
  rep.n_max = n_max;
  const auto& cert = series.certificate();
  rep.c1 = cert.c1();
  rep.d1 = cert.d1;
  rep.r0 = op.r0();
  rep.b = moment_fit.b2();
  rep.k6 = sector_fit.upper_k;
  rep.d1_factor = op.borel().d2 / cert.d1;
  rep.d2_factor = rep.d1_factor / (1.0 - op.epsilon());
  rep.d = 2.0 * rep.b * std::max(rep.d1_factor, rep.d2_factor) / rep.k6;

  const auto& seq = series.sequence();
  const double ln_dd1 = std::log(rep.d * rep.d1);
  std::vector<QuadResult<Complex>> f_values(z_grid.size());
  detail::parallel_for(z_grid.size(), [&](std::size_t i) { f_values[i] = op.evaluate(z_grid[i]); });

  rep.log_sup_ratio.assign(n_max + 1, -kInf);
  double log_c = -kInf;
  bool any_nonzero = false;
  const std::size_t width = n_max + 1;
  rep.entries.resize(width * z_grid.size());
  detail::parallel_for(rep.entries.size(), [&](std::size_t k) {
    const std::size_t n = k / z_grid.size();
    const std::size_t i = k % z_grid.size();
    const Complex z = z_grid[i];
    const auto split = op.remainder(n, z);
    const auto direct_sum = partial_sum(series.coefficients(), n, z);
    const Complex direct = f_values[i].value - direct_sum.value;
    const double rounding = f_values[i].error + direct_sum.error_bound;

    RemainderEntry& e = rep.entries[k];
    e.n = n;
    e.z = z;
    e.remainder = std::abs(split.value);
    const double nd = static_cast<double>(n);
    e.log_ratio = e.remainder == 0.0 ? -kInf
                                     : std::log(e.remainder) - nd * ln_dd1 -
                                           seq.log_m(n) - nd * std::log(std::abs(z));
    e.cancellation_flag = rounding > kCancellationShare * e.remainder;
    e.route_gap = e.remainder > 0.0 ? std::abs(direct - split.value) / e.remainder
                                    : std::abs(direct);
  });
  for (const auto& e : rep.entries) {
    if (e.cancellation_flag) ++rep.flagged;
    any_nonzero = any_nonzero || e.remainder > 0.0;
    rep.log_sup_ratio[e.n] = std::max(rep.log_sup_ratio[e.n], e.log_ratio);
    log_c = std::max(log_c, e.log_ratio);
  }
  if (rep.c1 > 0.0) {
    rep.c = std::exp(log_c - cert.log_c1);
  } else {
    rep.c = any_nonzero ? kInf : 0.0;
  }
  return rep;
}

std::vector<RoundtripEntry> borel_roundtrip(const ExtensionOperator& op,
                                            const SectorSpec& sector,
                                            std::size_t p_max,
                                            const RoundtripOptions& options) {
  sector.validate();
  const auto& coeffs = op.series().coefficients();
  if (p_max + 1 > coeffs.size()) {
    throw ParamError("p_max must be below the series length");
  }
  if (!(options.margin > 0.0) || !(options.margin <= sector.half_angle()) ||
      options.margin >= std::numbers::pi / 2.0) {
    throw ParamError("round-trip margin must lie in (0, min(pi/2, sector half-angle)]");
  }
  if (options.nodes < 4 || !(options.radius > 0.0)) {
    throw ParamError("round-trip needs >= 4 nodes and a positive radius");
  }
  const double spread = std::sin(options.margin);

  // Mean of R_p(zeta) / zeta^p over the circle |zeta - x| = x sin(margin).
  auto circle_mean = [&](std::size_t p, double x) {
    Complex acc{};
    const double pd = static_cast<double>(p);
    for (std::size_t j = 0; j < options.nodes; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(options.nodes);
      const Complex zeta = x + std::polar(x * spread, theta);
      acc += op.remainder(p, zeta).value * std::exp(-pd * std::log(zeta));
    }
    return acc / static_cast<double>(options.nodes);
  };

  // |int_R0^inf e(u/x) sum_{q<=p} gamma_q u^(q-1) du| / x^p: the part of the
  // expansion that the truncated transform cannot see at scale x.
  const auto& gamma = op.borel().gamma;
  auto leak = [&](std::size_t p, double x) {
    const std::span<const Complex> low(gamma.data(), std::min(p + 1, gamma.size()));
    return std::abs(op.tail_integral(low, x).value) *
           std::exp(-static_cast<double>(p) * std::log(x));
  };

  std::vector<RoundtripEntry> out;
  for (std::size_t p = 0; p <= p_max; ++p) {
    RoundtripEntry e;
    e.p = p;
    double x = options.radius;
    if (p + 2 < coeffs.size() && !coeffs[p].is_zero() && !coeffs[p + 2].is_zero()) {
      const double ln_ratio = coeffs[p + 2].log_abs() - coeffs[p].log_abs();
      x = std::min(x, std::exp(0.5 * (std::log(kRichardsonTarget) - ln_ratio)));
    }
    double scale = std::abs(coeffs[p].value());
    if (scale == 0.0) {
      for (std::size_t q = 0; q < p; ++q) scale = std::max(scale, std::abs(coeffs[q].value()));
    }
    for (int shrink = 0; scale > 0.0 && shrink < kMaxShrink &&
                         leak(p, x) > kLeakTarget * scale;
         ++shrink) {
      x *= 0.1;
    }
    e.radius = x;
    e.estimate_coarse = circle_mean(p, x);
    e.estimate_fine = circle_mean(p, 0.5 * x);
    e.extrapolated = 2.0 * e.estimate_fine - e.estimate_coarse;
    e.expected = coeffs[p].value();
    e.abs_error = std::abs(e.extrapolated - e.expected);
    const double magnitude = std::abs(e.expected);
    e.rel_error = magnitude > 0.0 ? e.abs_error / magnitude : e.abs_error;
    out.push_back(e);
  }
  return out;
}

}  // namespace rapidborel
