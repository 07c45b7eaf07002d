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

#include "rapidborel/lambert_w.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "rapidborel/errors.hpp"

namespace rapidborel {
namespace {

// 1/e split into the nearest double and its rounding error, so that e*z + 1
// keeps its leading digits next to the branch point.
constexpr double kInvEHi = 0.36787944117144233;
constexpr double kInvELo = -1.2428753672788363e-17;

constexpr int kMaxIterations = 50;
constexpr double kStepTol = 1e-14;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Past this modulus the iteration runs on w + log w = log z.
constexpr double kLogFormThreshold = 1e10;

Complex maclaurin_seed(Complex z) { return z * (1.0 + z * (-1.0 + 1.5 * z)); }

Complex branch_point_seed(Complex z) {
  const Complex q = 2.0 * std::numbers::e * ((z + kInvEHi) + kInvELo);
  const Complex p = std::sqrt(q);
  return -1.0 +
         p * (1.0 + p * (-1.0 / 3.0 +
                         p * (11.0 / 72.0 +
                              p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

Complex asymptotic_seed(Complex z) {
  const Complex l1 = std::log(z);
  const Complex l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

// Rational approximation accurate along the positive real axis.
Complex rational_seed(Complex z) {
  const Complex num = 12.85106382978723404255 + z * (12.34042553191489361902 + z);
  const Complex den = 32.53191489361702127660 + z * (14.34042553191489361702 + z);
  return z * num / den;
}

std::optional<Complex> halley(Complex z, Complex w) {
  for (int it = 0; it < kMaxIterations; ++it) {
    const Complex ew = std::exp(w);
    const Complex wew = w * ew;
    const Complex f = wew - z;
    if (std::abs(f) <= 4.0 * kEps * (std::abs(z) + std::abs(wew))) return w;
    const Complex wp1 = w + 1.0;
    if (wp1 == Complex{}) return std::nullopt;
    const Complex dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    if (!std::isfinite(dw.real()) || !std::isfinite(dw.imag())) return std::nullopt;
    w -= dw;
    if (std::abs(dw) <= kStepTol * std::abs(w)) return w;
  }
  return std::nullopt;
}

// Halley on h(w) = w + log w - log z, valid for the principal branch when
// |z| is large; avoids overflow in exp(w).
std::optional<Complex> halley_log_form(Complex z, Complex w) {
  const Complex log_z = std::log(z);
  for (int it = 0; it < kMaxIterations; ++it) {
    const Complex h = w + std::log(w) - log_z;
    const Complex h1 = 1.0 + 1.0 / w;
    const Complex h2 = -1.0 / (w * w);
    const Complex dw = h / (h1 - h * h2 / (2.0 * h1));
    if (!std::isfinite(dw.real()) || !std::isfinite(dw.imag())) return std::nullopt;
    w -= dw;
    if (std::abs(dw) <= kStepTol * std::abs(w)) return w;
  }
  return std::nullopt;
}

void require_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("Lambert W argument must be finite");
  }
}

void require_off_cut(Complex z) {
  require_finite(z);
  if (z.imag() == 0.0 && z.real() <= -kInvEHi) {
    throw BranchCutError("W0 is undefined on the cut (-inf, -1/e]; got " +
                         std::to_string(z.real()));
  }
}

}  // namespace

bool in_principal_image(Complex w, double slack) {
  const double xi = w.real();
  const double eta = w.imag();
  if (std::abs(eta) >= std::numbers::pi + slack) return false;
  if (eta == 0.0) return xi > -1.0 - slack;
  if (std::abs(eta) >= std::numbers::pi) return slack > 0.0;
  const double boundary = -eta * std::cos(eta) / std::sin(eta);
  return xi > boundary - slack * (1.0 + std::abs(boundary));
}

Complex lambert_w0(Complex z) {
  require_off_cut(z);
  if (z == Complex{}) return Complex{};

  const double r = std::abs(z);
  const double branch_distance = std::abs(z + kInvEHi);

  if (r > kLogFormThreshold) {
    if (auto w = halley_log_form(z, asymptotic_seed(z))) return *w;
    throw ConvergenceError("W0 log-form iteration did not converge");
  }

  std::array<Complex, 4> seeds;
  std::size_t n = 0;
  if (branch_distance < 0.3 && branch_distance < r) {
    seeds[n++] = branch_point_seed(z);
  } else if (r < 0.3) {
    seeds[n++] = maclaurin_seed(z);
  } else if (r > 3.0) {
    seeds[n++] = asymptotic_seed(z);
  } else {
    seeds[n++] = rational_seed(z);
  }
  // Fallbacks for points where the first seed lands Halley on another branch.
  if (r > 1.5) seeds[n++] = asymptotic_seed(z);
  seeds[n++] = branch_point_seed(z);
  seeds[n++] = std::log1p(r) * z / r;

  for (std::size_t i = 0; i < n; ++i) {
    auto w = halley(z, seeds[i]);
    if (w && in_principal_image(*w, 1e-10)) return *w;
  }
  throw ConvergenceError("W0 iteration did not converge for z = (" +
                         std::to_string(z.real()) + ", " +
                         std::to_string(z.imag()) + ")");
}

double lambert_w0(double x) { return lambert_w0(Complex{x, 0.0}).real(); }

Complex lambert_w0_derivative(Complex z) {
  const Complex w = lambert_w0(z);
  return std::exp(-w) / (1.0 + w);
}

Complex reconstruct_from_w(Complex w) {
  const double b1 = w.real();
  const double b2 = w.imag();
  const double scale = std::exp(b1);
  return {scale * (b1 * std::cos(b2) - b2 * std::sin(b2)),
          scale * (b2 * std::cos(b2) + b1 * std::sin(b2))};
}

bool image_region_predicate(Complex w, double radius) {
  return std::exp(w.real()) * std::abs(w) >= radius;
}

double slow_variation_probe(const SectorSpec& sector, const GridSpec& grid) {
  sector.validate();
  if (!(sector.r_min > 0.0)) {
    throw ParamError("slow_variation_probe needs r_min > 0");
  }
  SectorSpec scanned = sector;
  if (!scanned.bounded()) scanned.r_max = sector.r_min * 1e6;
  double worst = 0.0;
  for (Complex z : sector_grid(scanned, grid)) {
    worst = std::max(worst, std::abs(1.0 / (1.0 + lambert_w0(z))));
  }
  return worst;
}

}  // namespace rapidborel
