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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rapidborel/errors.hpp"

namespace rapidborel {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  // Maximum number of interval bisections in the adaptive loop.
  std::size_t max_subdivisions = 2000;
  // Decades below the integrand's peak at which a semi-infinite integral is
  // truncated; the remainder past that point is bounded separately.
  double tail_split = 40.0;

  void validate() const;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  // Integral of |f|, the scale for relative accuracy.
  double l1 = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class T>
struct GkPanel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
  double l1 = 0.0;
  bool operator<(const GkPanel& o) const { return error < o.error; }
};

template <class T, class F>
GkPanel<T> gk_panel(F& f, double a, double b) {
  const auto& x = GK15::abscissa();
  const auto& wk = GK15::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // x[0] = 0; the even-indexed Kronrod abscissae are the Gauss nodes.
  T fc = f(mid);
  T kron = fc * wk[0];
  T gauss = fc * wg[0];
  double l1 = std::abs(fc) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const T f1 = f(mid - half * x[i]);
    const T f2 = f(mid + half * x[i]);
    kron += (f1 + f2) * wk[i];
    l1 += (std::abs(f1) + std::abs(f2)) * wk[i];
    if (i % 2 == 0) gauss += (f1 + f2) * wg[i / 2];
  }
  GkPanel<T> p;
  p.a = a;
  p.b = b;
  p.value = kron * half;
  p.error = std::abs((kron - gauss) * half);
  p.l1 = l1 * std::abs(half);
  return p;
}

}  // namespace detail

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]: the panel with the
// largest error estimate is bisected until the summed estimate falls below
// max(abs_tol, rel_tol * |integral of f|). Throws QuadratureError if the
// target is missed after max_subdivisions bisections. T may be real or complex.
template <class F>
auto integrate_gk(F f, double a, double b, const QuadratureConfig& cfg)
    -> QuadResult<decltype(f(a))> {
  using T = decltype(f(a));
  QuadResult<T> out;
  if (a == b) return out;
  std::priority_queue<detail::GkPanel<T>> panels;
  auto first = detail::gk_panel<T>(f, a, b);
  out.evaluations = 15;
  panels.push(first);
  T total = first.value;
  double err = first.error;
  double l1 = first.l1;
  std::size_t splits = 0;
  auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * l1); };
  while (err > target()) {
    if (splits >= cfg.max_subdivisions) {
      throw QuadratureError("adaptive quadrature on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "] stalled at error " +
                            std::to_string(err) + " (target " +
                            std::to_string(target()) + ")");
    }
    auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk_panel<T>(f, worst.a, mid);
    auto right = detail::gk_panel<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
    ++splits;
  }
  // Re-sum from the panels so the running updates leave no drift.
  total = T{};
  err = 0.0;
  l1 = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    err += panels.top().error;
    l1 += panels.top().l1;
    panels.pop();
  }
  out.value = total;
  out.error = err;
  out.l1 = l1;
  return out;
}

// Sum of integrate_gk over consecutive pieces [pts[i], pts[i+1]].
template <class F>
auto integrate_gk_pieces(F f, const std::vector<double>& pts,
                         const QuadratureConfig& cfg)
    -> QuadResult<decltype(f(0.0))> {
  QuadResult<decltype(f(0.0))> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto r = integrate_gk(f, pts[i], pts[i + 1], cfg);
    out.value += r.value;
    out.error += r.error;
    out.l1 += r.l1;
    out.evaluations += r.evaluations;
  }
  return out;
}

}  // namespace rapidborel
