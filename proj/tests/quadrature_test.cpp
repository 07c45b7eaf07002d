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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rapidborel/errors.hpp"
#include "rapidborel/quadrature.hpp"

namespace rb = rapidborel;

TEST_CASE("smooth integrals") {
  const rb::QuadratureConfig cfg;
  const auto s = rb::integrate_gk([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, cfg);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.error <= 1e-10 * s.l1);
  CHECK(s.l1 == doctest::Approx(2.0).epsilon(1e-12));
  const auto g = rb::integrate_gk([](double x) { return std::exp(-x * x); }, -10.0, 10.0, cfg);
  CHECK(g.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  const auto z = rb::integrate_gk([](double x) { return 0.0 * x; }, 0.0, 1.0, cfg);
  CHECK(z.value == 0.0);
  const auto empty = rb::integrate_gk([](double x) { return x; }, 2.0, 2.0, cfg);
  CHECK(empty.evaluations == 0);
  // Reversed limits flip the sign.
  const auto rev = rb::integrate_gk([](double x) { return x * x; }, 1.0, 0.0, cfg);
  CHECK(rev.value == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("endpoint singularity and cancellation") {
  rb::QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  const auto r = rb::integrate_gk([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, cfg);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
  const auto c = rb::integrate_gk([](double x) { return std::cos(40.0 * x); }, 0.0, std::numbers::pi, cfg);
  // The exact value is 0; accuracy is relative to the integral of |f| (= 2).
  CHECK(std::abs(c.value) <= 1e-11);
  // l1 is the Kronrod estimate of the integral of |f|; it is a scale, not a
  // converged value.
  CHECK(c.l1 > 1.0);
  CHECK(c.l1 < 3.0);
}

TEST_CASE("complex integrand and pieces") {
  const rb::QuadratureConfig cfg;
  const auto r = rb::integrate_gk(
      [](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0, std::numbers::pi, cfg);
  CHECK(std::abs(r.value - std::complex<double>(0.0, 2.0)) <= 1e-14);
  const std::vector<double> pts{0.0, 0.5, 1.0, 3.0};
  const auto p = rb::integrate_gk_pieces([](double x) { return x; }, pts, cfg);
  CHECK(p.value == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(p.evaluations == 45);
}

TEST_CASE("stalled refinement raises") {
  rb::QuadratureConfig cfg;
  cfg.rel_tol = 1e-15;
  cfg.max_subdivisions = 3;
  CHECK_THROWS_AS(rb::integrate_gk([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, cfg),
                  rb::QuadratureError);
}

TEST_CASE("config validation") {
  rb::QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), rb::ParamError);
  cfg = {};
  cfg.abs_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), rb::ParamError);
  cfg = {};
  cfg.max_subdivisions = 0;
  CHECK_THROWS_AS(cfg.validate(), rb::ParamError);
  cfg = {};
  cfg.tail_split = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), rb::ParamError);
}
