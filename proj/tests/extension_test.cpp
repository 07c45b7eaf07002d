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
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rapidborel/errors.hpp"
#include "rapidborel/extension.hpp"

namespace rb = rapidborel;
using rb::Complex;

namespace {

struct Fixture {
  rb::KernelParams params{1.0, 1.5};
  rb::WeightSequence seq{1.0, 1.5};
  rb::MomentTable table = rb::MomentTable::build(params, 40);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

// int_a^b of a complex integrand by tanh-sinh on each part.
template <class F>
Complex ts_complex(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double re = ts.integrate([&](double u) { return f(u).real(); }, a, b, 1e-14);
  const double im = ts.integrate([&](double u) { return f(u).imag(); }, a, b, 1e-14);
  return {re, im};
}

// f(z) directly from its definition: e(u/z)/u = (e(w)/w)/z with w = u/z.
Complex f_oracle(const rb::ExtensionOperator& op, Complex z) {
  const auto& g = op.borel().gamma;
  return ts_complex(
      [&](double u) {
        Complex poly{};
        for (std::size_t p = g.size(); p-- > 0;) poly = poly * u + g[p];
        return rb::kernel_e_over_z(op.params(), u / z) / z * poly;
      },
      0.0, op.r0());
}

bool close(Complex a, Complex b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("growth certificates") {
  const rb::WeightSequence seq(1.0, 1.5);
  const auto grid = rb::default_d_grid();
  CHECK(grid.size() == 601);
  CHECK(grid[300] == 1.0);
  std::vector<rb::ScaledComplex> c(11);
  for (std::size_t p = 0; p <= 10; ++p) c[p] = rb::ScaledComplex::from_log(p * std::log(2.0) + seq.log_m(p));
  const auto cert = rb::certify_growth(c, seq, grid);
  CHECK(cert.d1 >= 2.0 * (1 - 1e-12));
  CHECK(cert.d1 <= 2.0 * std::pow(10.0, 0.01) * (1 + 1e-12));
  CHECK(cert.c1() == doctest::Approx(1.0).epsilon(1e-8));
  // Constant series: every D works, the smallest is chosen.
  const std::vector<rb::ScaledComplex> one{rb::ScaledComplex::from_log(std::log(3.0))};
  const auto c3 = rb::certify_growth(one, seq, grid);
  CHECK(c3.d1 == grid.front());
  CHECK(c3.c1() == doctest::Approx(3.0));
  const std::vector<rb::ScaledComplex> zero(5);
  const auto cz = rb::certify_growth(zero, seq, grid);
  CHECK(cz.log_c1 == -std::numeric_limits<double>::infinity());
  CHECK(cz.c1() == 0.0);
  const std::vector<double> bad{1.0, -1.0};
  CHECK_THROWS_AS(rb::certify_growth(c, seq, bad), rb::ParamError);
  CHECK_THROWS_AS(rb::certify_growth(c, seq, {}), rb::ParamError);
}

TEST_CASE("scaled complex") {
  const auto big = rb::ScaledComplex::from_log(2000.0, std::numbers::pi / 2);
  CHECK(big.log_abs() == doctest::Approx(2000.0));
  CHECK(std::isinf(std::abs(big.value())));
  const auto small = rb::ScaledComplex::from_log(std::log(5.0), std::numbers::pi);
  CHECK(std::abs(small.value() - Complex(-5.0, 0.0)) <= 1e-14);
  CHECK(rb::ScaledComplex{}.log_abs() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("series construction and the Borel side") {
  const auto& fx = fixture();
  const auto ms = rb::FormalSeries::moment_series(fx.seq, fx.table, 41);
  const auto b = rb::borel_series(ms, fx.table);
  REQUIRE(b.gamma.size() == 41);
  for (const Complex g : b.gamma) CHECK(std::abs(g - 1.0) <= 1e-15);
  CHECK(b.measured_rate == doctest::Approx(1.0));
  CHECK(b.d2 == doctest::Approx(b.d1_factor * ms.certificate().d1));
  CHECK(b.d1_factor >= 1.0);
  const auto longer = rb::FormalSeries::zero(fx.seq, 42);
  CHECK_THROWS_AS(rb::borel_series(longer, fx.table), rb::MomentTableGap);
  CHECK_THROWS_AS(rb::FormalSeries::single_mode(fx.seq, fx.table, 5, 5), rb::ParamError);
  CHECK_THROWS_AS(rb::FormalSeries::zero(fx.seq, 0), rb::ParamError);
  std::vector<rb::ScaledComplex> nan(2);
  nan[1].mantissa = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(rb::FormalSeries(fx.seq, nan), rb::ParamError);
}

TEST_CASE("operator against a direct tanh-sinh transform") {
  const auto& fx = fixture();
  const auto single = rb::FormalSeries::single_mode(fx.seq, fx.table, 1, 3);
  rb::ExtensionConfig cfg;
  cfg.r0 = 0.5;
  const rb::ExtensionOperator op(single, fx.table, cfg);
  for (const Complex z : {Complex(1e-2, 0.0), Complex(0.3, 0.2), Complex(0.05, -0.07), Complex(1.0, 0.5)}) {
    const auto r = op.evaluate(z);
    CHECK(close(r.value, f_oracle(op, z), 1e-11));
    CHECK(r.error <= 1e-10 * std::abs(r.value));
  }
  const auto ms = rb::FormalSeries::moment_series(fx.seq, fx.table, 41);
  const rb::ExtensionOperator mop(ms, fx.table);
  for (const Complex z : {Complex(1e-3, 0.0), Complex(0.2, 0.1), Complex(0.5, -0.4)}) {
    CHECK(close(mop(z), f_oracle(mop, z), 1e-11));
  }
}

TEST_CASE("linearity and the zero series") {
  const auto& fx = fixture();
  const auto single = rb::FormalSeries::single_mode(fx.seq, fx.table, 1, 3);
  rb::ExtensionConfig cfg;
  cfg.r0 = 0.5;
  const rb::ExtensionOperator op(single, fx.table, cfg);
  const rb::ExtensionOperator op2(single.scaled({0.0, 2.0}), fx.table, cfg);
  const rb::ExtensionOperator zero(rb::FormalSeries::zero(fx.seq, 10), fx.table, cfg);
  for (const Complex z : rb::remainder_grid({1.0, 1e-3, 1.0}, 40, 3)) {
    CHECK(close(op2(z), Complex(0.0, 2.0) * op(z), 1e-13));
    CHECK(std::abs(zero(z)) <= 1e-12);
    CHECK(std::abs(rb::extend(op, z) - op(z)) == 0.0);
  }
}

TEST_CASE("tail integral against exp-sinh") {
  const auto& fx = fixture();
  const auto single = rb::FormalSeries::single_mode(fx.seq, fx.table, 1, 3);
  rb::ExtensionConfig cfg;
  cfg.r0 = 0.5;
  const rb::ExtensionOperator op(single, fx.table, cfg);
  // q(u) = gamma_0 + gamma_1 u, the part kept for N = 2.
  const std::vector<Complex> poly{op.borel().gamma[0], op.borel().gamma[1]};
  boost::math::quadrature::exp_sinh<double> es;
  for (const Complex z : {Complex(0.4, 0.0), Complex(0.3, 0.3), Complex(1.0, -0.2)}) {
    auto f = [&](double v) {
      const double u = op.r0() + v;
      return rb::kernel_e(op.params(), u / z) * (poly[0] + poly[1] * u) / u;
    };
    const double re = es.integrate([&](double v) { return f(v).real(); }, 1e-14);
    const double im = es.integrate([&](double v) { return f(v).imag(); }, 1e-14);
    const auto got = op.tail_integral(poly, z);
    CHECK(close(got.value, Complex(re, im), 1e-10));
  }
}

TEST_CASE("split remainder matches the direct difference") {
  const auto& fx = fixture();
  const auto single = rb::FormalSeries::single_mode(fx.seq, fx.table, 1, 3);
  rb::ExtensionConfig cfg;
  cfg.r0 = 0.5;
  const rb::ExtensionOperator op(single, fx.table, cfg);
  for (const Complex z : {Complex(0.5, 0.0), Complex(0.3, 0.4), Complex(1.0, 0.0)}) {
    for (std::size_t n = 0; n <= 3; ++n) {
      const auto s = rb::partial_sum(single.coefficients(), n, z);
      const Complex direct = op(z) - s.value;
      CHECK(close(op.remainder(n, z).value, direct, 1e-9));
    }
  }
  // Shrinking z: the remainder after N terms decays at least like |z|^N.
  for (std::size_t n = 1; n <= 2; ++n) {
    const double r1 = std::abs(op.remainder(n, 1e-2).value) / std::pow(1e-2, n);
    const double r2 = std::abs(op.remainder(n, 1e-3).value) / std::pow(1e-3, n);
    CHECK(r2 <= 1.5 * r1);
  }
}

TEST_CASE("compensated partial sums") {
  std::vector<rb::ScaledComplex> c;
  for (double v : {1e16, 1.0, -1e16, 1.0}) c.push_back(rb::ScaledComplex{Complex(v, 0.0), 0.0});
  const auto s = rb::partial_sum(c, 4, 1.0);
  CHECK(s.value == Complex(2.0, 0.0));
  CHECK(s.abs_sum == doctest::Approx(2e16 + 2));
  CHECK(s.error_bound <= 1e-14 * s.abs_sum);
  const auto s2 = rb::partial_sum(c, 0, 1.0);
  CHECK(s2.value == Complex{});
  // Geometric series in z = i/2.
  std::vector<rb::ScaledComplex> ones(30, rb::ScaledComplex{Complex(1.0, 0.0), 0.0});
  const Complex z(0.0, 0.5);
  const auto g = rb::partial_sum(ones, 30, z);
  CHECK(std::abs(g.value - (1.0 - std::pow(z, 30)) / (1.0 - z)) <= 1e-15);
}

TEST_CASE("quasi-random grid") {
  const rb::SectorSpec s{1.0, 1e-3, 1.0};
  const auto a = rb::remainder_grid(s, 40, 11);
  const auto b = rb::remainder_grid(s, 40, 11);
  const auto c = rb::remainder_grid(s, 40, 12);
  REQUIRE(a.size() == 40);
  CHECK(a == b);
  CHECK(a != c);
  for (const Complex z : a) {
    CHECK(s.contains(z));
    CHECK(std::abs(z) >= 1e-3 * (1 - 1e-12));
    CHECK(std::abs(z) <= 1.0 + 1e-12);
  }
}

TEST_CASE("remainder scan bookkeeping") {
  const auto& fx = fixture();
  const rb::SectorSpec s{1.0, 1e-3, 1.0};
  const auto ms = rb::FormalSeries::moment_series(fx.seq, fx.table, 41);
  const rb::ExtensionOperator op(ms, fx.table);
  const auto mfit = rb::moment_bound_fit(fx.table, fx.seq);
  const auto sfit = rb::sector_bound_fit(fx.params, {1.0, 1e-3, 1e3}, {60, 21});
  const auto grid = rb::remainder_grid(s, 8, 0);
  const auto rep = rb::remainder_scan(op, s, 4, grid, mfit, sfit);
  REQUIRE(rep.entries.size() == 5 * 8);
  REQUIRE(rep.log_sup_ratio.size() == 5);
  for (std::size_t k = 0; k < rep.entries.size(); ++k) {
    CHECK(rep.entries[k].n == k / 8);
    CHECK(rep.entries[k].z == grid[k % 8]);
  }
  CHECK(rep.d > 0.0);
  CHECK(std::isfinite(rep.c));
  for (std::size_t n = 0; n <= 4; ++n) {
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 8; ++i) sup = std::max(sup, rep.entries[n * 8 + i].log_ratio);
    CHECK(rep.log_sup_ratio[n] == sup);
    CHECK(std::log(rep.c) + std::log(rep.c1) >= sup - 1e-12);
  }
  CHECK_THROWS_AS(rb::remainder_scan(op, s, 42, grid, mfit, sfit), rb::ParamError);
  const std::vector<Complex> outside{Complex(-0.5, 0.01)};
  CHECK_THROWS_AS(rb::remainder_scan(op, s, 2, outside, mfit, sfit), rb::ParamError);
}

TEST_CASE("Borel round trip on the moment series") {
  const auto& fx = fixture();
  const auto ms = rb::FormalSeries::moment_series(fx.seq, fx.table, 41);
  const rb::ExtensionOperator op(ms, fx.table);
  const auto rt = rb::borel_roundtrip(op, {1.0, 1e-3, 1.0}, 5);
  REQUIRE(rt.size() == 6);
  for (const auto& e : rt) {
    CHECK(e.expected == ms.coefficients()[e.p].value());
    CHECK(e.rel_error <= 1e-4);
    CHECK(e.radius > 0.0);
  }
}

TEST_CASE("constant series tends to its value at the origin") {
  const auto& fx = fixture();
  const auto c0 = rb::FormalSeries::single_mode(fx.seq, fx.table, 0, 2);
  const rb::ExtensionOperator op(c0, fx.table);
  const double m0 = std::exp(fx.table.log_m(0));
  double prev = std::abs(op(1e-2) - m0);
  for (const double x : {1e-3, 1e-4, 1e-5}) {
    const double gap = std::abs(op(x) - m0);
    CHECK(gap < prev);
    // N = 1 remainder is O(x).
    CHECK(gap <= 10.0 * x * m0);
    prev = gap;
  }
}

TEST_CASE("fitted d does not shrink as the opening grows") {
  const auto& fx = fixture();
  const auto ms = rb::FormalSeries::moment_series(fx.seq, fx.table, 41);
  const rb::ExtensionOperator op(ms, fx.table);
  const auto mfit = rb::moment_bound_fit(fx.table, fx.seq);
  double last = 0.0;
  for (const double delta : {0.5, 1.0, 1.5}) {
    const rb::SectorSpec s{delta, 1e-3, 1.0};
    const auto sfit = rb::sector_bound_fit(fx.params, {delta, 1e-3, 1e3}, {60, 21});
    const auto rep = rb::remainder_scan(op, s, 3, rb::remainder_grid(s, 6, 1), mfit, sfit);
    CHECK(rep.d >= last);
    last = rep.d;
  }
}

TEST_CASE("round trip of the zero series") {
  const auto& fx = fixture();
  const rb::ExtensionOperator op(rb::FormalSeries::zero(fx.seq, 6), fx.table);
  for (const auto& e : rb::borel_roundtrip(op, {1.0, 1e-3, 1.0}, 5)) {
    CHECK(std::abs(e.extrapolated) == 0.0);
  }
}
