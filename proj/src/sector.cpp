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

#include "rapidborel/sector.hpp"

#include <cmath>
#include <numbers>

#include "rapidborel/errors.hpp"

namespace rapidborel {

void SectorSpec::validate() const {
  if (!(opening_delta > 0.0 && opening_delta < 2.0)) {
    throw ParamError("sector opening must lie in (0, 2)");
  }
  if (!(r_min >= 0.0) || !(r_max > r_min)) {
    throw ParamError("sector radii must satisfy 0 <= r_min < r_max");
  }
}

double SectorSpec::half_angle() const {
  return opening_delta * std::numbers::pi / 2.0;
}

bool SectorSpec::contains(Complex z) const {
  const double r = std::abs(z);
  return r >= r_min && r <= r_max && std::abs(std::arg(z)) <= half_angle();
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw ParamError("log_space needs 0 < lo <= hi and n >= 1");
  }
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<Complex> sector_grid(const SectorSpec& sector, const GridSpec& grid) {
  sector.validate();
  if (!sector.bounded() || !(sector.r_min > 0.0)) {
    throw ParamError("sector grids need 0 < r_min and a finite r_max");
  }
  if (grid.radial == 0 || grid.angular == 0) {
    throw ParamError("grid resolution must be positive");
  }
  const auto radii = log_space(sector.r_min, sector.r_max, grid.radial);
  const double theta_max = sector.half_angle();
  std::vector<Complex> out;
  out.reserve(grid.radial * grid.angular);
  for (double r : radii) {
    for (std::size_t j = 0; j < grid.angular; ++j) {
      const double theta =
          grid.angular == 1
              ? 0.0
              : -theta_max + 2.0 * theta_max * static_cast<double>(j) /
                                 static_cast<double>(grid.angular - 1);
      out.push_back(std::polar(r, theta));
    }
  }
  return out;
}

}  // namespace rapidborel
