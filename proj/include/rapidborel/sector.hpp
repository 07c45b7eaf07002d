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

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace rapidborel {

using Complex = std::complex<double>;

// Sector {z : |arg z| < delta*pi/2, r_min <= |z| <= r_max} of the slit plane.
// Openings are restricted to (0, 2) so the sector embeds in C.
struct SectorSpec {
  double opening_delta = 1.0;
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();

  // Throws ParamError when the invariants do not hold.
  void validate() const;

  double half_angle() const;
  bool bounded() const { return r_max < std::numeric_limits<double>::infinity(); }
  bool contains(Complex z) const;
};

// Radial x angular resolution of a sector grid.
struct GridSpec {
  std::size_t radial = 200;
  std::size_t angular = 65;
};

// Log-uniform in radius over [r_min, r_max], uniform in angle over the
// closed range [-half_angle, half_angle]. Row-major: radius outer, angle inner.
// Requires a bounded sector with r_min > 0.
std::vector<Complex> sector_grid(const SectorSpec& sector, const GridSpec& grid);

// n log-spaced points in [lo, hi], endpoints included.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace rapidborel
