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

#include "rapidborel/sector.hpp"

namespace rapidborel {

// Principal branch W0 of the Lambert function, w*exp(w) = z, on
// C \ (-inf, -1/e]. Real arguments z <= -1/e throw BranchCutError; complex
// arguments arbitrarily close to the cut are accepted and take the value on
// the side given by the sign of Im z.
Complex lambert_w0(Complex z);

// Real restriction on (-1/e, inf).
double lambert_w0(double x);

// W0'(z) = exp(-W0(z)) / (1 + W0(z)).
Complex lambert_w0_derivative(Complex z);

// Rebuilds z from w = W0(z) through z = w*exp(w), written out in terms of
// the real and imaginary parts of w.
Complex reconstruct_from_w(Complex w);

// True iff w lies in W0(C \ (-inf, -1/e]), the region to the right of the
// curve {(-t*cot t, t) : -pi < t < pi}. `slack` widens the region to absorb
// rounding for points on its boundary.
bool in_principal_image(Complex w, double slack = 0.0);

// exp(Re w) * |w| >= radius. W0 maps the far sector L_{R,alpha} into this set.
bool image_region_predicate(Complex w, double radius);

// Grid maximum of |z W0'(z) / W0(z)| = |1 / (1 + W0(z))| over the sector.
// Requires r_min > 0; unbounded sectors are scanned up to r_min * 1e6.
double slow_variation_probe(const SectorSpec& sector, const GridSpec& grid = {});

}  // namespace rapidborel
