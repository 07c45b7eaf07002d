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

#include "rapidborel/quadrature.hpp"

namespace rapidborel {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
    throw ParamError("quadrature rel_tol must lie in (0, 1)");
  }
  if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol)) {
    throw ParamError("quadrature abs_tol must be finite and >= 0");
  }
  if (max_subdivisions == 0) {
    throw ParamError("quadrature needs max_subdivisions >= 1");
  }
  if (!(tail_split > 0.0) || !std::isfinite(tail_split)) {
    throw ParamError("tail_split must be positive and finite");
  }
}

}  // namespace rapidborel
