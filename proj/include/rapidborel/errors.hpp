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

#include <stdexcept>
#include <string>

namespace rapidborel {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument of the principal Lambert branch lies on the cut (-inf, -1/e].
class BranchCutError : public Error {
 public:
  using Error::Error;
};

// An iteration exhausted its budget. Indicates a bug, not bad input.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Argument outside the holomorphy domain of a kernel-side function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

// No constant certifies a bound on the grid.
class FitError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// A moment needed by the Borel transform is missing from the table.
class MomentTableGap : public Error {
 public:
  using Error::Error;
};

}  // namespace rapidborel
