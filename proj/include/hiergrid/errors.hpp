// Copyright 2026 The hiergrid Authors
// SPDX-License-Identifier: Apache-2.0
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

namespace hiergrid {

// Sizes or counts that do not fit the 64-bit index type.
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// A flat or multi-index outside the grid.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid parameters (level vectors, scheme sizes, variant widths).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A kernel was handed a grid in a layout it cannot work on.
class LayoutError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Problem too large for a dense method (the oracle).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Inconsistent benchmark or verification configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hiergrid
