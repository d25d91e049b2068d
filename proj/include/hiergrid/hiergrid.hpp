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

#include "bench.hpp"
#include "combi.hpp"
#include "costmodel.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "index1d.hpp"
#include "kernels.hpp"
#include "layout.hpp"
#include "level_vector.hpp"
#include "oracle.hpp"
#include "variant.hpp"
