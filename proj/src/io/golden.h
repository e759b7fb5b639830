// Copyright 2026 The CARFAC Authors. All Rights Reserved.
//
// This file is part of an implementation of Lyon's cochlear model:
// "Cascade of Asymmetric Resonators with Fast-Acting Compression"
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// The canonical golden-data set: coefficient tables, a linear open-loop
// impulse response, a closed-loop noise segment, tone bursts for both IHC
// variants, a binaural AGC run, and behavioral scalars.  `dump` writes the
// set; `compare` recomputes it and diffs against stored files.

#ifndef CARFAC_IO_GOLDEN_H_
#define CARFAC_IO_GOLDEN_H_

#include <string>
#include <vector>

#include "carfac/common.h"

namespace carfac {

struct GoldenItemResult {
  std::string name;
  double max_abs_diff = 0;
  // Worst cell, as row/col in the stored table or sample/channel index.
  long worst_row = -1;
  long worst_col = -1;
  bool pass = false;
};

struct GoldenReport {
  std::vector<GoldenItemResult> items;
  bool pass = true;
  double tolerance = 0;
};

void GoldenDump(const std::string& dir);

GoldenReport GoldenCompare(const std::string& dir, double tolerance);

// The tolerance the current build is expected to meet: 1e-6 for the
// float64 build, 1e-3 for float32.
double DefaultGoldenTolerance();

}  // namespace carfac

#endif  // CARFAC_IO_GOLDEN_H_
