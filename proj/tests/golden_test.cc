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
// Cross-implementation equivalence against the frozen reference dumps in
// tests/golden (generated by the independent NumPy model in tests/oracle).

#include <cstdio>

#include "carfac/carfac.h"
#include "doctest.h"
#include "io/golden.h"
#include "test_util.h"

namespace carfac {
namespace {

TEST_CASE("full golden set matches within 1e-6") {
  GoldenReport report = GoldenCompare(testing::GoldenDir(), 1e-6);
  for (const GoldenItemResult& item : report.items) {
    INFO(item.name, ": max-abs-diff ", item.max_abs_diff, " at row ",
         item.worst_row, " col ", item.worst_col);
    CHECK(item.pass);
  }
  CHECK(report.pass);
}

TEST_CASE("noise generator reproduces the frozen input stream exactly") {
  ArrayXX golden = testing::Golden("noise_input_22050.raw64");
  ArrayX mine = testing::Noise(42, -30.0, static_cast<int>(golden.rows()));
  double max_diff = 0;
  for (Eigen::Index i = 0; i < golden.rows(); ++i) {
    max_diff = std::max(max_diff,
                        std::abs(static_cast<double>(mine[i]) - golden(i, 0)));
  }
  CHECK(max_diff < 1e-15);
}

TEST_CASE("behavioral golden scalars") {
  auto scalars = testing::GoldenScalars("scalars_22050.csv");
  CHECK(scalars.at("n_ch_22050") == 71);
  CHECK(scalars.at("agc_decimation0") == 8);
  CHECK(scalars.at("noise_first_agc_update") == 7);
  CHECK(scalars.at("synchrony_ratio_3k") > 0.35);
  CHECK(scalars.at("synchrony_ratio_3k") < 0.65);
  CHECK(scalars.at("compression_growth_db") < 20.0);
  CHECK(scalars.at("compression_growth_db") > 0.0);

  Carfac model48(DefaultDesign(48000));
  CHECK(model48.num_channels() ==
        static_cast<int>(scalars.at("n_ch_48000")));
}

TEST_CASE("one_cap model matches its golden tone-burst trace") {
  CarfacDesignParams params = DefaultDesign(22050);
  params.ihc.variant = IhcVariant::kOneCap;
  Carfac model(params);
  ArrayXX golden = testing::Golden("toneburst_nap_one_cap.raw64");

  ArrayX x = ArrayX::Zero(golden.rows());
  const double amp = DbfsAmplitude(-40);
  for (int i = 0; i < 220; ++i) {
    x[i] = static_cast<FPType>(
        amp * std::sin(2 * M_PI * 3000 * (static_cast<double>(i) / 22050)));
  }
  RunOptions options;
  options.planes = kNap;
  ArrayXX nap = model.RunSegment(testing::MonoAudio(x), options).nap[0];
  CHECK(testing::MaxAbsDiff(nap, golden) < 1e-6);
}

}  // namespace
}  // namespace carfac
