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

#include "carfac/carfac.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "test_util.h"

namespace carfac {
namespace {

using testing::MonoAudio;
using testing::Noise;

constexpr FPType kFs = 22050;

TEST_CASE("design_and_init wires up the documented default model") {
  Carfac model(DefaultDesign(kFs));
  CHECK(model.num_channels() == 71);
  CHECK(model.num_ears() == 1);
  CHECK(model.ihc_coeffs().variant == IhcVariant::kTwoCap);
  CHECK_FALSE(model.car_coeffs().use_delay_buffer);
  CHECK((model.ohc_health() == 1).all());
  CHECK_THROWS_AS(Carfac(DefaultDesign(kFs), 0), std::invalid_argument);
}

TEST_CASE("two ears share a design but adapt independently") {
  Carfac model(DefaultDesign(kFs), 2);
  ArrayXX audio = ArrayXX::Zero(2, 2000);
  audio.row(0) = Noise(3, -25, 2000).transpose();  // ear 1 stays silent
  RunOptions options;
  options.planes = kNap;
  SegmentOutput out = model.RunSegment(audio, options);
  CHECK(out.nap.size() == 2);
  double driven = out.nap[0].abs().maxCoeff();
  double silent = out.nap[1].abs().maxCoeff();
  CHECK(driven > 100 * silent);
  // The silent ear still felt the driven ear through AGC mixing.
  CHECK(model.ear_state(1).agc.stages[1].memory.maxCoeff() > 0);

  ArrayXX mono = ArrayXX::Zero(1, 100);
  CHECK_THROWS_AS(model.RunSegment(mono, options), std::invalid_argument);
}

TEST_CASE("any segment partition concatenates bit-identically") {
  ArrayX x = Noise(17, -30, 4000);
  RunOptions options;
  options.planes = kNap | kBm;

  Carfac whole(DefaultDesign(kFs));
  SegmentOutput ref = whole.RunSegment(MonoAudio(x), options);

  Carfac pieces(DefaultDesign(kFs));
  const int cuts[] = {1, 7, 800, 1333, 4000};
  int start = 0;
  ArrayXX nap(4000, pieces.num_channels());
  ArrayXX bm(4000, pieces.num_channels());
  for (int cut : cuts) {
    ArrayXX part = ArrayXX::Zero(1, cut - start);
    part.row(0) = x.segment(start, cut - start).transpose();
    SegmentOutput piece = pieces.RunSegment(part, options);
    nap.middleRows(start, cut - start) = piece.nap[0];
    bm.middleRows(start, cut - start) = piece.bm[0];
    start = cut;
  }
  CHECK((nap == ref.nap[0]).all());
  CHECK((bm == ref.bm[0]).all());
}

TEST_CASE("run, reset, run again: bit-identical; reset keeps impairment") {
  ArrayX x = Noise(23, -30, 2000);
  Carfac model(DefaultDesign(kFs));
  ArrayX health = ArrayX::Constant(model.num_channels(), static_cast<FPType>(0.5));
  model.set_ohc_health(health);

  SegmentOutput first = model.RunSegment(MonoAudio(x), {});
  model.Reset();
  CHECK((model.ohc_health() == health).all());
  SegmentOutput second = model.RunSegment(MonoAudio(x), {});
  CHECK((first.nap[0] == second.nap[0]).all());
  CHECK((first.bm[0] == second.bm[0]).all());

  // A reset model behaves like a fresh one.
  Carfac fresh(DefaultDesign(kFs));
  fresh.set_ohc_health(health);
  SegmentOutput third = fresh.RunSegment(MonoAudio(x), {});
  CHECK((first.nap[0] == third.nap[0]).all());
}

TEST_CASE("silence quiets the NAP; noise can drive it negative") {
  Carfac model(DefaultDesign(kFs));
  ArrayX silence = ArrayX::Zero(1323);  // 60 ms
  RunOptions options;
  options.planes = kNap;
  ArrayXX nap = model.RunSegment(MonoAudio(silence), options).nap[0];
  CHECK(nap.bottomRows(220).abs().maxCoeff() < 1e-9);

  model.Reset();
  ArrayXX noisy =
      model.RunSegment(MonoAudio(Noise(29, -25, 4410)), options).nap[0];
  // The NAP is zero-mean in quiet by construction and does go negative;
  // nothing may assume nonnegativity.
  CHECK(noisy.minCoeff() < 0);
}

TEST_CASE("open-loop linear runs are time invariant from rest") {
  ArrayX x = Noise(31, -30, 1500);
  RunOptions options;
  options.open_loop = true;
  options.linear = true;
  options.planes = kBm;

  Carfac a(DefaultDesign(kFs));
  ArrayXX direct = a.RunSegment(MonoAudio(x), options).bm[0];

  const int shift = 100;
  ArrayX padded = ArrayX::Zero(x.size() + shift);
  padded.tail(x.size()) = x;
  Carfac b(DefaultDesign(kFs));
  ArrayXX delayed = b.RunSegment(MonoAudio(padded), options).bm[0];

  CHECK((delayed.topRows(shift) == 0).all());
  CHECK((delayed.bottomRows(x.size()) == direct).all());
}

TEST_CASE("entering open loop mid-ramp freezes zb and g exactly") {
  Carfac model(DefaultDesign(kFs));
  model.RunSegment(MonoAudio(Noise(37, -25, 1000)), {});
  CarState& car = model.ear_state(0).car;
  REQUIRE(car.dzb.abs().maxCoeff() > 0);  // adaptation in flight

  ArrayX zb_before = car.zb;
  ArrayX g_before = car.g;
  RunOptions options;
  options.open_loop = true;
  options.planes = kNap;
  model.RunSegment(MonoAudio(Noise(38, -25, 700)), options);
  CHECK((car.zb == zb_before).all());
  CHECK((car.g == g_before).all());
  CHECK(car.dzb.abs().maxCoeff() == 0);
  CHECK(car.dg.abs().maxCoeff() == 0);
}

TEST_CASE("ohc_health setters validate; all-ones is a bitwise no-op") {
  Carfac model(DefaultDesign(kFs));
  ArrayX wrong_length = ArrayX::Ones(10);
  CHECK_THROWS_AS(model.set_ohc_health(wrong_length), std::invalid_argument);
  ArrayX out_of_range = ArrayX::Constant(model.num_channels(), static_cast<FPType>(1.5));
  CHECK_THROWS_AS(model.set_ohc_health(out_of_range), std::invalid_argument);
  ArrayX negative = ArrayX::Constant(model.num_channels(), static_cast<FPType>(-0.1));
  CHECK_THROWS_AS(model.set_ohc_health(negative), std::invalid_argument);
  // The expert escape hatch takes anything of the right length.
  model.set_ohc_health_unchecked(negative);
  CHECK(model.ohc_health()[0] == static_cast<FPType>(-0.1));

  ArrayX x = Noise(41, -30, 2000);
  Carfac untouched(DefaultDesign(kFs));
  SegmentOutput ref = untouched.RunSegment(MonoAudio(x), {});
  Carfac explicit_ones(DefaultDesign(kFs));
  explicit_ones.set_ohc_health(ArrayX::Ones(explicit_ones.num_channels()));
  SegmentOutput same = explicit_ones.RunSegment(MonoAudio(x), {});
  CHECK((ref.nap[0] == same.nap[0]).all());
}

TEST_CASE("per-channel BM response is monotone in ohc_health") {
  ArrayX x = Noise(43, -40, 4410);
  RunOptions options;
  options.planes = kBm;
  ArrayX rms[3];
  const double levels[] = {1.0, 0.5, 0.0};
  for (int i = 0; i < 3; ++i) {
    Carfac model(DefaultDesign(kFs));
    model.set_ohc_health(
        ArrayX::Constant(model.num_channels(), static_cast<FPType>(levels[i])));
    ArrayXX bm = model.RunSegment(MonoAudio(x), options).bm[0];
    rms[i] = bm.bottomRows(2205).square().colwise().mean().sqrt().transpose();
  }
  for (int ch = 0; ch < rms[0].size(); ++ch) {
    CHECK(rms[0][ch] >= rms[1][ch] - 1e-12);
    CHECK(rms[1][ch] >= rms[2][ch] - 1e-12);
  }
}

TEST_CASE("receptor potential is published for two_cap only") {
  ArrayX x = Noise(47, -30, 500);
  Carfac two(DefaultDesign(kFs));
  SegmentOutput a = two.RunSegment(MonoAudio(x), {});
  CHECK(a.receptor_potential_valid);
  CHECK(a.receptor_potential[0].abs().maxCoeff() > 0);

  CarfacDesignParams params = DefaultDesign(kFs);
  params.ihc.variant = IhcVariant::kOneCap;
  Carfac one(params);
  SegmentOutput b = one.RunSegment(MonoAudio(x), {});
  CHECK_FALSE(b.receptor_potential_valid);
  CHECK(b.receptor_potential[0].abs().maxCoeff() == 0);
}

TEST_CASE("AGC plane carries update timestamps on the decimated grid") {
  Carfac model(DefaultDesign(kFs));
  ArrayX x = Noise(53, -30, 100);
  SegmentOutput out = model.RunSegment(MonoAudio(x), {});
  REQUIRE(out.agc_update_samples.size() == 12);
  for (size_t i = 0; i < out.agc_update_samples.size(); ++i) {
    CHECK(out.agc_update_samples[i] == 7 + 8 * static_cast<int>(i));
  }
  CHECK(out.agc[0].rows() == 12);
}

TEST_CASE("state snapshots resume streams bit-identically") {
  ArrayX x = Noise(59, -28, 4000);
  RunOptions options;
  options.planes = kNap;

  Carfac reference(DefaultDesign(kFs));
  ArrayXX whole = reference.RunSegment(MonoAudio(x), options).nap[0];

  Carfac writer(DefaultDesign(kFs));
  ArrayXX head = writer
                     .RunSegment(MonoAudio(static_cast<ArrayX>(x.head(1500))),
                                 options)
                     .nap[0];
  std::stringstream snapshot;
  writer.SaveState(snapshot);

  Carfac reader(DefaultDesign(kFs));
  reader.LoadState(snapshot);
  ArrayXX tail = reader
                     .RunSegment(MonoAudio(static_cast<ArrayX>(x.tail(2500))),
                                 options)
                     .nap[0];
  CHECK((head == whole.topRows(1500)).all());
  CHECK((tail == whole.bottomRows(2500)).all());

  // Snapshots are shape-checked.
  std::stringstream snapshot2;
  writer.SaveState(snapshot2);
  Carfac binaural(DefaultDesign(kFs), 2);
  CHECK_THROWS_AS(binaural.LoadState(snapshot2), std::runtime_error);
}

}  // namespace
}  // namespace carfac
