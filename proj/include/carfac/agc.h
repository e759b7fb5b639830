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

#ifndef CARFAC_AGC_H_
#define CARFAC_AGC_H_

#include <vector>

#include "carfac/car.h"
#include "carfac/common.h"

namespace carfac {

struct AgcStageCoeffs {
  int decimation = 1;       // relative to the previous stage
  FPType epsilon = 0;       // temporal one-pole coefficient at this stage's rate
  FPType fir_left = 0;      // 3-tap spatial kernel; taps >= 0, sum to 1
  FPType fir_mid = 1;
  FPType fir_right = 0;
  int n_iterations = 1;     // FIR passes per update
  FPType stage_gain = 0;    // coupling from the next slower stage
  FPType mix_coeff = 0;     // cross-ear mixing rate (0 for stage 0)
};

struct AgcCoeffs {
  int n_stages = 0;
  FPType detect_scale = 1;  // normalizes the multi-stage DC loop gain
  int decimation0 = 1;      // stage-0 decimation, possibly reduced at design
  std::vector<AgcStageCoeffs> stages;
};

struct AgcStageState {
  ArrayX memory;       // smoothed activity
  ArrayX input_accum;
  int decim_phase = 0;  // in [0, decimation); fires on wrap to 0
  ArrayX agc_in;       // scratch for the decimated input
};

struct AgcState {
  std::vector<AgcStageState> stages;
};

AgcState InitAgcState(const AgcCoeffs& coeffs, int n_ch);

// Accumulates one sample of NAP-derived drive; every stage-0 decimation
// interval runs the cascaded temporal/spatial update.  Returns true iff
// stage 0 fired, i.e. the loop feedback should be re-closed.
bool AgcStep(const ArrayX& detect, const AgcCoeffs& coeffs, AgcState* state);

// n_iterations passes of out[i] = l*in[i-1] + m*in[i] + r*in[i+1], edge
// samples reusing their own value for the missing neighbor.
void SpatialSmooth3Tap(FPType left, FPType mid, FPType right, int n_iterations,
                       ArrayX* activity);

// Moves each ear's just-updated stage memories toward the across-ear mean
// by that stage's mix_coeff.  A no-op for fewer than two ears.
void CrossEarMix(const AgcCoeffs& coeffs, std::vector<AgcState*>* ear_states);

// Sets the per-sample ramps that carry the CAR to the new AGC targets over
// the next stage-0 interval.  In open-loop mode only freezes the ramps.
// The target undamping is clamp(1 - agc_activity, 0, 1) * ohc_health.
void CloseAgcLoop(const ArrayX& agc_activity, const ArrayX& ohc_health,
                  const CarCoeffs& car_coeffs, int decimation0, bool open_loop,
                  CarState* car_state);

}  // namespace carfac

#endif  // CARFAC_AGC_H_
