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

#include "carfac/agc.h"

#include <algorithm>

namespace carfac {

AgcState InitAgcState(const AgcCoeffs& coeffs, int n_ch) {
  AgcState state;
  state.stages.resize(coeffs.n_stages);
  for (AgcStageState& stage : state.stages) {
    stage.memory.setZero(n_ch);
    stage.input_accum.setZero(n_ch);
    stage.decim_phase = 0;
    stage.agc_in.setZero(n_ch);
  }
  return state;
}

void SpatialSmooth3Tap(FPType left, FPType mid, FPType right, int n_iterations,
                       ArrayX* activity) {
  const Eigen::Index n = activity->size();
  for (int iter = 0; iter < n_iterations; ++iter) {
    // In place; edge samples reuse their own old value for the missing
    // neighbor.  `carry` holds the unmodified left neighbor.
    FPType carry = (*activity)[0];
    for (Eigen::Index ch = 0; ch < n; ++ch) {
      FPType cur = (*activity)[ch];
      FPType next = (ch + 1 < n) ? (*activity)[ch + 1] : cur;
      (*activity)[ch] = left * carry + mid * cur + right * next;
      carry = cur;
    }
  }
}

namespace {

// Rate cascade; the stage's input is already accumulated into
// input_accum.  Deeper stages update first so this stage's temporal
// smoothing sees the fresh slower-stage output.
bool AgcRecurse(const AgcCoeffs& coeffs, int stage, AgcState* state) {
  AgcStageState& st = state->stages[stage];
  const AgcStageCoeffs& sc = coeffs.stages[stage];
  st.decim_phase = (st.decim_phase + 1) % sc.decimation;
  if (st.decim_phase != 0) return false;

  st.agc_in = st.input_accum / static_cast<FPType>(sc.decimation);
  st.input_accum.setZero();
  if (stage < coeffs.n_stages - 1) {
    state->stages[stage + 1].input_accum += st.agc_in;
    AgcRecurse(coeffs, stage + 1, state);
    st.agc_in += sc.stage_gain * state->stages[stage + 1].memory;
  }
  st.memory += sc.epsilon * (st.agc_in - st.memory);
  SpatialSmooth3Tap(sc.fir_left, sc.fir_mid, sc.fir_right, sc.n_iterations,
                    &st.memory);
  return true;
}

}  // namespace

bool AgcStep(const ArrayX& detect, const AgcCoeffs& coeffs, AgcState* state) {
  state->stages[0].input_accum += coeffs.detect_scale * detect;
  return AgcRecurse(coeffs, 0, state);
}

void CrossEarMix(const AgcCoeffs& coeffs, std::vector<AgcState*>* ear_states) {
  const int n_ears = static_cast<int>(ear_states->size());
  if (n_ears < 2) return;
  for (int stage = 0; stage < coeffs.n_stages; ++stage) {
    // Phase 0 means the stage just updated; deeper stages are stale.
    if ((*ear_states)[0]->stages[stage].decim_phase != 0) break;
    FPType mix = coeffs.stages[stage].mix_coeff;
    if (mix <= 0) continue;
    ArrayX mean = (*ear_states)[0]->stages[stage].memory;
    for (int ear = 1; ear < n_ears; ++ear) {
      mean += (*ear_states)[ear]->stages[stage].memory;
    }
    mean /= static_cast<FPType>(n_ears);
    for (int ear = 0; ear < n_ears; ++ear) {
      ArrayX& mem = (*ear_states)[ear]->stages[stage].memory;
      mem += mix * (mean - mem);
    }
  }
}

void CloseAgcLoop(const ArrayX& agc_activity, const ArrayX& ohc_health,
                  const CarCoeffs& car_coeffs, int decimation0, bool open_loop,
                  CarState* car_state) {
  if (open_loop) {
    // Freeze: stop any in-flight ramps exactly.
    car_state->dzb.setZero();
    car_state->dg.setZero();
    return;
  }
  const FPType decim = static_cast<FPType>(decimation0);
  for (int ch = 0; ch < car_coeffs.n_ch; ++ch) {
    FPType undamping = 1 - agc_activity[ch];
    undamping = std::min(static_cast<FPType>(1),
                         std::max(static_cast<FPType>(0), undamping));
    undamping = undamping * ohc_health[ch];
    FPType g_target = car_coeffs.g_p0[ch] + car_coeffs.g_p1[ch] * undamping +
                      car_coeffs.g_p2[ch] * undamping * undamping;
    // Ramp so the state lands on the targets at the next update.
    car_state->dzb[ch] =
        (car_coeffs.zr[ch] * undamping - car_state->zb[ch]) / decim;
    car_state->dg[ch] = (g_target - car_state->g[ch]) / decim;
  }
}

}  // namespace carfac
