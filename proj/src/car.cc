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
// The ripple and delay-buffer steps must stay arithmetically identical per
// channel (only the stage-input routing differs); the delay-buffer mode's
// exact one-sample-per-stage stagger in linear open-loop conditions
// depends on it.  This file is built with floating-point contraction off.

#include "carfac/car.h"

namespace carfac {

CarState InitCarState(const CarCoeffs& coeffs) {
  const int n = coeffs.n_ch;
  CarState state;
  state.z1.setZero(n);
  state.z2.setZero(n);
  state.za.setZero(n);
  state.zb = coeffs.zr;  // full undamping at rest
  state.dzb.setZero(n);
  state.zy.setZero(n);
  state.g = coeffs.g0;
  state.dg.setZero(n);
  state.ac_coupler.setZero(n);
  state.tmp.setZero(n);
  return state;
}

ArrayX OhcNlf(const ArrayX& velocities, const CarCoeffs& coeffs) {
  ArrayX out(velocities.size());
  for (Eigen::Index i = 0; i < velocities.size(); ++i) {
    out[i] = OhcNlf(velocities[i], coeffs);
  }
  return out;
}

namespace {

// Everything before the stage-input routing: interpolate g and zb, form
// the velocity nonlinearity from the previous sample's states, rotate the
// resonator states, and leave h*z2 in out->bm_raw as the partial output.
// za picks up the old z2.
inline void AdvanceResonators(const CarCoeffs& coeffs, CarState* state,
                              bool linear, CarStepOutput* out) {
  const int n = coeffs.n_ch;
  state->g += state->dg;
  state->zb += state->dzb;
  for (int ch = 0; ch < n; ++ch) {
    FPType v = state->z2[ch] - state->za[ch];
    FPType nlf = linear ? static_cast<FPType>(1) : OhcNlf(v, coeffs);
    FPType r = coeffs.r1[ch] + state->zb[ch] * nlf;
    FPType z1 = state->z1[ch];
    FPType z2 = state->z2[ch];
    out->velocities[ch] = v;
    out->nlf[ch] = nlf;
    state->za[ch] = z2;
    state->tmp[ch] = r * (coeffs.a0[ch] * z1 - coeffs.c0[ch] * z2);
    state->z2[ch] = r * (coeffs.c0[ch] * z1 + coeffs.a0[ch] * z2);
    out->bm_raw[ch] = coeffs.h[ch] * state->z2[ch];  // partial output
  }
  state->z1.swap(state->tmp);
}

inline void CoupleOutput(const CarCoeffs& coeffs, CarState* state,
                         CarStepOutput* out) {
  const int n = coeffs.n_ch;
  for (int ch = 0; ch < n; ++ch) {
    FPType diff = state->zy[ch] - state->ac_coupler[ch];
    state->ac_coupler[ch] += coeffs.ac_coeff * diff;
    out->bm[ch] = diff;
    out->bm_raw[ch] = state->zy[ch];
  }
}

}  // namespace

void CarStepRipple(FPType input, const CarCoeffs& coeffs, CarState* state,
                   bool linear, CarStepOutput* out) {
  AdvanceResonators(coeffs, state, linear, out);
  // Ripple the input-output path base to apex within this sample.
  FPType in_out = input;
  for (int ch = 0; ch < coeffs.n_ch; ++ch) {
    state->z1[ch] += in_out;
    in_out = state->g[ch] * (in_out + out->bm_raw[ch]);
    state->zy[ch] = in_out;
  }
  CoupleOutput(coeffs, state, out);
}

void CarStepDelayBuffer(FPType input, const CarCoeffs& coeffs, CarState* state,
                        bool linear, CarStepOutput* out) {
  AdvanceResonators(coeffs, state, linear, out);
  // Stage inputs are last sample's outputs; shift apexward in place.
  for (int ch = coeffs.n_ch - 1; ch > 0; --ch) {
    FPType stage_input = state->zy[ch - 1];
    state->z1[ch] += stage_input;
    state->zy[ch] = state->g[ch] * (stage_input + out->bm_raw[ch]);
  }
  state->z1[0] += input;
  state->zy[0] = state->g[0] * (input + out->bm_raw[0]);
  CoupleOutput(coeffs, state, out);
}

ArrayX AcCouple(const ArrayX& bm_raw, CarState* state, const CarCoeffs& coeffs) {
  ArrayX out(bm_raw.size());
  for (Eigen::Index ch = 0; ch < bm_raw.size(); ++ch) {
    FPType diff = bm_raw[ch] - state->ac_coupler[ch];
    state->ac_coupler[ch] += coeffs.ac_coeff * diff;
    out[ch] = diff;
  }
  return out;
}

}  // namespace carfac
