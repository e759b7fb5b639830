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

#ifndef CARFAC_CAR_H_
#define CARFAC_CAR_H_

#include "carfac/common.h"

namespace carfac {

// Immutable per-channel run-time coefficients for the resonator cascade.
// Channel 0 is the base (highest CF); frequencies decrease toward the apex.
struct CarCoeffs {
  int n_ch = 0;
  FPType velocity_scale = 0;
  FPType v_offset = 0;
  FPType ac_coeff = 0;  // BM-output highpass smoothing constant
  bool use_delay_buffer = false;
  ArrayX pole_freqs;
  ArrayX a0;  // cos(theta)
  ArrayX c0;  // sin(theta)
  ArrayX r1;  // pole radius at zero undamping (max damping)
  ArrayX zr;  // radius range available to the undamping variable
  ArrayX h;   // zero-forming feed coefficient
  // Stage DC gain as a parabola in the relative undamping u:
  // g(u) = g_p0 + g_p1*u + g_p2*u^2, exact at u = 0, 0.5, 1.
  ArrayX g_p0;
  ArrayX g_p1;
  ArrayX g_p2;
  ArrayX g0;  // parabola at u = 1; initial stage gain
};

// All mutable CAR state.  After Reset: zeros except zb = zr (full
// undamping) and g = g0.
struct CarState {
  ArrayX z1;
  ArrayX z2;
  ArrayX za;   // previous z2, for the velocity first-difference
  ArrayX zb;   // current undamping delta-radius (interpolated)
  ArrayX dzb;  // per-sample undamping increment
  ArrayX zy;   // per-channel stage outputs (the delay buffer)
  ArrayX g;    // current stage gain (interpolated)
  ArrayX dg;   // per-sample gain increment
  ArrayX ac_coupler;
  ArrayX tmp;  // scratch, not semantic state
};

// Per-sample CAR results.  The buffers are reused across samples; size
// them once with Resize().  nlf == OhcNlf(velocities) for the values the
// step actually used.
struct CarStepOutput {
  ArrayX bm;          // AC-coupled output (feeds the IHC)
  ArrayX bm_raw;      // pre-coupler output
  ArrayX velocities;  // OHC drive, first difference of z2
  ArrayX nlf;
  void Resize(int n_ch) {
    bm.setZero(n_ch);
    bm_raw.setZero(n_ch);
    velocities.setZero(n_ch);
    nlf.setZero(n_ch);
  }
};

CarState InitCarState(const CarCoeffs& coeffs);

// OHC nonlinear function: 1 / (1 + (v*velocity_scale + v_offset)^2).
inline FPType OhcNlf(FPType velocity, const CarCoeffs& coeffs) {
  FPType d = velocity * coeffs.velocity_scale + coeffs.v_offset;
  return static_cast<FPType>(1) / (static_cast<FPType>(1) + d * d);
}
ArrayX OhcNlf(const ArrayX& velocities, const CarCoeffs& coeffs);

// One sample-time update, minimum-phase form: each stage input is the
// same sample's previous-stage output, rippled base to apex.
void CarStepRipple(FPType input, const CarCoeffs& coeffs, CarState* state,
                   bool linear, CarStepOutput* out);

// Identical arithmetic, but each stage input is the previous sample's
// output of the preceding channel, so the update is channel-parallel.  In
// linear open-loop conditions channel ch's output equals the ripple
// output delayed by ch samples, bit for bit.
void CarStepDelayBuffer(FPType input, const CarCoeffs& coeffs, CarState* state,
                        bool linear, CarStepOutput* out);

// Dispatches on coeffs.use_delay_buffer.
inline void CarStep(FPType input, const CarCoeffs& coeffs, CarState* state,
                    bool linear, CarStepOutput* out) {
  if (coeffs.use_delay_buffer) {
    CarStepDelayBuffer(input, coeffs, state, linear, out);
  } else {
    CarStepRipple(input, coeffs, state, linear, out);
  }
}

// One-pole highpass, per channel: out = x - s; s += ac_coeff * (x - s).
// Steady-state DC gain is exactly zero.  The step functions apply this
// internally; exposed for direct filter measurements.
ArrayX AcCouple(const ArrayX& bm_raw, CarState* state, const CarCoeffs& coeffs);

}  // namespace carfac

#endif  // CARFAC_CAR_H_
