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

#ifndef CARFAC_IHC_H_
#define CARFAC_IHC_H_

#include "carfac/common.h"
#include "carfac/design_params.h"

namespace carfac {

// Run-time inner-hair-cell coefficients.  A "capacitor" is a state
// variable whose value multiplies the signal; recovery rates are one-pole
// smoothing coefficients, depletion rates are conductance-scaled.  The
// rest_* values are the exact fixed points of the discrete update under
// silence, so subtracting rest_output makes the quiescent NAP exactly 0.
struct IhcCoeffs {
  IhcVariant variant = IhcVariant::kTwoCap;
  // two_cap
  FPType cap1_recovery_rate = 0;
  FPType cap1_depletion_rate = 0;
  FPType cap2_recovery_rate = 0;
  FPType cap2_depletion_rate = 0;
  FPType rest_cap1 = 0;
  FPType rest_cap2 = 0;
  FPType rest_receptor_potential = 0;
  // one_cap
  FPType cap_recovery_rate = 0;
  FPType cap_depletion_rate = 0;
  FPType rest_cap = 0;
  // shared
  FPType output_lpf_coeff = 0;
  FPType output_gain = 0;
  FPType rest_output = 0;
  FPType hwr_clip_level = static_cast<FPType>(2.0);
};

// Capacitor voltages stay in [0, 1] by the dynamics themselves; a value
// outside that range is a bug, not a clamped condition.
struct IhcState {
  ArrayX cap1;
  ArrayX cap2;
  ArrayX lpf1;
  ArrayX lpf2;
  ArrayX cap;  // one_cap reservoir
};

IhcState InitIhcState(const IhcCoeffs& coeffs, int n_ch);

// Saturating soft-rectifier mapping BM motion to a transduction
// conductance; zero for inputs <= -0.175, monotonically increasing,
// saturating toward 1.
inline FPType IhcDetect(FPType x) {
  FPType z = x + static_cast<FPType>(0.175);
  if (z <= 0) return 0;
  FPType z2 = z * z;
  FPType z3 = z2 * z;
  return z3 / (z3 + z2 + static_cast<FPType>(0.1));
}
ArrayX IhcDetect(const ArrayX& bm);

// One sample-time update.  nap and receptor_potential must be sized n_ch.
// receptor_potential is only meaningful for the two_cap variant (rest
// subtracted, zero in silence); other variants write zeros.
void IhcStep(const ArrayX& bm, const IhcCoeffs& coeffs, IhcState* state,
             ArrayX* nap, ArrayX* receptor_potential);

}  // namespace carfac

#endif  // CARFAC_IHC_H_
