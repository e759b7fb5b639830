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

#include "carfac/ihc.h"

#include <algorithm>

namespace carfac {

IhcState InitIhcState(const IhcCoeffs& coeffs, int n_ch) {
  IhcState state;
  state.cap1.setConstant(n_ch, coeffs.rest_cap1);
  state.cap2.setConstant(n_ch, coeffs.rest_cap2);
  state.lpf1.setConstant(n_ch, coeffs.rest_output);
  state.lpf2.setConstant(n_ch, coeffs.rest_output);
  state.cap.setConstant(n_ch, coeffs.rest_cap);
  return state;
}

ArrayX IhcDetect(const ArrayX& bm) {
  ArrayX out(bm.size());
  for (Eigen::Index i = 0; i < bm.size(); ++i) {
    out[i] = IhcDetect(bm[i]);
  }
  return out;
}

namespace {

void StepTwoCap(const ArrayX& bm, const IhcCoeffs& c, IhcState* s, ArrayX* nap,
                ArrayX* receptor_potential) {
  const Eigen::Index n = bm.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    FPType conductance = IhcDetect(bm[i]);
    FPType receptor_current = conductance * s->cap1[i];
    s->cap1[i] = s->cap1[i] - receptor_current * c.cap1_depletion_rate +
                 (1 - s->cap1[i]) * c.cap1_recovery_rate;
    FPType v_recep = 1 - s->cap1[i];
    // Transmitter release: depletes on release, recovers over
    // milliseconds, no forward smoothing.
    FPType raw = v_recep * s->cap2[i];
    s->cap2[i] = s->cap2[i] - raw * c.cap2_depletion_rate +
                 (1 - s->cap2[i]) * c.cap2_recovery_rate;
    FPType out = raw * c.output_gain;
    s->lpf1[i] = s->lpf1[i] + c.output_lpf_coeff * (out - s->lpf1[i]);
    (*nap)[i] = s->lpf1[i] - c.rest_output;
    (*receptor_potential)[i] = v_recep - c.rest_receptor_potential;
  }
}

void StepOneCap(const ArrayX& bm, const IhcCoeffs& c, IhcState* s, ArrayX* nap) {
  const Eigen::Index n = bm.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    FPType conductance = IhcDetect(bm[i]);
    FPType raw = conductance * s->cap[i];
    s->cap[i] = s->cap[i] - raw * c.cap_depletion_rate +
                (1 - s->cap[i]) * c.cap_recovery_rate;
    FPType out = raw * c.output_gain;
    s->lpf1[i] = s->lpf1[i] + c.output_lpf_coeff * (out - s->lpf1[i]);
    s->lpf2[i] = s->lpf2[i] + c.output_lpf_coeff * (s->lpf1[i] - s->lpf2[i]);
    (*nap)[i] = s->lpf2[i] - c.rest_output;
  }
}

}  // namespace

void IhcStep(const ArrayX& bm, const IhcCoeffs& coeffs, IhcState* state,
             ArrayX* nap, ArrayX* receptor_potential) {
  switch (coeffs.variant) {
    case IhcVariant::kJustHwr:
      for (Eigen::Index i = 0; i < bm.size(); ++i) {
        (*nap)[i] = std::min(coeffs.hwr_clip_level,
                             std::max(static_cast<FPType>(0), bm[i]));
      }
      receptor_potential->setZero();
      break;
    case IhcVariant::kOneCap:
      StepOneCap(bm, coeffs, state, nap);
      receptor_potential->setZero();
      break;
    case IhcVariant::kTwoCap:
      StepTwoCap(bm, coeffs, state, nap, receptor_potential);
      break;
  }
}

}  // namespace carfac
