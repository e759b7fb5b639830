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

#ifndef CARFAC_DESIGN_PARAMS_H_
#define CARFAC_DESIGN_PARAMS_H_

#include <cmath>
#include <vector>

#include "carfac/common.h"

namespace carfac {

// User-facing design-time knobs for the cascade of asymmetric resonators.
// All fields default to the standard v2 design.
struct CarDesignParams {
  FPType velocity_scale = static_cast<FPType>(0.1);  // OHC NLF input scale
  FPType v_offset = static_cast<FPType>(0.04);       // OHC NLF input offset
  FPType min_zeta = static_cast<FPType>(0.10);       // min damping ratio
  FPType max_zeta = static_cast<FPType>(0.30);       // max damping ratio
  // Channel 0 pole frequency as a fraction of the Nyquist frequency.
  FPType first_pole_fraction = static_cast<FPType>(0.85);
  FPType zero_ratio = static_cast<FPType>(std::sqrt(2.0));  // zero/pole freq ratio
  FPType high_f_damping_compression = static_cast<FPType>(0.5);  // 0..1
  FPType erb_per_step = static_cast<FPType>(0.5);   // channel density
  FPType min_pole_hz = static_cast<FPType>(30.0);   // apical-most pole
  FPType erb_break_freq_hz = static_cast<FPType>(165.3);
  FPType erb_q = static_cast<FPType>(1000.0 / (24.7 * 4.37));
  FPType ac_corner_hz = static_cast<FPType>(20.0);  // BM highpass half-power corner
  // Insert one sample of delay per cascaded stage so the whole CAR update
  // can be computed channel-parallel.  Off by default (minimum phase).
  bool use_delay_buffer = false;
};

// Inner-hair-cell model selection.  An instance's variant is fixed at
// design time; the variants do not have compatible state.
enum class IhcVariant {
  kTwoCap,   // receptor capacitor + transmitter reservoir (default)
  kOneCap,   // single reservoir with two 80 us output smoothers
  kJustHwr,  // clipped half-wave rectifier, stateless
};

struct IhcDesignParams {
  IhcVariant variant = IhcVariant::kTwoCap;
  FPType tau_lpf = static_cast<FPType>(80e-6);  // output smoothing
  // two_cap: receptor capacitor (cap1) and transmitter reservoir (cap2).
  // tau1_in is the receptor recovery time, the main synchrony reducer.
  FPType tau1_out = static_cast<FPType>(0.5e-3);
  FPType tau1_in = static_cast<FPType>(200e-6);
  FPType tau2_out = static_cast<FPType>(1e-3);
  FPType tau2_in = static_cast<FPType>(10e-3);
  // one_cap reservoir.
  FPType tau_out = static_cast<FPType>(0.5e-3);
  FPType tau_in = static_cast<FPType>(10e-3);
};

// Multi-stage AGC loop filter design.  Stage k updates every
// decimation[0]*...*decimation[k] samples.  agc1/agc2 spatial scales are in
// channel units; agc1 < agc2 gives the smoothing its basalward shift.
struct AgcDesignParams {
  int n_stages = 4;
  std::vector<FPType> time_constants = DefaultTimeConstants();
  std::vector<int> decimation = {8, 2, 2, 2};
  std::vector<FPType> agc1_scales = DefaultScales(1.0);
  std::vector<FPType> agc2_scales = DefaultScales(1.65);
  FPType agc_stage_gain = static_cast<FPType>(2.0);
  FPType agc_mix_coeff = static_cast<FPType>(0.5);

  static std::vector<FPType> DefaultTimeConstants() {
    std::vector<FPType> taus(4);
    for (int k = 0; k < 4; ++k) {
      taus[k] = static_cast<FPType>(0.002 * std::pow(4.0, k));
    }
    return taus;
  }
  static std::vector<FPType> DefaultScales(double base) {
    std::vector<FPType> scales(4);
    for (int k = 0; k < 4; ++k) {
      scales[k] = static_cast<FPType>(base * std::pow(std::sqrt(2.0), k));
    }
    return scales;
  }
};

struct CarfacDesignParams {
  FPType sample_rate_hz = static_cast<FPType>(22050.0);
  CarDesignParams car;
  IhcDesignParams ihc;
  AgcDesignParams agc;
};

// Returns the full v2 default parameter set for the given sample rate.
// Throws std::invalid_argument for a non-positive rate.
CarfacDesignParams DefaultDesign(FPType sample_rate_hz);

// Eager validation of a full parameter set; throws std::invalid_argument
// with a description of the first violated constraint.  Run-time code
// assumes designs were validated.
void ValidateDesign(const CarfacDesignParams& params);

const char* IhcVariantName(IhcVariant variant);

}  // namespace carfac

#endif  // CARFAC_DESIGN_PARAMS_H_
