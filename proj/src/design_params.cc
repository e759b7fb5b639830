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

#include "carfac/design_params.h"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace carfac {

CarfacDesignParams DefaultDesign(FPType sample_rate_hz) {
  if (!(sample_rate_hz > 0)) {
    throw std::invalid_argument("sample rate must be positive");
  }
  CarfacDesignParams params;
  params.sample_rate_hz = sample_rate_hz;
  return params;
}

namespace {

void Fail(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

void ValidateDesign(const CarfacDesignParams& params) {
  if (!(params.sample_rate_hz > 0)) Fail("sample rate must be positive");
  const CarDesignParams& car = params.car;
  if (!(car.min_zeta > 0 && car.min_zeta < car.max_zeta && car.max_zeta < 1)) {
    Fail("damping ratios must satisfy 0 < min_zeta < max_zeta < 1");
  }
  if (!(car.min_pole_hz > 0)) Fail("min_pole_hz must be positive");
  if (!(car.first_pole_fraction > 0 && car.first_pole_fraction < 1)) {
    Fail("first_pole_fraction must be in (0, 1) of Nyquist");
  }
  if (!(car.min_pole_hz < car.first_pole_fraction * params.sample_rate_hz / 2)) {
    Fail("min_pole_hz must sit below the first pole frequency");
  }
  if (!(car.erb_per_step > 0)) Fail("erb_per_step must be positive");
  if (!(car.erb_q > 0)) Fail("erb_q must be positive");
  if (!(car.ac_corner_hz > 0)) Fail("ac_corner_hz must be positive");
  if (!(car.zero_ratio >= 1)) Fail("zero_ratio must be at least 1");

  const IhcDesignParams& ihc = params.ihc;
  if (ihc.variant != IhcVariant::kJustHwr) {
    for (FPType tau : {ihc.tau_lpf, ihc.tau1_out, ihc.tau1_in, ihc.tau2_out,
                       ihc.tau2_in, ihc.tau_out, ihc.tau_in}) {
      if (!(tau > 0)) Fail("IHC time constants must be positive");
    }
  }

  const AgcDesignParams& agc = params.agc;
  if (agc.n_stages < 1) Fail("AGC needs at least one stage");
  const auto n = static_cast<size_t>(agc.n_stages);
  if (agc.time_constants.size() != n || agc.decimation.size() != n ||
      agc.agc1_scales.size() != n || agc.agc2_scales.size() != n) {
    Fail("AGC per-stage vectors must have n_stages entries");
  }
  FPType prev_tau = 0;
  for (int k = 0; k < agc.n_stages; ++k) {
    if (agc.decimation[k] < 1) Fail("AGC decimation entries must be >= 1");
    if (!(agc.time_constants[k] > 0) || agc.time_constants[k] < prev_tau) {
      Fail("AGC time constants must be positive and nondecreasing");
    }
    prev_tau = agc.time_constants[k];
    if (!(agc.agc1_scales[k] < agc.agc2_scales[k])) {
      Fail("AGC spatial scales need agc1 < agc2 per stage");
    }
    if (!(agc.agc1_scales[k] > 0)) Fail("AGC spatial scales must be positive");
  }
  if (!(agc.agc_stage_gain > 0)) Fail("agc_stage_gain must be positive");
  if (agc.agc_mix_coeff < 0 || agc.agc_mix_coeff > 1) {
    Fail("agc_mix_coeff must be in [0, 1]");
  }
}

const char* IhcVariantName(IhcVariant variant) {
  switch (variant) {
    case IhcVariant::kTwoCap: return "two_cap";
    case IhcVariant::kOneCap: return "one_cap";
    case IhcVariant::kJustHwr: return "just_hwr";
  }
  return "unknown";
}

}  // namespace carfac
