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

#include <stdexcept>
#include <string>

namespace carfac {

Carfac::Carfac(const CarfacDesignParams& params, int n_ears) : params_(params) {
  if (n_ears < 1) {
    throw std::invalid_argument("n_ears must be at least 1");
  }
  ValidateDesign(params_);
  channels_ = DesignChannels(params_.car, params_.sample_rate_hz);
  car_coeffs_ = DesignCarCoeffs(params_.car, params_.sample_rate_hz, channels_);
  ihc_coeffs_ = DesignIhcCoeffs(params_.ihc, params_.sample_rate_hz);
  agc_coeffs_ = DesignAgcCoeffs(params_.agc, params_.sample_rate_hz, channels_.n_ch);
  ohc_health_ = ArrayX::Ones(channels_.n_ch);
  ears_.resize(n_ears);
  Reset();
  car_out_.Resize(channels_.n_ch);
  nap_.setZero(channels_.n_ch);
  v_recep_.setZero(channels_.n_ch);
}

void Carfac::Reset() {
  for (CarfacState& ear : ears_) {
    ear.car = InitCarState(car_coeffs_);
    ear.ihc = InitIhcState(ihc_coeffs_, channels_.n_ch);
    ear.agc = InitAgcState(agc_coeffs_, channels_.n_ch);
  }
}

void Carfac::set_ohc_health(const ArrayX& health) {
  if (health.size() != channels_.n_ch) {
    throw std::invalid_argument("ohc_health must have one value per channel");
  }
  if ((health < 0).any() || (health > 1).any()) {
    throw std::invalid_argument("ohc_health values must lie in [0, 1]");
  }
  ohc_health_ = health;
}

void Carfac::set_ohc_health_unchecked(const ArrayX& health) {
  if (health.size() != channels_.n_ch) {
    throw std::invalid_argument("ohc_health must have one value per channel");
  }
  ohc_health_ = health;
}

SegmentOutput Carfac::RunSegment(const ArrayXX& audio, const RunOptions& options) {
  SegmentOutput output;
  RunSegment(audio, options, &output);
  return output;
}

void Carfac::RunSegment(const ArrayXX& audio, const RunOptions& options,
                        SegmentOutput* output) {
  const int n_ears = static_cast<int>(ears_.size());
  if (audio.rows() != n_ears) {
    throw std::invalid_argument(
        "audio has " + std::to_string(audio.rows()) + " ears, model has " +
        std::to_string(n_ears));
  }
  const int n_samples = static_cast<int>(audio.cols());
  const int n_ch = channels_.n_ch;

  if (options.open_loop) {
    // Stop in-flight ramps at segment entry so zb and g hold still even
    // before the first AGC update of the segment.
    for (CarfacState& ear : ears_) {
      ear.car.dzb.setZero();
      ear.car.dg.setZero();
    }
  }

  output->n_ears = n_ears;
  output->n_samples = n_samples;
  output->n_ch = n_ch;
  output->receptor_potential_valid =
      ihc_coeffs_.variant == IhcVariant::kTwoCap &&
      (options.planes & kReceptorPotential);
  auto init_planes = [&](std::vector<ArrayXX>* planes, bool selected) {
    planes->assign(n_ears, ArrayXX());
    if (selected) {
      for (ArrayXX& plane : *planes) plane.setZero(n_samples, n_ch);
    }
  };
  init_planes(&output->nap, options.planes & kNap);
  init_planes(&output->bm, options.planes & kBm);
  init_planes(&output->bm_raw, options.planes & kBmRaw);
  init_planes(&output->receptor_potential, options.planes & kReceptorPotential);
  init_planes(&output->ohc, options.planes & kOhc);
  output->agc.assign(n_ears, ArrayXX());
  output->agc_update_samples.clear();
  std::vector<ArrayXX> agc_rows(n_ears);
  const bool want_agc = options.planes & kAgc;
  if (want_agc) {
    // At most one stage-0 update per decimation interval.
    int max_updates = n_samples / agc_coeffs_.stages[0].decimation + 1;
    for (ArrayXX& rows : agc_rows) rows.setZero(max_updates, n_ch);
  }

  std::vector<AgcState*> agc_states(n_ears);
  for (int e = 0; e < n_ears; ++e) agc_states[e] = &ears_[e].agc;

  int n_updates = 0;
  for (int k = 0; k < n_samples; ++k) {
    bool agc_updated = false;
    for (int e = 0; e < n_ears; ++e) {
      CarfacState& ear = ears_[e];
      CarStep(audio(e, k), car_coeffs_, &ear.car, options.linear, &car_out_);
      IhcStep(car_out_.bm, ihc_coeffs_, &ear.ihc, &nap_, &v_recep_);
      agc_updated = AgcStep(nap_, agc_coeffs_, &ear.agc);

      if (options.planes & kNap) output->nap[e].row(k) = nap_.transpose();
      if (options.planes & kBm) output->bm[e].row(k) = car_out_.bm.transpose();
      if (options.planes & kBmRaw)
        output->bm_raw[e].row(k) = car_out_.bm_raw.transpose();
      if (output->receptor_potential_valid)
        output->receptor_potential[e].row(k) = v_recep_.transpose();
      if (options.planes & kOhc)
        output->ohc[e].row(k) = (ear.car.zb * car_out_.nlf).transpose();
    }
    if (agc_updated) {
      CrossEarMix(agc_coeffs_, &agc_states);
      for (CarfacState& ear : ears_) {
        CloseAgcLoop(ear.agc.stages[0].memory, ohc_health_, car_coeffs_,
                     agc_coeffs_.decimation0, options.open_loop, &ear.car);
      }
      if (want_agc) {
        for (int e = 0; e < n_ears; ++e) {
          agc_rows[e].row(n_updates) = ears_[e].agc.stages[0].memory.transpose();
        }
      }
      output->agc_update_samples.push_back(k);
      ++n_updates;
    }
  }

  if (want_agc) {
    for (int e = 0; e < n_ears; ++e) {
      output->agc[e] = agc_rows[e].topRows(n_updates);
    }
  }
}

}  // namespace carfac
