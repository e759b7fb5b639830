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
// Top-level model: design-and-initialize, then feed audio segments through
// CAR -> IHC -> AGC with feedback loop closure.  One instance is
// single-threaded during RunSegment; distinct instances are independent.

#ifndef CARFAC_CARFAC_H_
#define CARFAC_CARFAC_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "carfac/agc.h"
#include "carfac/car.h"
#include "carfac/common.h"
#include "carfac/design.h"
#include "carfac/design_params.h"
#include "carfac/ihc.h"

namespace carfac {

// Which output planes RunSegment should fill.  Unselected planes stay
// empty, which matters for long runs (a 10 s stereo run with every plane
// selected is ~1.5 GB).
enum OutputPlanes : unsigned {
  kNap = 1u << 0,
  kBm = 1u << 1,
  kBmRaw = 1u << 2,
  kReceptorPotential = 1u << 3,
  kOhc = 1u << 4,
  kAgc = 1u << 5,
  kAllPlanes = 0x3fu,
  kNoPlanes = 0u,
};

struct RunOptions {
  // Freeze the AGC feedback: coefficient ramps stop at segment entry and
  // stay frozen across AGC updates.
  bool open_loop = false;
  // Force the OHC nonlinearity to 1 so each stage is linear.  Unless also
  // open_loop, gain adaptation still occurs via the relative undamping.
  bool linear = false;
  unsigned planes = kAllPlanes;
};

// Per-ear mutable state.
struct CarfacState {
  CarState car;
  IhcState ihc;
  AgcState agc;
};

struct SegmentOutput {
  int n_ears = 0;
  int n_samples = 0;
  int n_ch = 0;
  // receptor_potential is published for the two_cap variant only; other
  // variants leave an all-zero plane and clear this flag.
  bool receptor_potential_valid = false;
  // One (samples x channels) plane per ear; empty when not selected.
  std::vector<ArrayXX> nap;
  std::vector<ArrayXX> bm;
  std::vector<ArrayXX> bm_raw;
  std::vector<ArrayXX> receptor_potential;
  std::vector<ArrayXX> ohc;  // per-sample NLF-modulated undamping (zb * nlf)
  // AGC activity at loop-closure times: one (updates x channels) plane per
  // ear, with the segment-relative sample index of each update.
  std::vector<ArrayXX> agc;
  std::vector<int> agc_update_samples;
};

class Carfac {
 public:
  // Designs coefficients and initializes all ears at rest.  The IHC
  // variant and ear count are fixed for the model's lifetime.
  explicit Carfac(const CarfacDesignParams& params, int n_ears = 1);

  // Returns all state to rest; coefficients and ohc_health are untouched.
  // The next run is bit-identical to a fresh model's.
  void Reset();

  // audio is (n_ears x n_samples).  State persists across calls, so any
  // partition of a stream into segments concatenates bit-identically.
  SegmentOutput RunSegment(const ArrayXX& audio, const RunOptions& options = {});
  void RunSegment(const ArrayXX& audio, const RunOptions& options,
                  SegmentOutput* output);

  // Per-channel health in [0, 1] scaling the relative undamping; takes
  // effect at the next AGC update.  The checked setter rejects
  // out-of-range values; the unchecked one permits them (slightly negative
  // health increases damping past its nominal maximum, and makes the OHC
  // NLF's effect anomalous).
  void set_ohc_health(const ArrayX& health);
  void set_ohc_health_unchecked(const ArrayX& health);
  const ArrayX& ohc_health() const { return ohc_health_; }

  int num_channels() const { return channels_.n_ch; }
  int num_ears() const { return static_cast<int>(ears_.size()); }
  FPType sample_rate_hz() const { return params_.sample_rate_hz; }
  const ArrayX& pole_freqs() const { return channels_.pole_freqs; }
  const CarfacDesignParams& design_params() const { return params_; }
  const CarCoeffs& car_coeffs() const { return car_coeffs_; }
  const IhcCoeffs& ihc_coeffs() const { return ihc_coeffs_; }
  const AgcCoeffs& agc_coeffs() const { return agc_coeffs_; }
  CarfacState& ear_state(int ear) { return ears_[ear]; }
  const CarfacState& ear_state(int ear) const { return ears_[ear]; }

  // State snapshot for streaming services: a version-tagged header, then
  // every state field as little-endian 64-bit reals in declaration order
  // (see state_io.cc for the exact layout).  LoadState rejects snapshots
  // whose shape or variant does not match this model.
  void SaveState(std::ostream& os) const;
  void LoadState(std::istream& is);

 private:
  CarfacDesignParams params_;
  ChannelMap channels_;
  CarCoeffs car_coeffs_;
  IhcCoeffs ihc_coeffs_;
  AgcCoeffs agc_coeffs_;
  ArrayX ohc_health_;
  std::vector<CarfacState> ears_;
  // Reused per-sample buffers.
  CarStepOutput car_out_;
  ArrayX nap_;
  ArrayX v_recep_;
};

}  // namespace carfac

#endif  // CARFAC_CARFAC_H_
