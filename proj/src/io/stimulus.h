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

#ifndef CARFAC_IO_STIMULUS_H_
#define CARFAC_IO_STIMULUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "carfac/common.h"

namespace carfac {

// SplitMix64-based uniform noise in [-1, 1).  Integer state, so a given
// seed produces bit-identical doubles on any platform or language.
class NoiseGen {
 public:
  explicit NoiseGen(uint64_t seed) : state_(seed) {}
  double Uniform() {  // [0, 1)
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double Sample() { return 2.0 * Uniform() - 1.0; }

 private:
  uint64_t state_;
};

enum class StimulusKind {
  kSilence,
  kImpulse,
  kTone,       // ramped sine
  kMultitone,  // sum of unramped sines
  kNoise,      // seeded uniform noise
  kToneburst,  // unramped sine gated on for burst_s, then silence
  kChirp,      // exponential frequency sweep
};

// Levels are dBFS re a full-scale sine (amplitude 10^(dB/20)); for noise
// the level scales the +-1 sample range.
struct StimulusSpec {
  StimulusKind kind = StimulusKind::kSilence;
  double duration_s = 1.0;
  double freq_hz = 1000.0;
  double freq_end_hz = 100.0;  // chirp end frequency
  std::vector<double> freqs_hz;  // multitone
  double level_dbfs = -30.0;
  double ramp_s = 0.0;       // tone on/off linear ramp
  double burst_s = 0.010;    // toneburst on-time
  uint64_t seed = 1;
};

double DbfsAmplitude(double level_dbfs);

ArrayX Synthesize(const StimulusSpec& spec, FPType sample_rate_hz);

// Compact CLI form: "kind:key=value,..." e.g.
//   tone:freq=3000,level=-40,dur=0.5,ramp=0.005
//   multitone:freqs=1600+1800+2000+2200,level=-30,dur=1
//   noise:seed=42,level=-30,dur=0.25
//   toneburst:freq=3000,burst=0.01,level=-40,dur=0.025
//   chirp:freq=8000,end=100,level=-30,dur=1
// Throws std::invalid_argument on syntax errors or unknown keys.
StimulusSpec ParseStimulusSpec(const std::string& text);

}  // namespace carfac

#endif  // CARFAC_IO_STIMULUS_H_
