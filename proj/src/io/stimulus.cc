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

#include "io/stimulus.h"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace carfac {

double DbfsAmplitude(double level_dbfs) { return std::pow(10.0, level_dbfs / 20.0); }

namespace {

ArrayX Sine(double freq, double amp, int n, FPType fs) {
  ArrayX x(n);
  for (int i = 0; i < n; ++i) {
    FPType t = static_cast<FPType>(i) / fs;
    x[i] = static_cast<FPType>(amp) *
           std::sin(2 * kPi * static_cast<FPType>(freq) * t);
  }
  return x;
}

void ApplyRamp(double ramp_s, FPType fs, ArrayX* x) {
  const int n = static_cast<int>(x->size());
  int nr = std::min<int>(n / 2, static_cast<int>(std::lround(ramp_s * fs)));
  for (int i = 0; i < nr; ++i) {
    FPType w = static_cast<FPType>(i) / static_cast<FPType>(nr);
    (*x)[i] *= w;
    (*x)[n - 1 - i] *= w;
  }
}

}  // namespace

ArrayX Synthesize(const StimulusSpec& spec, FPType sample_rate_hz) {
  const FPType fs = sample_rate_hz;
  const int n = static_cast<int>(std::lround(spec.duration_s * fs));
  const double amp = DbfsAmplitude(spec.level_dbfs);
  switch (spec.kind) {
    case StimulusKind::kSilence:
      return ArrayX::Zero(n);
    case StimulusKind::kImpulse: {
      ArrayX x = ArrayX::Zero(n);
      if (n > 0) x[0] = static_cast<FPType>(amp);
      return x;
    }
    case StimulusKind::kTone: {
      ArrayX x = Sine(spec.freq_hz, amp, n, fs);
      if (spec.ramp_s > 0) ApplyRamp(spec.ramp_s, fs, &x);
      return x;
    }
    case StimulusKind::kMultitone: {
      ArrayX x = ArrayX::Zero(n);
      for (double f : spec.freqs_hz) x += Sine(f, amp, n, fs);
      return x;
    }
    case StimulusKind::kNoise: {
      NoiseGen gen(spec.seed);
      ArrayX x(n);
      for (int i = 0; i < n; ++i) {
        x[i] = static_cast<FPType>(amp * gen.Sample());
      }
      return x;
    }
    case StimulusKind::kToneburst: {
      ArrayX x = ArrayX::Zero(n);
      int n_burst = std::min<int>(n, static_cast<int>(std::lround(spec.burst_s * fs)));
      for (int i = 0; i < n_burst; ++i) {
        FPType t = static_cast<FPType>(i) / fs;
        x[i] = static_cast<FPType>(amp) *
               std::sin(2 * kPi * static_cast<FPType>(spec.freq_hz) * t);
      }
      return x;
    }
    case StimulusKind::kChirp: {
      // Exponential sweep from freq_hz to freq_end_hz.
      ArrayX x(n);
      const double f0 = spec.freq_hz;
      const double f1 = spec.freq_end_hz;
      const double total = n / static_cast<double>(fs);
      const double k = std::log(f1 / f0);
      double phase = 0;
      for (int i = 0; i < n; ++i) {
        double t = i / static_cast<double>(fs);
        double f = f0 * std::exp(k * t / total);
        x[i] = static_cast<FPType>(amp * std::sin(phase));
        phase += 2 * M_PI * f / fs;
      }
      return x;
    }
  }
  throw std::invalid_argument("unknown stimulus kind");
}

StimulusSpec ParseStimulusSpec(const std::string& text) {
  StimulusSpec spec;
  std::string kind = text;
  std::string args;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    kind = text.substr(0, colon);
    args = text.substr(colon + 1);
  }
  static const std::map<std::string, StimulusKind> kKinds = {
      {"silence", StimulusKind::kSilence},   {"impulse", StimulusKind::kImpulse},
      {"tone", StimulusKind::kTone},         {"multitone", StimulusKind::kMultitone},
      {"noise", StimulusKind::kNoise},       {"toneburst", StimulusKind::kToneburst},
      {"chirp", StimulusKind::kChirp},
  };
  auto it = kKinds.find(kind);
  if (it == kKinds.end()) {
    throw std::invalid_argument("unknown stimulus kind: " + kind);
  }
  spec.kind = it->second;

  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("stimulus arg needs key=value: " + item);
    }
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "freq") {
      spec.freq_hz = std::stod(value);
    } else if (key == "end") {
      spec.freq_end_hz = std::stod(value);
    } else if (key == "freqs") {
      spec.freqs_hz.clear();
      std::stringstream fss(value);
      std::string f;
      while (std::getline(fss, f, '+')) spec.freqs_hz.push_back(std::stod(f));
    } else if (key == "level") {
      spec.level_dbfs = std::stod(value);
    } else if (key == "dur") {
      spec.duration_s = std::stod(value);
    } else if (key == "ramp") {
      spec.ramp_s = std::stod(value);
    } else if (key == "burst") {
      spec.burst_s = std::stod(value);
    } else if (key == "seed") {
      spec.seed = std::stoull(value);
    } else {
      throw std::invalid_argument("unknown stimulus key: " + key);
    }
  }
  if (spec.kind == StimulusKind::kMultitone && spec.freqs_hz.empty()) {
    throw std::invalid_argument("multitone needs freqs=f1+f2+...");
  }
  return spec;
}

}  // namespace carfac
