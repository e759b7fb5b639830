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

#ifndef CARFAC_IO_WAV_H_
#define CARFAC_IO_WAV_H_

#include <string>

#include "carfac/common.h"

namespace carfac {

struct WavData {
  int sample_rate_hz = 0;
  ArrayXX samples;  // (channels x samples), full scale +-1
};

// Reads RIFF/WAVE with 16- or 24-bit PCM or 32-bit IEEE float samples.
// Anything else (compressed encodings, other depths) is a runtime_error.
WavData ReadWav(const std::string& path);

void WriteWavPcm16(const std::string& path, const ArrayXX& samples,
                   int sample_rate_hz);
void WriteWavFloat32(const std::string& path, const ArrayXX& samples,
                     int sample_rate_hz);
void WriteWavPcm24(const std::string& path, const ArrayXX& samples,
                   int sample_rate_hz);

}  // namespace carfac

#endif  // CARFAC_IO_WAV_H_
