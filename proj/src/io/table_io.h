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

#ifndef CARFAC_IO_TABLE_IO_H_
#define CARFAC_IO_TABLE_IO_H_

#include <string>
#include <vector>

#include "carfac/common.h"

namespace carfac {

// raw64: 16-byte header ("CF64", u32 n_ch, u64 n_samples), then row-major
// (samples x channels) little-endian f64.  Lossless round trip.
void WriteRaw64(const std::string& path, const ArrayXX& plane);
ArrayXX ReadRaw64(const std::string& path);

// One row per sample, one column per channel; the header row carries each
// channel's CF in Hz.
void WriteCsvPlane(const std::string& path, const ArrayXX& plane,
                   const ArrayX& cf_hz);

// Generic CSV: a header line plus rows of %.17g values (exact doubles).
void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows);
// Reads a numeric CSV, skipping the header line; non-numeric cells are 0.
std::vector<std::vector<double>> ReadCsv(const std::string& path);

// Binary 8-bit PGM; values clipped to [0, 1] map to 0..255.
void WritePgm(const std::string& path, const ArrayXX& image01);

}  // namespace carfac

#endif  // CARFAC_IO_TABLE_IO_H_
