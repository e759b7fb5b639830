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
// State snapshot byte layout, version 1, all little-endian:
//
//   "CFST"            4-byte magic
//   u32 version       1
//   u32 n_ears
//   u32 n_ch
//   u32 ihc_variant   0 two_cap, 1 one_cap, 2 just_hwr
//   u32 n_agc_stages
//   per ear:
//     CAR  z1, z2, za, zb, dzb, zy, g, dg, ac_coupler   (9 * n_ch f64)
//     IHC  cap1, cap2, lpf1, lpf2, cap                  (5 * n_ch f64)
//     per AGC stage: memory, input_accum (2 * n_ch f64), u64 decim_phase
//
// Reals are stored as 64-bit even in a float32 build.

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "carfac/carfac.h"

namespace carfac {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'S', 'T'};
constexpr uint32_t kVersion = 1;

void PutU32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void PutU64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void PutF64(std::ostream& os, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  PutU64(os, bits);
}

uint32_t GetU32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t GetU64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double GetF64(std::istream& is) {
  uint64_t bits = GetU64(is);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

void PutArray(std::ostream& os, const ArrayX& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) PutF64(os, static_cast<double>(a[i]));
}

void GetArray(std::istream& is, ArrayX* a) {
  for (Eigen::Index i = 0; i < a->size(); ++i) (*a)[i] = static_cast<FPType>(GetF64(is));
}

}  // namespace

void Carfac::SaveState(std::ostream& os) const {
  os.write(kMagic, 4);
  PutU32(os, kVersion);
  PutU32(os, static_cast<uint32_t>(ears_.size()));
  PutU32(os, static_cast<uint32_t>(channels_.n_ch));
  PutU32(os, static_cast<uint32_t>(ihc_coeffs_.variant));
  PutU32(os, static_cast<uint32_t>(agc_coeffs_.n_stages));
  for (const CarfacState& ear : ears_) {
    for (const ArrayX* a : {&ear.car.z1, &ear.car.z2, &ear.car.za, &ear.car.zb,
                            &ear.car.dzb, &ear.car.zy, &ear.car.g, &ear.car.dg,
                            &ear.car.ac_coupler}) {
      PutArray(os, *a);
    }
    for (const ArrayX* a : {&ear.ihc.cap1, &ear.ihc.cap2, &ear.ihc.lpf1,
                            &ear.ihc.lpf2, &ear.ihc.cap}) {
      PutArray(os, *a);
    }
    for (const AgcStageState& stage : ear.agc.stages) {
      PutArray(os, stage.memory);
      PutArray(os, stage.input_accum);
      PutU64(os, static_cast<uint64_t>(stage.decim_phase));
    }
  }
  if (!os) throw std::runtime_error("state write failed");
}

void Carfac::LoadState(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("bad state snapshot: wrong magic");
  }
  if (GetU32(is) != kVersion) throw std::runtime_error("bad state snapshot: version");
  if (GetU32(is) != ears_.size() ||
      GetU32(is) != static_cast<uint32_t>(channels_.n_ch) ||
      GetU32(is) != static_cast<uint32_t>(ihc_coeffs_.variant) ||
      GetU32(is) != static_cast<uint32_t>(agc_coeffs_.n_stages)) {
    throw std::runtime_error("state snapshot shape does not match this model");
  }
  for (CarfacState& ear : ears_) {
    for (ArrayX* a : {&ear.car.z1, &ear.car.z2, &ear.car.za, &ear.car.zb,
                      &ear.car.dzb, &ear.car.zy, &ear.car.g, &ear.car.dg,
                      &ear.car.ac_coupler}) {
      GetArray(is, a);
    }
    for (ArrayX* a : {&ear.ihc.cap1, &ear.ihc.cap2, &ear.ihc.lpf1,
                      &ear.ihc.lpf2, &ear.ihc.cap}) {
      GetArray(is, a);
    }
    for (AgcStageState& stage : ear.agc.stages) {
      GetArray(is, &stage.memory);
      GetArray(is, &stage.input_accum);
      stage.decim_phase = static_cast<int>(GetU64(is));
    }
  }
  if (!is) throw std::runtime_error("state read failed: truncated snapshot");
}

}  // namespace carfac
