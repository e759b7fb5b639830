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

#include "io/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace carfac {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatIeeeFloat = 3;

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::ofstream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<char*>(b), 4);
}

void PutU16(std::ofstream& os, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<char*>(b), 2);
}

void WriteHeader(std::ofstream& os, uint16_t format, int n_channels,
                 int sample_rate, int bits, uint32_t data_bytes) {
  int block_align = n_channels * bits / 8;
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  PutU32(os, 16);
  PutU16(os, format);
  PutU16(os, static_cast<uint16_t>(n_channels));
  PutU32(os, static_cast<uint32_t>(sample_rate));
  PutU32(os, static_cast<uint32_t>(sample_rate * block_align));
  PutU16(os, static_cast<uint16_t>(block_align));
  PutU16(os, static_cast<uint16_t>(bits));
  os.write("data", 4);
  PutU32(os, data_bytes);
}

}  // namespace

WavData ReadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open WAV file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("not a RIFF/WAVE file: " + path);
  }

  uint16_t format = 0, n_channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  size_t data_offset = 0, data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    uint32_t chunk_size = ReadU32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && chunk_size >= 16) {
      format = ReadU16(chunk + 8);
      n_channels = ReadU16(chunk + 10);
      sample_rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data_offset = pos + 8;
      data_size = std::min<size_t>(chunk_size, bytes.size() - data_offset);
    }
    pos += 8 + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  if (n_channels == 0 || data_offset == 0) {
    throw std::runtime_error("WAV file missing fmt or data chunk: " + path);
  }

  bool ok = (format == kFormatPcm && (bits == 16 || bits == 24)) ||
            (format == kFormatIeeeFloat && bits == 32);
  if (!ok) {
    throw std::runtime_error("unsupported WAV encoding (format " +
                             std::to_string(format) + ", " +
                             std::to_string(bits) + " bits); expected 16/24-bit "
                             "PCM or 32-bit float");
  }

  const size_t bytes_per_sample = bits / 8;
  const size_t frame_bytes = bytes_per_sample * n_channels;
  const size_t n_frames = data_size / frame_bytes;
  WavData wav;
  wav.sample_rate_hz = static_cast<int>(sample_rate);
  wav.samples.setZero(n_channels, static_cast<Eigen::Index>(n_frames));
  const unsigned char* data = bytes.data() + data_offset;
  for (size_t i = 0; i < n_frames; ++i) {
    for (int c = 0; c < n_channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      FPType value = 0;
      if (format == kFormatIeeeFloat) {
        float f;
        std::memcpy(&f, p, 4);
        value = static_cast<FPType>(f);
      } else if (bits == 16) {
        auto v = static_cast<int16_t>(p[0] | (p[1] << 8));
        value = static_cast<FPType>(v) / static_cast<FPType>(32768.0);
      } else {  // 24-bit
        int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000) v |= ~0xffffff;  // sign extend
        value = static_cast<FPType>(v) / static_cast<FPType>(8388608.0);
      }
      wav.samples(c, static_cast<Eigen::Index>(i)) = value;
    }
  }
  return wav;
}

void WriteWavPcm16(const std::string& path, const ArrayXX& samples,
                   int sample_rate_hz) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write WAV file: " + path);
  const int n_channels = static_cast<int>(samples.rows());
  const auto n_frames = samples.cols();
  WriteHeader(os, kFormatPcm, n_channels, sample_rate_hz, 16,
              static_cast<uint32_t>(n_frames * n_channels * 2));
  for (Eigen::Index i = 0; i < n_frames; ++i) {
    for (int c = 0; c < n_channels; ++c) {
      double v = std::clamp(static_cast<double>(samples(c, i)), -1.0, 1.0);
      auto q = static_cast<int16_t>(std::lrint(v * 32767.0));
      PutU16(os, static_cast<uint16_t>(q));
    }
  }
}

void WriteWavPcm24(const std::string& path, const ArrayXX& samples,
                   int sample_rate_hz) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write WAV file: " + path);
  const int n_channels = static_cast<int>(samples.rows());
  const auto n_frames = samples.cols();
  WriteHeader(os, kFormatPcm, n_channels, sample_rate_hz, 24,
              static_cast<uint32_t>(n_frames * n_channels * 3));
  for (Eigen::Index i = 0; i < n_frames; ++i) {
    for (int c = 0; c < n_channels; ++c) {
      double v = std::clamp(static_cast<double>(samples(c, i)), -1.0, 1.0);
      auto q = static_cast<int32_t>(std::lrint(v * 8388607.0));
      unsigned char b[3] = {static_cast<unsigned char>(q),
                            static_cast<unsigned char>(q >> 8),
                            static_cast<unsigned char>(q >> 16)};
      os.write(reinterpret_cast<char*>(b), 3);
    }
  }
}

void WriteWavFloat32(const std::string& path, const ArrayXX& samples,
                     int sample_rate_hz) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write WAV file: " + path);
  const int n_channels = static_cast<int>(samples.rows());
  const auto n_frames = samples.cols();
  WriteHeader(os, kFormatIeeeFloat, n_channels, sample_rate_hz, 32,
              static_cast<uint32_t>(n_frames * n_channels * 4));
  for (Eigen::Index i = 0; i < n_frames; ++i) {
    for (int c = 0; c < n_channels; ++c) {
      float f = static_cast<float>(samples(c, i));
      os.write(reinterpret_cast<char*>(&f), 4);
    }
  }
}

}  // namespace carfac
