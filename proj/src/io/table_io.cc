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

#include "io/table_io.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace carfac {

namespace {

void PutU32(std::ofstream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<char*>(b), 4);
}

void PutU64(std::ofstream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<char*>(b), 8);
}

}  // namespace

void WriteRaw64(const std::string& path, const ArrayXX& plane) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write("CF64", 4);
  PutU32(os, static_cast<uint32_t>(plane.cols()));
  PutU64(os, static_cast<uint64_t>(plane.rows()));
  for (Eigen::Index r = 0; r < plane.rows(); ++r) {
    for (Eigen::Index c = 0; c < plane.cols(); ++c) {
      double v = static_cast<double>(plane(r, c));
      uint64_t bits;
      std::memcpy(&bits, &v, 8);
      PutU64(os, bits);
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

ArrayXX ReadRaw64(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  char magic[4];
  unsigned char hdr[12];
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(hdr), 12);
  if (!is || std::memcmp(magic, "CF64", 4) != 0) {
    throw std::runtime_error("bad raw64 magic in " + path);
  }
  uint32_t n_ch = static_cast<uint32_t>(hdr[0]) | (hdr[1] << 8) | (hdr[2] << 16) |
                  (static_cast<uint32_t>(hdr[3]) << 24);
  uint64_t n_samples = 0;
  for (int i = 7; i >= 0; --i) n_samples = (n_samples << 8) | hdr[4 + i];
  ArrayXX plane(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(n_ch));
  std::vector<unsigned char> buf(8);
  for (Eigen::Index r = 0; r < plane.rows(); ++r) {
    for (Eigen::Index c = 0; c < plane.cols(); ++c) {
      is.read(reinterpret_cast<char*>(buf.data()), 8);
      uint64_t bits = 0;
      for (int i = 7; i >= 0; --i) bits = (bits << 8) | buf[i];
      double v;
      std::memcpy(&v, &bits, 8);
      plane(r, c) = static_cast<FPType>(v);
    }
  }
  if (!is) throw std::runtime_error("truncated raw64 file: " + path);
  return plane;
}

void WriteCsvPlane(const std::string& path, const ArrayXX& plane,
                   const ArrayX& cf_hz) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  char buf[64];
  for (Eigen::Index c = 0; c < plane.cols(); ++c) {
    std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(cf_hz[c]));
    os << (c ? "," : "") << buf;
  }
  os << "\n";
  for (Eigen::Index r = 0; r < plane.rows(); ++r) {
    for (Eigen::Index c = 0; c < plane.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(plane(r, c)));
      os << (c ? "," : "") << buf;
    }
    os << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<double>> ReadCsv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (...) {
        row.push_back(0.0);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WritePgm(const std::string& path, const ArrayXX& image01) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "P5\n" << image01.cols() << " " << image01.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image01.rows(); ++r) {
    for (Eigen::Index c = 0; c < image01.cols(); ++c) {
      double v = std::clamp(static_cast<double>(image01(r, c)), 0.0, 1.0);
      os.put(static_cast<char>(static_cast<unsigned char>(v * 255.0 + 0.5)));
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace carfac
