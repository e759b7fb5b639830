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

#include "io/golden.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "carfac/carfac.h"
#include "io/analysis.h"
#include "io/stimulus.h"
#include "io/table_io.h"

namespace carfac {

namespace {

// Canonical stimuli, in exact sample counts so regeneration is
// reproducible regardless of rounding conventions.
constexpr FPType kFs = static_cast<FPType>(22050.0);
constexpr int kImpulseSamples = 512;
constexpr int kNoiseSamples = 5512;      // 0.25 s
constexpr int kToneburstSamples = 551;   // 25 ms
constexpr int kToneburstOnSamples = 220; // 10 ms
constexpr uint64_t kNoiseSeed = 42;
constexpr uint64_t kBinauralSeed = 7;

ArrayX MakeNoise(uint64_t seed, double level_dbfs, int n) {
  NoiseGen gen(seed);
  const double amp = DbfsAmplitude(level_dbfs);
  ArrayX x(n);
  for (int i = 0; i < n; ++i) x[i] = static_cast<FPType>(amp * gen.Sample());
  return x;
}

ArrayX MakeToneburst(double freq, double level_dbfs, int n_total, int n_on) {
  const FPType amp = static_cast<FPType>(DbfsAmplitude(level_dbfs));
  ArrayX x = ArrayX::Zero(n_total);
  for (int i = 0; i < n_on; ++i) {
    FPType t = static_cast<FPType>(i) / kFs;
    x[i] = amp * std::sin(2 * kPi * static_cast<FPType>(freq) * t);
  }
  return x;
}

ArrayX MakeRampedTone(double freq, double level_dbfs, int n, int n_ramp) {
  const FPType amp = static_cast<FPType>(DbfsAmplitude(level_dbfs));
  ArrayX x(n);
  for (int i = 0; i < n; ++i) {
    FPType t = static_cast<FPType>(i) / kFs;
    x[i] = amp * std::sin(2 * kPi * static_cast<FPType>(freq) * t);
  }
  for (int i = 0; i < n_ramp; ++i) {
    FPType w = static_cast<FPType>(i) / static_cast<FPType>(n_ramp);
    x[i] *= w;
    x[n - 1 - i] *= w;
  }
  return x;
}

std::vector<std::vector<double>> CarCoeffTable(const Carfac& model) {
  const CarCoeffs& cc = model.car_coeffs();
  std::vector<std::vector<double>> rows;
  for (int ch = 0; ch < cc.n_ch; ++ch) {
    rows.push_back({static_cast<double>(cc.pole_freqs[ch]),
                    static_cast<double>(cc.a0[ch]), static_cast<double>(cc.c0[ch]),
                    static_cast<double>(cc.r1[ch]), static_cast<double>(cc.zr[ch]),
                    static_cast<double>(cc.h[ch]), static_cast<double>(cc.g_p0[ch]),
                    static_cast<double>(cc.g_p1[ch]),
                    static_cast<double>(cc.g_p2[ch]),
                    static_cast<double>(cc.g0[ch])});
  }
  return rows;
}

const std::vector<std::string> kCarHeader = {"pole_freq_hz", "a0", "c0",
                                             "r1",           "zr", "h",
                                             "g_p0",         "g_p1", "g_p2", "g0"};

std::vector<std::vector<double>> AgcStageTable(const Carfac& model) {
  std::vector<std::vector<double>> rows;
  for (const AgcStageCoeffs& s : model.agc_coeffs().stages) {
    rows.push_back({static_cast<double>(s.decimation),
                    static_cast<double>(s.epsilon),
                    static_cast<double>(s.fir_left),
                    static_cast<double>(s.fir_mid),
                    static_cast<double>(s.fir_right),
                    static_cast<double>(s.n_iterations),
                    static_cast<double>(s.stage_gain),
                    static_cast<double>(s.mix_coeff)});
  }
  return rows;
}

struct GoldenSet {
  std::map<std::string, ArrayXX> planes;  // raw64 files
  std::map<std::string, std::vector<std::vector<double>>> tables;  // csv files
  std::map<std::string, std::vector<std::string>> table_headers;
};

// Recomputes every golden artifact from the current build.
GoldenSet ComputeGoldenSet() {
  GoldenSet set;

  Carfac model(DefaultDesign(kFs));
  const int n_ch = model.num_channels();
  const ArrayX pole_freqs = model.pole_freqs();
  set.tables["car_coeffs_22050.csv"] = CarCoeffTable(model);
  set.table_headers["car_coeffs_22050.csv"] = kCarHeader;

  Carfac model48(DefaultDesign(static_cast<FPType>(48000.0)));
  set.tables["car_coeffs_48000.csv"] = CarCoeffTable(model48);
  set.table_headers["car_coeffs_48000.csv"] = kCarHeader;

  set.tables["agc_stages_22050.csv"] = AgcStageTable(model);
  set.table_headers["agc_stages_22050.csv"] = {
      "decimation", "epsilon",    "fir_left",   "fir_mid",
      "fir_right",  "n_iterations", "stage_gain", "mix_coeff"};

  // IHC coefficients for every variant, as key/value rows; the key column
  // is not numeric so only the value column is compared.
  {
    std::vector<std::vector<double>> rows;
    for (IhcVariant variant :
         {IhcVariant::kTwoCap, IhcVariant::kOneCap, IhcVariant::kJustHwr}) {
      CarfacDesignParams p = DefaultDesign(kFs);
      p.ihc.variant = variant;
      IhcCoeffs ic = DesignIhcCoeffs(p.ihc, kFs);
      for (double v : {static_cast<double>(ic.cap1_recovery_rate),
                       static_cast<double>(ic.cap1_depletion_rate),
                       static_cast<double>(ic.cap2_recovery_rate),
                       static_cast<double>(ic.cap2_depletion_rate),
                       static_cast<double>(ic.rest_cap1),
                       static_cast<double>(ic.rest_cap2),
                       static_cast<double>(ic.rest_receptor_potential),
                       static_cast<double>(ic.cap_recovery_rate),
                       static_cast<double>(ic.cap_depletion_rate),
                       static_cast<double>(ic.rest_cap),
                       static_cast<double>(ic.output_lpf_coeff),
                       static_cast<double>(ic.output_gain),
                       static_cast<double>(ic.rest_output),
                       static_cast<double>(ic.hwr_clip_level)}) {
        rows.push_back({v});
      }
    }
    set.tables["ihc_coeffs_22050.csv"] = rows;
    set.table_headers["ihc_coeffs_22050.csv"] = {"key", "value"};
  }

  // Impulse response, linear open loop.
  {
    Carfac m(DefaultDesign(kFs));
    ArrayXX audio = ArrayXX::Zero(1, kImpulseSamples);
    audio(0, 0) = 1;
    RunOptions options;
    options.open_loop = true;
    options.linear = true;
    options.planes = kBm | kBmRaw;
    SegmentOutput out = m.RunSegment(audio, options);
    set.planes["impulse_bm_22050.raw64"] = out.bm[0];
    set.planes["impulse_bm_raw_22050.raw64"] = out.bm_raw[0];
  }

  std::vector<std::vector<double>> scalars;
  auto add_scalar = [&scalars](double v) { scalars.push_back({v}); };
  add_scalar(n_ch);
  add_scalar(model48.num_channels());
  add_scalar(static_cast<double>(model.car_coeffs().ac_coeff));
  add_scalar(static_cast<double>(model.agc_coeffs().detect_scale));
  add_scalar(static_cast<double>(model.agc_coeffs().decimation0));
  add_scalar(static_cast<double>(IhcDetect(static_cast<FPType>(0))));
  add_scalar(static_cast<double>(IhcDetect(static_cast<FPType>(0.1))));
  add_scalar(static_cast<double>(IhcDetect(static_cast<FPType>(-0.1))));
  add_scalar(static_cast<double>(IhcDetect(static_cast<FPType>(10))));

  // Closed-loop noise segment.
  {
    Carfac m(DefaultDesign(kFs));
    ArrayX noise = MakeNoise(kNoiseSeed, -30.0, kNoiseSamples);
    ArrayXX input(kNoiseSamples, 1);
    input.col(0) = noise;
    set.planes["noise_input_22050.raw64"] = input;
    ArrayXX audio(1, kNoiseSamples);
    audio.row(0) = noise.transpose();
    RunOptions options;
    options.planes = kNap | kBm | kAgc;
    SegmentOutput out = m.RunSegment(audio, options);
    set.planes["noise_nap_22050.raw64"] = out.nap[0];
    set.planes["noise_bm_22050.raw64"] = out.bm[0];
    set.planes["noise_agc0_22050.raw64"] = out.agc[0];
    add_scalar(static_cast<double>(out.agc_update_samples.size()));
    add_scalar(out.agc_update_samples.empty() ? -1 : out.agc_update_samples[0]);
  }

  // Tone bursts, both IHC variants, plus the synchrony scalars measured
  // over the second half of the burst at the channel nearest 3 kHz.
  {
    ArrayX burst = MakeToneburst(3000.0, -40.0, kToneburstSamples,
                                 kToneburstOnSamples);
    ArrayXX audio(1, kToneburstSamples);
    audio.row(0) = burst.transpose();

    Carfac m2(DefaultDesign(kFs));
    SegmentOutput o2 = m2.RunSegment(audio, {});
    set.planes["toneburst_nap_two_cap.raw64"] = o2.nap[0];
    set.planes["toneburst_vrecep_two_cap.raw64"] = o2.receptor_potential[0];
    set.planes["toneburst_bm_two_cap.raw64"] = o2.bm[0];

    CarfacDesignParams p1 = DefaultDesign(kFs);
    p1.ihc.variant = IhcVariant::kOneCap;
    Carfac m1(p1);
    SegmentOutput o1 = m1.RunSegment(audio, {});
    set.planes["toneburst_nap_one_cap.raw64"] = o1.nap[0];

    int ch = 0;
    (pole_freqs - static_cast<FPType>(3000)).abs().minCoeff(&ch);
    const int w0 = 110, w1 = kToneburstOnSamples;
    std::vector<FPType> t2(w1 - w0), t1(w1 - w0);
    for (int i = w0; i < w1; ++i) {
      t2[i - w0] = o2.nap[0](i, ch);
      t1[i - w0] = o1.nap[0](i, ch);
    }
    AcDc ac2 = AcDcComponents(t2.data(), w1 - w0, 3000.0, kFs);
    AcDc ac1 = AcDcComponents(t1.data(), w1 - w0, 3000.0, kFs);
    add_scalar(ch);
    add_scalar(ac2.ac);
    add_scalar(ac1.ac);
    add_scalar(ac2.ac / ac1.ac);
  }

  // Binaural AGC: ear 0 noise, ear 1 silence.
  {
    Carfac m(DefaultDesign(kFs), 2);
    ArrayXX audio = ArrayXX::Zero(2, kNoiseSamples);
    ArrayX noise = MakeNoise(kBinauralSeed, -30.0, kNoiseSamples);
    audio.row(0) = noise.transpose();
    RunOptions options;
    options.planes = kNoPlanes;
    m.RunSegment(audio, options);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> header = {"ear", "stage"};
    for (int c = 0; c < n_ch; ++c) header.push_back("ch" + std::to_string(c));
    for (int e = 0; e < 2; ++e) {
      for (int stage = 0; stage < m.agc_coeffs().n_stages; ++stage) {
        std::vector<double> row = {static_cast<double>(e),
                                   static_cast<double>(stage)};
        const ArrayX& mem = m.ear_state(e).agc.stages[stage].memory;
        for (int c = 0; c < n_ch; ++c) row.push_back(static_cast<double>(mem[c]));
        rows.push_back(std::move(row));
      }
    }
    set.tables["binaural_agc_22050.csv"] = rows;
    set.table_headers["binaural_agc_22050.csv"] = header;
  }

  // Compression: peak BM response (max over channels of steady-state RMS)
  // to a CF tone rising from -60 to -20 dBFS.
  {
    int ch = 0;
    (pole_freqs - static_cast<FPType>(3000)).abs().minCoeff(&ch);
    const double probe = static_cast<double>(pole_freqs[ch]);
    const int n = 15435;       // 0.7 s
    const int skip = 11025;    // measure the last 0.2 s
    auto peak_rms = [&](double level) {
      Carfac m(DefaultDesign(kFs));
      ArrayX x = MakeRampedTone(probe, level, n, 110);
      ArrayXX audio(1, n);
      audio.row(0) = x.transpose();
      RunOptions options;
      options.planes = kBm;
      SegmentOutput out = m.RunSegment(audio, options);
      double best = 0;
      for (int c = 0; c < out.n_ch; ++c) {
        double acc = 0;
        for (int i = skip; i < n; ++i) {
          double v = static_cast<double>(out.bm[0](i, c));
          acc += v * v;
        }
        best = std::max(best, std::sqrt(acc / (n - skip)));
      }
      return best;
    };
    add_scalar(20 * std::log10(peak_rms(-20.0) / peak_rms(-60.0)));
  }

  set.tables["scalars_22050.csv"] = scalars;
  set.table_headers["scalars_22050.csv"] = {"key", "value"};
  return set;
}

// Key names for the scalar table, in the order ComputeGoldenSet emits them.
const std::vector<std::string> kScalarKeys = {
    "n_ch_22050",        "n_ch_48000",          "ac_coeff_22050",
    "agc_detect_scale",  "agc_decimation0",     "detect_at_0",
    "detect_at_p01",     "detect_at_m01",       "detect_at_10",
    "noise_n_agc_updates", "noise_first_agc_update", "toneburst_channel",
    "synchrony_ac_two_cap", "synchrony_ac_one_cap", "synchrony_ratio_3k",
    "compression_growth_db"};

const std::vector<std::string> kIhcKeys = {
    "cap1_recovery_rate", "cap1_depletion_rate", "cap2_recovery_rate",
    "cap2_depletion_rate", "rest_cap1",          "rest_cap2",
    "rest_receptor_potential", "cap_recovery_rate", "cap_depletion_rate",
    "rest_cap",           "output_lpf_coeff",    "output_gain",
    "rest_output",        "hwr_clip_level"};

std::string IhcRowKey(size_t row) {
  static const char* variants[] = {"two_cap", "one_cap", "just_hwr"};
  return std::string(variants[row / kIhcKeys.size()]) + "." +
         kIhcKeys[row % kIhcKeys.size()];
}

}  // namespace

void GoldenDump(const std::string& dir) {
  GoldenSet set = ComputeGoldenSet();
  for (const auto& [name, plane] : set.planes) {
    WriteRaw64(dir + "/" + name, plane);
  }
  for (const auto& [name, rows] : set.tables) {
    // Key/value tables get their text keys in the first column.
    if (name == "scalars_22050.csv" || name == "ihc_coeffs_22050.csv") {
      std::ofstream os(dir + "/" + name);
      if (!os) throw std::runtime_error("cannot write " + dir + "/" + name);
      os << "key,value\n";
      char buf[64];
      for (size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", rows[i][0]);
        os << (name == "scalars_22050.csv" ? kScalarKeys[i] : IhcRowKey(i))
           << "," << buf << "\n";
      }
    } else {
      WriteCsv(dir + "/" + name, set.table_headers.at(name), rows);
    }
  }
}

GoldenReport GoldenCompare(const std::string& dir, double tolerance) {
  GoldenSet set = ComputeGoldenSet();
  GoldenReport report;
  report.tolerance = tolerance;

  auto check = [&](const std::string& name,
                   const std::function<void(GoldenItemResult*)>& diff) {
    GoldenItemResult item;
    item.name = name;
    try {
      diff(&item);
      item.pass = item.max_abs_diff <= tolerance;
    } catch (const std::exception& e) {
      item.pass = false;
      item.max_abs_diff = std::numeric_limits<double>::infinity();
      item.name += std::string(" (") + e.what() + ")";
    }
    report.pass = report.pass && item.pass;
    report.items.push_back(item);
  };

  for (const auto& [name, plane] : set.planes) {
    check(name, [&, &plane = plane](GoldenItemResult* item) {
      ArrayXX golden = ReadRaw64(dir + "/" + name);
      if (golden.rows() != plane.rows() || golden.cols() != plane.cols()) {
        throw std::runtime_error("shape mismatch");
      }
      for (Eigen::Index r = 0; r < plane.rows(); ++r) {
        for (Eigen::Index c = 0; c < plane.cols(); ++c) {
          double d = std::abs(static_cast<double>(plane(r, c)) -
                              static_cast<double>(golden(r, c)));
          if (d > item->max_abs_diff) {
            item->max_abs_diff = d;
            item->worst_row = r;
            item->worst_col = c;
          }
        }
      }
    });
  }
  for (const auto& [name, rows] : set.tables) {
    check(name, [&, &rows = rows](GoldenItemResult* item) {
      std::vector<std::vector<double>> golden = ReadCsv(dir + "/" + name);
      if (golden.size() != rows.size()) throw std::runtime_error("row count mismatch");
      const bool keyed =
          name == "scalars_22050.csv" || name == "ihc_coeffs_22050.csv";
      for (size_t r = 0; r < rows.size(); ++r) {
        // Keyed tables: golden column 0 is the text key (parsed as 0).
        size_t offset = keyed ? 1 : 0;
        if (golden[r].size() != rows[r].size() + offset) {
          throw std::runtime_error("column count mismatch");
        }
        for (size_t c = 0; c < rows[r].size(); ++c) {
          double d = std::abs(rows[r][c] - golden[r][c + offset]);
          if (d > item->max_abs_diff) {
            item->max_abs_diff = d;
            item->worst_row = static_cast<long>(r);
            item->worst_col = static_cast<long>(c);
          }
        }
      }
    });
  }
  return report;
}

double DefaultGoldenTolerance() {
#ifdef CARFAC_SINGLE_PRECISION
  return 1e-3;
#else
  return 1e-6;
#endif
}

}  // namespace carfac
