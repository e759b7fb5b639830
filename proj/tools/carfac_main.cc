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
// carfac: run the cochlear model on audio or synthetic stimuli, analyze
// its distortion products, compare IHC variants, benchmark, or diff the
// build against golden data.  Every subcommand exits nonzero on any
// tolerance or assertion failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "carfac/carfac.h"
#include "io/analysis.h"
#include "io/golden.h"
#include "io/stimulus.h"
#include "io/table_io.h"
#include "io/wav.h"

namespace {

using namespace carfac;

struct CommonOptions {
  double sample_rate = 22050.0;
  std::string ihc = "two_cap";
  bool open_loop = false;
  bool linear = false;
  bool delay_buffer = false;
  std::string ohc_health;  // "", "0.5", "@file.csv", "basal-zero:35"
  std::string output_dir = ".";
  std::string format = "csv";
};

IhcVariant ParseIhcVariant(const std::string& name) {
  if (name == "two_cap") return IhcVariant::kTwoCap;
  if (name == "one_cap") return IhcVariant::kOneCap;
  if (name == "just_hwr") return IhcVariant::kJustHwr;
  throw CLI::ValidationError("--ihc must be two_cap, one_cap, or just_hwr");
}

CarfacDesignParams MakeParams(const CommonOptions& opt) {
  CarfacDesignParams params = DefaultDesign(static_cast<FPType>(opt.sample_rate));
  params.ihc.variant = ParseIhcVariant(opt.ihc);
  params.car.use_delay_buffer = opt.delay_buffer;
  return params;
}

void ApplyOhcHealth(const std::string& spec, Carfac* model) {
  if (spec.empty()) return;
  const int n_ch = model->num_channels();
  ArrayX health = ArrayX::Ones(n_ch);
  if (spec.rfind("basal-zero:", 0) == 0) {
    int cutoff = std::stoi(spec.substr(11));
    for (int ch = 0; ch < std::min(cutoff, n_ch); ++ch) health[ch] = 0;
  } else if (!spec.empty() && spec[0] == '@') {
    auto rows = ReadCsv(spec.substr(1));
    if (static_cast<int>(rows.size()) != n_ch) {
      throw std::invalid_argument("ohc-health file needs one row per channel");
    }
    for (int ch = 0; ch < n_ch; ++ch) health[ch] = static_cast<FPType>(rows[ch][0]);
  } else {
    health.setConstant(static_cast<FPType>(std::stod(spec)));
  }
  model->set_ohc_health(health);
}

void WritePlane(const CommonOptions& opt, const std::string& name,
                const ArrayXX& plane, const ArrayX& cf) {
  std::string base = opt.output_dir + "/" + name;
  if (opt.format == "raw64") {
    WriteRaw64(base + ".raw64", plane);
  } else {
    WriteCsvPlane(base + ".csv", plane, cf);
  }
}

int CmdRun(const CommonOptions& opt, const std::string& input,
           const std::string& stimulus, const std::vector<std::string>& planes,
           double chunk_ms) {
  CarfacDesignParams params = MakeParams(opt);

  int n_ears = 1;
  ArrayXX audio;
  if (!input.empty()) {
    WavData wav = ReadWav(input);
    if (wav.sample_rate_hz != static_cast<int>(opt.sample_rate)) {
      throw std::runtime_error(
          "WAV rate " + std::to_string(wav.sample_rate_hz) +
          " != model rate " + std::to_string(static_cast<int>(opt.sample_rate)) +
          " (resampling not supported; pass --sample-rate)");
    }
    if (wav.samples.rows() > 2) {
      throw std::runtime_error("only mono or stereo WAV supported");
    }
    n_ears = static_cast<int>(wav.samples.rows());
    audio = wav.samples;
  } else {
    StimulusSpec spec = ParseStimulusSpec(stimulus);
    ArrayX x = Synthesize(spec, params.sample_rate_hz);
    audio.setZero(1, x.size());
    audio.row(0) = x.transpose();
  }

  Carfac model(params, n_ears);
  ApplyOhcHealth(opt.ohc_health, &model);

  RunOptions options;
  options.open_loop = opt.open_loop;
  options.linear = opt.linear;
  options.planes = 0;
  for (const std::string& p : planes) {
    if (p == "nap") options.planes |= kNap;
    else if (p == "bm") options.planes |= kBm;
    else if (p == "bm_raw") options.planes |= kBmRaw;
    else if (p == "receptor_potential") options.planes |= kReceptorPotential;
    else if (p == "ohc") options.planes |= kOhc;
    else if (p == "agc") options.planes |= kAgc;
    else throw std::invalid_argument("unknown output plane: " + p);
  }
  if (options.planes == 0) throw std::invalid_argument("select at least one output plane");

  const int n_samples = static_cast<int>(audio.cols());
  int chunk = n_samples;
  if (chunk_ms > 0) {
    chunk = std::max(1, static_cast<int>(std::lround(chunk_ms / 1000.0 *
                                                     opt.sample_rate)));
  }

  // Accumulate chunked outputs; state continuity makes this identical to
  // one whole-segment call.
  std::vector<SegmentOutput> pieces;
  for (int start = 0; start < n_samples; start += chunk) {
    int len = std::min(chunk, n_samples - start);
    pieces.push_back(model.RunSegment(audio.middleCols(start, len), options));
  }

  auto stitch = [&](unsigned plane, auto accessor) {
    if (!(options.planes & plane)) return;
    for (int e = 0; e < n_ears; ++e) {
      ArrayXX full(n_samples, model.num_channels());
      int row = 0;
      for (const SegmentOutput& piece : pieces) {
        const ArrayXX& part = accessor(piece, e);
        full.middleRows(row, part.rows()) = part;
        row += static_cast<int>(part.rows());
      }
      std::string suffix = n_ears > 1 ? "_ear" + std::to_string(e) : "";
      std::string name;
      switch (plane) {
        case kNap: name = "nap"; break;
        case kBm: name = "bm"; break;
        case kBmRaw: name = "bm_raw"; break;
        case kReceptorPotential: name = "receptor_potential"; break;
        case kOhc: name = "ohc"; break;
      }
      WritePlane(opt, name + suffix, full, model.pole_freqs());
    }
  };
  stitch(kNap, [](const SegmentOutput& o, int e) -> const ArrayXX& { return o.nap[e]; });
  stitch(kBm, [](const SegmentOutput& o, int e) -> const ArrayXX& { return o.bm[e]; });
  stitch(kBmRaw, [](const SegmentOutput& o, int e) -> const ArrayXX& { return o.bm_raw[e]; });
  stitch(kReceptorPotential,
         [](const SegmentOutput& o, int e) -> const ArrayXX& { return o.receptor_potential[e]; });
  stitch(kOhc, [](const SegmentOutput& o, int e) -> const ArrayXX& { return o.ohc[e]; });
  if (options.planes & kAgc) {
    for (int e = 0; e < n_ears; ++e) {
      long n_updates = 0;
      for (const SegmentOutput& piece : pieces) n_updates += piece.agc[e].rows();
      ArrayXX full(n_updates, model.num_channels() + 1);
      long row = 0;
      long sample_base = 0;
      for (const SegmentOutput& piece : pieces) {
        for (long u = 0; u < piece.agc[e].rows(); ++u, ++row) {
          full(row, 0) = static_cast<FPType>(sample_base + piece.agc_update_samples[u]);
          full.row(row).tail(model.num_channels()) = piece.agc[e].row(u);
        }
        sample_base += piece.n_samples;
      }
      ArrayX header(model.num_channels() + 1);
      header[0] = -1;  // timestamp column
      header.tail(model.num_channels()) = model.pole_freqs();
      std::string suffix = n_ears > 1 ? "_ear" + std::to_string(e) : "";
      WritePlane(opt, "agc" + suffix, full, header);
    }
  }
  std::printf("wrote %d samples x %d channels x %d ear(s) to %s\n", n_samples,
              model.num_channels(), n_ears, opt.output_dir.c_str());
  return 0;
}

int CmdAnalyzeDistortion(const CommonOptions& opt, double level_dbfs,
                         double duration_s, bool no_ac_coupler) {
  DistortionReport report = RunDistortionAnalysis(
      static_cast<FPType>(opt.sample_rate), level_dbfs, duration_s,
      {1600, 1800, 2000, 2200}, no_ac_coupler);
  Eigen::ArrayXXd spectrum = report.spectrum;
  ArrayXX table(spectrum.rows(), spectrum.cols());
  for (Eigen::Index r = 0; r < spectrum.rows(); ++r) {
    for (Eigen::Index c = 0; c < spectrum.cols(); ++c) {
      table(r, c) = static_cast<FPType>(spectrum(r, c));
    }
  }
  Carfac model(MakeParams(opt));
  WritePlane(opt, "distortion_spectrum", table, model.pole_freqs());

  std::printf("bin width %.3f Hz, stimulus 1600+1800+2000+2200 Hz at %g dBFS\n",
              report.bin_hz, level_dbfs);
  bool all_detected = true;
  for (const DistortionLine& line : report.lines) {
    std::printf("  line %6.0f Hz: mag %.3e (floor %.3e) ch %2d %s\n",
                line.freq_hz, line.magnitude, line.floor_magnitude,
                line.best_channel, line.detected ? "detected" : "NOT DETECTED");
    all_detected = all_detected && line.detected;
  }
  std::printf("  DC bin: %.3e (%.1f dB re strongest line) -> %s\n",
              report.dc_magnitude, report.dc_re_strongest_db,
              report.dc_suppressed ? "suppressed" : "PRESENT");
  if (no_ac_coupler) {
    // Debug mode reproduces the DC anomaly; report it, don't fail on it.
    return all_detected ? 0 : 1;
  }
  return (all_detected && report.dc_suppressed) ? 0 : 1;
}

int CmdToneburstCompare(const CommonOptions& opt, const std::string& out_name) {
  const FPType fs = static_cast<FPType>(opt.sample_rate);
  StimulusSpec spec;
  spec.kind = StimulusKind::kToneburst;
  spec.freq_hz = 3000;
  spec.burst_s = 0.010;
  spec.level_dbfs = -40;
  spec.duration_s = 0.025;
  ArrayX x = Synthesize(spec, fs);
  ArrayXX audio(1, x.size());
  audio.row(0) = x.transpose();

  CarfacDesignParams p2 = MakeParams(opt);
  p2.ihc.variant = IhcVariant::kTwoCap;
  Carfac m2(p2);
  SegmentOutput o2 = m2.RunSegment(audio, {});
  CarfacDesignParams p1 = MakeParams(opt);
  p1.ihc.variant = IhcVariant::kOneCap;
  Carfac m1(p1);
  SegmentOutput o1 = m1.RunSegment(audio, {});

  int ch = 0;
  (m2.pole_freqs() - static_cast<FPType>(3000)).abs().minCoeff(&ch);

  // Aligned raw traces, one row per sample; plotting offsets are the
  // reader's business.
  ArrayXX table(x.size(), 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    table(i, 0) = x[i];
    table(i, 1) = o2.bm[0](i, ch);
    table(i, 2) = o2.receptor_potential[0](i, ch);
    table(i, 3) = o2.nap[0](i, ch);
    table(i, 4) = o1.nap[0](i, ch);
  }
  ArrayX header(5);
  header << -1, -2, -3, -4, -5;
  WritePlane(opt, out_name, table, header);

  SynchronyReport r3k = MeasureSynchronyRatio(fs, 3000, 0.010, -40);
  SynchronyReport r300 = MeasureSynchronyRatio(fs, 300, 0.050, -40);
  std::printf("channel %d (CF %.1f Hz): columns input, bm, receptor_potential, "
              "nap_two_cap, nap_one_cap\n", ch,
              static_cast<double>(m2.pole_freqs()[ch]));
  std::printf("AC synchrony ratio two_cap/one_cap at 3 kHz: %.3f (ch %d)\n",
              r3k.ratio, r3k.channel);
  std::printf("AC synchrony ratio two_cap/one_cap at 300 Hz: %.3f (ch %d)\n",
              r300.ratio, r300.channel);
  bool ok = r3k.ratio > 0.35 && r3k.ratio < 0.65 && r300.ratio > 0.8;
  return ok ? 0 : 1;
}

int CmdBenchmark(const CommonOptions& opt, const std::vector<double>& lengths,
                 const std::vector<double>& chunks_ms) {
  const FPType fs = static_cast<FPType>(opt.sample_rate);
  std::printf("%-28s %12s %10s\n", "case", "wall[ms]", "RTF");
  bool realtime = true;

  auto run_case = [&](const std::string& name, double seconds, double chunk_ms,
                      bool delay_buffer) {
    CarfacDesignParams params = MakeParams(opt);
    params.car.use_delay_buffer = delay_buffer;
    Carfac model(params);  // design/init excluded from timing
    StimulusSpec spec;
    spec.kind = StimulusKind::kNoise;
    spec.seed = 1;
    spec.level_dbfs = -30;
    spec.duration_s = seconds;
    ArrayX x = Synthesize(spec, fs);
    ArrayXX audio(1, x.size());
    audio.row(0) = x.transpose();
    RunOptions options;
    options.planes = kNoPlanes;
    int chunk = chunk_ms > 0
                    ? std::max(1, static_cast<int>(std::lround(chunk_ms / 1000.0 * fs)))
                    : static_cast<int>(x.size());
    auto t0 = std::chrono::steady_clock::now();
    for (int start = 0; start < x.size(); start += chunk) {
      int len = std::min<int>(chunk, static_cast<int>(x.size()) - start);
      model.RunSegment(audio.middleCols(start, len), options);
    }
    auto t1 = std::chrono::steady_clock::now();
    double wall = std::chrono::duration<double>(t1 - t0).count();
    double rtf = wall / seconds;
    std::printf("%-28s %12.2f %10.4f\n", name.c_str(), wall * 1e3, rtf);
    realtime = realtime && rtf < 1.0;
  };

  for (double s : lengths) {
    char name[64];
    std::snprintf(name, sizeof(name), "noise %g s", s);
    run_case(name, s, 0, opt.delay_buffer);
  }
  for (double c : chunks_ms) {
    char name[64];
    std::snprintf(name, sizeof(name), "noise 1 s (%g ms chunks)", c);
    run_case(name, 1.0, c, opt.delay_buffer);
  }
  run_case("noise 1 s, delay buffer", 1.0, 0, true);
  run_case("noise 1 s, ripple", 1.0, 0, false);
  return realtime ? 0 : 1;
}

int CmdGolden(const std::string& mode,
              std::string dir, double tolerance) {
  if (dir.empty()) {
    const char* env = std::getenv("CARFAC_GOLDEN_DIR");
    if (env) dir = env;
  }
  if (dir.empty()) {
    std::fprintf(stderr, "golden: need --dir or CARFAC_GOLDEN_DIR\n");
    return 2;
  }
  if (mode == "dump") {
    GoldenDump(dir);
    std::printf("golden data written to %s\n", dir.c_str());
    return 0;
  }
  if (tolerance <= 0) tolerance = DefaultGoldenTolerance();
  GoldenReport report = GoldenCompare(dir, tolerance);
  for (const GoldenItemResult& item : report.items) {
    if (item.pass) {
      std::printf("  ok   %-34s max-abs-diff %.3e\n", item.name.c_str(),
                  item.max_abs_diff);
    } else {
      std::printf("  FAIL %-34s max-abs-diff %.3e at row %ld col %ld\n",
                  item.name.c_str(), item.max_abs_diff, item.worst_row,
                  item.worst_col);
    }
  }
  std::printf("golden compare vs %s at %.0e: %s\n", dir.c_str(), tolerance,
              report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}

int CmdCochleagram(const CommonOptions& opt, const std::string& input,
                   const std::string& stimulus, const std::string& out_name,
                   int hop) {
  CarfacDesignParams params = MakeParams(opt);
  ArrayX x;
  if (!input.empty()) {
    WavData wav = ReadWav(input);
    if (wav.sample_rate_hz != static_cast<int>(opt.sample_rate)) {
      throw std::runtime_error("WAV rate != model rate");
    }
    x = wav.samples.row(0).transpose();  // cochleagram of the first channel
  } else {
    x = Synthesize(ParseStimulusSpec(stimulus), params.sample_rate_hz);
  }
  Carfac model(params);
  ApplyOhcHealth(opt.ohc_health, &model);
  ArrayXX audio(1, x.size());
  audio.row(0) = x.transpose();
  RunOptions options;
  options.planes = kNap;
  SegmentOutput out = model.RunSegment(audio, options);

  // Smooth the NAP with a hop-scale one-pole, then decimate; rows are
  // channels with the base (highest CF) at the top.
  const int n_ch = model.num_channels();
  const long n_cols = (out.nap[0].rows() + hop - 1) / hop;
  ArrayXX image(n_ch, n_cols);
  ArrayX acc = ArrayX::Zero(n_ch);
  const FPType eps = 1 - std::exp(static_cast<FPType>(-1.0) / hop);
  long col = 0;
  for (long i = 0; i < out.nap[0].rows(); ++i) {
    acc += eps * (out.nap[0].row(i).transpose() - acc);
    if (i % hop == hop - 1 || i == out.nap[0].rows() - 1) {
      image.col(col++) = acc;
    }
  }
  image = image.max(static_cast<FPType>(0));
  FPType peak = image.maxCoeff();
  if (peak > 0) image /= peak;
  WritePgm(opt.output_dir + "/" + out_name, image);
  std::printf("wrote %s (%d x %ld)\n", (opt.output_dir + "/" + out_name).c_str(),
              n_ch, col);
  return 0;
}

int CmdDesignDump(const CommonOptions& opt) {
  Carfac model(MakeParams(opt));
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
  WriteCsv(opt.output_dir + "/design_car.csv",
           {"pole_freq_hz", "a0", "c0", "r1", "zr", "h", "g_p0", "g_p1", "g_p2",
            "g0"},
           rows);

  rows.clear();
  for (const AgcStageCoeffs& s : model.agc_coeffs().stages) {
    rows.push_back({static_cast<double>(s.decimation), static_cast<double>(s.epsilon),
                    static_cast<double>(s.fir_left), static_cast<double>(s.fir_mid),
                    static_cast<double>(s.fir_right),
                    static_cast<double>(s.n_iterations),
                    static_cast<double>(s.stage_gain),
                    static_cast<double>(s.mix_coeff)});
  }
  WriteCsv(opt.output_dir + "/design_agc.csv",
           {"decimation", "epsilon", "fir_left", "fir_mid", "fir_right",
            "n_iterations", "stage_gain", "mix_coeff"},
           rows);
  std::printf("wrote design_car.csv (%d channels) and design_agc.csv to %s\n",
              model.num_channels(), opt.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CARFAC cochlear model (cascade of asymmetric resonators with "
               "fast-acting compression)"};
  app.require_subcommand(1);

  CommonOptions opt;
  app.add_option("--sample-rate", opt.sample_rate, "model sample rate in Hz");
  app.add_option("--ihc", opt.ihc, "IHC variant: two_cap|one_cap|just_hwr");
  app.add_flag("--open-loop", opt.open_loop, "freeze AGC feedback");
  app.add_flag("--linear", opt.linear, "force the OHC nonlinearity to 1");
  app.add_flag("--delay-buffer", opt.delay_buffer,
               "one sample of delay per stage (channel-parallel update)");
  app.add_option("--ohc-health", opt.ohc_health,
                 "impairment: <const> | @<csv-file> | basal-zero:<n>");
  app.add_option("--output-dir", opt.output_dir, "directory for output files");
  app.add_option("--format", opt.format, "output format: csv|raw64");

  auto* run = app.add_subcommand("run", "run audio through the model");
  std::string input, stimulus = "noise:seed=1,level=-30,dur=1";
  std::vector<std::string> planes = {"nap"};
  double chunk_ms = 0;
  run->add_option("--input", input, "input WAV (16/24-bit PCM or float32)");
  run->add_option("--stimulus", stimulus, "synthetic stimulus spec");
  run->add_option("--planes", planes,
                  "outputs: nap bm bm_raw receptor_potential ohc agc")
      ->delimiter(',');
  run->add_option("--chunk-ms", chunk_ms, "process in chunks of this length");

  auto* dist = app.add_subcommand("analyze-distortion",
                                  "four-tone distortion-product FFT analysis");
  double level = -30, duration = 1.0;
  bool no_ac = false;
  dist->add_option("--level", level, "per-tone level in dBFS");
  dist->add_option("--duration", duration, "stimulus seconds");
  dist->add_flag("--no-ac-coupler", no_ac,
                 "debug: corner ~0 Hz, exposing the DC distortion line");

  auto* burst = app.add_subcommand("toneburst-compare",
                                   "two_cap vs one_cap tone-burst traces");
  std::string burst_out = "toneburst";
  burst->add_option("--output-name", burst_out, "output table base name");

  auto* bench = app.add_subcommand("benchmark", "timing on noise segments");
  std::vector<double> lengths = {0.01, 0.1, 1.0, 10.0};
  std::vector<double> chunks = {10, 100};
  bench->add_option("--lengths", lengths, "segment seconds")->delimiter(',');
  bench->add_option("--chunks-ms", chunks, "chunked 1 s cases")->delimiter(',');

  auto* golden = app.add_subcommand("golden", "golden-data dump/compare");
  std::string golden_mode = "compare", golden_dir;
  double golden_tol = 0;
  golden->add_option("mode", golden_mode, "dump|compare");
  golden->add_option("--dir", golden_dir, "golden directory (or CARFAC_GOLDEN_DIR)");
  golden->add_option("--tolerance", golden_tol,
                     "max-abs-diff bound (default by build precision)");

  auto* coch = app.add_subcommand("cochleagram", "grayscale PGM of the NAP");
  std::string coch_input, coch_stim = "chirp:freq=8000,end=100,level=-30,dur=1";
  std::string coch_out = "cochleagram.pgm";
  int hop = 32;
  coch->add_option("--input", coch_input, "input WAV");
  coch->add_option("--stimulus", coch_stim, "synthetic stimulus spec");
  coch->add_option("--output-name", coch_out, "output PGM name");
  coch->add_option("--hop", hop, "samples per image column");

  app.add_subcommand("design-dump", "per-channel coefficient tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return CmdRun(opt, input, stimulus, planes, chunk_ms);
    if (dist->parsed()) return CmdAnalyzeDistortion(opt, level, duration, no_ac);
    if (burst->parsed()) return CmdToneburstCompare(opt, burst_out);
    if (bench->parsed()) return CmdBenchmark(opt, lengths, chunks);
    if (golden->parsed()) return CmdGolden(golden_mode, golden_dir, golden_tol);
    if (coch->parsed()) return CmdCochleagram(opt, coch_input, coch_stim, coch_out, hop);
    if (app.get_subcommand("design-dump")->parsed()) return CmdDesignDump(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
