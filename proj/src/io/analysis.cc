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

#include "io/analysis.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "io/stimulus.h"

namespace carfac {

double FourierAmplitude(const FPType* x, int n, double freq, double fs) {
  std::complex<double> acc(0, 0);
  const double w = -2.0 * M_PI * freq / fs;
  for (int i = 0; i < n; ++i) {
    acc += static_cast<double>(x[i]) *
           std::complex<double>(std::cos(w * i), std::sin(w * i));
  }
  return 2.0 * std::abs(acc) / n;
}

AcDc AcDcComponents(const FPType* x, int n, double freq, double fs) {
  double mean = 0;
  for (int i = 0; i < n; ++i) mean += static_cast<double>(x[i]);
  mean /= n;
  std::vector<FPType> centered(n);
  for (int i = 0; i < n; ++i) centered[i] = x[i] - static_cast<FPType>(mean);
  return {FourierAmplitude(centered.data(), n, freq, fs), mean};
}

Eigen::ArrayXXd SpectrumMagnitudes(const ArrayXX& plane) {
  const int n = static_cast<int>(plane.rows());
  const int n_ch = static_cast<int>(plane.cols());
  const int n_bins = n / 2 + 1;
  Eigen::ArrayXXd mags(n_bins, n_ch);
  std::vector<double> in(n);
  std::vector<fftw_complex> out(n_bins);
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fftw plan failed");
  for (int ch = 0; ch < n_ch; ++ch) {
    for (int i = 0; i < n; ++i) in[i] = static_cast<double>(plane(i, ch));
    fftw_execute(plan);
    for (int b = 0; b < n_bins; ++b) {
      mags(b, ch) = std::hypot(out[b][0], out[b][1]) / n;
    }
  }
  fftw_destroy_plan(plan);
  return mags;
}

DistortionReport RunDistortionAnalysis(FPType sample_rate_hz, double level_dbfs,
                                       double duration_s,
                                       const std::vector<double>& primaries_hz,
                                       bool disable_ac_coupler) {
  const FPType fs = sample_rate_hz;
  CarfacDesignParams params = DefaultDesign(fs);
  if (disable_ac_coupler) {
    // A vanishing corner leaves the coupler state effectively frozen at
    // zero, exposing the raw output and its DC distortion line.
    params.car.ac_corner_hz = static_cast<FPType>(1e-9);
  }
  Carfac model(params);

  StimulusSpec spec;
  spec.kind = StimulusKind::kMultitone;
  spec.freqs_hz = primaries_hz;
  spec.level_dbfs = level_dbfs;
  spec.duration_s = duration_s;
  ArrayX x = Synthesize(spec, fs);

  RunOptions options;
  options.planes = kBm;
  ArrayXX audio(1, x.size());
  audio.row(0) = x.transpose();
  SegmentOutput out = model.RunSegment(audio, options);

  // Analysis window: last 0.4 s when available, always a multiple of
  // 0.2 s * fs so 200 Hz and its multiples land on exact bins at the
  // default rate.
  int window = static_cast<int>(std::lround(0.4 * fs));
  window = std::min<int>(window, static_cast<int>(out.bm[0].rows()));
  ArrayXX tail = out.bm[0].bottomRows(window);

  DistortionReport report;
  report.spectrum = SpectrumMagnitudes(tail);
  report.bin_hz = static_cast<double>(fs) / window;

  const int n_ch = static_cast<int>(report.spectrum.cols());
  report.dc_magnitude = report.spectrum.row(0).maxCoeff();

  const std::vector<double> line_freqs = {200,  400,  600, 1000,
                                          1200, 1400, 2400};
  report.strongest_line = 0;
  for (double f : line_freqs) {
    int bin = static_cast<int>(std::lround(f / report.bin_hz));
    DistortionLine line;
    line.freq_hz = f;
    int best = 0;
    double mag = 0;
    for (int ch = 0; ch < n_ch; ++ch) {
      if (report.spectrum(bin, ch) > mag) {
        mag = report.spectrum(bin, ch);
        best = ch;
      }
    }
    line.best_channel = best;
    line.magnitude = mag;
    // Spectral floor: median of the +-20 bins around the line (excluding
    // the line's immediate neighborhood) in the line's best channel.
    std::vector<double> neighborhood;
    for (int d = -20; d <= 20; ++d) {
      if (std::abs(d) <= 2) continue;
      int b = bin + d;
      if (b > 0 && b < report.spectrum.rows()) {
        neighborhood.push_back(report.spectrum(b, best));
      }
    }
    std::nth_element(neighborhood.begin(),
                     neighborhood.begin() + neighborhood.size() / 2,
                     neighborhood.end());
    line.floor_magnitude = neighborhood[neighborhood.size() / 2];
    line.detected = line.magnitude >= 10.0 * line.floor_magnitude;
    report.strongest_line = std::max(report.strongest_line, line.magnitude);
    report.lines.push_back(line);
  }

  report.dc_re_strongest_db =
      20.0 * std::log10(report.dc_magnitude / report.strongest_line);
  const double threshold = report.strongest_line * std::pow(10.0, -60.0 / 20.0);
  report.dc_suppressed = true;
  for (int ch = 0; ch < n_ch; ++ch) {
    if (report.spectrum(0, ch) >= threshold) {
      report.dc_suppressed = false;
      break;
    }
  }
  return report;
}

SynchronyReport MeasureSynchronyRatio(FPType sample_rate_hz,
                                      double probe_freq_hz, double burst_s,
                                      double level_dbfs) {
  const FPType fs = sample_rate_hz;
  SynchronyReport report;

  StimulusSpec spec;
  spec.kind = StimulusKind::kToneburst;
  spec.freq_hz = probe_freq_hz;
  spec.burst_s = burst_s;
  spec.level_dbfs = level_dbfs;
  spec.duration_s = burst_s * 2;
  ArrayX x = Synthesize(spec, fs);
  ArrayXX audio(1, x.size());
  audio.row(0) = x.transpose();

  RunOptions options;
  options.planes = kNap;
  const int w0 = static_cast<int>(std::lround(0.5 * burst_s * fs));
  const int w1 = static_cast<int>(std::lround(burst_s * fs));

  for (IhcVariant variant : {IhcVariant::kTwoCap, IhcVariant::kOneCap}) {
    CarfacDesignParams params = DefaultDesign(fs);
    params.ihc.variant = variant;
    Carfac model(params);
    if (variant == IhcVariant::kTwoCap) {
      int best = 0;
      (model.pole_freqs() - static_cast<FPType>(probe_freq_hz))
          .abs()
          .minCoeff(&best);
      report.channel = best;
      report.cf_hz = static_cast<double>(model.pole_freqs()[best]);
    }
    SegmentOutput out = model.RunSegment(audio, options);
    std::vector<FPType> trace(w1 - w0);
    for (int i = w0; i < w1; ++i) trace[i - w0] = out.nap[0](i, report.channel);
    AcDc acdc = AcDcComponents(trace.data(), static_cast<int>(trace.size()),
                               probe_freq_hz, fs);
    if (variant == IhcVariant::kTwoCap) {
      report.ac_two_cap = acdc.ac;
    } else {
      report.ac_one_cap = acdc.ac;
    }
  }
  report.ratio = report.ac_two_cap / report.ac_one_cap;
  return report;
}

double MeasureAcCornerHz(FPType sample_rate_hz, FPType ac_coeff) {
  const double fs = static_cast<double>(sample_rate_hz);
  auto gain_at = [&](double freq) {
    const int n = static_cast<int>(fs);  // 1 s, measure over the second half
    double s = 0;
    std::vector<FPType> y(n), x(n);
    for (int i = 0; i < n; ++i) {
      double xi = std::sin(2 * M_PI * freq * i / fs);
      double d = xi - s;
      s += static_cast<double>(ac_coeff) * d;
      x[i] = static_cast<FPType>(xi);
      y[i] = static_cast<FPType>(d);
    }
    double num = FourierAmplitude(y.data() + n / 2, n - n / 2, freq, fs);
    double den = FourierAmplitude(x.data() + n / 2, n - n / 2, freq, fs);
    return num / den;
  };
  double lo = 1.0, hi = 200.0;
  const double target = 1.0 / std::sqrt(2.0);
  for (int iter = 0; iter < 40; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (gain_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace carfac
