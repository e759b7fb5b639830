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
// The measurements behind the analysis subcommands: distortion-product
// spectra, IHC synchrony comparison, and coupler corner estimation.

#ifndef CARFAC_IO_ANALYSIS_H_
#define CARFAC_IO_ANALYSIS_H_

#include <vector>

#include "carfac/carfac.h"
#include "carfac/common.h"

namespace carfac {

// Amplitude of the complex Fourier component at freq over the window
// (2|X(f)|/N, so a full-scale sine measures ~1).
double FourierAmplitude(const FPType* x, int n, double freq, double fs);

struct AcDc {
  double ac;  // amplitude at the probe frequency, mean removed
  double dc;  // mean
};
AcDc AcDcComponents(const FPType* x, int n, double freq, double fs);

// Magnitude spectrum of each channel column over all rows of `plane`,
// scaled by 1/N: (n_bins x n_ch) with n_bins = N/2 + 1.
Eigen::ArrayXXd SpectrumMagnitudes(const ArrayXX& plane);

struct DistortionLine {
  double freq_hz;
  int best_channel;
  double magnitude;       // at the exact bin, max over channels
  double floor_magnitude; // median of nearby bins in that channel
  bool detected;          // >= 20 dB above the floor
};

struct DistortionReport {
  Eigen::ArrayXXd spectrum;  // (n_bins x n_ch)
  double bin_hz = 0;
  std::vector<DistortionLine> lines;
  double dc_magnitude = 0;        // max over channels at bin 0
  double strongest_line = 0;      // max line magnitude over all channels
  double dc_re_strongest_db = 0;  // 20 log10(dc / strongest)
  bool dc_suppressed = false;     // dc < strongest - 60 dB, every channel
};

// Runs the four-tone stimulus closed loop and analyzes the steady-state BM
// spectra at exact-bin resolution.  disable_ac_coupler (debug) moves the
// coupler corner to ~0 Hz so the quadratic-distortion DC line reappears.
DistortionReport RunDistortionAnalysis(
    FPType sample_rate_hz, double level_dbfs, double duration_s,
    const std::vector<double>& primaries_hz = {1600, 1800, 2000, 2200},
    bool disable_ac_coupler = false);

struct SynchronyReport {
  int channel = 0;          // nearest-CF channel for the probe
  double cf_hz = 0;
  double ac_two_cap = 0;    // NAP component at the probe frequency
  double ac_one_cap = 0;
  double ratio = 0;         // two_cap / one_cap
};

// Tone-burst synchrony comparison between IHC variants at the channel
// whose CF is nearest probe_freq_hz.  The AC component is measured over
// the second half of the burst.
SynchronyReport MeasureSynchronyRatio(FPType sample_rate_hz,
                                      double probe_freq_hz, double burst_s,
                                      double level_dbfs);

// Half-power frequency of the BM-output highpass, found by bisection on
// steady-state sine gain through the coupler filter alone.
double MeasureAcCornerHz(FPType sample_rate_hz, FPType ac_coeff);

}  // namespace carfac

#endif  // CARFAC_IO_ANALYSIS_H_
