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

#include "carfac/design.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace carfac {

FPType ErbHz(FPType cf_hz, FPType erb_break_freq_hz, FPType erb_q) {
  return (erb_break_freq_hz + cf_hz) / erb_q;
}

ChannelMap DesignChannels(const CarDesignParams& params, FPType sample_rate_hz) {
  // Count first, then fill, stepping down by erb_per_step ERBs each time.
  FPType pole_hz = params.first_pole_fraction * sample_rate_hz / 2;
  int n_ch = 0;
  while (pole_hz >= params.min_pole_hz) {
    ++n_ch;
    pole_hz -= params.erb_per_step *
               ErbHz(pole_hz, params.erb_break_freq_hz, params.erb_q);
  }
  if (n_ch == 0) {
    throw std::invalid_argument("channel design yields zero channels");
  }
  ChannelMap map;
  map.n_ch = n_ch;
  map.pole_freqs.resize(n_ch);
  pole_hz = params.first_pole_fraction * sample_rate_hz / 2;
  for (int ch = 0; ch < n_ch; ++ch) {
    map.pole_freqs[ch] = pole_hz;
    pole_hz -= params.erb_per_step *
               ErbHz(pole_hz, params.erb_break_freq_hz, params.erb_q);
  }
  return map;
}

FPType StageDcGain(FPType r1, FPType zr, FPType a0, FPType c0, FPType h,
                   FPType undamping) {
  FPType r = r1 + zr * undamping;
  return (1 - 2 * r * a0 + r * r) / (1 - 2 * r * a0 + h * r * c0 + r * r);
}

GainParabola FitStageGainParabola(FPType a0, FPType c0, FPType h, FPType r1,
                                  FPType zr) {
  FPType g_0 = StageDcGain(r1, zr, a0, c0, h, 0);
  FPType g_half = StageDcGain(r1, zr, a0, c0, h, static_cast<FPType>(0.5));
  FPType g_1 = StageDcGain(r1, zr, a0, c0, h, 1);
  GainParabola p;
  p.p2 = 2 * (g_0 + g_1 - 2 * g_half);
  p.p1 = 4 * g_half - 3 * g_0 - g_1;
  p.p0 = g_0;
  return p;
}

CarCoeffs DesignCarCoeffs(const CarDesignParams& params, FPType sample_rate_hz,
                          const ChannelMap& channels) {
  const int n_ch = channels.n_ch;
  CarCoeffs coeffs;
  coeffs.n_ch = n_ch;
  coeffs.velocity_scale = params.velocity_scale;
  coeffs.v_offset = params.v_offset;
  coeffs.ac_coeff = 2 * kPi * params.ac_corner_hz / sample_rate_hz;
  coeffs.use_delay_buffer = params.use_delay_buffer;
  coeffs.pole_freqs = channels.pole_freqs;

  coeffs.a0.resize(n_ch);
  coeffs.c0.resize(n_ch);
  coeffs.r1.resize(n_ch);
  coeffs.zr.resize(n_ch);
  coeffs.h.resize(n_ch);
  coeffs.g_p0.resize(n_ch);
  coeffs.g_p1.resize(n_ch);
  coeffs.g_p2.resize(n_ch);
  coeffs.g0.resize(n_ch);

  // The zero/pole frequency ratio enters through h = f*c0.
  const FPType f = params.zero_ratio * params.zero_ratio - 1;
  const FPType ff = params.high_f_damping_compression;

  for (int ch = 0; ch < n_ch; ++ch) {
    FPType theta = channels.pole_freqs[ch] * (2 * kPi / sample_rate_hz);
    FPType c0 = std::sin(theta);
    FPType a0 = std::cos(theta);
    // Compress the damping's theta-dependence toward the top so the
    // highest channels keep somewhat higher Q.
    FPType x = theta / kPi;
    FPType zr = kPi * (x - ff * x * x * x);
    FPType r1 = 1 - zr * params.max_zeta;
    // Raise the minimum damping where channels are spaced out more.
    FPType min_zeta =
        params.min_zeta +
        static_cast<FPType>(0.25) *
            (ErbHz(channels.pole_freqs[ch], params.erb_break_freq_hz,
                   params.erb_q) /
                 channels.pole_freqs[ch] -
             params.min_zeta);
    zr = zr * (params.max_zeta - min_zeta);
    FPType h = c0 * f;

    if (!(zr > 0) || !(r1 > 0) || !(r1 + zr < 1)) {
      throw std::invalid_argument(
          "unstable CAR design at channel " + std::to_string(ch) +
          ": pole radius leaves (0, 1)");
    }

    GainParabola p = FitStageGainParabola(a0, c0, h, r1, zr);
    coeffs.a0[ch] = a0;
    coeffs.c0[ch] = c0;
    coeffs.r1[ch] = r1;
    coeffs.zr[ch] = zr;
    coeffs.h[ch] = h;
    coeffs.g_p0[ch] = p.p0;
    coeffs.g_p1[ch] = p.p1;
    coeffs.g_p2[ch] = p.p2;
    coeffs.g0[ch] = p.p0 + p.p1 + p.p2;
  }
  return coeffs;
}

namespace {

FPType OnePoleCoeff(FPType tau, FPType fs) { return 1 - std::exp(-1 / (tau * fs)); }

}  // namespace

IhcCoeffs DesignIhcCoeffs(const IhcDesignParams& params, FPType sample_rate_hz) {
  if (!(sample_rate_hz > 0)) {
    throw std::invalid_argument("sample rate must be positive");
  }
  IhcCoeffs coeffs;
  coeffs.variant = params.variant;
  if (params.variant == IhcVariant::kJustHwr) {
    return coeffs;  // stateless rectifier; no rates
  }

  const FPType fs = sample_rate_hz;
  const FPType g_max = IhcDetect(static_cast<FPType>(10));  // near saturation
  const FPType g_rest = IhcDetect(static_cast<FPType>(0));
  const FPType r_min = 1 / g_max;

  if (params.variant == IhcVariant::kOneCap) {
    FPType cap = params.tau_out * g_max;
    FPType r_recharge = params.tau_in / cap;
    // Steady-state saturation current doubles r_min for the rectifier's
    // half duty cycle; with the rest current it sets the output scale.
    FPType saturation_current = 1 / (2 * r_min + r_recharge);
    coeffs.cap_depletion_rate = r_min / (params.tau_out * fs);
    coeffs.cap_recovery_rate = OnePoleCoeff(params.tau_in, fs);
    coeffs.rest_cap = coeffs.cap_recovery_rate /
                      (coeffs.cap_recovery_rate + coeffs.cap_depletion_rate * g_rest);
    FPType rest_current = g_rest * coeffs.rest_cap;
    coeffs.output_lpf_coeff = OnePoleCoeff(params.tau_lpf, fs);
    coeffs.output_gain = 1 / (saturation_current - rest_current);
    coeffs.rest_output = rest_current * coeffs.output_gain;
    return coeffs;
  }

  // two_cap: receptor capacitor, then transmitter reservoir.
  FPType cap1 = params.tau1_out * g_max;
  FPType r1_recharge = params.tau1_in / cap1;
  FPType saturation_current1 = 1 / (2 * r_min + r1_recharge);
  (void)saturation_current1;  // the output scale comes from stage 2
  coeffs.cap1_depletion_rate = r_min / (params.tau1_out * fs);
  coeffs.cap1_recovery_rate = OnePoleCoeff(params.tau1_in, fs);
  coeffs.rest_cap1 =
      coeffs.cap1_recovery_rate /
      (coeffs.cap1_recovery_rate + coeffs.cap1_depletion_rate * g_rest);
  coeffs.rest_receptor_potential = 1 - coeffs.rest_cap1;

  // The receptor potential drives the reservoir the way the detect
  // conductance drives cap1; its maximum sets the second stage's scale.
  FPType max_vrecep = r1_recharge / (r_min + r1_recharge);
  FPType g2_max = max_vrecep;
  FPType r2_min = 1 / g2_max;
  FPType cap2 = params.tau2_out * g2_max;
  FPType r2_recharge = params.tau2_in / cap2;
  FPType saturation_current2 = 1 / (2 * r2_min + r2_recharge);
  coeffs.cap2_depletion_rate = r2_min / (params.tau2_out * fs);
  coeffs.cap2_recovery_rate = OnePoleCoeff(params.tau2_in, fs);
  coeffs.rest_cap2 = coeffs.cap2_recovery_rate /
                     (coeffs.cap2_recovery_rate +
                      coeffs.cap2_depletion_rate * coeffs.rest_receptor_potential);
  FPType rest_current2 = coeffs.rest_receptor_potential * coeffs.rest_cap2;
  coeffs.output_lpf_coeff = OnePoleCoeff(params.tau_lpf, fs);
  coeffs.output_gain = 1 / (saturation_current2 - rest_current2);
  coeffs.rest_output = rest_current2 * coeffs.output_gain;
  return coeffs;
}

namespace {

struct FirDesign {
  FPType left, mid, right;
  bool ok;
};

// Moment matching: mean = delay/n_iter, variance = spread_sq/n_iter per
// pass.  Feasible when all taps are nonnegative and the mid tap keeps at
// least a quarter of the mass.
FirDesign DesignFir3Tap(FPType spread_sq, FPType delay, int n_iter) {
  FPType mn = delay / n_iter;
  FPType var = spread_sq / n_iter;
  FPType a = (var + mn * mn - mn) / 2;
  FPType b = (var + mn * mn + mn) / 2;
  FPType mid = 1 - a - b;
  FirDesign fir{a, mid, b,
                a >= 0 && b >= 0 && mid >= static_cast<FPType>(0.25)};
  return fir;
}

constexpr int kMaxFirIterations = 16;

bool TryDesignAgc(const AgcDesignParams& params, FPType fs, int decim0,
                  std::vector<AgcStageCoeffs>* stages, int* bad_stage) {
  stages->clear();
  long net_decim = 1;
  for (int stage = 0; stage < params.n_stages; ++stage) {
    int decim = (stage == 0) ? decim0 : params.decimation[stage];
    net_decim *= decim;
    FPType tau = params.time_constants[stage];
    FPType ntimes = tau * (fs / net_decim);  // smoothings per time constant
    FPType delay = (params.agc2_scales[stage] - params.agc1_scales[stage]) / ntimes;
    FPType spread_sq = (params.agc1_scales[stage] * params.agc1_scales[stage] +
                        params.agc2_scales[stage] * params.agc2_scales[stage]) /
                       ntimes;

    FirDesign fir{0, 1, 0, false};
    int n_iter = 1;
    for (; n_iter <= kMaxFirIterations; ++n_iter) {
      fir = DesignFir3Tap(spread_sq, delay, n_iter);
      if (fir.ok) break;
    }
    if (!fir.ok) {
      *bad_stage = stage;
      return false;
    }

    AgcStageCoeffs sc;
    sc.decimation = decim;
    sc.epsilon = 1 - std::exp(-static_cast<FPType>(net_decim) / (tau * fs));
    sc.fir_left = fir.left;
    sc.fir_mid = fir.mid;
    sc.fir_right = fir.right;
    sc.n_iterations = n_iter;
    sc.stage_gain = params.agc_stage_gain;
    sc.mix_coeff = (stage == 0) ? 0 : params.agc_mix_coeff / ntimes;
    stages->push_back(sc);
  }
  return true;
}

}  // namespace

AgcCoeffs DesignAgcCoeffs(const AgcDesignParams& params, FPType sample_rate_hz,
                          int n_ch) {
  (void)n_ch;  // the kernel is channel-count independent
  AgcCoeffs coeffs;
  coeffs.n_stages = params.n_stages;
  int decim0 = params.decimation.empty() ? 1 : params.decimation[0];
  int bad_stage = -1;
  while (true) {
    if (TryDesignAgc(params, sample_rate_hz, decim0, &coeffs.stages, &bad_stage)) {
      break;
    }
    if (decim0 <= 1) {
      throw std::invalid_argument(
          "AGC stage " + std::to_string(bad_stage) +
          ": spatial smoothing infeasible for the 3-tap FIR even at "
          "decimation 1");
    }
    decim0 = decim0 / 2;
    if (decim0 < 1) decim0 = 1;
  }
  coeffs.decimation0 = decim0;
  FPType total_dc_gain = 0;
  for (int k = 0; k < params.n_stages; ++k) {
    total_dc_gain += std::pow(params.agc_stage_gain, static_cast<FPType>(k));
  }
  coeffs.detect_scale = 1 / total_dc_gain;
  return coeffs;
}

}  // namespace carfac
