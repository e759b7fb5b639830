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
// End-to-end acceptance suite.  Each numbered criterion prints one
// PASS/FAIL line; the process exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "carfac/carfac.h"
#include "io/analysis.h"
#include "io/golden.h"
#include "io/stimulus.h"
#include "test_util.h"

namespace carfac {
namespace {

using testing::MonoAudio;
using testing::Noise;

constexpr FPType kFs = 22050;
int g_failures = 0;

void Report(int criterion, const std::string& what, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

char buf[256];

// 1. Default design at 22050 Hz yields exactly 71 channels.
void Criterion1() {
  Carfac model(DefaultDesign(kFs));
  std::snprintf(buf, sizeof(buf), "n_ch=%d", model.num_channels());
  Report(1, "default design has 71 channels", model.num_channels() == 71, buf);
}

// 2. Four-tone run: no DC line, quadratic and cubic lines present.
void Criterion2() {
  DistortionReport report = RunDistortionAnalysis(kFs, -30.0, 1.0);
  bool all_detected = true;
  for (const DistortionLine& line : report.lines) {
    all_detected = all_detected && line.detected;
  }
  std::snprintf(buf, sizeof(buf),
                "DC %.1f dB re strongest line; 200/400/600 & "
                "1000/1200/1400/2400 Hz %sdetected",
                report.dc_re_strongest_db, all_detected ? "" : "NOT ");
  Report(2, "DC suppressed below -60 dB, distortion lines detected",
         report.dc_suppressed && all_detected, buf);
}

// 3. Measured AC-coupler half-power corner is 20 +- 1 Hz.
void Criterion3() {
  Carfac model(DefaultDesign(kFs));
  double corner = MeasureAcCornerHz(kFs, model.car_coeffs().ac_coeff);
  std::snprintf(buf, sizeof(buf), "f_half=%.3f Hz", corner);
  Report(3, "AC coupler corner at 20 +- 1 Hz", std::abs(corner - 20) <= 1, buf);
}

// 4. Stage-gain parabola within 0.01 dB of the exact DC gain everywhere.
void Criterion4() {
  Carfac model(DefaultDesign(kFs));
  const CarCoeffs& c = model.car_coeffs();
  double worst = 0;
  for (int ch = 0; ch < c.n_ch; ++ch) {
    for (int i = 0; i <= 1000; ++i) {
      double u = i / 1000.0;
      double exact = StageDcGain(c.r1[ch], c.zr[ch], c.a0[ch], c.c0[ch],
                                 c.h[ch], static_cast<FPType>(u));
      double fit = c.g_p0[ch] + c.g_p1[ch] * u + c.g_p2[ch] * u * u;
      worst = std::max(worst, std::abs(20 * std::log10(fit / exact)));
    }
  }
  std::snprintf(buf, sizeof(buf), "max error %.5f dB over 71 x 1001 grid", worst);
  Report(4, "stage-gain parabola within 0.01 dB", worst <= 0.01, buf);
}

// 5. Delay-buffer equivalence: exact stagger; negligible closed-loop change.
void Criterion5() {
  RunOptions lin;
  lin.open_loop = true;
  lin.linear = true;
  lin.planes = kBm;
  const int n = 256;
  ArrayX impulse = ArrayX::Zero(n);
  impulse[0] = 1;

  Carfac ripple(DefaultDesign(kFs));
  CarfacDesignParams delayed_params = DefaultDesign(kFs);
  delayed_params.car.use_delay_buffer = true;
  Carfac delayed(delayed_params);
  ArrayXX r = ripple.RunSegment(MonoAudio(impulse), lin).bm[0];
  ArrayXX d = delayed.RunSegment(MonoAudio(impulse), lin).bm[0];
  bool exact = true;
  for (int ch = 0; ch < ripple.num_channels() && exact; ++ch) {
    for (int t = 0; t + ch < n; ++t) {
      if (r(t, ch) != d(t + ch, ch)) {
        exact = false;
        break;
      }
    }
  }

  // Closed loop on noise: compare 5 ms-smoothed NAP, stagger-aligned.
  ArrayX noise = Noise(123, -30, static_cast<int>(0.3 * kFs));
  ripple.Reset();
  delayed.Reset();
  RunOptions closed;
  closed.planes = kNap;
  ArrayXX nr = ripple.RunSegment(MonoAudio(noise), closed).nap[0];
  ArrayXX nd = delayed.RunSegment(MonoAudio(noise), closed).nap[0];
  auto smooth = [](const ArrayXX& plane) {
    ArrayXX out(plane.rows(), plane.cols());
    ArrayX acc = ArrayX::Zero(plane.cols());
    const FPType eps = 1 - std::exp(-1 / (static_cast<FPType>(0.005) * kFs));
    for (Eigen::Index i = 0; i < plane.rows(); ++i) {
      acc += eps * (plane.row(i).transpose() - acc);
      out.row(i) = acc.transpose();
    }
    return out;
  };
  ArrayXX sr = smooth(nr);
  ArrayXX sd = smooth(nd);
  const int skip = static_cast<int>(0.1 * kFs);
  const int n_ch = ripple.num_channels();
  double num = 0, den = 0;
  for (int ch = 0; ch < n_ch; ++ch) {
    const long len = sr.rows() - skip - n_ch;
    for (long i = 0; i < len; ++i) {
      double a = sr(skip + i, ch);
      double b = sd(skip + i + ch, ch);
      num += (a - b) * (a - b);
      den += a * a;
    }
  }
  double rel = std::sqrt(num / den);
  std::snprintf(buf, sizeof(buf), "stagger %s; smoothed rel diff %.4f",
                exact ? "bit-exact" : "MISMATCH", rel);
  Report(5, "delay-buffer mode equivalent to ripple", exact && rel < 0.01, buf);
}

// 6. Open-loop entry freezes the coefficient ramps mid-adaptation.
void Criterion6() {
  Carfac model(DefaultDesign(kFs));
  model.RunSegment(MonoAudio(Noise(3, -25, 2000)), {});
  CarState& car = model.ear_state(0).car;
  bool ramping = car.dzb.abs().maxCoeff() > 0;
  ArrayX zb0 = car.zb;
  ArrayX g0 = car.g;
  RunOptions open;
  open.open_loop = true;
  open.planes = kNap;
  model.RunSegment(MonoAudio(Noise(4, -25, 1000)), open);
  bool frozen = (car.zb == zb0).all() && (car.g == g0).all() &&
                car.dzb.abs().maxCoeff() == 0 && car.dg.abs().maxCoeff() == 0;
  std::snprintf(buf, sizeof(buf), "deltas nonzero before: %s; max |dzb|=%g",
                ramping ? "yes" : "no", car.dzb.abs().maxCoeff());
  Report(6, "open-loop freeze stops mid-ramp interpolation", ramping && frozen,
         buf);
}

// 7. Synchrony drop: two_cap/one_cap AC ratio 0.5 +- 0.15 at 3 kHz, > 0.8 at 300.
void Criterion7() {
  SynchronyReport r3k = MeasureSynchronyRatio(kFs, 3000, 0.010, -40);
  SynchronyReport r300 = MeasureSynchronyRatio(kFs, 300, 0.050, -40);
  std::snprintf(buf, sizeof(buf), "3 kHz ratio %.3f at ch %d; 300 Hz ratio %.3f",
                r3k.ratio, r3k.channel, r300.ratio);
  Report(7, "two-cap synchrony reduction",
         r3k.ratio >= 0.35 && r3k.ratio <= 0.65 && r300.ratio > 0.8, buf);
}

// 8. Basal-half impairment: high-CF sensitivity drops >= 30 dB, apical < 3 dB.
void Criterion8() {
  Carfac probe_model(DefaultDesign(kFs));
  const ArrayX pf = probe_model.pole_freqs();
  const int n_ch = probe_model.num_channels();
  ArrayX impaired = ArrayX::Ones(n_ch);
  for (int ch = 0; ch < n_ch / 2; ++ch) impaired[ch] = 0;

  auto steady_rms_at = [&](double freq, int ch, bool impair) {
    Carfac model(DefaultDesign(kFs));
    if (impair) model.set_ohc_health(impaired);
    StimulusSpec spec;
    spec.kind = StimulusKind::kTone;
    spec.freq_hz = freq;
    spec.level_dbfs = -50;
    spec.duration_s = 0.3;
    spec.ramp_s = 0.005;
    ArrayX x = Synthesize(spec, kFs);
    RunOptions options;
    options.planes = kBm;
    ArrayXX bm = model.RunSegment(MonoAudio(x), options).bm[0];
    return std::sqrt(bm.col(ch).tail(static_cast<int>(0.1 * kFs)).square().mean());
  };

  const int ch_hi = 12, ch_lo = 60;
  double d_hi = 20 * std::log10(steady_rms_at(pf[ch_hi], ch_hi, true) /
                                steady_rms_at(pf[ch_hi], ch_hi, false));
  double d_lo = 20 * std::log10(steady_rms_at(pf[ch_lo], ch_lo, true) /
                                steady_rms_at(pf[ch_lo], ch_lo, false));
  std::snprintf(buf, sizeof(buf),
                "%.0f Hz channel: %.1f dB; %.0f Hz channel: %.2f dB",
                static_cast<double>(pf[ch_hi]), d_hi,
                static_cast<double>(pf[ch_lo]), d_lo);
  Report(8, "basal-zero health: >= 30 dB high-CF loss, < 3 dB apically",
         d_hi <= -30 && std::abs(d_lo) < 3, buf);
}

// 9. Golden equivalence at 1e-6, real-time factor < 1, chunking identity.
void Criterion9() {
  GoldenReport report = GoldenCompare(testing::GoldenDir(), 1e-6);
  double worst = 0;
  for (const GoldenItemResult& item : report.items) {
    worst = std::max(worst, item.max_abs_diff);
  }

  // RTF on 1 s of monaural noise, planes disabled (design excluded too).
  Carfac model(DefaultDesign(kFs));
  ArrayX noise = Noise(1, -30, static_cast<int>(kFs));
  ArrayXX audio = MonoAudio(noise);
  RunOptions options;
  options.planes = kNoPlanes;
  auto t0 = std::chrono::steady_clock::now();
  model.RunSegment(audio, options);
  auto t1 = std::chrono::steady_clock::now();
  double rtf = std::chrono::duration<double>(t1 - t0).count() / 1.0;

  // Chunked vs unchunked outputs are identical.
  Carfac whole(DefaultDesign(kFs));
  RunOptions planes;
  planes.planes = kNap;
  ArrayXX ref = whole.RunSegment(audio, planes).nap[0];
  Carfac chunked(DefaultDesign(kFs));
  const int chunk = static_cast<int>(0.01 * kFs);
  ArrayXX got(ref.rows(), ref.cols());
  for (int start = 0; start < audio.cols(); start += chunk) {
    int len = std::min<int>(chunk, static_cast<int>(audio.cols()) - start);
    got.middleRows(start, len) =
        chunked.RunSegment(audio.middleCols(start, len), planes).nap[0];
  }
  bool identical = (got == ref).all();

  std::snprintf(buf, sizeof(buf),
                "golden max diff %.2e; RTF %.4f; chunked %s (float32 mode "
                "covered by the golden_f32 ctest)",
                worst, rtf, identical ? "identical" : "DIFFERS");
  Report(9, "golden dumps match at 1e-6, RTF < 1, chunking exact",
         report.pass && rtf < 1.0 && identical, buf);
}

// 10. Quiescence, partition invariance, fuzzed capacitor bounds.
void Criterion10() {
  Carfac model(DefaultDesign(kFs));
  RunOptions options;
  options.planes = kNap;
  ArrayXX nap =
      model.RunSegment(MonoAudio(ArrayX::Zero(static_cast<int>(0.06 * kFs))),
                       options).nap[0];
  double tail = nap.bottomRows(nap.rows() - static_cast<int>(0.05 * kFs))
                    .abs()
                    .maxCoeff();
  bool quiescent = tail < 1e-9;

  ArrayX x = Noise(77, -30, 3000);
  Carfac whole(DefaultDesign(kFs));
  ArrayXX ref = whole.RunSegment(MonoAudio(x), options).nap[0];
  Carfac split(DefaultDesign(kFs));
  ArrayXX a = split.RunSegment(
      MonoAudio(static_cast<ArrayX>(x.head(1000))), options).nap[0];
  ArrayXX b = split.RunSegment(
      MonoAudio(static_cast<ArrayX>(x.tail(2000))), options).nap[0];
  bool invariant =
      (a == ref.topRows(1000)).all() && (b == ref.bottomRows(2000)).all();

  IhcDesignParams ihc_params;  // two_cap
  IhcCoeffs coeffs = DesignIhcCoeffs(ihc_params, kFs);
  IhcState state = InitIhcState(coeffs, 71);
  ArrayX bm(71), napv(71), v(71);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  bool bounded = true;
  const long steps = 1000000 / 71 + 1;
  for (long i = 0; i < steps && bounded; ++i) {
    for (int ch = 0; ch < 71; ++ch) bm[ch] = static_cast<FPType>(dist(rng));
    IhcStep(bm, coeffs, &state, &napv, &v);
    bounded = state.cap1.minCoeff() >= 0 && state.cap1.maxCoeff() <= 1 &&
              state.cap2.minCoeff() >= 0 && state.cap2.maxCoeff() <= 1;
  }

  std::snprintf(buf, sizeof(buf),
                "silence tail %.1e; partition %s; capacitors %s over 1e6 samples",
                tail, invariant ? "bit-exact" : "DIFFERS",
                bounded ? "in [0,1]" : "OUT OF RANGE");
  Report(10, "quiescence, determinism, and state bounds",
         quiescent && invariant && bounded, buf);
}

}  // namespace
}  // namespace carfac

int main() {
  using namespace carfac;
  std::printf("CARFAC acceptance suite (sample rate %.0f Hz, %s precision)\n",
              static_cast<double>(kFs), sizeof(FPType) == 8 ? "double" : "single");
  Criterion1();
  Criterion2();
  Criterion3();
  Criterion4();
  Criterion5();
  Criterion6();
  Criterion7();
  Criterion8();
  Criterion9();
  Criterion10();
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
