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
// Turns design parameters into run-time coefficients.  Everything here is
// a pure function of its arguments: two identical calls produce
// bit-identical coefficients, and nothing is mutated at run time.

#ifndef CARFAC_DESIGN_H_
#define CARFAC_DESIGN_H_

#include "carfac/agc.h"
#include "carfac/car.h"
#include "carfac/common.h"
#include "carfac/design_params.h"
#include "carfac/ihc.h"

namespace carfac {

struct ChannelMap {
  int n_ch = 0;
  ArrayX pole_freqs;  // Hz, strictly decreasing base to apex
};

// Equivalent rectangular bandwidth at cf_hz.
FPType ErbHz(FPType cf_hz, FPType erb_break_freq_hz, FPType erb_q);

// Places pole frequencies from first_pole_fraction of Nyquist down to
// min_pole_hz in steps of erb_per_step ERBs.  Throws std::invalid_argument
// if the spacing yields no channels.
ChannelMap DesignChannels(const CarDesignParams& params, FPType sample_rate_hz);

// Exact DC stage gain at relative undamping u, from the ratio-of-
// polynomials transfer function.  Used at the parabola's fit points and by
// tests as the reference the parabola approximates.
FPType StageDcGain(FPType r1, FPType zr, FPType a0, FPType c0, FPType h,
                   FPType undamping);

// Interpolating quadratic through the exact DC gain at u = 0, 0.5, 1;
// returns {p0, p1, p2} with g(u) = p0 + p1*u + p2*u^2.  Within 0.01 dB of
// the exact gain over all of [0, 1].
struct GainParabola {
  FPType p0;
  FPType p1;
  FPType p2;
};
GainParabola FitStageGainParabola(FPType a0, FPType c0, FPType h, FPType r1,
                                  FPType zr);

// Throws std::invalid_argument if any channel's pole radius leaves (0, 1)
// anywhere over the undamping range.
CarCoeffs DesignCarCoeffs(const CarDesignParams& params, FPType sample_rate_hz,
                          const ChannelMap& channels);

IhcCoeffs DesignIhcCoeffs(const IhcDesignParams& params, FPType sample_rate_hz);

// Converts each stage's time constant and spatial spread/shift into the
// temporal one-pole coefficient and a feasible (3-tap FIR, n_iterations)
// pair.  If some stage's smoothing cannot be met, the first decimation
// factor is halved (floor 1) and the design retried; throws
// std::invalid_argument naming the stage if still infeasible.
AgcCoeffs DesignAgcCoeffs(const AgcDesignParams& params, FPType sample_rate_hz,
                          int n_ch);

}  // namespace carfac

#endif  // CARFAC_DESIGN_H_
