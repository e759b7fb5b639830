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

#ifndef CARFAC_COMMON_H_
#define CARFAC_COMMON_H_

#include <Eigen/Core>

namespace carfac {

// The numeric type for all model computation.  The default build uses
// 64-bit doubles; defining CARFAC_SINGLE_PRECISION switches the whole
// library to 32-bit floats (golden-data tolerances relax from 1e-6 to
// 1e-3 in that mode).
#ifdef CARFAC_SINGLE_PRECISION
using FPType = float;
#else
using FPType = double;
#endif

using ArrayX = Eigen::Array<FPType, Eigen::Dynamic, 1>;
// Output planes are (samples x channels), row-major so that one sample's
// channel vector is contiguous.
using ArrayXX =
    Eigen::Array<FPType, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr FPType kPi = static_cast<FPType>(3.141592653589793238462643383279502884L);

}  // namespace carfac

#endif  // CARFAC_COMMON_H_
