// Copyright 2026 The Authors.
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

#ifndef RASCAL_RISK_H_
#define RASCAL_RISK_H_

#include <span>

#include "rascal/common.h"

namespace rascal {

// An empirical distribution over outcome values. Empty `weights` means the
// uniform distribution; otherwise weights are nonnegative and sum to one.
struct ValueSample {
  Vec values;
  Vec weights;
};

struct CvarResult {
  double value = 0.0;
  double tau = 0.0;
};

// sup{tau : Pr(V <= tau) <= alpha}, with alpha = 1 mapped to the largest
// value instead of +infinity.
double EmpiricalVar(const ValueSample& sample, double alpha);
double EmpiricalVar(std::span<const double> values, double alpha);

// Mean of the lowest alpha fraction of mass. The atom straddling the
// alpha boundary contributes fractionally, so the result agrees with the
// variational form for every alpha.
double EmpiricalCvar(const ValueSample& sample, double alpha);
double EmpiricalCvar(std::span<const double> values, double alpha);

// Exact maximizer of tau - E[tau - V]_+ / alpha over tau in [0, 1]. The
// objective is concave piecewise linear, so the smallest maximizer is the
// first sample value where the cumulative mass reaches alpha.
CvarResult CvarVariational(const ValueSample& sample, double alpha);
CvarResult CvarVariational(std::span<const double> values, double alpha);

// tau - E[tau - V]_+ / alpha at a given tau.
double CvarObjective(std::span<const double> values, double tau, double alpha);

}  // namespace rascal

#endif  // RASCAL_RISK_H_
