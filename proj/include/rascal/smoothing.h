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

#ifndef RASCAL_SMOOTHING_H_
#define RASCAL_SMOOTHING_H_

#include <span>
#include <vector>

#include "rascal/common.h"
#include "rascal/objective.h"

namespace rascal {

struct SmoothingParams {
  double alpha = 0.1;  // CVaR level in (0, 1]
  double u = 0.01;     // smoothing width

  void Validate() const;
  // max{1, 1/alpha - 1}; bounds |d/dtau of the smoothed auxiliary|.
  double c_alpha() const;
};

// H(F, tau) = tau - [tau - F]_+ / alpha.
double HValue(double f_val, double tau, double alpha);

// Average of H over the window [tau, tau + u]:
//   tau + u/2 - psi(tau - F) / (alpha u)
// with psi(a) = 0 (a <= -u), (a + u)^2 / 2 (-u < a < 0), a u + u^2 / 2.
double HSmoothValue(double f_val, double tau, const SmoothingParams& params);

// clamp((F - tau) / u, 0, 1): the fraction of the smoothing window lying
// below F.
double Indicator(double f_val, double tau, double u);

// d/dtau of HSmoothValue = 1 - (1 - Indicator) / alpha. Lies in
// [1 - 1/alpha, 1].
double TauSubgradient(double f_val, double tau, const SmoothingParams& params);

// Smallest maximizer over [0, 1] of tau -> mean_z HSmoothValue(F_z, tau).
double SmoothTau(std::span<const double> values, const SmoothingParams& params);

// Gradient in x of mean_z HSmoothValue(F(x; z), tau):
//   (1 / (alpha |Z|)) sum_z (1 - Indicator(F_z, tau, u)) grad F(x; z).
// Evaluated at tau = SmoothTau this is the gradient of the batch objective.
Vec SmoothGrad(std::span<const double> x, double tau,
               std::span<const DrFunctionPtr> batch,
               const SmoothingParams& params);

struct HBarResult {
  double value = 0.0;
  double tau = 0.0;
};

// max_tau mean_z HSmoothValue(F(x; z), tau), with the maximizing tau.
HBarResult HBarValue(std::span<const double> x,
                     std::span<const DrFunctionPtr> batch,
                     const SmoothingParams& params);
// Same, from precomputed values F(x; z).
HBarResult HBarFromValues(std::span<const double> values,
                          const SmoothingParams& params);

// The batch objective and its gradient at one point, sharing the F(x; z)
// evaluations.
struct BatchEvaluation {
  double value = 0.0;
  double tau = 0.0;
  Vec gradient;
};
BatchEvaluation EvaluateBatch(std::span<const double> x,
                              std::span<const DrFunctionPtr> batch,
                              const SmoothingParams& params);

}  // namespace rascal

#endif  // RASCAL_SMOOTHING_H_
