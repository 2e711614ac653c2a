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

#include "rascal/smoothing.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace rascal {

void SmoothingParams::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
  }
  if (!(u > 0.0)) {
    throw std::invalid_argument("smoothing width u must be positive");
  }
}

double SmoothingParams::c_alpha() const {
  return std::max(1.0, 1.0 / alpha - 1.0);
}

double HValue(double f_val, double tau, double alpha) {
  return tau - std::max(tau - f_val, 0.0) / alpha;
}

double HSmoothValue(double f_val, double tau, const SmoothingParams& params) {
  const double u = params.u;
  const double a = tau - f_val;
  double psi;
  if (a <= -u) {
    psi = 0.0;
  } else if (a < 0.0) {
    psi = 0.5 * (a + u) * (a + u);
  } else {
    psi = a * u + 0.5 * u * u;
  }
  return tau + 0.5 * u - psi / (params.alpha * u);
}

double Indicator(double f_val, double tau, double u) {
  return std::clamp((f_val - tau) / u, 0.0, 1.0);
}

double TauSubgradient(double f_val, double tau, const SmoothingParams& params) {
  return 1.0 - (1.0 - Indicator(f_val, tau, params.u)) / params.alpha;
}

double SmoothTau(std::span<const double> values, const SmoothingParams& params) {
  params.Validate();
  if (values.empty()) throw std::invalid_argument("SmoothTau: empty batch");
  // The tau-derivative of the mean is 1 - S(tau) / (alpha N) where
  // S(tau) = sum_z (1 - I_z(tau)) is continuous, nondecreasing and piecewise
  // linear with breakpoints F_z - u (slope on) and F_z (slope off). The
  // smallest maximizer is the first tau with S(tau) = alpha N.
  //
  // The printed subroutine this replaces sorts {F_z} u {F_z + u} and solves
  //   sum_z (F_z - tau) / u + |C| = alpha |Z|;
  // its breakpoints are shifted by u relative to the derivative above.
  const double u = params.u;
  const double n = static_cast<double>(values.size());
  const double target = params.alpha * n;
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * values.size());
  for (double f : values) {
    events.emplace_back(f - u, +1);
    events.emplace_back(f, -1);
  }
  std::sort(events.begin(), events.end());

  double tau = events.back().first;
  double s = 0.0;
  double pos = events.front().first;
  int active = 0;
  const double slack = 1e-12 * n;
  for (const auto& [at, delta] : events) {
    if (active > 0) {
      const double s_at = s + active * (at - pos) / u;
      if (s_at >= target - slack) {
        tau = pos + (target - s) * u / active;
        tau = std::clamp(tau, pos, at);
        break;
      }
      s = s_at;
    }
    pos = at;
    active += delta;
  }
  return std::clamp(tau, 0.0, 1.0);
}

HBarResult HBarFromValues(std::span<const double> values,
                          const SmoothingParams& params) {
  const double tau = SmoothTau(values, params);
  double total = 0.0;
  for (double f : values) total += HSmoothValue(f, tau, params);
  return {total / static_cast<double>(values.size()), tau};
}

namespace {

Vec BatchValues(std::span<const double> x,
                std::span<const DrFunctionPtr> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  Vec values(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) values[i] = batch[i]->Value(x);
  return values;
}

void AccumulateTailGradient(std::span<const double> x, double tau,
                            std::span<const DrFunctionPtr> batch,
                            std::span<const double> values,
                            const SmoothingParams& params, Vec& out) {
  const double scale = 1.0 / (params.alpha * static_cast<double>(batch.size()));
  std::fill(out.begin(), out.end(), 0.0);
  Vec g(x.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    const double weight = 1.0 - Indicator(values[i], tau, params.u);
    if (weight <= 0.0) continue;
    batch[i]->Gradient(x, g);
    for (size_t j = 0; j < g.size(); ++j) out[j] += scale * weight * g[j];
  }
}

}  // namespace

Vec SmoothGrad(std::span<const double> x, double tau,
               std::span<const DrFunctionPtr> batch,
               const SmoothingParams& params) {
  params.Validate();
  const Vec values = BatchValues(x, batch);
  Vec grad(x.size(), 0.0);
  AccumulateTailGradient(x, tau, batch, values, params, grad);
  return grad;
}

HBarResult HBarValue(std::span<const double> x,
                     std::span<const DrFunctionPtr> batch,
                     const SmoothingParams& params) {
  params.Validate();
  return HBarFromValues(BatchValues(x, batch), params);
}

BatchEvaluation EvaluateBatch(std::span<const double> x,
                              std::span<const DrFunctionPtr> batch,
                              const SmoothingParams& params) {
  params.Validate();
  const Vec values = BatchValues(x, batch);
  const HBarResult bar = HBarFromValues(values, params);
  BatchEvaluation eval{bar.value, bar.tau, Vec(x.size(), 0.0)};
  AccumulateTailGradient(x, bar.tau, batch, values, params, eval.gradient);
  return eval;
}

}  // namespace rascal
