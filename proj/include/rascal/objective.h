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

#ifndef RASCAL_OBJECTIVE_H_
#define RASCAL_OBJECTIVE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rascal/common.h"

namespace rascal {

// One realized monotone DR-submodular function F(.; z). Implementations are
// immutable and safe to evaluate concurrently.
class DrFunction {
 public:
  virtual ~DrFunction() = default;
  virtual size_t dim() const = 0;
  virtual double Value(std::span<const double> x) const = 0;
  virtual void Gradient(std::span<const double> x,
                        std::span<double> grad) const = 0;

  Vec Gradient(std::span<const double> x) const {
    Vec g(dim());
    Gradient(x, g);
    return g;
  }
};

using DrFunctionPtr = std::shared_ptr<const DrFunction>;

// Reach times of one contagion scenario. Unreached vertices have already
// been reassigned to z_max.
struct ScenarioTimes {
  Vec reach_time;
  double z_max = 0.0;

  // Sets z_max to the largest entry and validates the invariants.
  static ScenarioTimes FromReachTimes(Vec reach_time);
  // z_max == 0: every vertex reached at time zero (isolated source).
  bool degenerate() const { return z_max <= 0.0; }
};

enum class SensorForm {
  // sum_i (z_max - z_i) * P(first detection at v_i); F(0) = 0.
  kTimeSaved,
  // z_max - sum_i z_i * P(first detection at v_i). Differs from kTimeSaved
  // by z_max * P(no detection), so F(0) = z_max. Kept for comparison only.
  kUndetectedCounted,
};

struct SensorObjective {
  double p = 0.01;  // detection probability per unit of energy, in (0, 1]
  bool normalize = true;  // divide by z_max so values lie in [0, 1]
  SensorForm form = SensorForm::kTimeSaved;

  void Validate() const;
};

double SensorValue(std::span<const double> x, const ScenarioTimes& z,
                   const SensorObjective& obj);
Vec SensorGradient(std::span<const double> x, const ScenarioTimes& z,
                   const SensorObjective& obj);

// Sensor objective bound to one scenario. Caches the detection order.
class SensorFunction : public DrFunction {
 public:
  SensorFunction(std::shared_ptr<const ScenarioTimes> z, SensorObjective obj);

  size_t dim() const override { return z_->reach_time.size(); }
  double Value(std::span<const double> x) const override;
  void Gradient(std::span<const double> x,
                std::span<double> grad) const override;
  using DrFunction::Gradient;

  const ScenarioTimes& scenario() const { return *z_; }

 private:
  std::shared_ptr<const ScenarioTimes> z_;
  SensorObjective obj_;
  std::vector<int> order_;  // vertices by (reach_time, index)
};

// F(x) = <w, x>; monotone when w >= 0.
class LinearFunction : public DrFunction {
 public:
  explicit LinearFunction(Vec weights) : weights_(std::move(weights)) {}
  size_t dim() const override { return weights_.size(); }
  double Value(std::span<const double> x) const override;
  void Gradient(std::span<const double> x,
                std::span<double> grad) const override;
  using DrFunction::Gradient;

 private:
  Vec weights_;
};

class ConstantFunction : public DrFunction {
 public:
  ConstantFunction(size_t dim, double value) : dim_(dim), value_(value) {}
  size_t dim() const override { return dim_; }
  double Value(std::span<const double>) const override { return value_; }
  void Gradient(std::span<const double>,
                std::span<double> grad) const override;
  using DrFunction::Gradient;

 private:
  size_t dim_;
  double value_;
};

// (1/r) sum_i F(x^i) over r stacked copies of the base function's domain.
class AveragedCopiesFunction : public DrFunction {
 public:
  AveragedCopiesFunction(DrFunctionPtr base, int copies);
  size_t dim() const override { return base_->dim() * copies_; }
  double Value(std::span<const double> x) const override;
  void Gradient(std::span<const double> x,
                std::span<double> grad) const override;
  using DrFunction::Gradient;

 private:
  DrFunctionPtr base_;
  size_t copies_;
};

// ---------------------------------------------------------------------------
// Set functions and their multilinear extensions.

// Scenario parameter for a set function (e.g. per-item weights).
using SetScenario = Vec;
// Membership indicator over the ground set.
using Membership = std::vector<uint8_t>;

// f(.; z) : 2^V -> [0, 1], monotone submodular with f(empty) = 0.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual size_t ground_size() const = 0;
  virtual double Evaluate(std::span<const uint8_t> members,
                          const SetScenario& z) const = 0;
};

using SetFunctionPtr = std::shared_ptr<const SetFunction>;

// f(S; z) = sum_{i in S} z_i / scale.
class ModularSetFunction : public SetFunction {
 public:
  ModularSetFunction(size_t n, double scale) : n_(n), scale_(scale) {}
  size_t ground_size() const override { return n_; }
  double Evaluate(std::span<const uint8_t> members,
                  const SetScenario& z) const override;

 private:
  size_t n_;
  double scale_;
};

// Weighted coverage: element i covers items covers[i]; the scenario gives a
// nonnegative weight per item. f(S; z) = covered weight / total weight.
class CoverageSetFunction : public SetFunction {
 public:
  CoverageSetFunction(std::vector<std::vector<int>> covers, size_t num_items);
  size_t ground_size() const override { return covers_.size(); }
  size_t num_items() const { return num_items_; }
  double Evaluate(std::span<const uint8_t> members,
                  const SetScenario& z) const override;

 private:
  std::vector<std::vector<int>> covers_;
  size_t num_items_;
};

// Monte-Carlo estimate of E[f(S; z)], S containing i independently with
// probability x_i.
double MultilinearValueEstimate(const SetFunction& f,
                                std::span<const double> x,
                                const SetScenario& z, int samples, Rng& rng);

// Entry i estimates F(x | x_i = 1) - F(x | x_i = 0). Each sampled set is
// shared across all coordinates (common random numbers).
Vec MultilinearGradientEstimate(const SetFunction& f,
                                std::span<const double> x,
                                const SetScenario& z, int samples, Rng& rng);

inline constexpr int kDefaultMultilinearSamples = 200;

// Multilinear extension of f(.; z) as a DrFunction. Each call seeds its own
// sampler from (seed, bits of x), so evaluations are pure functions of x.
class MultilinearFunction : public DrFunction {
 public:
  MultilinearFunction(SetFunctionPtr f, SetScenario z, int samples,
                      uint64_t seed);
  size_t dim() const override { return f_->ground_size(); }
  double Value(std::span<const double> x) const override;
  void Gradient(std::span<const double> x,
                std::span<double> grad) const override;
  using DrFunction::Gradient;

 private:
  Rng SamplerFor(std::span<const double> x, uint64_t salt) const;

  SetFunctionPtr f_;
  SetScenario z_;
  int samples_;
  uint64_t seed_;
};

}  // namespace rascal

#endif  // RASCAL_OBJECTIVE_H_
