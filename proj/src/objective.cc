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

#include "rascal/objective.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rascal {
namespace {

void CheckAllocation(std::span<const double> x, const ScenarioTimes& z) {
  if (x.size() != z.reach_time.size()) {
    throw std::invalid_argument(
        "allocation has dimension " + std::to_string(x.size()) +
        " but the scenario has " + std::to_string(z.reach_time.size()) +
        " vertices");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) {
      throw std::invalid_argument("negative allocation at vertex " +
                                  std::to_string(i));
    }
  }
}

std::vector<int> DetectionOrder(const ScenarioTimes& z) {
  std::vector<int> order(z.reach_time.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return z.reach_time[a] < z.reach_time[b];
  });
  return order;
}

double SensorValueOrdered(std::span<const double> x, const ScenarioTimes& z,
                          const SensorObjective& obj,
                          std::span<const int> order) {
  CheckAllocation(x, z);
  if (z.degenerate()) return 0.0;
  const double c = -std::log1p(-obj.p);
  double undetected = 1.0;  // P(no detection before the current vertex)
  double saved = 0.0;
  double weighted_time = 0.0;
  for (int v : order) {
    const double miss = obj.p >= 1.0 ? (x[v] > 0.0 ? 0.0 : 1.0)
                                     : std::exp(-c * x[v]);
    const double first = undetected * (1.0 - miss);
    saved += (z.z_max - z.reach_time[v]) * first;
    weighted_time += z.reach_time[v] * first;
    undetected *= miss;
  }
  double value = obj.form == SensorForm::kTimeSaved
                     ? saved
                     : z.z_max - weighted_time;
  if (obj.normalize) value /= z.z_max;
  return value;
}

void SensorGradientOrdered(std::span<const double> x, const ScenarioTimes& z,
                           const SensorObjective& obj,
                           std::span<const int> order, std::span<double> grad) {
  CheckAllocation(x, z);
  if (grad.size() != x.size()) {
    throw std::invalid_argument("gradient buffer has the wrong dimension");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  if (z.degenerate()) return;
  if (obj.p >= 1.0) {
    throw std::invalid_argument("sensor gradient is undefined for p = 1");
  }
  const double c = -std::log1p(-obj.p);
  const size_t n = order.size();
  // after[k]: P(no detection at positions <= k).
  Vec after(n);
  Vec first(n);
  double undetected = 1.0;
  for (size_t k = 0; k < n; ++k) {
    const double miss = std::exp(-c * x[order[k]]);
    first[k] = undetected * (1.0 - miss);
    undetected *= miss;
    after[k] = undetected;
  }
  // d/dx_k = c * (a_k * after[k] - sum_{i > k} a_i * first[i]).
  double later = 0.0;
  for (size_t k = n; k-- > 0;) {
    const int v = order[k];
    const double gain = z.z_max - z.reach_time[v];
    double g = c * (gain * after[k] - later);
    if (obj.form == SensorForm::kUndetectedCounted) {
      g -= c * z.z_max * undetected;
    }
    grad[v] = obj.normalize ? g / z.z_max : g;
    later += gain * first[k];
  }
}

}  // namespace

ScenarioTimes ScenarioTimes::FromReachTimes(Vec reach_time) {
  ScenarioTimes z;
  z.z_max = 0.0;
  for (size_t i = 0; i < reach_time.size(); ++i) {
    const double t = reach_time[i];
    if (!std::isfinite(t) || t < 0.0) {
      throw std::invalid_argument("reach time at vertex " + std::to_string(i) +
                                  " is not a finite nonnegative number");
    }
    z.z_max = std::max(z.z_max, t);
  }
  z.reach_time = std::move(reach_time);
  return z;
}

void SensorObjective::Validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("detection probability p must lie in (0, 1]");
  }
}

double SensorValue(std::span<const double> x, const ScenarioTimes& z,
                   const SensorObjective& obj) {
  obj.Validate();
  return SensorValueOrdered(x, z, obj, DetectionOrder(z));
}

Vec SensorGradient(std::span<const double> x, const ScenarioTimes& z,
                   const SensorObjective& obj) {
  obj.Validate();
  Vec grad(x.size());
  SensorGradientOrdered(x, z, obj, DetectionOrder(z), grad);
  return grad;
}

SensorFunction::SensorFunction(std::shared_ptr<const ScenarioTimes> z,
                               SensorObjective obj)
    : z_(std::move(z)), obj_(obj), order_(DetectionOrder(*z_)) {
  obj_.Validate();
}

double SensorFunction::Value(std::span<const double> x) const {
  return SensorValueOrdered(x, *z_, obj_, order_);
}

void SensorFunction::Gradient(std::span<const double> x,
                              std::span<double> grad) const {
  SensorGradientOrdered(x, *z_, obj_, order_, grad);
}

double LinearFunction::Value(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw std::invalid_argument("dimension mismatch in LinearFunction");
  }
  return Dot(weights_, x);
}

void LinearFunction::Gradient(std::span<const double> x,
                              std::span<double> grad) const {
  if (x.size() != weights_.size() || grad.size() != weights_.size()) {
    throw std::invalid_argument("dimension mismatch in LinearFunction");
  }
  std::copy(weights_.begin(), weights_.end(), grad.begin());
}

void ConstantFunction::Gradient(std::span<const double>,
                                std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
}

AveragedCopiesFunction::AveragedCopiesFunction(DrFunctionPtr base, int copies)
    : base_(std::move(base)), copies_(static_cast<size_t>(copies)) {
  if (copies < 1) throw std::invalid_argument("need at least one copy");
}

double AveragedCopiesFunction::Value(std::span<const double> x) const {
  const size_t n = base_->dim();
  if (x.size() != n * copies_) {
    throw std::invalid_argument("dimension mismatch in AveragedCopiesFunction");
  }
  double total = 0.0;
  for (size_t i = 0; i < copies_; ++i) total += base_->Value(x.subspan(i * n, n));
  return total / static_cast<double>(copies_);
}

void AveragedCopiesFunction::Gradient(std::span<const double> x,
                                      std::span<double> grad) const {
  const size_t n = base_->dim();
  if (x.size() != n * copies_ || grad.size() != x.size()) {
    throw std::invalid_argument("dimension mismatch in AveragedCopiesFunction");
  }
  for (size_t i = 0; i < copies_; ++i) {
    auto block = grad.subspan(i * n, n);
    base_->Gradient(x.subspan(i * n, n), block);
    for (double& g : block) g /= static_cast<double>(copies_);
  }
}

// ---------------------------------------------------------------------------

double ModularSetFunction::Evaluate(std::span<const uint8_t> members,
                                    const SetScenario& z) const {
  double total = 0.0;
  for (size_t i = 0; i < n_; ++i) {
    if (members[i]) total += z[i];
  }
  return total / scale_;
}

CoverageSetFunction::CoverageSetFunction(std::vector<std::vector<int>> covers,
                                         size_t num_items)
    : covers_(std::move(covers)), num_items_(num_items) {
  for (const auto& items : covers_) {
    for (int item : items) {
      if (item < 0 || static_cast<size_t>(item) >= num_items_) {
        throw std::invalid_argument("coverage item index out of range");
      }
    }
  }
}

double CoverageSetFunction::Evaluate(std::span<const uint8_t> members,
                                     const SetScenario& z) const {
  std::vector<uint8_t> covered(num_items_, 0);
  for (size_t i = 0; i < covers_.size(); ++i) {
    if (!members[i]) continue;
    for (int item : covers_[i]) covered[item] = 1;
  }
  double hit = 0.0;
  double total = 0.0;
  for (size_t j = 0; j < num_items_; ++j) {
    total += z[j];
    if (covered[j]) hit += z[j];
  }
  return total > 0.0 ? hit / total : 0.0;
}

namespace {

void CheckFractional(std::span<const double> x, size_t n) {
  if (x.size() != n) {
    throw std::invalid_argument("point dimension does not match ground set");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!(x[i] >= -1e-9 && x[i] <= 1.0 + 1e-9)) {
      throw std::invalid_argument("component " + std::to_string(i) +
                                  " lies outside [0, 1]");
    }
  }
}

void SampleSet(std::span<const double> x, Rng& rng, Membership& members) {
  for (size_t i = 0; i < x.size(); ++i) {
    members[i] = Uniform01(rng) < x[i] ? 1 : 0;
  }
}

}  // namespace

double MultilinearValueEstimate(const SetFunction& f,
                                std::span<const double> x,
                                const SetScenario& z, int samples, Rng& rng) {
  const size_t n = f.ground_size();
  CheckFractional(x, n);
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  Membership members(n);
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    SampleSet(x, rng, members);
    total += f.Evaluate(members, z);
  }
  return total / samples;
}

Vec MultilinearGradientEstimate(const SetFunction& f,
                                std::span<const double> x,
                                const SetScenario& z, int samples, Rng& rng) {
  const size_t n = f.ground_size();
  CheckFractional(x, n);
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  Membership members(n);
  Vec grad(n, 0.0);
  for (int s = 0; s < samples; ++s) {
    SampleSet(x, rng, members);
    for (size_t i = 0; i < n; ++i) {
      const uint8_t saved = members[i];
      members[i] = 1;
      const double with = f.Evaluate(members, z);
      members[i] = 0;
      const double without = f.Evaluate(members, z);
      members[i] = saved;
      grad[i] += with - without;
    }
  }
  for (double& g : grad) g /= samples;
  return grad;
}

MultilinearFunction::MultilinearFunction(SetFunctionPtr f, SetScenario z,
                                         int samples, uint64_t seed)
    : f_(std::move(f)), z_(std::move(z)), samples_(samples), seed_(seed) {
  if (samples_ < 1) throw std::invalid_argument("sample count must be >= 1");
}

Rng MultilinearFunction::SamplerFor(std::span<const double> x,
                                    uint64_t salt) const {
  uint64_t h = Mix64(seed_ ^ salt);
  for (double v : x) h = Mix64(h ^ std::bit_cast<uint64_t>(v));
  return Rng(h);
}

double MultilinearFunction::Value(std::span<const double> x) const {
  Rng rng = SamplerFor(x, 0x5a);
  return MultilinearValueEstimate(*f_, x, z_, samples_, rng);
}

void MultilinearFunction::Gradient(std::span<const double> x,
                                   std::span<double> grad) const {
  Rng rng = SamplerFor(x, 0xa5);
  const Vec g = MultilinearGradientEstimate(*f_, x, z_, samples_, rng);
  std::copy(g.begin(), g.end(), grad.begin());
}

}  // namespace rascal
