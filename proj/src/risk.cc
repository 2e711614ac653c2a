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

#include "rascal/risk.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace rascal {
namespace {

constexpr double kMassTolerance = 1e-12;

struct Atom {
  double value;
  double mass;
};

void CheckAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
  }
}

std::vector<Atom> SortedAtoms(const ValueSample& sample) {
  if (sample.values.empty()) {
    throw std::invalid_argument("empty value sample");
  }
  const size_t n = sample.values.size();
  std::vector<Atom> atoms(n);
  if (sample.weights.empty()) {
    for (size_t i = 0; i < n; ++i) atoms[i] = {sample.values[i], 1.0 / n};
  } else {
    if (sample.weights.size() != n) {
      throw std::invalid_argument("weights and values differ in length");
    }
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (sample.weights[i] < 0.0) {
        throw std::invalid_argument("negative sample weight");
      }
      total += sample.weights[i];
      atoms[i] = {sample.values[i], sample.weights[i]};
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("sample weights do not sum to one");
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });
  return atoms;
}

ValueSample Uniform(std::span<const double> values) {
  return ValueSample{Vec(values.begin(), values.end()), {}};
}

}  // namespace

double EmpiricalVar(const ValueSample& sample, double alpha) {
  CheckAlpha(alpha);
  const std::vector<Atom> atoms = SortedAtoms(sample);
  double cumulative = 0.0;
  size_t i = 0;
  while (i < atoms.size()) {
    // Pr(V <= v) jumps only at distinct values.
    const double v = atoms[i].value;
    while (i < atoms.size() && atoms[i].value == v) cumulative += atoms[i++].mass;
    if (cumulative > alpha + kMassTolerance) return v;
  }
  return atoms.back().value;
}

double EmpiricalVar(std::span<const double> values, double alpha) {
  return EmpiricalVar(Uniform(values), alpha);
}

double EmpiricalCvar(const ValueSample& sample, double alpha) {
  CheckAlpha(alpha);
  const std::vector<Atom> atoms = SortedAtoms(sample);
  double remaining = alpha;
  double tail = 0.0;
  for (const Atom& atom : atoms) {
    const double take = std::min(atom.mass, remaining);
    tail += take * atom.value;
    remaining -= take;
    if (remaining <= kMassTolerance) break;
  }
  return tail / alpha;
}

double EmpiricalCvar(std::span<const double> values, double alpha) {
  return EmpiricalCvar(Uniform(values), alpha);
}

CvarResult CvarVariational(const ValueSample& sample, double alpha) {
  CheckAlpha(alpha);
  const std::vector<Atom> atoms = SortedAtoms(sample);
  // Right slope at tau is 1 - Pr(V <= tau) / alpha; the smallest maximizer
  // is the first atom where the cumulative mass reaches alpha.
  double cumulative = 0.0;
  double tau = atoms.back().value;
  for (const Atom& atom : atoms) {
    cumulative += atom.mass;
    if (cumulative >= alpha - kMassTolerance) {
      tau = atom.value;
      break;
    }
  }
  tau = std::clamp(tau, 0.0, 1.0);
  double shortfall = 0.0;
  for (const Atom& atom : atoms) {
    if (atom.value >= tau) break;
    shortfall += atom.mass * (tau - atom.value);
  }
  return {tau - shortfall / alpha, tau};
}

CvarResult CvarVariational(std::span<const double> values, double alpha) {
  return CvarVariational(Uniform(values), alpha);
}

double CvarObjective(std::span<const double> values, double tau, double alpha) {
  if (values.empty()) throw std::invalid_argument("empty value sample");
  double shortfall = 0.0;
  for (double v : values) shortfall += std::max(tau - v, 0.0);
  return tau - shortfall / (alpha * static_cast<double>(values.size()));
}

}  // namespace rascal
