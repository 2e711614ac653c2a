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

#include "rascal/feasible.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rascal {
namespace {

void CheckDim(size_t expected, size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(expected) + ", got " +
                                std::to_string(got));
  }
}

// Indices by decreasing weight; equal weights put the larger index first so
// that the filled vertex is the lexicographically smallest maximizer.
std::vector<int> GreedyOrder(std::span<const double> w) {
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a > b;
  });
  return order;
}

// Largest squared norm of a vertex supported on exactly `a` coordinates of
// common cap `cap`: as many full caps as the budget allows, then one partial.
double UniformSideSquares(size_t a, double cap, double budget) {
  const size_t full =
      std::min(a, static_cast<size_t>(std::floor(budget / cap + 1e-12)));
  const double rest =
      a > full ? std::clamp(budget - full * cap, 0.0, cap) : 0.0;
  return full * cap * cap + rest * rest;
}

// Largest squared norm of a vertex whose support is exactly `side`: every
// coordinate at its cap, except possibly one carrying the leftover budget.
// Returns -1 when no vertex has that support.
double SideSquares(std::span<const double> caps, std::span<const int> side,
                   double budget) {
  double sum = 0.0;
  double squares = 0.0;
  for (int i : side) {
    sum += caps[i];
    squares += caps[i] * caps[i];
  }
  if (sum <= budget * (1.0 + 1e-12)) return squares;
  double best = -1.0;
  for (int j : side) {
    const double rest = budget - (sum - caps[j]);
    if (rest > 0.0 && rest < caps[j]) {
      best = std::max(best, squares - caps[j] * caps[j] + rest * rest);
    }
  }
  return best;
}

constexpr size_t kDiameterEnumerationLimit = 12;

}  // namespace

BudgetPolytope::BudgetPolytope(double budget, Vec caps)
    : budget_(budget), caps_(std::move(caps)) {
  if (!(budget_ > 0.0)) throw std::invalid_argument("budget must be positive");
  for (double c : caps_) {
    if (!(c > 0.0)) throw std::invalid_argument("caps must be positive");
  }
}

Vec BudgetPolytope::LinearMaximize(std::span<const double> w) const {
  CheckDim(dim(), w.size(), "BudgetPolytope::LinearMaximize");
  Vec vertex(dim(), 0.0);
  double left = budget_;
  for (int i : GreedyOrder(w)) {
    if (w[i] <= 0.0 || left <= 0.0) break;
    vertex[i] = std::min(caps_[i], left);
    left -= vertex[i];
  }
  return vertex;
}

bool BudgetPolytope::Contains(std::span<const double> x) const {
  CheckDim(dim(), x.size(), "BudgetPolytope::Contains");
  double total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -kMembershipTolerance) return false;
    if (x[i] > caps_[i] + kMembershipTolerance) return false;
    total += x[i];
  }
  return total <= budget_ + kMembershipTolerance;
}

double BudgetPolytope::Diameter() const {
  // For nonnegative points |x - y|^2 <= |x|^2 + |y|^2, with equality when
  // the supports are disjoint, and zeroing the smaller entry of each shared
  // coordinate keeps both points feasible. So the farthest pair is two
  // vertices on disjoint supports.
  const size_t n = caps_.size();
  const double max_cap = *std::max_element(caps_.begin(), caps_.end());
  const double min_cap = *std::min_element(caps_.begin(), caps_.end());
  if (max_cap - min_cap <= 1e-15 * max_cap) {
    double best = 0.0;
    for (size_t a = 0; a <= n; ++a) {
      best = std::max(best, UniformSideSquares(a, max_cap, budget_) +
                                UniformSideSquares(n - a, max_cap, budget_));
    }
    return std::sqrt(best);
  }
  if (n <= kDiameterEnumerationLimit) {
    // Assign every coordinate to the first point, the second, or neither.
    size_t assignments = 1;
    for (size_t i = 0; i < n; ++i) assignments *= 3;
    double best = 0.0;
    std::vector<int> first;
    std::vector<int> second;
    for (size_t code = 0; code < assignments; ++code) {
      first.clear();
      second.clear();
      size_t c = code;
      for (size_t i = 0; i < n; ++i, c /= 3) {
        if (c % 3 == 1) first.push_back(static_cast<int>(i));
        if (c % 3 == 2) second.push_back(static_cast<int>(i));
      }
      const double a = SideSquares(caps_, first, budget_);
      const double b = SideSquares(caps_, second, budget_);
      if (a >= 0.0 && b >= 0.0) best = std::max(best, a + b);
    }
    return std::sqrt(best);
  }
  // Large instances with unequal caps: |x|^2 <= max_cap * sum(x) and
  // |x|^2 <= sum(cap^2) give an upper bound.
  double cap_squares = 0.0;
  for (double c : caps_) cap_squares += c * c;
  return std::sqrt(std::min(2.0 * budget_ * max_cap, cap_squares));
}

// ---------------------------------------------------------------------------

int Matroid::Rank(std::span<const int> set) const {
  std::vector<int> chosen;
  for (int e : set) {
    chosen.push_back(e);
    if (!IsIndependent(chosen)) chosen.pop_back();
  }
  return static_cast<int>(chosen.size());
}

UniformMatroid::UniformMatroid(size_t n, int k) : n_(n), k_(k) {
  if (k < 0 || static_cast<size_t>(k) > n) {
    throw std::invalid_argument("uniform matroid rank must lie in [0, n]");
  }
}

bool UniformMatroid::IsIndependent(std::span<const int> set) const {
  if (set.size() > static_cast<size_t>(k_)) return false;
  std::vector<uint8_t> seen(n_, 0);
  for (int e : set) {
    if (e < 0 || static_cast<size_t>(e) >= n_ || seen[e]) return false;
    seen[e] = 1;
  }
  return true;
}

PartitionMatroid::PartitionMatroid(size_t n, std::vector<Block> blocks)
    : n_(n), blocks_(std::move(blocks)), block_of_(n, -1), rank_(0) {
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const Block& block = blocks_[b];
    if (block.capacity < 0) {
      throw std::invalid_argument("partition block capacity is negative");
    }
    for (int e : block.elements) {
      if (e < 0 || static_cast<size_t>(e) >= n_) {
        throw std::invalid_argument("partition element " + std::to_string(e) +
                                    " out of range");
      }
      if (block_of_[e] != -1) {
        throw std::invalid_argument("element " + std::to_string(e) +
                                    " appears in two blocks");
      }
      block_of_[e] = static_cast<int>(b);
    }
    rank_ += std::min<int>(block.capacity,
                           static_cast<int>(block.elements.size()));
  }
}

bool PartitionMatroid::IsIndependent(std::span<const int> set) const {
  std::vector<int> used(blocks_.size(), 0);
  std::vector<uint8_t> seen(n_, 0);
  for (int e : set) {
    if (e < 0 || static_cast<size_t>(e) >= n_ || seen[e]) return false;
    seen[e] = 1;
    const int b = block_of_[e];
    if (b < 0 || ++used[b] > blocks_[b].capacity) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

MatroidBasePolytope::MatroidBasePolytope(MatroidPtr matroid)
    : matroid_(std::move(matroid)) {
  if (!matroid_) throw std::invalid_argument("null matroid");
}

Vec MatroidBasePolytope::LinearMaximize(std::span<const double> w) const {
  CheckDim(dim(), w.size(), "MatroidBasePolytope::LinearMaximize");
  const int k = matroid_->rank();
  std::vector<int> chosen;
  chosen.reserve(k);
  for (int i : GreedyOrder(w)) {
    if (static_cast<int>(chosen.size()) == k) break;
    chosen.push_back(i);
    if (!matroid_->IsIndependent(chosen)) chosen.pop_back();
  }
  if (static_cast<int>(chosen.size()) != k) {
    throw std::logic_error("matroid greedy did not reach a base; the "
                           "independence oracle is inconsistent with rank");
  }
  Vec vertex(dim(), 0.0);
  for (int i : chosen) vertex[i] = 1.0;
  return vertex;
}

bool MatroidBasePolytope::Contains(std::span<const double> x) const {
  CheckDim(dim(), x.size(), "MatroidBasePolytope::Contains");
  const double tol = kMembershipTolerance;
  double total = 0.0;
  for (double v : x) {
    if (v < -tol || v > 1.0 + tol) return false;
    total += v;
  }
  if (std::abs(total - matroid_->rank()) > tol) return false;
  if (dynamic_cast<const UniformMatroid*>(matroid_.get()) != nullptr) {
    return true;
  }
  if (const auto* partition =
          dynamic_cast<const PartitionMatroid*>(matroid_.get())) {
    Vec load(partition->blocks().size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
      const int b = partition->block_of()[i];
      if (b < 0) {
        if (x[i] > tol) return false;
        continue;
      }
      load[b] += x[i];
    }
    for (size_t b = 0; b < load.size(); ++b) {
      if (load[b] > partition->blocks()[b].capacity + tol) return false;
    }
    return true;
  }
  // Generic matroid: x(S) <= rank(S) for every subset S.
  const size_t n = dim();
  if (n > 20) {
    throw std::invalid_argument(
        "membership for a callback matroid needs n <= 20");
  }
  std::vector<int> subset;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    subset.clear();
    double mass = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(static_cast<int>(i));
        mass += x[i];
      }
    }
    if (mass > matroid_->Rank(subset) + tol) return false;
  }
  return true;
}

double MatroidBasePolytope::Diameter() const {
  return std::sqrt(2.0 * matroid_->rank());
}

// ---------------------------------------------------------------------------

ProductRegion::ProductRegion(FeasibleRegionPtr base, int copies)
    : base_(std::move(base)), copies_(static_cast<size_t>(copies)) {
  if (!base_ || copies < 1) {
    throw std::invalid_argument("product region needs a base and copies >= 1");
  }
}

Vec ProductRegion::LinearMaximize(std::span<const double> w) const {
  CheckDim(dim(), w.size(), "ProductRegion::LinearMaximize");
  const size_t n = base_->dim();
  Vec vertex;
  vertex.reserve(dim());
  for (size_t i = 0; i < copies_; ++i) {
    const Vec block = base_->LinearMaximize(w.subspan(i * n, n));
    vertex.insert(vertex.end(), block.begin(), block.end());
  }
  return vertex;
}

bool ProductRegion::Contains(std::span<const double> x) const {
  CheckDim(dim(), x.size(), "ProductRegion::Contains");
  const size_t n = base_->dim();
  for (size_t i = 0; i < copies_; ++i) {
    if (!base_->Contains(x.subspan(i * n, n))) return false;
  }
  return true;
}

double ProductRegion::Diameter() const {
  return std::sqrt(static_cast<double>(copies_)) * base_->Diameter();
}

std::optional<int> ProductRegion::IntegralRank() const {
  const auto k = base_->IntegralRank();
  if (!k) return std::nullopt;
  return *k * static_cast<int>(copies_);
}

std::vector<int> SupportOf(std::span<const double> vertex) {
  std::vector<int> support;
  for (size_t i = 0; i < vertex.size(); ++i) {
    if (vertex[i] > 0.5) support.push_back(static_cast<int>(i));
  }
  return support;
}

}  // namespace rascal
