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

#ifndef RASCAL_FEASIBLE_H_
#define RASCAL_FEASIBLE_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rascal/common.h"

namespace rascal {

inline constexpr double kMembershipTolerance = 1e-9;

// A convex feasible region accessed only through a linear optimization
// oracle, a membership test and a diameter bound.
class FeasibleRegion {
 public:
  virtual ~FeasibleRegion() = default;
  virtual size_t dim() const = 0;
  // Vertex maximizing <w, .>; among maximizers, the lexicographically
  // smallest vertex.
  virtual Vec LinearMaximize(std::span<const double> w) const = 0;
  virtual bool Contains(std::span<const double> x) const = 0;
  virtual double Diameter() const = 0;
  // k when the region is an integral polytope inside {x in [0,1]^n :
  // sum x = k}.
  virtual std::optional<int> IntegralRank() const { return std::nullopt; }
  virtual bool down_closed() const = 0;
};

using FeasibleRegionPtr = std::shared_ptr<const FeasibleRegion>;

// {x >= 0 : sum x <= budget, x_i <= cap_i}.
class BudgetPolytope : public FeasibleRegion {
 public:
  BudgetPolytope(double budget, Vec caps);
  // Every cap equal to the budget, i.e. no binding per-coordinate cap.
  static BudgetPolytope Uncapped(size_t n, double budget) {
    return BudgetPolytope(budget, Vec(n, budget));
  }

  size_t dim() const override { return caps_.size(); }
  Vec LinearMaximize(std::span<const double> w) const override;
  bool Contains(std::span<const double> x) const override;
  // Exact for equal caps and for n <= 12; otherwise an upper bound.
  double Diameter() const override;
  bool down_closed() const override { return true; }

  double budget() const { return budget_; }
  const Vec& caps() const { return caps_; }

 private:
  double budget_;
  Vec caps_;
};

class Matroid {
 public:
  virtual ~Matroid() = default;
  virtual size_t ground_size() const = 0;
  virtual int rank() const = 0;
  virtual bool IsIndependent(std::span<const int> set) const = 0;
  // Rank of a subset by greedy extension.
  virtual int Rank(std::span<const int> set) const;

  bool IsBase(std::span<const int> set) const {
    return static_cast<int>(set.size()) == rank() && IsIndependent(set);
  }
};

using MatroidPtr = std::shared_ptr<const Matroid>;

class UniformMatroid : public Matroid {
 public:
  UniformMatroid(size_t n, int k);
  size_t ground_size() const override { return n_; }
  int rank() const override { return k_; }
  bool IsIndependent(std::span<const int> set) const override;

 private:
  size_t n_;
  int k_;
};

// Independent iff at most `capacity` elements from each block. Elements
// outside every block can never be chosen.
class PartitionMatroid : public Matroid {
 public:
  struct Block {
    std::vector<int> elements;
    int capacity;
  };

  PartitionMatroid(size_t n, std::vector<Block> blocks);
  size_t ground_size() const override { return n_; }
  int rank() const override { return rank_; }
  bool IsIndependent(std::span<const int> set) const override;

  const std::vector<Block>& blocks() const { return blocks_; }
  // Block index of each element, -1 if uncovered.
  const std::vector<int>& block_of() const { return block_of_; }

 private:
  size_t n_;
  std::vector<Block> blocks_;
  std::vector<int> block_of_;
  int rank_;
};

// User-supplied independence oracle.
class CallbackMatroid : public Matroid {
 public:
  using Oracle = std::function<bool(std::span<const int>)>;
  CallbackMatroid(size_t n, int k, Oracle oracle)
      : n_(n), k_(k), oracle_(std::move(oracle)) {}
  size_t ground_size() const override { return n_; }
  int rank() const override { return k_; }
  bool IsIndependent(std::span<const int> set) const override {
    return oracle_(set);
  }

 private:
  size_t n_;
  int k_;
  Oracle oracle_;
};

// Convex hull of the bases of a matroid. Not down-closed.
class MatroidBasePolytope : public FeasibleRegion {
 public:
  explicit MatroidBasePolytope(MatroidPtr matroid);

  size_t dim() const override { return matroid_->ground_size(); }
  // Greedy by decreasing weight; runs until a base is formed even through
  // negative weights.
  Vec LinearMaximize(std::span<const double> w) const override;
  bool Contains(std::span<const double> x) const override;
  // Upper bound sqrt(2k).
  double Diameter() const override;
  std::optional<int> IntegralRank() const override { return matroid_->rank(); }
  bool down_closed() const override { return false; }

  const Matroid& matroid() const { return *matroid_; }
  const MatroidPtr& matroid_ptr() const { return matroid_; }

 private:
  MatroidPtr matroid_;
};

// K^r: r independent copies of a region, coordinates stacked copy-major.
class ProductRegion : public FeasibleRegion {
 public:
  ProductRegion(FeasibleRegionPtr base, int copies);

  size_t dim() const override { return base_->dim() * copies_; }
  Vec LinearMaximize(std::span<const double> w) const override;
  bool Contains(std::span<const double> x) const override;
  double Diameter() const override;
  std::optional<int> IntegralRank() const override;
  bool down_closed() const override { return base_->down_closed(); }

  const FeasibleRegion& base() const { return *base_; }
  int copies() const { return static_cast<int>(copies_); }

 private:
  FeasibleRegionPtr base_;
  size_t copies_;
};

// Support of a 0/1 vertex, as sorted element indices.
std::vector<int> SupportOf(std::span<const double> vertex);

}  // namespace rascal

#endif  // RASCAL_FEASIBLE_H_
