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

#ifndef RASCAL_DISCRETE_H_
#define RASCAL_DISCRETE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rascal/common.h"
#include "rascal/feasible.h"
#include "rascal/objective.h"
#include "rascal/optimizers.h"

namespace rascal {

// Nonnegative rational, always in lowest terms.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  static Rational Make(int64_t num, int64_t den);
  double ToDouble() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator+(const Rational& a, const Rational& b);

struct PortfolioEntry {
  std::vector<int> set;  // sorted element ids
  Rational weight;
};

// A finite distribution over bases.
struct Portfolio {
  std::vector<PortfolioEntry> entries;

  // Uniform distribution over a multiset of sets; duplicates are merged and
  // entries sorted by set.
  static Portfolio UniformOver(std::vector<std::vector<int>> sets);
  Rational TotalWeight() const;
};

// Randomized swap merge of two weighted bases into one base. Each element
// ends up in the result with probability equal to its weighted share.
std::vector<int> MergeBases(std::vector<int> first, double first_weight,
                            std::vector<int> second, double second_weight,
                            const Matroid& matroid, Rng& rng);

// Left fold of MergeBases over a convex combination of base indicators.
std::vector<int> SwapRound(const VertexDecomposition& decomposition,
                           const Matroid& matroid, Rng& rng);

// r = ceil(T^{1/5}) and q = ceil(T^{3/4}).
int DefaultCopies(int horizon);
int DefaultRoundings(int horizon);

struct PortfolioParams {
  RunParams run;
  int copies = 1;     // r
  int roundings = 1;  // q
  int multilinear_samples = kDefaultMultilinearSamples;
};

// Yields scenarios for the set function; std::nullopt when exhausted.
using SetScenarioSource = std::function<std::optional<SetScenario>()>;

struct PortfolioResult {
  Portfolio portfolio;
  StochasticResult run;
};

// Runs StochasticRascal on r copies of the base polytope with the averaged
// multilinear extensions, swap-rounds every copy of every batch point q
// times, and returns the uniform portfolio over all rounded bases.
PortfolioResult BuildPortfolio(const SetScenarioSource& source,
                               SetFunctionPtr set_function, MatroidPtr matroid,
                               const PortfolioParams& params,
                               const TraceOptions& trace = {});

// CVaR over scenarios of the portfolio's expected value.
double PortfolioCvar(const Portfolio& portfolio,
                     std::span<const SetScenario> scenarios,
                     const SetFunction& set_function, double alpha);

// CSV with header `weight,set`; weight as num/den, set as ';'-separated ids.
void WritePortfolioCsv(const Portfolio& portfolio, std::ostream& out);
Portfolio ReadPortfolioCsv(std::istream& in);

}  // namespace rascal

#endif  // RASCAL_DISCRETE_H_
