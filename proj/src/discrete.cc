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

#include "rascal/discrete.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rascal/risk.h"

namespace rascal {

Rational Rational::Make(int64_t num, int64_t den) {
  if (den <= 0 || num < 0) {
    throw std::invalid_argument("rational weights need num >= 0 and den > 0");
  }
  const int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

Rational operator+(const Rational& a, const Rational& b) {
  const int64_t g = std::gcd(a.den, b.den);
  const __int128 den = static_cast<__int128>(a.den / g) * b.den;
  const __int128 num = static_cast<__int128>(a.num) * (b.den / g) +
                       static_cast<__int128>(b.num) * (a.den / g);
  const __int128 limit = INT64_MAX;
  if (den > limit || num > limit) {
    throw std::overflow_error("rational weight overflow");
  }
  return Rational::Make(static_cast<int64_t>(num), static_cast<int64_t>(den));
}

Portfolio Portfolio::UniformOver(std::vector<std::vector<int>> sets) {
  if (sets.empty()) throw std::invalid_argument("empty portfolio");
  std::map<std::vector<int>, int64_t> counts;
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    ++counts[set];
  }
  const int64_t total = static_cast<int64_t>(sets.size());
  Portfolio portfolio;
  for (const auto& [set, count] : counts) {
    portfolio.entries.push_back({set, Rational::Make(count, total)});
  }
  return portfolio;
}

Rational Portfolio::TotalWeight() const {
  Rational total;
  for (const PortfolioEntry& e : entries) total = total + e.weight;
  return total;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> Replace(const std::vector<int>& set, int out, int in) {
  std::vector<int> result;
  result.reserve(set.size());
  for (int e : set) {
    if (e != out) result.push_back(e);
  }
  result.insert(std::upper_bound(result.begin(), result.end(), in), in);
  return result;
}

void RequireBase(const std::vector<int>& set, const Matroid& matroid) {
  if (!matroid.IsBase(set)) {
    throw std::invalid_argument("swap rounding input is not a base");
  }
}

}  // namespace

std::vector<int> MergeBases(std::vector<int> first, double first_weight,
                            std::vector<int> second, double second_weight,
                            const Matroid& matroid, Rng& rng) {
  if (!(first_weight > 0.0 && second_weight > 0.0)) {
    throw std::invalid_argument("merge weights must be positive");
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  RequireBase(first, matroid);
  RequireBase(second, matroid);
  const double keep_first = first_weight / (first_weight + second_weight);
  while (first != second) {
    std::vector<int> only_first;
    std::vector<int> only_second;
    std::set_difference(first.begin(), first.end(), second.begin(),
                        second.end(), std::back_inserter(only_first));
    std::set_difference(second.begin(), second.end(), first.begin(),
                        first.end(), std::back_inserter(only_second));
    const int i = only_first.front();
    bool swapped = false;
    for (int j : only_second) {
      std::vector<int> first_swapped = Replace(first, i, j);
      std::vector<int> second_swapped = Replace(second, j, i);
      if (!matroid.IsIndependent(first_swapped) ||
          !matroid.IsIndependent(second_swapped)) {
        continue;
      }
      if (Uniform01(rng) < keep_first) {
        second = std::move(second_swapped);
      } else {
        first = std::move(first_swapped);
      }
      swapped = true;
      break;
    }
    if (!swapped) {
      throw std::logic_error("no symmetric exchange found for element " +
                             std::to_string(i) +
                             "; the matroid oracle is inconsistent");
    }
  }
  return first;
}

std::vector<int> SwapRound(const VertexDecomposition& decomposition,
                           const Matroid& matroid, Rng& rng) {
  if (decomposition.vertices.empty()) {
    throw std::invalid_argument("empty decomposition");
  }
  std::vector<int> merged = SupportOf(decomposition.vertices.front());
  double weight = decomposition.weights.front();
  if (!(weight > 0.0)) throw std::invalid_argument("weights must be positive");
  RequireBase(merged, matroid);
  for (size_t k = 1; k < decomposition.vertices.size(); ++k) {
    merged = MergeBases(std::move(merged), weight,
                        SupportOf(decomposition.vertices[k]),
                        decomposition.weights[k], matroid, rng);
    weight += decomposition.weights[k];
  }
  return merged;
}

int DefaultCopies(int horizon) {
  return std::max(1, static_cast<int>(std::ceil(std::pow(horizon, 0.2) - 1e-9)));
}

int DefaultRoundings(int horizon) {
  return std::max(1, static_cast<int>(std::ceil(std::pow(horizon, 0.75) - 1e-9)));
}

// ---------------------------------------------------------------------------

namespace {

class AveragedMultilinearStream : public FunctionStream {
 public:
  AveragedMultilinearStream(const SetScenarioSource& source,
                            SetFunctionPtr set_function, int copies,
                            int samples, uint64_t seed)
      : source_(source),
        set_function_(std::move(set_function)),
        copies_(copies),
        samples_(samples),
        seed_(seed) {}

  DrFunctionPtr Next() override {
    std::optional<SetScenario> z = source_();
    if (!z) return nullptr;
    auto base = std::make_shared<MultilinearFunction>(
        set_function_, std::move(*z), samples_, DeriveSeed(seed_, count_++));
    return std::make_shared<AveragedCopiesFunction>(std::move(base), copies_);
  }

 private:
  const SetScenarioSource& source_;
  SetFunctionPtr set_function_;
  int copies_;
  int samples_;
  uint64_t seed_;
  uint64_t count_ = 0;
};

}  // namespace

PortfolioResult BuildPortfolio(const SetScenarioSource& source,
                               SetFunctionPtr set_function, MatroidPtr matroid,
                               const PortfolioParams& params,
                               const TraceOptions& trace) {
  if (params.copies < 1 || params.roundings < 1) {
    throw std::invalid_argument("copies r and roundings q must be >= 1");
  }
  if (set_function->ground_size() != matroid->ground_size()) {
    throw std::invalid_argument("set function and matroid ground sets differ");
  }
  const size_t n = matroid->ground_size();
  auto base = std::make_shared<MatroidBasePolytope>(matroid);
  const ProductRegion region(base, params.copies);
  AveragedMultilinearStream stream(source, set_function, params.copies,
                                   params.multilinear_samples,
                                   DeriveSeed(params.run.seed, 0x6d6c));

  PortfolioResult result;
  result.run = StochasticRascal(stream, region, params.run, trace);

  std::vector<std::vector<int>> rounded;
  const uint64_t rounding_seed = DeriveSeed(params.run.seed, 0x7277);
  uint64_t task = 0;
  for (const VertexDecomposition& point : result.run.batch_points) {
    for (int i = 0; i < params.copies; ++i) {
      VertexDecomposition copy(n);
      for (size_t k = 0; k < point.vertices.size(); ++k) {
        const auto& v = point.vertices[k];
        copy.Add(point.weights[k],
                 Vec(v.begin() + static_cast<std::ptrdiff_t>(i * n),
                     v.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
      }
      for (int j = 0; j < params.roundings; ++j) {
        Rng rng(DeriveSeed(rounding_seed, task++));
        rounded.push_back(SwapRound(copy, *matroid, rng));
      }
    }
  }
  result.portfolio = Portfolio::UniformOver(std::move(rounded));
  return result;
}

double PortfolioCvar(const Portfolio& portfolio,
                     std::span<const SetScenario> scenarios,
                     const SetFunction& set_function, double alpha) {
  if (scenarios.empty()) throw std::invalid_argument("no scenarios");
  const size_t n = set_function.ground_size();
  Vec values(scenarios.size(), 0.0);
  Membership members(n);
  for (const PortfolioEntry& entry : portfolio.entries) {
    std::fill(members.begin(), members.end(), 0);
    for (int e : entry.set) members.at(e) = 1;
    const double w = entry.weight.ToDouble();
    for (size_t z = 0; z < scenarios.size(); ++z) {
      values[z] += w * set_function.Evaluate(members, scenarios[z]);
    }
  }
  return EmpiricalCvar(values, alpha);
}

void WritePortfolioCsv(const Portfolio& portfolio, std::ostream& out) {
  out << "weight,set\n";
  for (const PortfolioEntry& entry : portfolio.entries) {
    out << entry.weight.num << '/' << entry.weight.den << ',';
    for (size_t i = 0; i < entry.set.size(); ++i) {
      if (i > 0) out << ';';
      out << entry.set[i];
    }
    out << '\n';
  }
}

Portfolio ReadPortfolioCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "weight,set") {
    throw IoError("portfolio CSV must start with the header 'weight,set'");
  }
  Portfolio portfolio;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    const size_t slash = line.find('/');
    if (comma == std::string::npos || slash == std::string::npos ||
        slash > comma) {
      throw IoError("malformed portfolio row at line " + std::to_string(line_no));
    }
    PortfolioEntry entry;
    try {
      entry.weight = Rational::Make(std::stoll(line.substr(0, slash)),
                                    std::stoll(line.substr(slash + 1, comma - slash - 1)));
      std::stringstream ids(line.substr(comma + 1));
      std::string id;
      while (std::getline(ids, id, ';')) {
        if (!id.empty()) entry.set.push_back(std::stoi(id));
      }
    } catch (const std::logic_error&) {
      throw IoError("malformed portfolio row at line " + std::to_string(line_no));
    }
    std::sort(entry.set.begin(), entry.set.end());
    portfolio.entries.push_back(std::move(entry));
  }
  return portfolio;
}

}  // namespace rascal
