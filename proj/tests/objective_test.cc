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

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"
#include "oracles.h"

namespace rascal {
namespace {

SensorObjective Obj(double p, bool normalize = true) {
  SensorObjective o;
  o.p = p;
  o.normalize = normalize;
  return o;
}

struct RandomInstance {
  Vec x;
  ScenarioTimes z;
  double p;
};

RandomInstance MakeInstance(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomInstance inst;
  Vec times(n);
  for (double& t : times) t = 10.0 * unit(rng);
  // Shared times check the tie-breaking path.
  if (n > 2 && unit(rng) < 0.3) times[2] = times[1];
  inst.z = ScenarioTimes::FromReachTimes(times);
  inst.x.resize(n);
  for (double& v : inst.x) v = 3.0 * unit(rng);
  inst.p = 0.05 + 0.6 * unit(rng);
  return inst;
}

TEST(SensorValueTest, ZeroAllocationSavesNothing) {
  const auto z = ScenarioTimes::FromReachTimes({0.0, 2.0, 5.0});
  EXPECT_EQ(SensorValue(Vec{0, 0, 0}, z, Obj(0.3)), 0.0);
}

TEST(SensorValueTest, TwoVertexHandValues) {
  const auto z = ScenarioTimes::FromReachTimes({1.0, 3.0});
  EXPECT_NEAR(SensorValue(Vec{1, 0}, z, Obj(0.5)), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(oracle::SensorByEnumeration({1, 0}, {1, 3}, 0.5), 1.0 / 3.0,
              1e-15);
  EXPECT_NEAR(SensorValue(Vec{30, 0}, z, Obj(0.5)), 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(oracle::SensorByEnumeration({30, 0}, {1, 3}, 0.5), 2.0 / 3.0,
              1e-6);
}

TEST(SensorValueTest, MatchesEnumerationOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomInstance inst = MakeInstance(rng, 1 + trial % 8);
    EXPECT_NEAR(SensorValue(inst.x, inst.z, Obj(inst.p)),
                oracle::SensorByEnumeration(inst.x, inst.z.reach_time, inst.p),
                1e-12);
  }
}

TEST(SensorValueTest, UndetectedCountedFormAddsMissMass) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const RandomInstance inst = MakeInstance(rng, 1 + trial % 6);
    SensorObjective obj = Obj(inst.p);
    obj.form = SensorForm::kUndetectedCounted;
    EXPECT_NEAR(SensorValue(inst.x, inst.z, obj),
                oracle::SensorByEnumeration(inst.x, inst.z.reach_time, inst.p,
                                            /*undetected_counted=*/true),
                1e-12);
  }
  const auto z = ScenarioTimes::FromReachTimes({1.0, 3.0});
  SensorObjective obj = Obj(0.5);
  obj.form = SensorForm::kUndetectedCounted;
  EXPECT_DOUBLE_EQ(SensorValue(Vec{0, 0}, z, obj), 1.0);
}

TEST(SensorValueTest, UnnormalizedScalesByZmax) {
  const auto z = ScenarioTimes::FromReachTimes({1.0, 3.0});
  EXPECT_NEAR(SensorValue(Vec{1, 0}, z, Obj(0.5, false)), 1.0, 1e-15);
}

TEST(SensorValueTest, DegenerateScenarioIsZero) {
  const auto z = ScenarioTimes::FromReachTimes({0.0, 0.0});
  EXPECT_TRUE(z.degenerate());
  EXPECT_EQ(SensorValue(Vec{1, 1}, z, Obj(0.5)), 0.0);
  EXPECT_EQ(SensorGradient(Vec{1, 1}, z, Obj(0.5)), (Vec{0, 0}));
}

TEST(SensorValueTest, Errors) {
  const auto z = ScenarioTimes::FromReachTimes({1.0, 3.0});
  EXPECT_THROW(SensorValue(Vec{1.0}, z, Obj(0.5)), std::invalid_argument);
  EXPECT_THROW(SensorValue(Vec{-0.1, 0}, z, Obj(0.5)), std::invalid_argument);
  EXPECT_THROW(Obj(0.0).Validate(), std::invalid_argument);
  EXPECT_THROW(Obj(1.2).Validate(), std::invalid_argument);
  EXPECT_NO_THROW(Obj(1.0).Validate());
  EXPECT_THROW(ScenarioTimes::FromReachTimes({-1.0, 2.0}),
               std::invalid_argument);
}

TEST(SensorGradientTest, SingleVertexAtZmaxIsZero) {
  const auto z = ScenarioTimes::FromReachTimes({4.0});
  EXPECT_EQ(SensorGradient(Vec{0.0}, z, Obj(0.2))[0], 0.0);
}

TEST(SensorGradientTest, TwoVertexAtOrigin) {
  const auto z = ScenarioTimes::FromReachTimes({1.0, 3.0});
  const Vec g = SensorGradient(Vec{0, 0}, z, Obj(0.5));
  EXPECT_NEAR(g[0], (2.0 / 3.0) * std::log(2.0), 1e-15);
  const auto f = [&](const Vec& x) {
    return oracle::SensorByEnumeration(x, {1, 3}, 0.5);
  };
  // One-sided at the boundary would be needed at x=0; evaluate the
  // enumeration oracle's analytic continuation via a symmetric stencil.
  EXPECT_NEAR(oracle::CentralDifference(f, {0, 0}, 0, 1e-5), g[0], 1e-9);
  EXPECT_EQ(g[1], 0.0);
}

TEST(SensorGradientTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomInstance inst = MakeInstance(rng, 8);
    for (double& v : inst.x) v += 0.01;  // keep x - h inside the domain
    const SensorObjective obj = Obj(inst.p);
    const Vec g = SensorGradient(inst.x, inst.z, obj);
    const auto f = [&](const Vec& x) { return SensorValue(x, inst.z, obj); };
    for (size_t i = 0; i < g.size(); ++i) {
      EXPECT_GE(g[i], 0.0);
      const double fd = oracle::CentralDifference(f, inst.x, i, 1e-5);
      const double rel = std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-3);
      worst = std::max(worst, rel);
    }
  }
  EXPECT_LE(worst, 1e-5);
}

TEST(SensorGradientTest, UndefinedAtPOne) {
  const auto z = ScenarioTimes::FromReachTimes({1.0, 3.0});
  EXPECT_THROW(SensorGradient(Vec{0, 0}, z, Obj(1.0)), std::invalid_argument);
}

TEST(SensorFunctionTest, MatchesFreeFunctions) {
  std::mt19937_64 rng(24);
  const RandomInstance inst = MakeInstance(rng, 6);
  SensorFunction f(std::make_shared<ScenarioTimes>(inst.z), Obj(inst.p));
  EXPECT_EQ(f.Value(inst.x), SensorValue(inst.x, inst.z, Obj(inst.p)));
  EXPECT_EQ(f.Gradient(inst.x), SensorGradient(inst.x, inst.z, Obj(inst.p)));
}

TEST(SensorPropertyTest, MonotoneDrAndInRange) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomInstance inst = MakeInstance(rng, 2 + trial % 7);
    const SensorObjective obj = Obj(inst.p);
    Vec y = inst.x;
    for (double& v : y) v += 2.0 * unit(rng);
    const double fx = SensorValue(inst.x, inst.z, obj);
    const double fy = SensorValue(y, inst.z, obj);
    EXPECT_LE(fx, fy + 1e-12);
    EXPECT_GE(fx, 0.0);
    EXPECT_LE(fy, 1.0);
    const size_t i = trial % inst.x.size();
    const double h = 0.5 * unit(rng);
    Vec xh = inst.x;
    Vec yh = y;
    xh[i] += h;
    yh[i] += h;
    EXPECT_GE(SensorValue(xh, inst.z, obj) - fx,
              SensorValue(yh, inst.z, obj) - fy - 1e-9);
  }
}

TEST(AveragedCopiesTest, AveragesBlocks) {
  auto base = std::make_shared<LinearFunction>(Vec{1.0, 2.0});
  AveragedCopiesFunction f(base, 2);
  EXPECT_DOUBLE_EQ(f.Value(Vec{1, 0, 0, 1}), 1.5);
  EXPECT_EQ(f.Gradient(Vec{0, 0, 0, 0}), (Vec{0.5, 1.0, 0.5, 1.0}));
}

// ---- Multilinear estimators ----

CoverageSetFunction MakeCoverage(std::mt19937_64& rng, size_t n,
                                 size_t items) {
  std::vector<std::vector<int>> covers(n);
  for (auto& c : covers) {
    for (size_t j = 0; j < items; ++j) {
      if (rng() % 3 == 0) c.push_back(static_cast<int>(j));
    }
  }
  return CoverageSetFunction(covers, items);
}

TEST(MultilinearTest, IntegralPointIsExact) {
  std::mt19937_64 rng(31);
  const CoverageSetFunction f = MakeCoverage(rng, 6, 8);
  const SetScenario z(8, 1.0);
  const Vec x = {1, 0, 1, 0, 0, 1};
  const Membership m = {1, 0, 1, 0, 0, 1};
  Rng r(1);
  EXPECT_EQ(MultilinearValueEstimate(f, x, z, 3, r), f.Evaluate(m, z));
  const Vec g = MultilinearGradientEstimate(f, x, z, 3, r);
  for (size_t i = 0; i < x.size(); ++i) {
    Membership with = m;
    Membership without = m;
    with[i] = 1;
    without[i] = 0;
    EXPECT_NEAR(g[i], f.Evaluate(with, z) - f.Evaluate(without, z), 1e-15);
  }
}

TEST(MultilinearTest, ModularValueWithinFourSigma) {
  const size_t n = 6;
  const ModularSetFunction f(n, 1.0);
  const SetScenario w = {0.1, 0.3, 0.05, 0.2, 0.15, 0.2};
  const Vec x = {0.2, 0.5, 0.9, 0.1, 0.7, 0.4};
  double exact = 0.0;
  double variance = 0.0;
  for (size_t i = 0; i < n; ++i) {
    exact += w[i] * x[i];
    variance += w[i] * w[i] * x[i] * (1 - x[i]);
  }
  const int m = 10000;
  Rng rng(2);
  EXPECT_NEAR(MultilinearValueEstimate(f, x, w, m, rng), exact,
              4.0 * std::sqrt(variance / m));
}

TEST(MultilinearTest, ModularGradientIsExact) {
  const ModularSetFunction f(4, 2.0);
  const SetScenario w = {0.4, 0.2, 0.6, 0.8};
  Rng rng(3);
  const Vec g = MultilinearGradientEstimate(f, Vec{0.3, 0.3, 0.3, 0.3}, w, 5, rng);
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(g[i], w[i] / 2.0, 1e-15);
}

TEST(MultilinearTest, CoverageMatchesEnumeration) {
  std::mt19937_64 rng(32);
  const size_t n = 10;
  const CoverageSetFunction f = MakeCoverage(rng, n, 12);
  SetScenario z(12);
  for (double& v : z) v = 0.5 + (rng() % 100) / 100.0;
  const Vec x(n, 0.5);
  const auto exact_f = [&](const std::vector<uint8_t>& s) {
    return f.Evaluate(s, z);
  };
  const double exact = oracle::MultilinearExact(x, exact_f);
  // Variance of f(S) under the product distribution, by enumeration.
  const double second = oracle::MultilinearExact(
      x, [&](const std::vector<uint8_t>& s) {
        const double v = f.Evaluate(s, z);
        return v * v;
      });
  const int m = 20000;
  Rng r(4);
  const double sigma = std::sqrt((second - exact * exact) / m);
  EXPECT_NEAR(MultilinearValueEstimate(f, x, z, m, r), exact, 4.0 * sigma);

  // Gradient entry i: F(x | x_i=1) - F(x | x_i=0), enumerated.
  const Vec g = MultilinearGradientEstimate(f, x, z, m, r);
  for (size_t i = 0; i < n; ++i) {
    Vec hi = x;
    Vec lo = x;
    hi[i] = 1.0;
    lo[i] = 0.0;
    const double exact_g =
        oracle::MultilinearExact(hi, exact_f) - oracle::MultilinearExact(lo, exact_f);
    // Marginal gains lie in [0, 1], so their variance is at most 1/4.
    EXPECT_NEAR(g[i], exact_g, 4.0 * std::sqrt(0.25 / m));
    EXPECT_GE(g[i], 0.0);
  }
}

TEST(MultilinearTest, UnbiasedOverRepeats) {
  std::mt19937_64 rng(33);
  const size_t n = 8;
  const CoverageSetFunction f = MakeCoverage(rng, n, 10);
  const SetScenario z(10, 1.0);
  Vec x(n);
  for (double& v : x) v = (rng() % 1000) / 1000.0;
  const double exact = oracle::MultilinearExact(
      x, [&](const std::vector<uint8_t>& s) { return f.Evaluate(s, z); });
  const int repeats = 2000;
  Rng r(5);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < repeats; ++k) {
    const double e = MultilinearValueEstimate(f, x, z, 10, r);
    sum += e;
    sum_sq += e * e;
  }
  const double mean = sum / repeats;
  const double sd = std::sqrt(std::max(sum_sq / repeats - mean * mean, 1e-12));
  EXPECT_NEAR(mean, exact, 4.0 * sd / std::sqrt(repeats));
}

TEST(MultilinearTest, RejectsPointsOutsideCube) {
  const ModularSetFunction f(2, 1.0);
  Rng rng(1);
  EXPECT_THROW(MultilinearValueEstimate(f, Vec{1.5, 0}, {1, 1}, 5, rng),
               std::invalid_argument);
  EXPECT_THROW(MultilinearGradientEstimate(f, Vec{-0.5, 0}, {1, 1}, 5, rng),
               std::invalid_argument);
  EXPECT_THROW(MultilinearValueEstimate(f, Vec{0.5, 0}, {1, 1}, 0, rng),
               std::invalid_argument);
}

TEST(MultilinearFunctionTest, PureAndDeterministic) {
  auto f = std::make_shared<ModularSetFunction>(3, 1.0);
  MultilinearFunction a(f, {0.2, 0.3, 0.5}, 50, 9);
  MultilinearFunction b(f, {0.2, 0.3, 0.5}, 50, 9);
  const Vec x = {0.4, 0.6, 0.1};
  EXPECT_EQ(a.Value(x), a.Value(x));
  EXPECT_EQ(a.Value(x), b.Value(x));
  EXPECT_EQ(a.Gradient(x), b.Gradient(x));
}

TEST(SetFunctionTest, CoverageIsMonotoneSubmodularAndZeroAtEmpty) {
  std::mt19937_64 rng(34);
  const size_t n = 6;
  const CoverageSetFunction f = MakeCoverage(rng, n, 7);
  const SetScenario z = {0.3, 1.0, 0.2, 0.5, 0.9, 0.1, 0.4};
  const auto eval = [&](unsigned mask) {
    Membership m(n);
    for (size_t i = 0; i < n; ++i) m[i] = (mask >> i) & 1u;
    return f.Evaluate(m, z);
  };
  EXPECT_EQ(eval(0), 0.0);
  for (unsigned a = 0; a < (1u << n); ++a) {
    for (unsigned b = a;; b = (b + 1) | a) {  // supersets of a
      if (b >= (1u << n)) break;
      EXPECT_LE(eval(a), eval(b) + 1e-15);
      for (size_t i = 0; i < n; ++i) {
        if (b & (1u << i)) continue;
        EXPECT_GE(eval(a | (1u << i)) - eval(a),
                  eval(b | (1u << i)) - eval(b) - 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace rascal
