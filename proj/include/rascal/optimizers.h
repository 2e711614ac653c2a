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

#ifndef RASCAL_OPTIMIZERS_H_
#define RASCAL_OPTIMIZERS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rascal/common.h"
#include "rascal/feasible.h"
#include "rascal/objective.h"
#include "rascal/smoothing.h"

namespace rascal {

enum class PerturbationKind { kUniformCube, kStandardGaussian };

const char* PerturbationName(PerturbationKind kind);

// Hyperparameters of the mini-batched perturbed continuous greedy.
struct RunParams {
  int horizon = 1000;      // T
  int batch_size = 10;     // B
  int steps = 10;          // 1 / delta
  double fpl_rate = 1.0;   // lambda
  double ogd_rate = 0.1;   // eta
  double u = 0.01;
  double alpha = 0.1;
  PerturbationKind perturbation = PerturbationKind::kUniformCube;
  uint64_t seed = 0;

  double delta() const { return 1.0 / steps; }
  int num_batches() const { return horizon / batch_size; }
  // Horizon after discarding the trailing partial batch.
  int effective_horizon() const { return num_batches() * batch_size; }
  SmoothingParams smoothing() const { return {alpha, u}; }
  void Validate() const;
};

// Problem constants entering the step-size schedules.
struct ScheduleInputs {
  int horizon = 0;
  double alpha = 0.1;
  double diameter = 1.0;  // D
  double grad_bound = 1.0;  // G (G_inf for the integral variant)
  double lipschitz = 1.0;  // L
  double smoothness = 1.0;  // beta
  size_t dim = 1;  // n
  // Set for an integral polytope inside {x in [0,1]^n : sum x = k}.
  std::optional<int> integral_rank;
};

// Theoretical parameter choice for the O(T^{-1/4}) rate. B is rounded to the
// nearest positive integer and 1/delta up to an integer. Throws
// NumericError when B rounds to zero.
RunParams ScheduleContinuous(const ScheduleInputs& in);

Vec DrawPerturbation(size_t n, PerturbationKind kind, Rng& rng);

// argmax over the region of <lambda * accumulated + r, d> with r drawn
// fresh from the perturbation distribution.
Vec FplStep(std::span<const double> accumulated, double lambda,
            PerturbationKind kind, const FeasibleRegion& region, Rng& rng);
Vec FplStepWithPerturbation(std::span<const double> accumulated, double lambda,
                            std::span<const double> perturbation,
                            const FeasibleRegion& region);

// proj_[0,1](tau + eta * gamma).
double OgdTauStep(double tau, double gamma, double eta);

// A point stored as a convex combination of region vertices.
struct VertexDecomposition {
  Vec weights;
  std::vector<Vec> vertices;
  Vec point;

  explicit VertexDecomposition(size_t dim = 0) : point(dim, 0.0) {}
  void Add(double weight, Vec vertex);
  double WeightSum() const;
  // Partial sum of the first `count` terms.
  Vec Prefix(size_t count) const;
};

// Per inner step s, the running sum over batches of the batch gradients.
class GreedyState {
 public:
  GreedyState(int steps, size_t dim)
      : slots_(static_cast<size_t>(steps), Vec(dim, 0.0)) {}

  int steps() const { return static_cast<int>(slots_.size()); }
  const Vec& slot(int s) const { return slots_[s]; }
  void Accumulate(int s, std::span<const double> gradient);
  int batches() const { return batches_; }
  void FinishBatch() { ++batches_; }

 private:
  std::vector<Vec> slots_;
  int batches_ = 0;
};

// Receives (inner step, batch gradient, accumulated slot fed to FPL).
using GreedyObserver =
    std::function<void(int, std::span<const double>, std::span<const double>)>;

struct GreedyBatchResult {
  VertexDecomposition decomposition;
  double tau = 0.0;  // SmoothTau at the last inner step
};

// One mini-batch of perturbed continuous greedy starting from the origin.
// At inner step s: tau <- SmoothTau, g <- SmoothGrad, slot_s += g,
// d <- FPL(slot_s), x += delta d.
GreedyBatchResult ContinuousGreedyBatch(std::span<const DrFunctionPtr> batch,
                                        const FeasibleRegion& region,
                                        GreedyState& state,
                                        const RunParams& params, Rng& rng,
                                        const GreedyObserver& observer = {});

// Source of revealed functions F_t. Next() returns nullptr when exhausted.
class FunctionStream {
 public:
  virtual ~FunctionStream() = default;
  virtual DrFunctionPtr Next() = 0;
};

class VectorStream : public FunctionStream {
 public:
  explicit VectorStream(std::vector<DrFunctionPtr> items)
      : items_(std::move(items)) {}
  DrFunctionPtr Next() override {
    return next_ < items_.size() ? items_[next_++] : nullptr;
  }

 private:
  std::vector<DrFunctionPtr> items_;
  size_t next_ = 0;
};

// Uniform draws with replacement from a fixed pool; never exhausted.
class PoolSampler : public FunctionStream {
 public:
  PoolSampler(std::vector<DrFunctionPtr> pool, uint64_t seed);
  DrFunctionPtr Next() override;

 private:
  std::vector<DrFunctionPtr> pool_;
  Rng rng_;
};

struct TraceRecord {
  int batch = 0;
  int64_t samples = 0;
  double tau = 0.0;
  double holdout_cvar = 0.0;
  double holdout_mean = 0.0;
  double wallclock_ms = 0.0;
};

struct TraceOptions {
  // Scenarios for the per-batch CVaR columns; NaN columns when empty.
  std::span<const DrFunctionPtr> holdout;
  // Record elapsed time; when false the column is 0 so traces are
  // byte-reproducible.
  bool wallclock = false;
};

struct CvarEvaluation {
  double cvar = 0.0;
  double mean = 0.0;
};
CvarEvaluation EvaluateCvar(std::span<const double> x,
                            std::span<const DrFunctionPtr> scenarios,
                            double alpha);

struct StochasticResult {
  Vec final_point;
  int chosen_batch = 0;  // 0-based index of the returned batch point
  std::vector<VertexDecomposition> batch_points;
  std::vector<double> batch_taus;
  std::vector<TraceRecord> trace;
  int effective_horizon = 0;
};

// Mini-batched perturbed continuous greedy on an i.i.d. stream. Returns a
// uniformly chosen batch point together with every batch point.
StochasticResult StochasticRascal(FunctionStream& stream,
                                  const FeasibleRegion& region,
                                  const RunParams& params,
                                  const TraceOptions& trace = {},
                                  const GreedyObserver& observer = {});

struct OnlineResult {
  int batch_size = 0;
  std::vector<Vec> batch_points;  // x_b played throughout batch b
  std::vector<double> taus;       // tau_t per round
  Vec next_point;  // x after the last batch update

  const Vec& PointAt(size_t t) const { return batch_points[t / batch_size]; }
  size_t rounds() const { return taus.size(); }
};

// Adversarial variant: x_b is fixed before batch b is revealed, tau is
// learned within the batch by OGD, and x_{b+1} comes from FPL on gradients
// along x_b's continuous-greedy trajectory. tau starts at 0 and is carried
// over between batches.
OnlineResult OnlineRascal(std::span<const DrFunctionPtr> sequence,
                          const FeasibleRegion& region,
                          const RunParams& params);

// sum_t H(F_t(x_t), tau_t).
double AchievedValue(std::span<const DrFunctionPtr> sequence,
                     const OnlineResult& plays, double alpha);

// max over x in the grid of convex combinations (weights in multiples of
// 1/grid) of the given vertices, and over tau in [0, 1], of
// sum_t H(F_t(x), tau).
double BestFixedComparator(std::span<const DrFunctionPtr> sequence,
                           double alpha, std::span<const Vec> vertices,
                           int grid);

// ratio * best fixed comparator - achieved.
double ApproxRegret(std::span<const DrFunctionPtr> sequence,
                    const OnlineResult& plays, double alpha, double ratio,
                    std::span<const Vec> vertices, int grid);

struct OfflineResult {
  VertexDecomposition solution;
  std::vector<TraceRecord> trace;
};

// Unperturbed continuous greedy on max_tau mean_t HSmooth over the full
// scenario set.
OfflineResult OfflineRascal(std::span<const DrFunctionPtr> scenarios,
                            const FeasibleRegion& region, int steps,
                            const SmoothingParams& params,
                            const TraceOptions& trace = {});

// Continuous greedy on the empirical mean objective. `alpha` only affects
// the trace columns.
OfflineResult FrankWolfeExpectation(std::span<const DrFunctionPtr> scenarios,
                                    const FeasibleRegion& region, int steps,
                                    double alpha,
                                    const TraceOptions& trace = {});

}  // namespace rascal

#endif  // RASCAL_OPTIMIZERS_H_
