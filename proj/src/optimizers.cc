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

#include "rascal/optimizers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rascal/risk.h"

namespace rascal {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void FillTraceColumns(std::span<const double> x, double alpha,
                      const TraceOptions& options, TraceRecord& row) {
  if (options.holdout.empty()) {
    row.holdout_cvar = std::numeric_limits<double>::quiet_NaN();
    row.holdout_mean = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const CvarEvaluation eval = EvaluateCvar(x, options.holdout, alpha);
  row.holdout_cvar = eval.cvar;
  row.holdout_mean = eval.mean;
}

}  // namespace

const char* PerturbationName(PerturbationKind kind) {
  return kind == PerturbationKind::kUniformCube ? "uniform-cube"
                                                : "standard-gaussian";
}

void RunParams::Validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon T must be positive");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (batch_size > horizon) {
    throw std::invalid_argument("batch size " + std::to_string(batch_size) +
                                " exceeds horizon " + std::to_string(horizon));
  }
  if (steps < 1) throw std::invalid_argument("1/delta must be a positive integer");
  if (!(fpl_rate > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(ogd_rate > 0.0)) throw std::invalid_argument("eta must be positive");
  smoothing().Validate();
}

RunParams ScheduleContinuous(const ScheduleInputs& in) {
  const double values[] = {in.alpha, in.diameter, in.grad_bound, in.lipschitz,
                           in.smoothness};
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("schedule inputs must be positive");
  }
  if (in.alpha > 1.0) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (in.dim < 1) throw std::invalid_argument("dimension must be positive");
  if (in.horizon < 16) throw std::invalid_argument("schedule needs T >= 16");

  const double t = in.horizon;
  const double alpha = in.alpha;
  const double c_alpha = std::max(1.0, 1.0 / alpha - 1.0);
  const double n = static_cast<double>(in.dim);
  const double d = in.diameter;
  const double g = in.grad_bound;

  double raw_batch;
  if (in.integral_rank) {
    const double k = *in.integral_rank;
    if (k < 1) throw std::invalid_argument("integral rank must be positive");
    if (in.dim < 2) throw std::invalid_argument("integral schedule needs n >= 2");
    raw_batch = std::sqrt(2.0) * c_alpha * std::sqrt(t) * alpha /
                (2.0 * g * std::pow(k, 1.5) * std::sqrt(std::log(n)));
  } else {
    raw_batch = alpha * c_alpha * std::sqrt(t) / (d * g * std::pow(n, 0.25));
  }
  const double rounded = std::round(raw_batch);
  if (rounded < 1.0) {
    throw NumericError("mini-batch size rounds to zero (B = " +
                       std::to_string(raw_batch) + " from T = " +
                       std::to_string(in.horizon) + ", C_alpha = " +
                       std::to_string(c_alpha) + ", D = " + std::to_string(d) +
                       ", G = " + std::to_string(g) + ")");
  }

  RunParams p;
  p.horizon = in.horizon;
  p.alpha = alpha;
  p.batch_size = static_cast<int>(std::min(rounded, t));
  const double b = p.batch_size;
  const double delta =
      alpha * alpha /
      (d * d * ((1.0 + alpha) * g * in.lipschitz * std::sqrt(t) +
                alpha * in.smoothness * std::pow(t, 0.25)));
  const double inv_delta = std::ceil(1.0 / delta - 1e-9);
  if (inv_delta > std::numeric_limits<int>::max()) {
    throw NumericError("1/delta overflows: " + std::to_string(inv_delta));
  }
  p.steps = static_cast<int>(inv_delta);
  p.u = std::pow(t, -0.25) / (1.0 + 1.0 / alpha);
  p.ogd_rate = 1.0 / (c_alpha * std::sqrt(b));
  if (in.integral_rank) {
    p.fpl_rate = std::sqrt(b / (t * *in.integral_rank));
    p.perturbation = PerturbationKind::kStandardGaussian;
  } else {
    p.fpl_rate = alpha * d * std::pow(n, 0.25) * std::sqrt(b / t) / g;
    p.perturbation = PerturbationKind::kUniformCube;
  }
  return p;
}

Vec DrawPerturbation(size_t n, PerturbationKind kind, Rng& rng) {
  Vec r(n);
  if (kind == PerturbationKind::kUniformCube) {
    for (double& v : r) v = Uniform01(rng);
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : r) v = normal(rng);
  }
  return r;
}

Vec FplStepWithPerturbation(std::span<const double> accumulated, double lambda,
                            std::span<const double> perturbation,
                            const FeasibleRegion& region) {
  if (accumulated.size() != region.dim() ||
      perturbation.size() != region.dim()) {
    throw std::invalid_argument("FPL: dimension mismatch");
  }
  Vec w(accumulated.size());
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] = lambda * accumulated[i] + perturbation[i];
  }
  return region.LinearMaximize(w);
}

Vec FplStep(std::span<const double> accumulated, double lambda,
            PerturbationKind kind, const FeasibleRegion& region, Rng& rng) {
  const Vec r = DrawPerturbation(region.dim(), kind, rng);
  return FplStepWithPerturbation(accumulated, lambda, r, region);
}

double OgdTauStep(double tau, double gamma, double eta) {
  return std::clamp(tau + eta * gamma, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

void VertexDecomposition::Add(double weight, Vec vertex) {
  if (point.empty()) point.assign(vertex.size(), 0.0);
  if (vertex.size() != point.size()) {
    throw std::invalid_argument("vertex dimension mismatch");
  }
  for (size_t i = 0; i < point.size(); ++i) point[i] += weight * vertex[i];
  weights.push_back(weight);
  vertices.push_back(std::move(vertex));
}

double VertexDecomposition::WeightSum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Vec VertexDecomposition::Prefix(size_t count) const {
  Vec x(point.size(), 0.0);
  for (size_t k = 0; k < count; ++k) {
    for (size_t i = 0; i < x.size(); ++i) x[i] += weights[k] * vertices[k][i];
  }
  return x;
}

void GreedyState::Accumulate(int s, std::span<const double> gradient) {
  Vec& slot = slots_.at(s);
  if (gradient.size() != slot.size()) {
    throw std::invalid_argument("gradient dimension mismatch in GreedyState");
  }
  for (size_t i = 0; i < slot.size(); ++i) slot[i] += gradient[i];
}

GreedyBatchResult ContinuousGreedyBatch(std::span<const DrFunctionPtr> batch,
                                        const FeasibleRegion& region,
                                        GreedyState& state,
                                        const RunParams& params, Rng& rng,
                                        const GreedyObserver& observer) {
  if (static_cast<int>(batch.size()) != params.batch_size) {
    throw std::invalid_argument("batch holds " + std::to_string(batch.size()) +
                                " scenarios, expected " +
                                std::to_string(params.batch_size));
  }
  if (state.steps() != params.steps) {
    throw std::invalid_argument("greedy state has the wrong number of slots");
  }
  const SmoothingParams smoothing = params.smoothing();
  const double delta = params.delta();
  GreedyBatchResult result{VertexDecomposition(region.dim()), 0.0};
  for (int s = 0; s < params.steps; ++s) {
    const BatchEvaluation eval =
        EvaluateBatch(result.decomposition.point, batch, smoothing);
    result.tau = eval.tau;
    state.Accumulate(s, eval.gradient);
    if (observer) observer(s, eval.gradient, state.slot(s));
    Vec direction = FplStep(state.slot(s), params.fpl_rate,
                            params.perturbation, region, rng);
    result.decomposition.Add(delta, std::move(direction));
  }
  state.FinishBatch();
  return result;
}

// ---------------------------------------------------------------------------

PoolSampler::PoolSampler(std::vector<DrFunctionPtr> pool, uint64_t seed)
    : pool_(std::move(pool)), rng_(seed) {
  if (pool_.empty()) throw std::invalid_argument("empty scenario pool");
}

DrFunctionPtr PoolSampler::Next() {
  return pool_[UniformIndex(rng_, pool_.size())];
}

CvarEvaluation EvaluateCvar(std::span<const double> x,
                            std::span<const DrFunctionPtr> scenarios,
                            double alpha) {
  if (scenarios.empty()) throw std::invalid_argument("no scenarios to evaluate");
  Vec values(scenarios.size());
  for (size_t i = 0; i < scenarios.size(); ++i) values[i] = scenarios[i]->Value(x);
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  return {EmpiricalCvar(values, alpha), mean};
}

StochasticResult StochasticRascal(FunctionStream& stream,
                                  const FeasibleRegion& region,
                                  const RunParams& params,
                                  const TraceOptions& trace,
                                  const GreedyObserver& observer) {
  params.Validate();
  const auto start = Clock::now();
  Rng rng(params.seed);
  GreedyState state(params.steps, region.dim());
  StochasticResult result;
  result.effective_horizon = params.effective_horizon();
  std::vector<DrFunctionPtr> batch(params.batch_size);
  for (int b = 0; b < params.num_batches(); ++b) {
    for (int i = 0; i < params.batch_size; ++i) {
      batch[i] = stream.Next();
      if (!batch[i]) {
        throw std::runtime_error(
            "scenario stream exhausted after " +
            std::to_string(b * params.batch_size + i) + " of " +
            std::to_string(result.effective_horizon) + " samples");
      }
    }
    GreedyBatchResult step =
        ContinuousGreedyBatch(batch, region, state, params, rng, observer);
    TraceRecord row;
    row.batch = b + 1;
    row.samples = static_cast<int64_t>(b + 1) * params.batch_size;
    row.tau = step.tau;
    FillTraceColumns(step.decomposition.point, params.alpha, trace, row);
    row.wallclock_ms = trace.wallclock ? ElapsedMs(start) : 0.0;
    result.trace.push_back(row);
    result.batch_taus.push_back(step.tau);
    result.batch_points.push_back(std::move(step.decomposition));
  }
  result.chosen_batch =
      static_cast<int>(UniformIndex(rng, result.batch_points.size()));
  result.final_point = result.batch_points[result.chosen_batch].point;
  return result;
}

// ---------------------------------------------------------------------------

OnlineResult OnlineRascal(std::span<const DrFunctionPtr> sequence,
                          const FeasibleRegion& region,
                          const RunParams& params) {
  params.Validate();
  if (static_cast<int>(sequence.size()) != params.horizon) {
    throw std::invalid_argument("sequence length " +
                                std::to_string(sequence.size()) +
                                " differs from horizon " +
                                std::to_string(params.horizon));
  }
  const SmoothingParams smoothing = params.smoothing();
  const int batch_size = params.batch_size;
  const double delta = params.delta();
  Rng rng(params.seed);
  GreedyState state(params.steps, region.dim());

  OnlineResult result;
  result.batch_size = batch_size;
  // x_1 = 0, written as 1/delta steps toward the origin so that its
  // trajectory x_1^s is defined.
  VertexDecomposition current(region.dim());
  for (int s = 0; s < params.steps; ++s) current.Add(delta, Vec(region.dim(), 0.0));

  double tau = 0.0;
  for (int b = 0; b < params.num_batches(); ++b) {
    result.batch_points.push_back(current.point);
    const auto batch = sequence.subspan(static_cast<size_t>(b) * batch_size,
                                        batch_size);
    for (const DrFunctionPtr& f : batch) {
      result.taus.push_back(tau);
      const double gamma = TauSubgradient(f->Value(current.point), tau, smoothing);
      tau = OgdTauStep(tau, gamma, params.ogd_rate);
    }
    VertexDecomposition next(region.dim());
    for (int s = 0; s < params.steps; ++s) {
      const Vec x_s = current.Prefix(static_cast<size_t>(s));
      const BatchEvaluation eval = EvaluateBatch(x_s, batch, smoothing);
      state.Accumulate(s, eval.gradient);
      next.Add(delta, FplStep(state.slot(s), params.fpl_rate,
                              params.perturbation, region, rng));
    }
    state.FinishBatch();
    current = std::move(next);
  }
  result.next_point = current.point;
  return result;
}

double AchievedValue(std::span<const DrFunctionPtr> sequence,
                     const OnlineResult& plays, double alpha) {
  if (plays.rounds() != sequence.size()) {
    throw std::invalid_argument("plays and sequence differ in length");
  }
  double total = 0.0;
  for (size_t t = 0; t < sequence.size(); ++t) {
    total += HValue(sequence[t]->Value(plays.PointAt(t)), plays.taus[t], alpha);
  }
  return total;
}

namespace {

// Calls visit(weights) for every composition of `grid` into `parts`.
void ForEachComposition(int grid, size_t parts, std::vector<int>& current,
                        const std::function<void(const std::vector<int>&)>& visit) {
  if (current.size() + 1 == parts) {
    current.push_back(grid);
    visit(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= grid; ++k) {
    current.push_back(k);
    ForEachComposition(grid - k, parts, current, visit);
    current.pop_back();
  }
}

}  // namespace

double BestFixedComparator(std::span<const DrFunctionPtr> sequence,
                           double alpha, std::span<const Vec> vertices,
                           int grid) {
  if (vertices.empty() || sequence.empty() || grid < 1) {
    throw std::invalid_argument("comparator search needs vertices, a "
                                "nonempty sequence and grid >= 1");
  }
  const size_t n = vertices.front().size();
  double best = -std::numeric_limits<double>::infinity();
  Vec values(sequence.size());
  Vec x(n);
  std::vector<int> current;
  ForEachComposition(grid, vertices.size(), current,
                     [&](const std::vector<int>& counts) {
    std::fill(x.begin(), x.end(), 0.0);
    for (size_t v = 0; v < counts.size(); ++v) {
      if (counts[v] == 0) continue;
      const double w = static_cast<double>(counts[v]) / grid;
      for (size_t i = 0; i < n; ++i) x[i] += w * vertices[v][i];
    }
    for (size_t t = 0; t < sequence.size(); ++t) values[t] = sequence[t]->Value(x);
    // sum_t H(F_t(x), tau) = T * (tau - mean[tau - F]_+ / alpha).
    const double total = sequence.size() * CvarVariational(values, alpha).value;
    best = std::max(best, total);
  });
  return best;
}

double ApproxRegret(std::span<const DrFunctionPtr> sequence,
                    const OnlineResult& plays, double alpha, double ratio,
                    std::span<const Vec> vertices, int grid) {
  return ratio * BestFixedComparator(sequence, alpha, vertices, grid) -
         AchievedValue(sequence, plays, alpha);
}

// ---------------------------------------------------------------------------

namespace {

template <typename StepFn>
OfflineResult RunOfflineGreedy(std::span<const DrFunctionPtr> scenarios,
                               const FeasibleRegion& region, int steps,
                               double alpha, const TraceOptions& trace,
                               StepFn&& gradient_at) {
  if (scenarios.empty()) throw std::invalid_argument("no scenarios");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  const auto start = Clock::now();
  const double delta = 1.0 / steps;
  OfflineResult result{VertexDecomposition(region.dim()), {}};
  for (int s = 0; s < steps; ++s) {
    double tau = 0.0;
    const Vec gradient = gradient_at(result.solution.point, &tau);
    result.solution.Add(delta, region.LinearMaximize(gradient));
    TraceRecord row;
    row.batch = s + 1;
    row.samples = static_cast<int64_t>(scenarios.size());
    row.tau = tau;
    FillTraceColumns(result.solution.point, alpha, trace, row);
    row.wallclock_ms = trace.wallclock ? ElapsedMs(start) : 0.0;
    result.trace.push_back(row);
  }
  return result;
}

}  // namespace

OfflineResult OfflineRascal(std::span<const DrFunctionPtr> scenarios,
                            const FeasibleRegion& region, int steps,
                            const SmoothingParams& params,
                            const TraceOptions& trace) {
  params.Validate();
  return RunOfflineGreedy(scenarios, region, steps, params.alpha, trace,
                          [&](std::span<const double> x, double* tau) {
    BatchEvaluation eval = EvaluateBatch(x, scenarios, params);
    *tau = eval.tau;
    return std::move(eval.gradient);
  });
}

OfflineResult FrankWolfeExpectation(std::span<const DrFunctionPtr> scenarios,
                                    const FeasibleRegion& region, int steps,
                                    double alpha, const TraceOptions& trace) {
  return RunOfflineGreedy(scenarios, region, steps, alpha, trace,
                          [&](std::span<const double> x, double* tau) {
    Vec mean(x.size(), 0.0);
    Vec g(x.size());
    Vec values(scenarios.size());
    for (size_t i = 0; i < scenarios.size(); ++i) {
      values[i] = scenarios[i]->Value(x);
      scenarios[i]->Gradient(x, g);
      for (size_t j = 0; j < g.size(); ++j) mean[j] += g[j];
    }
    for (double& m : mean) m /= static_cast<double>(scenarios.size());
    *tau = CvarVariational(values, alpha).tau;
    return mean;
  });
}

}  // namespace rascal
