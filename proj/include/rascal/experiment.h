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

#ifndef RASCAL_EXPERIMENT_H_
#define RASCAL_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rascal/common.h"
#include "rascal/discrete.h"
#include "rascal/feasible.h"
#include "rascal/objective.h"
#include "rascal/optimizers.h"
#include "rascal/scenarios.h"

namespace rascal {

enum class Algorithm {
  kStochasticRascal,
  kOnlineRascal,
  kRascal,
  kFrankWolfe,
  kPortfolio,
};

Algorithm ParseAlgorithm(const std::string& name);
const char* AlgorithmName(Algorithm algorithm);

// Flat experiment configuration; every field maps to a config key and a
// command-line flag of the same name.
struct ExperimentConfig {
  // Edge-list path, or "er:<n>:<edge_prob>" for a generated graph.
  std::string graph = "er:50:0.08";
  std::string pool;  // scenario CSV; generated in memory when empty
  double lambda = 5.0;  // mean propagation delay
  double p = 0.01;
  double alpha = 0.1;
  double budget = 5.0;
  double cap = 0.0;  // per-vertex cap; 0 means cap = budget
  int pool_size = 1000;
  int holdout_size = 1000;
  int online_samples = 20000;  // T
  std::string algorithm = "stochastic-rascal";

  // Schedule overrides; 0 keeps the theoretical value.
  int batch_size = 0;
  int steps = 20;  // 1 / delta; 0 uses the theoretical delta
  double fpl_rate = 0.0;
  double ogd_rate = 0.0;
  double u = 0.0;
  int offline_steps = 50;

  // Portfolio (discrete) setting: sensors are 0/1 with `energy` units each.
  int matroid_k = 5;
  std::string partition;  // "0;1;2:1|3;4:2" = blocks with capacities
  double energy = 1.0;
  int r = 0;  // 0 uses ceil(T^{1/5})
  int q = 0;  // 0 uses ceil(T^{3/4})
  int multilinear_samples = kDefaultMultilinearSamples;

  uint64_t seed = 1;
  int jobs = 1;
  bool timing = false;  // wall-clock column; off keeps outputs reproducible
  std::string out = "out";

  void Validate() const;
};

// Reads `key = value` lines ('#' comments, optional [section] headers
// ignored) into the config. Unknown keys raise IoError.
void LoadConfigFile(const std::string& path, ExperimentConfig& config);
void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

// Instance shared by the commands.
struct Instance {
  Graph graph;
  std::vector<ScenarioTimes> pool;
  std::vector<ScenarioTimes> holdout;
  SensorObjective objective;
  std::vector<DrFunctionPtr> pool_functions;
  std::vector<DrFunctionPtr> holdout_functions;
};

Graph BuildGraph(const ExperimentConfig& config);
Instance BuildInstance(const ExperimentConfig& config);
std::shared_ptr<BudgetPolytope> BuildBudgetRegion(const ExperimentConfig& config,
                                                  size_t n);
MatroidPtr BuildMatroid(const ExperimentConfig& config, size_t n);

// Schedule for the continuous sensor problem with the config's overrides.
RunParams SensorRunParams(const ExperimentConfig& config,
                          const FeasibleRegion& region);

// f(S; z) = sensor value with `energy` units on every vertex of S; the
// scenario is the reach-time vector.
class SensorSetFunction : public SetFunction {
 public:
  SensorSetFunction(size_t n, SensorObjective objective, double energy)
      : n_(n), objective_(objective), energy_(energy) {}
  size_t ground_size() const override { return n_; }
  double Evaluate(std::span<const uint8_t> members,
                  const SetScenario& z) const override;

 private:
  size_t n_;
  SensorObjective objective_;
  double energy_;
};

struct RunOutcome {
  Algorithm algorithm = Algorithm::kStochasticRascal;
  std::vector<TraceRecord> trace;
  Vec allocation;  // continuous algorithms
  std::optional<Portfolio> portfolio;  // discrete algorithm
  double holdout_cvar = 0.0;
  double pool_cvar = 0.0;
  double holdout_mean = 0.0;
  RunParams params;
};

// Runs the configured algorithm on a prepared instance.
RunOutcome RunAlgorithm(const ExperimentConfig& config, const Instance& instance);

// CSV writers. Floats use 9 significant digits.
std::string FormatDouble(double value);
void WriteTraceCsv(std::span<const TraceRecord> trace, std::ostream& out);
void WriteAllocationCsv(std::span<const double> allocation, std::ostream& out);
Vec ReadAllocationCsv(std::istream& in);

// Commands. Each writes its files under config.out and a short summary to
// `log`. Throws IoError (exit 2) or NumericError (exit 1).
void CmdGenerate(const ExperimentConfig& config, std::ostream& log);
RunOutcome CmdRun(const ExperimentConfig& config, std::ostream& log);

struct SweepRow {
  std::string algorithm;
  std::string axis;
  double value = 0.0;
  uint64_t seed = 0;
  double holdout_cvar = 0.0;
  double pool_cvar = 0.0;
  double holdout_mean = 0.0;
};
std::vector<SweepRow> CmdSweep(const ExperimentConfig& config,
                               const std::string& axis,
                               const std::vector<double>& values,
                               const std::vector<std::string>& algorithms,
                               int seeds, std::ostream& log);
void WriteSweepCsv(std::span<const SweepRow> rows, std::ostream& out);

struct EvalResult {
  double cvar = 0.0;
  double mean = 0.0;
  size_t scenarios = 0;
};
// Evaluates an allocation CSV or a portfolio CSV against the config's pool.
EvalResult CmdEval(const ExperimentConfig& config, const std::string& solution,
                   std::ostream& log);

}  // namespace rascal

#endif  // RASCAL_EXPERIMENT_H_
