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

#include "rascal/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rascal/risk.h"

namespace rascal {
namespace {

// Derived-seed channels.
constexpr uint64_t kGraphChannel = 1;
constexpr uint64_t kPoolChannel = 2;
constexpr uint64_t kHoldoutChannel = 3;
constexpr uint64_t kStreamChannel = 4;
constexpr uint64_t kAlgorithmChannel = 5;
constexpr uint64_t kSweepChannel = 6;

std::string Trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  std::string t = s.substr(a, b - a + 1);
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') &&
      t.back() == t.front()) {
    t = t.substr(1, t.size() - 2);
  }
  return t;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T parsed;
  if (!(in >> parsed) || !(in >> std::ws).eof()) {
    throw IoError("config key '" + key + "' expects a number, got '" + value +
                  "'");
  }
  return parsed;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw IoError("config key '" + key + "' expects true/false, got '" + value +
                "'");
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

double Quantile(Vec values, double q) {
  std::sort(values.begin(), values.end());
  const size_t i = static_cast<size_t>(std::floor(q * (values.size() - 1) + 0.5));
  return values[std::min(i, values.size() - 1)];
}

std::vector<std::vector<int>> ParseSetList(const std::string& text,
                                           const std::string& what) {
  std::vector<std::vector<int>> result;
  std::stringstream blocks(text);
  std::string block;
  while (std::getline(blocks, block, '|')) {
    std::vector<int> ids;
    std::stringstream items(block);
    std::string item;
    while (std::getline(items, item, ';')) {
      item = Trim(item);
      if (item.empty()) continue;
      ids.push_back(ParseNumber<int>(what, item));
    }
    result.push_back(std::move(ids));
  }
  return result;
}

}  // namespace

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "stochastic-rascal") return Algorithm::kStochasticRascal;
  if (name == "online-rascal") return Algorithm::kOnlineRascal;
  if (name == "rascal") return Algorithm::kRascal;
  if (name == "fw") return Algorithm::kFrankWolfe;
  if (name == "portfolio") return Algorithm::kPortfolio;
  throw IoError("unknown algorithm '" + name +
                "' (expected stochastic-rascal, online-rascal, rascal, fw or "
                "portfolio)");
}

const char* AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kStochasticRascal:
      return "stochastic-rascal";
    case Algorithm::kOnlineRascal:
      return "online-rascal";
    case Algorithm::kRascal:
      return "rascal";
    case Algorithm::kFrankWolfe:
      return "fw";
    case Algorithm::kPortfolio:
      return "portfolio";
  }
  return "?";
}

void ExperimentConfig::Validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw IoError(std::string("config key '") + key +
                                  "' must be positive");
  };
  positive(lambda, "lambda");
  positive(p, "p");
  if (p > 1.0) throw IoError("config key 'p' must lie in (0, 1]");
  positive(alpha, "alpha");
  if (alpha > 1.0) throw IoError("config key 'alpha' must lie in (0, 1]");
  positive(budget, "budget");
  if (cap < 0.0) throw IoError("config key 'cap' must be nonnegative");
  positive(pool_size, "pool_size");
  positive(holdout_size, "holdout_size");
  positive(online_samples, "online_samples");
  positive(offline_steps, "offline_steps");
  positive(energy, "energy");
  positive(multilinear_samples, "multilinear_samples");
  positive(jobs, "jobs");
  if (batch_size < 0 || steps < 0 || fpl_rate < 0.0 || ogd_rate < 0.0 ||
      u < 0.0 || r < 0 || q < 0 || matroid_k < 0) {
    throw IoError("schedule overrides must be nonnegative");
  }
  ParseAlgorithm(algorithm);
}

void SetConfigValue(ExperimentConfig& c, const std::string& key,
                    const std::string& raw) {
  const std::string value = Trim(raw);
  static const std::map<std::string,
                        std::function<void(ExperimentConfig&, const std::string&,
                                           const std::string&)>>
      kSetters = {
#define RASCAL_STRING_KEY(name) \
  {#name, [](ExperimentConfig& c, const std::string&, const std::string& v) { c.name = v; }}
#define RASCAL_NUMBER_KEY(name)                                              \
  {#name, [](ExperimentConfig& c, const std::string& k, const std::string& v) { \
     c.name = ParseNumber<decltype(c.name)>(k, v);                             \
   }}
          RASCAL_STRING_KEY(graph),
          RASCAL_STRING_KEY(pool),
          RASCAL_NUMBER_KEY(lambda),
          RASCAL_NUMBER_KEY(p),
          RASCAL_NUMBER_KEY(alpha),
          RASCAL_NUMBER_KEY(budget),
          RASCAL_NUMBER_KEY(cap),
          RASCAL_NUMBER_KEY(pool_size),
          RASCAL_NUMBER_KEY(holdout_size),
          RASCAL_NUMBER_KEY(online_samples),
          RASCAL_STRING_KEY(algorithm),
          RASCAL_NUMBER_KEY(batch_size),
          RASCAL_NUMBER_KEY(steps),
          RASCAL_NUMBER_KEY(fpl_rate),
          RASCAL_NUMBER_KEY(ogd_rate),
          RASCAL_NUMBER_KEY(u),
          RASCAL_NUMBER_KEY(offline_steps),
          RASCAL_NUMBER_KEY(matroid_k),
          RASCAL_STRING_KEY(partition),
          RASCAL_NUMBER_KEY(energy),
          RASCAL_NUMBER_KEY(r),
          RASCAL_NUMBER_KEY(q),
          RASCAL_NUMBER_KEY(multilinear_samples),
          RASCAL_NUMBER_KEY(seed),
          RASCAL_NUMBER_KEY(jobs),
          {"timing",
           [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.timing = ParseBool(k, v);
           }},
          RASCAL_STRING_KEY(out),
#undef RASCAL_STRING_KEY
#undef RASCAL_NUMBER_KEY
      };
  const auto it = kSetters.find(key);
  if (it == kSetters.end()) throw IoError("unknown config key '" + key + "'");
  it->second(c, key, value);
}

void LoadConfigFile(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '[') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected 'key = value'");
    }
    SetConfigValue(config, Trim(t.substr(0, eq)), t.substr(eq + 1));
  }
}

// ---------------------------------------------------------------------------

Graph BuildGraph(const ExperimentConfig& config) {
  if (config.graph.rfind("er:", 0) == 0) {
    std::stringstream spec(config.graph.substr(3));
    std::string n_text;
    std::string p_text;
    if (!std::getline(spec, n_text, ':') || !std::getline(spec, p_text)) {
      throw IoError("graph generator spec must read er:<n>:<edge_prob>");
    }
    const int n = ParseNumber<int>("graph", n_text);
    const double edge_prob = ParseNumber<double>("graph", p_text);
    if (n < 1) throw IoError("generated graph needs n >= 1");
    Rng rng(DeriveSeed(config.seed, kGraphChannel));
    return GenerateErGraph(static_cast<size_t>(n), edge_prob, rng);
  }
  return LoadEdgeListFile(config.graph).graph;
}

Instance BuildInstance(const ExperimentConfig& config) {
  config.Validate();
  Instance instance;
  instance.graph = BuildGraph(config);
  if (instance.graph.num_vertices == 0) throw IoError("graph has no vertices");
  if (!config.pool.empty()) {
    std::ifstream in(config.pool);
    if (!in) throw IoError("cannot open scenario pool '" + config.pool + "'");
    instance.pool = ReadScenarioCsv(in);
    if (instance.pool.empty()) throw IoError("scenario pool is empty");
    if (instance.pool.front().reach_time.size() != instance.graph.num_vertices) {
      throw IoError("scenario pool and graph disagree on the vertex count");
    }
  } else {
    instance.pool = ScenarioPool(instance.graph, config.lambda,
                                 config.pool_size,
                                 DeriveSeed(config.seed, kPoolChannel));
  }
  instance.holdout = ScenarioPool(instance.graph, config.lambda,
                                  config.holdout_size,
                                  DeriveSeed(config.seed, kHoldoutChannel));
  instance.objective.p = config.p;
  instance.pool_functions = SensorFunctions(instance.pool, instance.objective);
  instance.holdout_functions =
      SensorFunctions(instance.holdout, instance.objective);
  return instance;
}

std::shared_ptr<BudgetPolytope> BuildBudgetRegion(const ExperimentConfig& config,
                                                  size_t n) {
  const double cap = config.cap > 0.0 ? config.cap : config.budget;
  return std::make_shared<BudgetPolytope>(config.budget, Vec(n, cap));
}

MatroidPtr BuildMatroid(const ExperimentConfig& config, size_t n) {
  if (config.partition.empty()) {
    if (config.matroid_k < 1 || static_cast<size_t>(config.matroid_k) > n) {
      throw IoError("matroid_k must lie in [1, n]");
    }
    return std::make_shared<UniformMatroid>(n, config.matroid_k);
  }
  std::vector<PartitionMatroid::Block> blocks;
  std::stringstream spec(config.partition);
  std::string block;
  while (std::getline(spec, block, '|')) {
    const size_t colon = block.rfind(':');
    if (colon == std::string::npos) {
      throw IoError("partition block '" + block + "' lacks ':capacity'");
    }
    const auto ids = ParseSetList(block.substr(0, colon), "partition");
    blocks.push_back({ids.empty() ? std::vector<int>{} : ids.front(),
                      ParseNumber<int>("partition", Trim(block.substr(colon + 1)))});
  }
  try {
    return std::make_shared<PartitionMatroid>(n, std::move(blocks));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("partition: ") + e.what());
  }
}

RunParams SensorRunParams(const ExperimentConfig& config,
                          const FeasibleRegion& region) {
  const size_t n = region.dim();
  const double c = -std::log1p(-std::min(config.p, 1.0 - 1e-12));
  ScheduleInputs in;
  in.horizon = config.online_samples;
  in.alpha = config.alpha;
  in.diameter = region.Diameter();
  in.grad_bound = c * std::sqrt(static_cast<double>(n));
  in.lipschitz = in.grad_bound;
  in.smoothness = c * c * static_cast<double>(n);
  in.dim = n;
  in.integral_rank = region.IntegralRank();
  if (in.integral_rank) in.grad_bound = 1.0;

  RunParams params;
  try {
    params = ScheduleContinuous(in);
  } catch (const NumericError&) {
    if (config.batch_size == 0) throw;
    in.horizon = std::max(in.horizon, 16);
    params.horizon = config.online_samples;
    params.alpha = config.alpha;
    params.u = std::pow(static_cast<double>(config.online_samples), -0.25) /
               (1.0 + 1.0 / config.alpha);
    params.batch_size = config.batch_size;
    params.fpl_rate = 1.0;
    params.ogd_rate =
        1.0 / (std::max(1.0, 1.0 / config.alpha - 1.0) * std::sqrt(config.batch_size));
    params.steps = 20;
  }
  if (config.batch_size > 0) {
    params.batch_size = config.batch_size;
    params.ogd_rate = 1.0 / (std::max(1.0, 1.0 / config.alpha - 1.0) *
                             std::sqrt(static_cast<double>(config.batch_size)));
  }
  if (config.steps > 0) params.steps = config.steps;
  if (config.fpl_rate > 0.0) params.fpl_rate = config.fpl_rate;
  if (config.ogd_rate > 0.0) params.ogd_rate = config.ogd_rate;
  if (config.u > 0.0) params.u = config.u;
  params.batch_size = std::min(params.batch_size, params.horizon);
  params.seed = DeriveSeed(config.seed, kAlgorithmChannel);
  return params;
}

double SensorSetFunction::Evaluate(std::span<const uint8_t> members,
                                   const SetScenario& z) const {
  Vec x(n_, 0.0);
  for (size_t i = 0; i < n_; ++i) {
    if (members[i]) x[i] = energy_;
  }
  return SensorValue(x, ScenarioTimes::FromReachTimes(z), objective_);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<TraceRecord> OnlineTrace(const OnlineResult& online,
                                     const RunParams& params,
                                     std::span<const DrFunctionPtr> holdout) {
  std::vector<TraceRecord> trace;
  for (size_t b = 0; b < online.batch_points.size(); ++b) {
    TraceRecord row;
    row.batch = static_cast<int>(b + 1);
    row.samples = static_cast<int64_t>(b + 1) * params.batch_size;
    row.tau = online.taus[(b + 1) * params.batch_size - 1];
    const CvarEvaluation eval =
        EvaluateCvar(online.batch_points[b], holdout, params.alpha);
    row.holdout_cvar = eval.cvar;
    row.holdout_mean = eval.mean;
    trace.push_back(row);
  }
  return trace;
}

std::vector<SetScenario> ReachTimes(std::span<const ScenarioTimes> pool) {
  std::vector<SetScenario> out;
  out.reserve(pool.size());
  for (const auto& z : pool) out.push_back(z.reach_time);
  return out;
}

}  // namespace

RunOutcome RunAlgorithm(const ExperimentConfig& config, const Instance& instance) {
  config.Validate();
  RunOutcome outcome;
  outcome.algorithm = ParseAlgorithm(config.algorithm);
  const size_t n = instance.graph.num_vertices;
  TraceOptions trace{instance.holdout_functions, config.timing};

  if (outcome.algorithm == Algorithm::kPortfolio) {
    const MatroidPtr matroid = BuildMatroid(config, n);
    auto set_function =
        std::make_shared<SensorSetFunction>(n, instance.objective, config.energy);
    PortfolioParams pp;
    const int copies = config.r > 0 ? config.r : DefaultCopies(config.online_samples);
    const ProductRegion region(std::make_shared<MatroidBasePolytope>(matroid),
                               copies);
    pp.run = SensorRunParams(config, region);
    pp.copies = copies;
    pp.roundings = config.q > 0 ? config.q : DefaultRoundings(config.online_samples);
    pp.multilinear_samples = config.multilinear_samples;
    const std::vector<SetScenario> pool = ReachTimes(instance.pool);
    const std::vector<SetScenario> holdout = ReachTimes(instance.holdout);
    Rng draw(DeriveSeed(config.seed, kStreamChannel));
    SetScenarioSource source = [&]() -> std::optional<SetScenario> {
      return pool[UniformIndex(draw, pool.size())];
    };
    PortfolioResult result =
        BuildPortfolio(source, set_function, matroid, pp, TraceOptions{{}, config.timing});
    outcome.params = pp.run;
    outcome.trace = std::move(result.run.trace);
    outcome.holdout_cvar =
        PortfolioCvar(result.portfolio, holdout, *set_function, config.alpha);
    outcome.pool_cvar =
        PortfolioCvar(result.portfolio, pool, *set_function, config.alpha);
    outcome.holdout_mean =
        PortfolioCvar(result.portfolio, holdout, *set_function, 1.0);
    outcome.portfolio = std::move(result.portfolio);
    return outcome;
  }

  const auto region = BuildBudgetRegion(config, n);
  outcome.params = SensorRunParams(config, *region);
  const RunParams& params = outcome.params;
  switch (outcome.algorithm) {
    case Algorithm::kStochasticRascal: {
      PoolSampler stream(instance.pool_functions,
                         DeriveSeed(config.seed, kStreamChannel));
      StochasticResult result = StochasticRascal(stream, *region, params, trace);
      outcome.trace = std::move(result.trace);
      // The curve value after T samples is the last batch point; the
      // algorithm's randomized output is x_{b'}.
      outcome.allocation = result.batch_points.back().point;
      break;
    }
    case Algorithm::kOnlineRascal: {
      PoolSampler stream(instance.pool_functions,
                         DeriveSeed(config.seed, kStreamChannel));
      std::vector<DrFunctionPtr> sequence;
      RunParams online = params;
      online.horizon = params.effective_horizon();
      for (int t = 0; t < online.horizon; ++t) sequence.push_back(stream.Next());
      const OnlineResult result = OnlineRascal(sequence, *region, online);
      outcome.trace = OnlineTrace(result, online, instance.holdout_functions);
      outcome.allocation = result.batch_points.back();
      break;
    }
    case Algorithm::kRascal: {
      OfflineResult result = OfflineRascal(instance.pool_functions, *region,
                                           config.offline_steps,
                                           params.smoothing(), trace);
      outcome.trace = std::move(result.trace);
      outcome.allocation = result.solution.point;
      break;
    }
    case Algorithm::kFrankWolfe: {
      OfflineResult result =
          FrankWolfeExpectation(instance.pool_functions, *region,
                                config.offline_steps, config.alpha, trace);
      outcome.trace = std::move(result.trace);
      outcome.allocation = result.solution.point;
      break;
    }
    case Algorithm::kPortfolio:
      break;
  }
  const CvarEvaluation holdout =
      EvaluateCvar(outcome.allocation, instance.holdout_functions, config.alpha);
  outcome.holdout_cvar = holdout.cvar;
  outcome.holdout_mean = holdout.mean;
  outcome.pool_cvar =
      EvaluateCvar(outcome.allocation, instance.pool_functions, config.alpha).cvar;
  return outcome;
}

// ---------------------------------------------------------------------------

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void WriteTraceCsv(std::span<const TraceRecord> trace, std::ostream& out) {
  out << "batch,samples,tau,holdout_cvar,holdout_mean,wallclock_ms\n";
  for (const TraceRecord& row : trace) {
    out << row.batch << ',' << row.samples << ',' << FormatDouble(row.tau) << ','
        << FormatDouble(row.holdout_cvar) << ','
        << FormatDouble(row.holdout_mean) << ','
        << FormatDouble(row.wallclock_ms) << '\n';
  }
}

void WriteAllocationCsv(std::span<const double> allocation, std::ostream& out) {
  out << "vertex,allocation\n";
  for (size_t v = 0; v < allocation.size(); ++v) {
    out << v << ',' << FormatDouble(allocation[v]) << '\n';
  }
}

Vec ReadAllocationCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "vertex,allocation") {
    throw IoError("allocation CSV must start with 'vertex,allocation'");
  }
  Vec allocation;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    size_t vertex;
    char comma;
    double value;
    if (!(fields >> vertex >> comma >> value) || comma != ',' ||
        vertex != allocation.size()) {
      throw IoError("malformed allocation row at line " + std::to_string(line_no));
    }
    allocation.push_back(value);
  }
  return allocation;
}

void CmdGenerate(const ExperimentConfig& config, std::ostream& log) {
  ExperimentConfig generate = config;
  const std::string path =
      config.pool.empty() ? (std::filesystem::path(config.out) / "pool.csv").string()
                          : config.pool;
  generate.pool.clear();
  generate.Validate();
  const Graph graph = BuildGraph(generate);
  if (graph.num_vertices == 0) throw IoError("graph has no vertices");
  const std::vector<ScenarioTimes> pool =
      ScenarioPool(graph, generate.lambda, generate.pool_size,
                   DeriveSeed(generate.seed, kPoolChannel));
  std::ofstream out = OpenOutput(path);
  WriteScenarioCsv(pool, out);
  Vec z_max;
  for (const auto& z : pool) z_max.push_back(z.z_max);
  log << "wrote " << pool.size() << " scenarios to " << path << "\n"
      << "n=" << graph.num_vertices << " m=" << graph.edges.size()
      << " z_max quantiles (0,25,50,75,100%): " << FormatDouble(Quantile(z_max, 0))
      << ' ' << FormatDouble(Quantile(z_max, 0.25)) << ' '
      << FormatDouble(Quantile(z_max, 0.5)) << ' '
      << FormatDouble(Quantile(z_max, 0.75)) << ' '
      << FormatDouble(Quantile(z_max, 1)) << "\n";
}

RunOutcome CmdRun(const ExperimentConfig& config, std::ostream& log) {
  const Instance instance = BuildInstance(config);
  RunOutcome outcome = RunAlgorithm(config, instance);
  const std::filesystem::path dir(config.out);
  {
    std::ofstream out = OpenOutput(dir / "trace.csv");
    WriteTraceCsv(outcome.trace, out);
  }
  if (outcome.portfolio) {
    std::ofstream out = OpenOutput(dir / "portfolio.csv");
    WritePortfolioCsv(*outcome.portfolio, out);
  } else {
    std::ofstream out = OpenOutput(dir / "solution.csv");
    WriteAllocationCsv(outcome.allocation, out);
  }
  const RunParams& p = outcome.params;
  log << AlgorithmName(outcome.algorithm) << ": T=" << p.effective_horizon()
      << " B=" << p.batch_size << " 1/delta=" << p.steps
      << " lambda=" << FormatDouble(p.fpl_rate) << " eta=" << FormatDouble(p.ogd_rate)
      << " u=" << FormatDouble(p.u) << "\n"
      << "holdout_cvar=" << FormatDouble(outcome.holdout_cvar)
      << " pool_cvar=" << FormatDouble(outcome.pool_cvar)
      << " holdout_mean=" << FormatDouble(outcome.holdout_mean) << "\n";
  return outcome;
}

std::vector<SweepRow> CmdSweep(const ExperimentConfig& config,
                               const std::string& axis,
                               const std::vector<double>& values,
                               const std::vector<std::string>& algorithms,
                               int seeds, std::ostream& log) {
  if (axis != "T" && axis != "budget") {
    throw IoError("sweep axis must be 'T' or 'budget', got '" + axis + "'");
  }
  if (values.empty() || algorithms.empty() || seeds < 1) {
    throw IoError("sweep needs values, algorithms and seeds >= 1");
  }
  for (const auto& a : algorithms) ParseAlgorithm(a);
  config.Validate();

  std::vector<uint64_t> cell_seeds(seeds);
  for (int s = 0; s < seeds; ++s) {
    cell_seeds[s] = DeriveSeed(config.seed, kSweepChannel + 16 * s);
  }
  // One instance per seed; the axis never changes the scenario data.
  std::vector<Instance> instances(seeds);
  for (int s = 0; s < seeds; ++s) {
    ExperimentConfig c = config;
    c.seed = cell_seeds[s];
    instances[s] = BuildInstance(c);
  }

  struct Cell {
    size_t algorithm;
    size_t value;
    int seed;
  };
  std::vector<Cell> cells;
  for (size_t a = 0; a < algorithms.size(); ++a) {
    const Algorithm alg = ParseAlgorithm(algorithms[a]);
    const bool offline = alg == Algorithm::kRascal || alg == Algorithm::kFrankWolfe;
    for (size_t v = 0; v < values.size(); ++v) {
      // Offline baselines ignore T; run them once and reuse the row.
      if (offline && axis == "T" && v > 0) continue;
      for (int s = 0; s < seeds; ++s) cells.push_back({a, v, s});
    }
  }

  std::vector<SweepRow> computed(cells.size());
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&]() {
    for (size_t i = next++; i < cells.size(); i = next++) {
      const Cell& cell = cells[i];
      try {
        ExperimentConfig c = config;
        c.seed = cell_seeds[cell.seed];
        c.algorithm = algorithms[cell.algorithm];
        if (axis == "T") {
          c.online_samples = static_cast<int>(std::llround(values[cell.value]));
        } else {
          c.budget = values[cell.value];
        }
        const RunOutcome outcome = RunAlgorithm(c, instances[cell.seed]);
        computed[i] = {algorithms[cell.algorithm], axis, values[cell.value],
                       static_cast<uint64_t>(cell.seed), outcome.holdout_cvar,
                       outcome.pool_cvar, outcome.holdout_mean};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, cells.size()));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  // Expand into the long format: one row per (algorithm, value, seed).
  std::vector<SweepRow> rows;
  for (size_t a = 0; a < algorithms.size(); ++a) {
    for (size_t v = 0; v < values.size(); ++v) {
      for (int s = 0; s < seeds; ++s) {
        for (size_t i = 0; i < cells.size(); ++i) {
          const Cell& cell = cells[i];
          const bool same_value =
              cell.value == v || (axis == "T" && cell.value == 0 &&
                                  computed[i].value == values[0] &&
                                  (ParseAlgorithm(algorithms[a]) == Algorithm::kRascal ||
                                   ParseAlgorithm(algorithms[a]) == Algorithm::kFrankWolfe));
          if (cell.algorithm == a && cell.seed == s && same_value) {
            SweepRow row = computed[i];
            row.value = values[v];
            rows.push_back(row);
            break;
          }
        }
      }
    }
  }
  log << "sweep over " << axis << ": " << rows.size() << " rows from "
      << cells.size() << " runs\n";
  return rows;
}

void WriteSweepCsv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "algorithm,axis,value,seed,holdout_cvar,pool_cvar,holdout_mean\n";
  for (const SweepRow& row : rows) {
    out << row.algorithm << ',' << row.axis << ',' << FormatDouble(row.value)
        << ',' << row.seed << ',' << FormatDouble(row.holdout_cvar) << ','
        << FormatDouble(row.pool_cvar) << ',' << FormatDouble(row.holdout_mean)
        << '\n';
  }
}

EvalResult CmdEval(const ExperimentConfig& config, const std::string& solution,
                   std::ostream& log) {
  std::ifstream in(solution);
  if (!in) throw IoError("cannot open solution file '" + solution + "'");
  std::string header;
  std::getline(in, header);
  in.seekg(0);
  const Instance instance = BuildInstance(config);
  EvalResult result;
  result.scenarios = instance.pool.size();
  if (header == "weight,set") {
    const Portfolio portfolio = ReadPortfolioCsv(in);
    const size_t n = instance.graph.num_vertices;
    for (const auto& entry : portfolio.entries) {
      for (int e : entry.set) {
        if (e < 0 || static_cast<size_t>(e) >= n) {
          throw IoError("portfolio names vertex " + std::to_string(e) +
                        " outside the graph");
        }
      }
    }
    const SensorSetFunction f(n, instance.objective, config.energy);
    const std::vector<SetScenario> pool = ReachTimes(instance.pool);
    result.cvar = PortfolioCvar(portfolio, pool, f, config.alpha);
    result.mean = PortfolioCvar(portfolio, pool, f, 1.0);
  } else {
    const Vec allocation = ReadAllocationCsv(in);
    if (allocation.size() != instance.graph.num_vertices) {
      throw IoError("allocation has " + std::to_string(allocation.size()) +
                    " entries but the graph has " +
                    std::to_string(instance.graph.num_vertices) + " vertices");
    }
    const CvarEvaluation eval =
        EvaluateCvar(allocation, instance.pool_functions, config.alpha);
    result.cvar = eval.cvar;
    result.mean = eval.mean;
  }
  log << "cvar=" << FormatDouble(result.cvar) << " mean=" << FormatDouble(result.mean)
      << " scenarios=" << result.scenarios << "\n";
  return result;
}

}  // namespace rascal
