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

#ifndef RASCAL_SCENARIOS_H_
#define RASCAL_SCENARIOS_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rascal/common.h"
#include "rascal/objective.h"

namespace rascal {

// Simple undirected graph; edges stored with u < v, no duplicates.
struct Graph {
  size_t num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<std::pair<int, int>>> Adjacency() const;  // (nbr, edge id)
};

struct LoadedGraph {
  Graph graph;
  std::vector<int64_t> original_ids;  // dense index -> id in the file
  int duplicates_dropped = 0;
  int self_loops_dropped = 0;
};

// Whitespace-separated `u v` pairs, one per line. Lines starting with '#'
// or '%' are comments. Throws IoError naming the line on malformed input.
LoadedGraph LoadEdgeList(std::istream& in);
LoadedGraph LoadEdgeListFile(const std::string& path);

// Erdos-Renyi G(n, p).
Graph GenerateErGraph(size_t n, double edge_prob, Rng& rng);

// Exponential draw with the given mean, by inversion.
double SampleExponential(double mean, Rng& rng);

struct CticScenario {
  ScenarioTimes times;
  int source = 0;
};

// Reach times from `source` given per-edge propagation delays (indexed like
// graph.edges). Unreached vertices get z_max; an isolated source gives the
// all-zero degenerate scenario.
CticScenario CticFromDelays(const Graph& graph, int source,
                            std::span<const double> delays);

// Uniform source, Exponential(mean) delay per edge, shortest-path times.
CticScenario SimulateCtic(const Graph& graph, double mean_delay, Rng& rng);

// `count` independent scenarios; scenario i uses the substream
// DeriveSeed(seed, i), so pools are reproducible and order-independent.
std::vector<ScenarioTimes> ScenarioPool(const Graph& graph, double mean_delay,
                                        size_t count, uint64_t seed);

// CSV `scenario_id,vertex,reach_time` with header. Times are written with 17
// significant digits so that reading returns identical doubles.
void WriteScenarioCsv(std::span<const ScenarioTimes> pool, std::ostream& out);
std::vector<ScenarioTimes> ReadScenarioCsv(std::istream& in);

// Binds each scenario to the sensor objective.
std::vector<DrFunctionPtr> SensorFunctions(std::span<const ScenarioTimes> pool,
                                           const SensorObjective& objective);

}  // namespace rascal

#endif  // RASCAL_SCENARIOS_H_
