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

#include "rascal/scenarios.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rascal {

std::vector<std::vector<std::pair<int, int>>> Graph::Adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(num_vertices);
  for (size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    adj[u].emplace_back(v, static_cast<int>(e));
    adj[v].emplace_back(u, static_cast<int>(e));
  }
  return adj;
}

LoadedGraph LoadEdgeList(std::istream& in) {
  std::vector<std::pair<int64_t, int64_t>> raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') continue;
    std::istringstream fields(line);
    int64_t u;
    int64_t v;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      throw IoError("malformed edge at line " + std::to_string(line_no) +
                    ": '" + line + "'");
    }
    raw.emplace_back(u, v);
  }

  LoadedGraph loaded;
  std::set<int64_t> ids;
  for (const auto& [u, v] : raw) {
    ids.insert(u);
    ids.insert(v);
  }
  loaded.original_ids.assign(ids.begin(), ids.end());
  std::map<int64_t, int> dense;
  for (size_t i = 0; i < loaded.original_ids.size(); ++i) {
    dense[loaded.original_ids[i]] = static_cast<int>(i);
  }
  loaded.graph.num_vertices = loaded.original_ids.size();
  std::set<std::pair<int, int>> seen;
  for (const auto& [u, v] : raw) {
    if (u == v) {
      ++loaded.self_loops_dropped;
      continue;
    }
    int a = dense[u];
    int b = dense[v];
    if (a > b) std::swap(a, b);
    if (!seen.emplace(a, b).second) {
      ++loaded.duplicates_dropped;
      continue;
    }
    loaded.graph.edges.emplace_back(a, b);
  }
  return loaded;
}

LoadedGraph LoadEdgeListFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  return LoadEdgeList(in);
}

Graph GenerateErGraph(size_t n, double edge_prob, Rng& rng) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  Graph g;
  g.num_vertices = n;
  for (size_t u = 0; u < n; ++u) {
    for (size_t v = u + 1; v < n; ++v) {
      if (Uniform01(rng) < edge_prob) {
        g.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
      }
    }
  }
  return g;
}

double SampleExponential(double mean, Rng& rng) {
  return -mean * std::log1p(-Uniform01(rng));
}

CticScenario CticFromDelays(const Graph& graph, int source,
                            std::span<const double> delays) {
  const size_t n = graph.num_vertices;
  if (n == 0) throw std::invalid_argument("empty graph");
  if (source < 0 || static_cast<size_t>(source) >= n) {
    throw std::invalid_argument("source vertex out of range");
  }
  if (delays.size() != graph.edges.size()) {
    throw std::invalid_argument("need one delay per edge");
  }
  const double inf = std::numeric_limits<double>::infinity();
  Vec dist(n, inf);
  const auto adj = graph.Adjacency();
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  dist[source] = 0.0;
  frontier.emplace(0.0, source);
  while (!frontier.empty()) {
    const auto [d, v] = frontier.top();
    frontier.pop();
    if (d > dist[v]) continue;
    for (const auto& [w, e] : adj[v]) {
      const double candidate = d + delays[e];
      if (candidate < dist[w]) {
        dist[w] = candidate;
        frontier.emplace(candidate, w);
      }
    }
  }
  double z_max = 0.0;
  for (double d : dist) {
    if (std::isfinite(d)) z_max = std::max(z_max, d);
  }
  for (double& d : dist) {
    if (!std::isfinite(d)) d = z_max;
  }
  return {ScenarioTimes::FromReachTimes(std::move(dist)), source};
}

CticScenario SimulateCtic(const Graph& graph, double mean_delay, Rng& rng) {
  if (graph.num_vertices == 0) throw std::invalid_argument("empty graph");
  if (!(mean_delay > 0.0)) {
    throw std::invalid_argument("mean propagation time must be positive");
  }
  const int source = static_cast<int>(UniformIndex(rng, graph.num_vertices));
  Vec delays(graph.edges.size());
  for (double& d : delays) d = SampleExponential(mean_delay, rng);
  return CticFromDelays(graph, source, delays);
}

std::vector<ScenarioTimes> ScenarioPool(const Graph& graph, double mean_delay,
                                        size_t count, uint64_t seed) {
  std::vector<ScenarioTimes> pool;
  pool.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Rng rng(DeriveSeed(seed, i));
    pool.push_back(SimulateCtic(graph, mean_delay, rng).times);
  }
  return pool;
}

void WriteScenarioCsv(std::span<const ScenarioTimes> pool, std::ostream& out) {
  out << "scenario_id,vertex,reach_time\n";
  char buffer[64];
  for (size_t s = 0; s < pool.size(); ++s) {
    const Vec& times = pool[s].reach_time;
    for (size_t v = 0; v < times.size(); ++v) {
      std::snprintf(buffer, sizeof(buffer), "%zu,%zu,%.17g\n", s, v, times[v]);
      out << buffer;
    }
  }
}

std::vector<ScenarioTimes> ReadScenarioCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "scenario_id,vertex,reach_time") {
    throw IoError("scenario CSV must start with 'scenario_id,vertex,reach_time'");
  }
  std::map<int64_t, std::map<int64_t, double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    int64_t id;
    int64_t vertex;
    double t;
    char c1;
    char c2;
    if (!(fields >> id >> c1 >> vertex >> c2 >> t) || c1 != ',' || c2 != ',' ||
        id < 0 || vertex < 0) {
      throw IoError("malformed scenario row at line " + std::to_string(line_no));
    }
    if (!rows[id].emplace(vertex, t).second) {
      throw IoError("duplicate vertex in scenario row at line " +
                    std::to_string(line_no));
    }
  }
  std::vector<ScenarioTimes> pool;
  size_t n = 0;
  for (auto& [id, times] : rows) {
    if (pool.empty()) n = times.size();
    if (times.size() != n || times.rbegin()->first != static_cast<int64_t>(n) - 1) {
      throw IoError("scenario " + std::to_string(id) +
                    " does not list vertices 0.." + std::to_string(n - 1));
    }
    Vec reach;
    reach.reserve(n);
    for (const auto& [v, t] : times) reach.push_back(t);
    try {
      pool.push_back(ScenarioTimes::FromReachTimes(std::move(reach)));
    } catch (const std::invalid_argument& e) {
      throw IoError("scenario " + std::to_string(id) + ": " + e.what());
    }
  }
  return pool;
}

std::vector<DrFunctionPtr> SensorFunctions(std::span<const ScenarioTimes> pool,
                                           const SensorObjective& objective) {
  std::vector<DrFunctionPtr> functions;
  functions.reserve(pool.size());
  for (const ScenarioTimes& z : pool) {
    functions.push_back(std::make_shared<SensorFunction>(
        std::make_shared<const ScenarioTimes>(z), objective));
  }
  return functions;
}

}  // namespace rascal
