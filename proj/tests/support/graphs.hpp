#pragma once

// Graph helpers for planner property tests.

#include <array>
#include <string>
#include <vector>

#include "voxelrun/pipeline.hpp"

namespace fixture {

inline std::string node_name(std::size_t i) { return "n" + std::to_string(i); }

/// Rule graph where adjacency[i] lists the prerequisites of node i.
inline voxelrun::pipeline::RuleGraph graph_from(const std::vector<std::vector<std::size_t>>& adjacency) {
  voxelrun::pipeline::RuleGraph g;
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    voxelrun::pipeline::Rule r{node_name(i), {}, {}};
    for (std::size_t j : adjacency[i]) r.prerequisites.push_back(node_name(j));
    g.add(r);
  }
  return g;
}

/// True when a cycle is reachable from `start` (transitive closure oracle).
inline bool cycle_reachable(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t start) {
  const std::size_t n = adjacency.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : adjacency[i]) reach[i][j] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (std::size_t v = 0; v < n; ++v) {
    if ((v == start || reach[start][v]) && reach[v][v]) return true;
  }
  return false;
}

}  // namespace fixture
