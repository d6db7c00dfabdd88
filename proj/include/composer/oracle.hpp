// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <optional>
#include <vector>

#include "composer/match_graph.hpp"

namespace composer {

/// Exhaustive verification oracle. Deliberately independent of the label-
/// setting and search code paths: feasibility is a layered closure over the
/// graph's match edges and QoS values come from a Jacobi-style fixpoint
/// iteration.
struct OracleResult {
  bool feasible = false;
  Qos optimal_qos = 0;
  int min_services = 0;           // excluding endpoints
  std::vector<int> witness;       // graph service ids of one minimal solution
};

/// Enumerates service subsets in increasing size and returns the smallest
/// subset that yields an acyclic, fully matched composition achieving the
/// best QoS the whole graph admits. Refuses graphs with more than
/// `max_services` services (excluding endpoints).
OracleResult brute_force_min_composition(const MatchGraph& g, const QosAlgebra& algebra,
                                         int max_services = 25);

/// Best aggregated QoS per input vertex over the whole graph, by fixpoint
/// iteration; the independent check for the label-setting sweep.
std::vector<Qos> oracle_input_optima(const MatchGraph& g, const QosAlgebra& algebra);

/// Every minimum-size subset achieving the optimal QoS (for pruning
/// admissibility tests on small graphs).
std::vector<std::vector<int>> oracle_all_min_compositions(const MatchGraph& g,
                                                          const QosAlgebra& algebra,
                                                          int max_services = 25);

}  // namespace composer
