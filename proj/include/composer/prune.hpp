// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <string>
#include <vector>

#include "composer/match_graph.hpp"
#include "composer/qos_labels.hpp"

namespace composer {

struct PrunePassReport {
  std::string pass;
  int services_before = 0;
  int services_after = 0;
  int inputs_removed = 0;
  int outputs_removed = 0;
  int merges = 0;
  double seconds = 0;
};

struct PruneReport {
  std::vector<PrunePassReport> passes;
  int services_before = 0;  // excluding endpoints
  int services_after = 0;
  double seconds = 0;
};

/// Maximum admissible aggregated QoS per input vertex: exceeding it at an
/// input makes the end-to-end optimum unreachable through that input.
/// reached is false for inputs with no backward path from the sink.
struct MaxBoundTable {
  std::vector<Qos> value;
  std::vector<char> reached;
};

/// Pass 1: drop services with no forward path to the sink.
MatchGraph prune_unreachable(const MatchGraph& g, PruneReport* report = nullptr);

/// Bounds propagated backwards from the sink: a service's inputs get the
/// loosest bound among the inputs its outputs match, minus its own cost.
/// Iterated to a fixpoint, so cycles only contribute tighter candidates.
MaxBoundTable compute_max_bounds(const MatchGraph& g, const QosLabels& labels,
                                 const QosAlgebra& algebra);

/// Pass 2: drop services whose aggregated value violates the bound of every
/// input they could serve. Sitting exactly on a bound survives.
MatchGraph prune_suboptimal(const MatchGraph& g, const QosLabels& labels,
                            const MaxBoundTable& bounds, const QosAlgebra& algebra,
                            PruneReport* report = nullptr);

/// Pass 3: merge services with identical input concept sets, identical
/// match coverage and equal cost into one node carrying the member list.
/// The representative is the member with the smallest id.
MatchGraph combine_equivalent(const MatchGraph& g, const QosAlgebra& algebra,
                              PruneReport* report = nullptr);

/// Pass 4: drop services dominated by another service that needs a subset
/// of the inputs, covers a superset of the graph inputs, has equal-or-
/// better cost, and is strictly ahead on at least one of the three.
/// Mutually dominating pairs keep the smaller id. Runs to a fixpoint.
MatchGraph remove_dominated(const MatchGraph& g, const QosAlgebra& algebra,
                            PruneReport* report = nullptr,
                            const ParallelConfig& par = {});

/// All four passes in order, with passes 1 and 2 iterated to a joint
/// fixpoint (a removal can strand feeders or worsen labels). The end-to-end
/// optimum and the minimum service count are preserved.
MatchGraph optimize_pipeline(const MatchGraph& g, const QosAlgebra& algebra,
                             PruneReport* report = nullptr,
                             const ParallelConfig& par = {});

/// Dominance marking kernel used by pass 4; exposed for the serial/OpenMP
/// equivalence tests and the kernel benchmark. Returns one flag per service
/// (endpoints never marked).
std::vector<char> mark_dominated(const MatchGraph& g, const QosAlgebra& algebra,
                                 const ParallelConfig& par, bool parallel);

}  // namespace composer
