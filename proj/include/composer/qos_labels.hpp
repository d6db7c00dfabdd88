// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <span>
#include <vector>

#include "composer/match_graph.hpp"

namespace composer {

/// Converged per-vertex QoS values: input_qos[i] is the best aggregated
/// value at which input vertex i can be matched, service_qos[w] the best
/// aggregated value of service w. The aggregated value of an output vertex
/// equals the aggregated value of its owning service.
struct QosLabels {
  std::vector<Qos> input_qos;
  std::vector<Qos> service_qos;
};

/// Aggregated QoS of one service given per-input values: the worst input
/// value aggregated with the service's own cost; just the cost when the
/// service has no inputs. An unmatched input (zero element) absorbs.
Qos aggregated_service_qos(const MatchGraph& g, int svc,
                           std::span<const Qos> input_qos,
                           const QosAlgebra& algebra);

/// Best aggregated value for one input vertex from its parents' service
/// values: the zero element at indegree 0, the single parent's value at
/// indegree 1, the order-best over parents otherwise.
Qos optimal_input_qos(const MatchGraph& g, int input_vertex,
                      std::span<const Qos> service_qos,
                      const QosAlgebra& algebra);

/// Label-setting sweep from the source: a priority queue ordered by
/// aggregated service QoS relaxes every match edge out of the popped
/// service, re-inserting services whose aggregated value improved (stale
/// queue entries are skipped on pop). Optimal for monotone aggregation.
/// Unreachable inputs keep the zero element.
///
/// When `witness_parent` is given it receives, per input vertex, the output
/// vertex whose relaxation set the final label (-1 if unreached). Resolving
/// every input with its witness yields an acyclic composition achieving the
/// optimum: a witness is always finalized before the services it feeds.
QosLabels compute_qos_labels(const MatchGraph& g, const QosAlgebra& algebra,
                             std::vector<int>* witness_parent = nullptr);

/// Optimal end-to-end QoS of the graph: the sink's aggregated value under
/// converged labels. The zero element signals "no finite-QoS solution".
Qos graph_optimal_qos(const MatchGraph& g, const QosAlgebra& algebra);

}  // namespace composer
