// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "composer/search.hpp"

namespace composer::detail {

struct BoundEntry {
  Qos min = 0;  // best achievable value for the input under current labels
  Qos max = 0;  // loosest admissible value preserving the end-to-end optimum
};

/// A partial solution: a graph copy with some inputs resolved, the bound
/// table for inputs awaiting a decision, converged labels for this copy,
/// and the selected-service set. Value semantics; branches never share.
struct ResolveState {
  MatchGraph graph;
  QosLabels labels;
  std::map<int, BoundEntry> unresolved;  // input vertex -> bounds
  std::vector<char> selected;
  std::vector<Qos> service_bound;  // tightest bound a selected service must meet
  int count = 0;                   // selected services excluding endpoints
};

ResolveState initial_state(const MatchGraph& g, const QosAlgebra& algebra);

/// Candidate admission filter: the resolver's aggregated value under the
/// state's labels must sit within the input's max bound.
inline bool admissible(const ResolveState& st, int svc, const BoundEntry& entry,
                       const QosAlgebra& algebra) {
  return algebra.better_or_equal(st.labels.service_qos[svc], entry.max);
}

/// Resolves `inputs` (all currently unresolved) with `svc` and returns the
/// successor state: copies the graph, repropagates labels when the resolver
/// is worse than an entry minimum, and maintains bound bookkeeping — new
/// services get bound entries for their inputs, already-selected services
/// get their obligations tightened, with providers of already-resolved
/// inputs rechecked against the tighter bound. Returns nullopt when the
/// bookkeeping proves no completion of this branch can preserve `optimum`;
/// in particular a repropagation whose sink label moved off the optimum
/// kills the branch at the damaging resolution instead of at completion.
std::optional<ResolveState> apply_resolution(const ResolveState& st, int svc,
                                             const std::vector<int>& inputs,
                                             const QosAlgebra& algebra, Qos optimum,
                                             std::vector<BoundTraceEntry>* trace,
                                             SearchStats& stats);

/// Distinct services owning a parent edge of the input vertex, id-sorted.
std::vector<int> parent_services(const MatchGraph& g, int input_vertex);

}  // namespace composer::detail
