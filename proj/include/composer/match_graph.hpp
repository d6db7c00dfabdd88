// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "composer/parallel.hpp"
#include "composer/registry.hpp"

namespace composer {

/// The space of all valid solutions for one request: a tripartite graph of
/// service nodes, per-(service, concept) input/output vertices, and every
/// semantic match edge between outputs and inputs, cycles included.
///
/// Vertex and service ids are dense indices. Index 0 is the source (emits
/// the request inputs, costs the algebra identity), index 1 is the sink
/// (consumes the request outputs). Copies are plain value copies; a resolve
/// step copies the whole graph so search branches never share mutable state.
struct MatchGraph {
  static constexpr int kSource = 0;
  static constexpr int kSink = 1;

  struct ServiceNode {
    int registry_index = -1;  // -1 for source/sink
    std::vector<int> inputs;   // input vertex ids, concept-sorted
    std::vector<int> outputs;  // output vertex ids, concept-sorted
    std::vector<int> members;  // registry indices of merged equivalents
  };

  struct InputVertex {
    ConceptHandle concept_id = kNoConcept;
    int owner = -1;
    std::vector<int> parents;  // matching output vertex ids, sorted
  };

  struct OutputVertex {
    ConceptHandle concept_id = kNoConcept;
    int owner = -1;
    std::vector<int> children;  // matched input vertex ids, sorted
  };

  std::vector<ServiceNode> services;
  std::vector<InputVertex> inputs;
  std::vector<OutputVertex> outputs;
  // F_Q per criterion per service; endpoints carry the criterion identity.
  std::array<std::vector<Qos>, kCriterionCount> service_qos;

  const Registry* registry = nullptr;  // non-owning, immutable
  MatchPolicy policy;

  bool is_endpoint(int svc) const { return svc == kSource || svc == kSink; }

  /// Number of service nodes excluding source and sink.
  int service_count() const { return static_cast<int>(services.size()) - 2; }

  std::size_t match_edge_count() const;

  Qos cost(int svc, const QosAlgebra& algebra) const {
    return service_qos[static_cast<int>(algebra.criterion)][svc];
  }

  std::string service_name(int svc) const;
  const std::string& concept_name(ConceptHandle c) const;
  /// "serviceId/conceptName"; used for deterministic tie-breaking and traces.
  std::string input_name(int input_vertex) const;
};

/// Per-input decision status, read off the edge counts of a graph copy:
/// several candidate parents still compete, exactly one is retained, or
/// nothing can match the input.
enum class ResolutionState { Unresolved, Resolved, Unmatched };

inline ResolutionState resolution_state(const MatchGraph& g, int input_vertex) {
  const auto n = g.inputs[input_vertex].parents.size();
  if (n == 0) return ResolutionState::Unmatched;
  return n == 1 ? ResolutionState::Resolved : ResolutionState::Unresolved;
}

/// Which match-edge kernel to run. Reference is the obviously-correct
/// pairwise loop kept for testing; Fast walks ancestor chains and subtree
/// intervals, and parallelizes over output vertices when OpenMP is on.
enum class MatchKernel { Reference, Fast };

/// Layered forward expansion from the request inputs followed by the
/// computation of every output-to-input match edge among selected services.
/// Throws NoSolutionError when the sink is not invokable from the closure.
MatchGraph build_match_graph(const Registry& registry, const Request& request,
                             const ParallelConfig& par = {},
                             MatchKernel kernel = MatchKernel::Fast);

/// Recomputes all OI edges of `g` in place (parents/children lists).
void compute_match_edges(MatchGraph& g, const ParallelConfig& par,
                         MatchKernel kernel = MatchKernel::Fast);

/// Returns a new graph where each input in `resolved` keeps exactly one
/// parent edge, originating from `svc`; every edge into those inputs from
/// other services is dropped. When several outputs of `svc` match one
/// input, the output with the lexicographically smallest concept name is
/// kept. Throws Error if `svc` has no edge into one of the inputs.
MatchGraph resolve_inputs(const MatchGraph& g, int svc,
                          std::span<const int> resolved);

/// Drops every service whose flag is false, along with its vertices and
/// edges, remapping indices densely. Endpoints must stay alive.
MatchGraph compact_graph(const MatchGraph& g, const std::vector<char>& alive);

}  // namespace composer
