// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "composer/match_graph.hpp"
#include "composer/prune.hpp"

namespace composer {

/// An executable composition: a subgraph of a match graph where every input
/// of every retained service is matched by exactly one output and the
/// service-level dependencies form a DAG. Stored by name so it can round-
/// trip through the solution document and be re-validated independently.
struct Composition {
  struct Svc {
    std::string id;                    // "So", "Si" or a registry id
    std::vector<std::string> members;  // implementations of a merged node
    Qos qos = 0;                       // own cost under the run's criterion
  };
  struct Match {
    std::string from_service;
    std::string output;
    std::string to_service;
    std::string input;
  };

  std::vector<Svc> services;  // So first, Si last, rest sorted by id
  std::vector<Match> matches;

  int service_count() const { return static_cast<int>(services.size()) - 2; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  Qos recomputed_total = 0;
  int recomputed_count = 0;

  bool ok() const { return violations.empty(); }
};

/// Structural and semantic re-validation plus a from-scratch QoS
/// recomputation over the composition DAG. Violations cover unknown ids,
/// non-matching edges, unmatched or multiply-matched inputs, cycles and
/// member mismatches; they are reported, never thrown.
ValidationReport validate_composition(const Registry& registry, const Request& request,
                                      const Composition& comp, const QosAlgebra& algebra);

/// Builds the composition from a search-final graph: every selected
/// service's inputs must have exactly one parent, owned by a selected
/// service. Endpoints are always included.
Composition extract_composition(const MatchGraph& g, const std::vector<char>& selected,
                                const QosAlgebra& algebra);

/// End-to-end QoS of the resolved selection without building strings;
/// returns the zero element if the selection is cyclic or incomplete.
Qos selection_total_qos(const MatchGraph& g, const std::vector<char>& selected,
                        const QosAlgebra& algebra);

}  // namespace composer
