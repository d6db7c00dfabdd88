// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "composer/qos_labels.hpp"
#include "composer/solution.hpp"

namespace composer {

/// Wall-clock budget checked at every expansion.
struct Deadline {
  std::chrono::steady_clock::time_point end;

  static Deadline after(double seconds) {
    return {std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(seconds))};
  }
  static Deadline never() { return {std::chrono::steady_clock::time_point::max()}; }
  bool expired() const { return std::chrono::steady_clock::now() >= end; }
};

enum class SearchMethod { Local, Global };

const char* to_string(SearchMethod m);

struct SolutionRecord {
  Composition composition;
  Qos total_qos = 0;
  int services = 0;
  SearchMethod method = SearchMethod::Local;
  double elapsed_secs = 0;
};

enum class SearchStatus {
  Found,              // a solution with the graph-optimal QoS was extracted
  IncumbentOptimal,   // queue exhausted: nothing beats the given incumbent
  Exhausted,          // no solution exists in the (resolved) graph
  TimedOut,           // deadline hit before completion
};

const char* to_string(SearchStatus s);

struct SearchStats {
  std::uint64_t expanded = 0;
  std::uint64_t pushed = 0;
  std::uint64_t pruned_bound = 0;
  std::uint64_t pruned_cycle = 0;
  std::uint64_t pruned_incumbent = 0;
  std::uint64_t pruned_degraded = 0;  // repropagated sink label left the optimum
  std::uint64_t backtracks = 0;
  std::uint64_t rejected_completions = 0;
  double elapsed_secs = 0;
};

/// One row of the bound table the global search keeps per unresolved input,
/// recorded when tracing is on (tests and debugging).
struct BoundTraceEntry {
  std::string input;  // "serviceId/concept"
  Qos min = 0;
  Qos max = 0;
};

struct SearchOptions {
  bool collect_bound_trace = false;
  /// Rough cap on memory held by queued global-search states. Partial
  /// solutions carry whole graph copies, so adversarial instances can
  /// otherwise grow the queue without bound; hitting the cap ends the
  /// search like an expired deadline.
  std::size_t max_state_bytes = 2ull << 30;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<SolutionRecord> record;
  SearchStats stats;
  std::vector<BoundTraceEntry> bound_trace;
};

/// Services reachable from `svc` by following already-resolved matches
/// (inputs with exactly one parent). Flag per service id.
std::vector<char> resolved_reachable_from(const MatchGraph& g, int svc);

/// True iff resolving `input_vertex` with `svc` closes a dependency cycle:
/// a breadth-first walk over already-resolved matches from the input's
/// owner reaches `svc`. Both searches share one reachability sweep per
/// owner and expansion instead of calling this per candidate.
bool creates_cycle(const MatchGraph& g, int svc, int input_vertex);

/// Candidate services with at least one match edge into an unresolved
/// input, ordered by (matched unresolved inputs desc, own input count asc,
/// service id asc).
std::vector<int> rank_resolvers(const MatchGraph& g, const std::vector<int>& unresolved);

/// Depth-first backtracking extraction: repeatedly picks the best-ranked
/// resolver, resolves every unresolved input it can serve within its QoS
/// bound and without creating a cycle, and recurses; dead ends backtrack.
/// The result always carries the end-to-end optimum of `g`.
SearchOutcome local_search(const MatchGraph& g, const QosAlgebra& algebra,
                           Deadline deadline = Deadline::never(),
                           const SearchOptions& options = {});

/// Exhaustive best-first search over partial resolutions ordered by
/// selected-service count (FIFO on ties), resolving one minimum-remaining-
/// values input per expansion; candidate resolvers are filtered by the
/// per-input QoS bound interval and by cycle checks. Returns the smallest
/// composition carrying the end-to-end optimum, or proves the incumbent
/// cannot be beaten.
SearchOutcome global_search(const MatchGraph& g, const QosAlgebra& algebra,
                            Deadline deadline = Deadline::never(),
                            const SolutionRecord* incumbent = nullptr,
                            const SearchOptions& options = {});

struct HybridResult {
  std::optional<SolutionRecord> local;
  std::optional<SolutionRecord> best;
  SearchStatus local_status = SearchStatus::Exhausted;
  SearchStatus global_status = SearchStatus::Exhausted;
  SearchStats local_stats, global_stats;
  /// Global search produced (or confirmed) a solution within the budget.
  bool global_completed() const {
    return global_status == SearchStatus::Found ||
           global_status == SearchStatus::IncumbentOptimal;
  }
};

/// Local search first, then global search on the remaining budget with the
/// local result as incumbent. best is the global record when it improved
/// on the local one, the local record otherwise.
HybridResult hybrid_search(const MatchGraph& g, const QosAlgebra& algebra,
                           Deadline deadline = Deadline::never(),
                           const SearchOptions& options = {});

}  // namespace composer
