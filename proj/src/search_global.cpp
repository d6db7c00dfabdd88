// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include <algorithm>
#include <limits>
#include <memory>
#include <queue>
#include <string>

#include "search_common.hpp"

namespace composer {

namespace {

struct QueueItem {
  int count;
  std::uint64_t seq;
  std::shared_ptr<detail::ResolveState> state;
};

struct QueueOrder {
  // min-heap: fewest selected services first, FIFO on ties
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    if (a.count != b.count) return a.count > b.count;
    return a.seq > b.seq;
  }
};

// Minimum-remaining-values pick: the unresolved input with the fewest
// admissible resolvers, ties by the input's name.
int select_input(const detail::ResolveState& st, const QosAlgebra& algebra) {
  int best_iv = -1;
  std::size_t best_n = 0;
  std::string best_name;
  for (const auto& [iv, entry] : st.unresolved) {
    std::size_t n = 0;
    for (int svc : detail::parent_services(st.graph, iv))
      if (detail::admissible(st, svc, entry, algebra)) ++n;
    std::string name = st.graph.input_name(iv);
    if (best_iv == -1 || n < best_n || (n == best_n && name < best_name)) {
      best_iv = iv;
      best_n = n;
      best_name = std::move(name);
    }
  }
  return best_iv;
}

}  // namespace

SearchOutcome global_search(const MatchGraph& g, const QosAlgebra& algebra,
                            Deadline deadline, const SolutionRecord* incumbent,
                            const SearchOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchOutcome out;
  auto finish = [&](SearchStatus status) {
    out.status = status;
    out.stats.elapsed_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };
  std::vector<BoundTraceEntry>* trace =
      options.collect_bound_trace ? &out.bound_trace : nullptr;

  auto root = std::make_shared<detail::ResolveState>(detail::initial_state(g, algebra));
  const Qos optimum = root->labels.service_qos[MatchGraph::kSink];
  if (optimum == algebra.zero) return finish(SearchStatus::Exhausted);
  if (trace)
    for (const auto& [iv, e] : root->unresolved)
      trace->push_back({g.input_name(iv), e.min, e.max});

  const int incumbent_count = incumbent ? incumbent->services
                                        : std::numeric_limits<int>::max();

  // states own full graph copies; budget how many may sit in the queue
  // (per-vertex adjacency vectors cost allocator overhead on top of data)
  const std::size_t state_bytes =
      80 * (g.inputs.size() + g.outputs.size() + g.services.size()) +
      16 * g.match_edge_count() + 4096;
  const std::size_t max_states =
      std::max<std::size_t>(64, options.max_state_bytes / state_bytes);

  std::priority_queue<QueueItem, std::vector<QueueItem>, QueueOrder> queue;
  std::uint64_t seq = 0;
  queue.push({root->count, seq++, root});

  while (!queue.empty()) {
    if (deadline.expired() || queue.size() > max_states) {
      if (incumbent) out.record = *incumbent;
      return finish(SearchStatus::TimedOut);
    }
    QueueItem item = queue.top();
    queue.pop();
    ++out.stats.expanded;

    // Counts only grow along expansions, so the first pop at or above the
    // incumbent proves nothing smaller remains.
    if (item.count >= incumbent_count) {
      ++out.stats.pruned_incumbent;
      if (incumbent) {
        SolutionRecord rec = *incumbent;
        rec.method = SearchMethod::Global;
        rec.elapsed_secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.record = std::move(rec);
      }
      return finish(SearchStatus::IncumbentOptimal);
    }

    const detail::ResolveState& st = *item.state;
    if (st.unresolved.empty()) {
      if (selection_total_qos(st.graph, st.selected, algebra) == optimum) {
        SolutionRecord rec;
        rec.composition = extract_composition(st.graph, st.selected, algebra);
        rec.total_qos = optimum;
        rec.services = st.count;
        rec.method = SearchMethod::Global;
        rec.elapsed_secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.record = std::move(rec);
        return finish(SearchStatus::Found);
      }
      ++out.stats.rejected_completions;
      continue;
    }

    const int input = select_input(st, algebra);
    const detail::BoundEntry entry = st.unresolved.at(input);
    // the input's owner is fixed, so one reachability sweep serves every
    // candidate's cycle check at this expansion
    const int owner = st.graph.inputs[input].owner;
    const std::vector<char> reach = resolved_reachable_from(st.graph, owner);
    for (int svc : detail::parent_services(st.graph, input)) {
      if (!detail::admissible(st, svc, entry, algebra)) {
        ++out.stats.pruned_bound;
        continue;
      }
      if (svc == owner || reach[svc]) {
        ++out.stats.pruned_cycle;
        continue;
      }
      auto succ = detail::apply_resolution(st, svc, {input}, algebra, optimum, trace, out.stats);
      if (!succ) continue;
      if (succ->count >= incumbent_count) {
        ++out.stats.pruned_incumbent;
        continue;
      }
      auto next = std::make_shared<detail::ResolveState>(std::move(*succ));
      queue.push({next->count, seq++, std::move(next)});
      ++out.stats.pushed;
    }
  }

  if (incumbent) {
    SolutionRecord rec = *incumbent;
    rec.method = SearchMethod::Global;
    rec.elapsed_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.record = std::move(rec);
    return finish(SearchStatus::IncumbentOptimal);
  }
  return finish(SearchStatus::Exhausted);
}

}  // namespace composer
