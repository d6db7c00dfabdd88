// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include <algorithm>
#include <deque>
#include <set>

#include "composer/error.hpp"
#include "search_common.hpp"

namespace composer {

const char* to_string(SearchMethod m) {
  return m == SearchMethod::Local ? "local" : "global";
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found:
      return "found";
    case SearchStatus::IncumbentOptimal:
      return "incumbentOptimal";
    case SearchStatus::Exhausted:
      return "exhausted";
    case SearchStatus::TimedOut:
      return "timedOut";
  }
  return "?";
}

std::vector<char> resolved_reachable_from(const MatchGraph& g, int svc) {
  std::vector<char> visited(g.services.size(), 0);
  std::deque<int> work{svc};
  visited[svc] = 1;
  while (!work.empty()) {
    int cur = work.front();
    work.pop_front();
    for (int ov : g.services[cur].outputs) {
      for (int iv : g.outputs[ov].children) {
        if (g.inputs[iv].parents.size() != 1) continue;  // resolved matches only
        int next = g.inputs[iv].owner;
        if (!visited[next]) {
          visited[next] = 1;
          work.push_back(next);
        }
      }
    }
  }
  return visited;
}

bool creates_cycle(const MatchGraph& g, int svc, int input_vertex) {
  const int owner = g.inputs[input_vertex].owner;
  if (owner == svc) return true;  // one-hop self feed
  return resolved_reachable_from(g, owner)[svc] != 0;
}

std::vector<int> rank_resolvers(const MatchGraph& g, const std::vector<int>& unresolved) {
  std::map<int, int> matched;  // service -> unresolved inputs it can serve
  for (int iv : unresolved) {
    std::set<int> owners;
    for (int p : g.inputs[iv].parents) owners.insert(g.outputs[p].owner);
    for (int svc : owners) ++matched[svc];
  }
  std::vector<int> out;
  out.reserve(matched.size());
  for (const auto& [svc, n] : matched) out.push_back(svc);
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    if (matched[a] != matched[b]) return matched[a] > matched[b];
    const auto asz = g.services[a].inputs.size(), bsz = g.services[b].inputs.size();
    if (asz != bsz) return asz < bsz;
    return g.service_name(a) < g.service_name(b);
  });
  return out;
}

namespace detail {

ResolveState initial_state(const MatchGraph& g, const QosAlgebra& algebra) {
  ResolveState st;
  st.graph = g;
  st.labels = compute_qos_labels(g, algebra);
  st.selected.assign(g.services.size(), 0);
  st.selected[MatchGraph::kSink] = 1;
  st.service_bound.assign(g.services.size(), algebra.zero);
  const Qos optimum = st.labels.service_qos[MatchGraph::kSink];
  st.service_bound[MatchGraph::kSink] = optimum;
  for (int iv : g.services[MatchGraph::kSink].inputs)
    st.unresolved[iv] = {st.labels.input_qos[iv], optimum};
  return st;
}

std::optional<ResolveState> apply_resolution(const ResolveState& st, int svc,
                                             const std::vector<int>& inputs,
                                             const QosAlgebra& algebra, Qos optimum,
                                             std::vector<BoundTraceEntry>* trace,
                                             SearchStats& stats) {
  ResolveState out;
  out.graph = resolve_inputs(st.graph, svc, inputs);
  out.selected = st.selected;
  out.service_bound = st.service_bound;
  out.count = st.count;
  out.unresolved = st.unresolved;

  bool worse_than_min = false;
  Qos tightest = algebra.zero;
  bool first = true;
  for (int iv : inputs) {
    const BoundEntry& e = st.unresolved.at(iv);
    if (algebra.strictly_better(e.min, st.labels.service_qos[svc])) worse_than_min = true;
    tightest = first ? e.max : algebra.best(tightest, e.max);
    first = false;
    out.unresolved.erase(iv);
  }

  // A suboptimal resolver can worsen values downstream; refresh the labels
  // and give up right here when even the best completion of this copy can
  // no longer reach the optimum.
  if (worse_than_min) {
    out.labels = compute_qos_labels(out.graph, algebra);
    if (out.labels.service_qos[MatchGraph::kSink] != optimum) {
      ++stats.pruned_degraded;
      return std::nullopt;
    }
  } else {
    out.labels = st.labels;
  }

  if (!out.selected[svc]) {
    out.selected[svc] = 1;
    if (!out.graph.is_endpoint(svc)) ++out.count;
    out.service_bound[svc] = tightest;
    const Qos child_max = algebra.subtract(tightest, out.graph.cost(svc, algebra));
    for (int j : out.graph.services[svc].inputs) {
      BoundEntry e{out.labels.input_qos[j], child_max};
      if (!algebra.better_or_equal(e.min, e.max)) {
        ++stats.pruned_bound;  // even the optimum for this input busts the budget
        return std::nullopt;
      }
      out.unresolved[j] = e;
      if (trace) trace->push_back({out.graph.input_name(j), e.min, e.max});
    }
    return out;
  }

  // Already selected: the service now also feeds these inputs, so its
  // obligation can only tighten; propagate to its own inputs.
  const Qos tightened = algebra.best(out.service_bound[svc], tightest);
  if (algebra.strictly_better(tightened, out.service_bound[svc])) {
    out.service_bound[svc] = tightened;
    const Qos child_max = algebra.subtract(tightened, out.graph.cost(svc, algebra));
    for (int j : out.graph.services[svc].inputs) {
      auto it = out.unresolved.find(j);
      if (it != out.unresolved.end()) {
        it->second.max = algebra.best(it->second.max, child_max);
        if (!algebra.better_or_equal(it->second.min, it->second.max)) {
          ++stats.pruned_bound;
          return std::nullopt;
        }
      } else if (out.graph.inputs[j].parents.size() == 1) {
        const int provider = out.graph.outputs[out.graph.inputs[j].parents[0]].owner;
        if (!algebra.better_or_equal(out.labels.service_qos[provider], child_max)) {
          ++stats.pruned_bound;
          return std::nullopt;
        }
      }
    }
  }
  return out;
}

std::vector<int> parent_services(const MatchGraph& g, int input_vertex) {
  std::set<int> owners;
  for (int p : g.inputs[input_vertex].parents) owners.insert(g.outputs[p].owner);
  std::vector<int> out(owners.begin(), owners.end());
  std::sort(out.begin(), out.end(),
            [&](int a, int b) { return g.service_name(a) < g.service_name(b); });
  return out;
}

}  // namespace detail

namespace {

struct LocalTimeout {};
struct LocalBudget {};

// Deterministic optimal-QoS composition straight from the label sweep:
// every needed input is resolved with the service whose relaxation set its
// final label. Witnesses finalize before their consumers, so the result is
// acyclic; its size is whatever the witness chains touch.
std::optional<detail::ResolveState> label_realization(const MatchGraph& g,
                                                      const QosAlgebra& algebra) {
  std::vector<int> witness;
  detail::ResolveState st;
  st.graph = g;
  st.labels = compute_qos_labels(g, algebra, &witness);
  if (st.labels.service_qos[MatchGraph::kSink] == algebra.zero) return std::nullopt;
  st.selected.assign(g.services.size(), 0);
  st.selected[MatchGraph::kSink] = 1;
  st.service_bound.assign(g.services.size(), algebra.zero);

  std::deque<int> pending(g.services[MatchGraph::kSink].inputs.begin(),
                          g.services[MatchGraph::kSink].inputs.end());
  while (!pending.empty()) {
    const int iv = pending.front();
    pending.pop_front();
    if (witness[iv] < 0) return std::nullopt;  // unreachable input
    const int provider = st.graph.outputs[witness[iv]].owner;
    st.graph = resolve_inputs(st.graph, provider, std::vector<int>{iv});
    if (!st.selected[provider]) {
      st.selected[provider] = 1;
      if (!st.graph.is_endpoint(provider)) ++st.count;
      for (int j : st.graph.services[provider].inputs) pending.push_back(j);
    }
  }
  return st;
}

class LocalSearcher {
 public:
  LocalSearcher(const QosAlgebra& algebra, Qos optimum, Deadline deadline,
                std::uint64_t backtrack_budget, std::vector<BoundTraceEntry>* trace,
                SearchStats& stats)
      : algebra_(algebra), optimum_(optimum), deadline_(deadline),
        backtrack_budget_(backtrack_budget), trace_(trace), stats_(stats) {}

  std::optional<detail::ResolveState> run(const detail::ResolveState& st) {
    if (deadline_.expired()) throw LocalTimeout{};
    ++stats_.expanded;

    if (st.unresolved.empty()) {
      if (selection_total_qos(st.graph, st.selected, algebra_) == optimum_) return st;
      ++stats_.rejected_completions;
      return std::nullopt;
    }

    std::vector<int> pending;
    pending.reserve(st.unresolved.size());
    for (const auto& [iv, e] : st.unresolved) pending.push_back(iv);

    // one resolved-reachability sweep per input owner instead of one BFS
    // per (candidate, input) pair; the graph is fixed within this level
    std::map<int, std::vector<char>> reach;
    auto cyclic = [&](int svc, int iv) {
      const int owner = st.graph.inputs[iv].owner;
      if (owner == svc) return true;
      auto it = reach.find(owner);
      if (it == reach.end())
        it = reach.emplace(owner, resolved_reachable_from(st.graph, owner)).first;
      return it->second[svc] != 0;
    };

    for (int svc : rank_resolvers(st.graph, pending)) {
      // collect every pending input this service may take: edge present,
      // value within the input's bound, no dependency cycle
      std::vector<int> resolved;
      for (const auto& [iv, entry] : st.unresolved) {
        bool edge = false;
        for (int p : st.graph.inputs[iv].parents)
          if (st.graph.outputs[p].owner == svc) {
            edge = true;
            break;
          }
        if (!edge) continue;
        if (!detail::admissible(st, svc, entry, algebra_)) {
          ++stats_.pruned_bound;
          continue;
        }
        if (cyclic(svc, iv)) {
          ++stats_.pruned_cycle;
          continue;
        }
        resolved.push_back(iv);
      }
      if (resolved.empty()) continue;

      auto succ =
          detail::apply_resolution(st, svc, resolved, algebra_, optimum_, trace_, stats_);
      if (!succ) continue;
      if (doomed(*succ)) {
        ++stats_.pruned_bound;
        continue;
      }
      auto result = run(*succ);
      if (result) return result;
      ++stats_.backtracks;
      if (stats_.backtracks > backtrack_budget_) throw LocalBudget{};
    }
    return std::nullopt;
  }

 private:
  // forward check: a pending input with no bound-admissible provider left
  // can never be resolved, so the branch is dead before descending
  bool doomed(const detail::ResolveState& st) const {
    for (const auto& [iv, entry] : st.unresolved) {
      bool viable = false;
      for (int p : st.graph.inputs[iv].parents) {
        const int provider = st.graph.outputs[p].owner;
        if (algebra_.better_or_equal(st.labels.service_qos[provider], entry.max)) {
          viable = true;
          break;
        }
      }
      if (!viable) return true;
    }
    return false;
  }

  const QosAlgebra& algebra_;
  Qos optimum_;
  Deadline deadline_;
  std::uint64_t backtrack_budget_;
  std::vector<BoundTraceEntry>* trace_;
  SearchStats& stats_;
};

}  // namespace

SearchOutcome local_search(const MatchGraph& g, const QosAlgebra& algebra,
                           Deadline deadline, const SearchOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchOutcome out;

  detail::ResolveState root = detail::initial_state(g, algebra);
  const Qos optimum = root.labels.service_qos[MatchGraph::kSink];
  if (optimum == algebra.zero) {
    out.status = SearchStatus::Exhausted;
    return out;
  }

  auto finish_with = [&](const detail::ResolveState& final_state) {
    SolutionRecord rec;
    rec.composition = extract_composition(final_state.graph, final_state.selected, algebra);
    rec.total_qos = optimum;
    rec.services = final_state.count;
    rec.method = SearchMethod::Local;
    rec.elapsed_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.record = std::move(rec);
    out.status = SearchStatus::Found;
  };

  // Backtracking is exponential in the worst case; past this budget the
  // witness realization finishes the job with a possibly larger but still
  // optimal-QoS composition.
  const std::uint64_t budget =
      std::max<std::uint64_t>(1000, 30ull * static_cast<std::uint64_t>(g.service_count()));

  LocalSearcher searcher(algebra, optimum, deadline, budget,
                         options.collect_bound_trace ? &out.bound_trace : nullptr,
                         out.stats);
  // Backtracking exhausted (by budget or deadline) still yields a valid
  // solution: the witness realization is available at negligible cost.
  auto fall_back = [&](SearchStatus otherwise) {
    auto fallback = label_realization(g, algebra);
    if (fallback)
      finish_with(*fallback);
    else
      out.status = otherwise;
  };
  try {
    auto final_state = searcher.run(root);
    if (final_state)
      finish_with(*final_state);
    else
      out.status = SearchStatus::Exhausted;
  } catch (const LocalTimeout&) {
    fall_back(SearchStatus::TimedOut);
  } catch (const LocalBudget&) {
    fall_back(SearchStatus::Exhausted);
  }
  out.stats.elapsed_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

HybridResult hybrid_search(const MatchGraph& g, const QosAlgebra& algebra,
                           Deadline deadline, const SearchOptions& options) {
  HybridResult result;

  SearchOutcome local = local_search(g, algebra, deadline, options);
  result.local_status = local.status;
  result.local_stats = local.stats;
  result.local = local.record;

  const SolutionRecord* incumbent = result.local ? &*result.local : nullptr;
  SearchOutcome global = global_search(g, algebra, deadline, incumbent, options);
  result.global_status = global.status;
  result.global_stats = global.stats;

  if (global.status == SearchStatus::Found) {
    result.best = global.record;
  } else {
    result.best = result.local;
    if (!result.best && global.record) result.best = global.record;
  }
  return result;
}

}  // namespace composer
