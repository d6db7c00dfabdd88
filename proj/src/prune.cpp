// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/prune.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <tuple>

namespace composer {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PrunePassReport make_pass_report(const std::string& name, const MatchGraph& before,
                                 const MatchGraph& after, Clock::time_point t0) {
  PrunePassReport r;
  r.pass = name;
  r.services_before = before.service_count();
  r.services_after = after.service_count();
  r.inputs_removed = static_cast<int>(before.inputs.size() - after.inputs.size());
  r.outputs_removed = static_cast<int>(before.outputs.size() - after.outputs.size());
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace

MatchGraph prune_unreachable(const MatchGraph& g, PruneReport* report) {
  auto t0 = Clock::now();
  std::vector<char> alive(g.services.size(), 0);
  alive[MatchGraph::kSource] = 1;

  // Backward closure from the sink over match edges.
  std::deque<int> work{MatchGraph::kSink};
  alive[MatchGraph::kSink] = 1;
  while (!work.empty()) {
    int svc = work.front();
    work.pop_front();
    for (int iv : g.services[svc].inputs) {
      for (int p : g.inputs[iv].parents) {
        int feeder = g.outputs[p].owner;
        if (!alive[feeder]) {
          alive[feeder] = 1;
          work.push_back(feeder);
        }
      }
    }
  }

  MatchGraph out = compact_graph(g, alive);
  if (report) report->passes.push_back(make_pass_report("unreachable", g, out, t0));
  return out;
}

MaxBoundTable compute_max_bounds(const MatchGraph& g, const QosLabels& labels,
                                 const QosAlgebra& algebra) {
  MaxBoundTable table;
  table.value.assign(g.inputs.size(), algebra.zero);
  table.reached.assign(g.inputs.size(), 0);

  const Qos sink_bound = algebra.subtract(labels.service_qos[MatchGraph::kSink],
                                          g.cost(MatchGraph::kSink, algebra));
  for (int iv : g.services[MatchGraph::kSink].inputs) {
    table.value[iv] = sink_bound;
    table.reached[iv] = 1;
  }

  // Worklist over services: recompute a service's input bounds whenever a
  // bound it feeds loosens. Values around a cycle only tighten, so the
  // loosest fixpoint is reached after finitely many relaxations.
  std::deque<int> work;
  std::vector<char> queued(g.services.size(), 0);
  auto enqueue_feeders_of = [&](int iv) {
    for (int p : g.inputs[iv].parents) {
      int feeder = g.outputs[p].owner;
      if (!queued[feeder] && !g.is_endpoint(feeder)) {
        queued[feeder] = 1;
        work.push_back(feeder);
      }
    }
  };
  for (int iv : g.services[MatchGraph::kSink].inputs) enqueue_feeders_of(iv);

  while (!work.empty()) {
    int svc = work.front();
    work.pop_front();
    queued[svc] = 0;

    bool fed_any = false;
    Qos fed = algebra.identity;  // identity for the loosest-of combine
    for (int ov : g.services[svc].outputs) {
      for (int iv : g.outputs[ov].children) {
        if (!table.reached[iv]) continue;
        fed = fed_any ? algebra.worst(fed, table.value[iv]) : table.value[iv];
        fed_any = true;
      }
    }
    if (!fed_any) continue;

    const Qos candidate = algebra.subtract(fed, g.cost(svc, algebra));
    for (int iv : g.services[svc].inputs) {
      const bool loosen = !table.reached[iv] ||
                          algebra.strictly_better(table.value[iv], candidate);
      if (loosen) {
        table.value[iv] = candidate;
        table.reached[iv] = 1;
        enqueue_feeders_of(iv);
      }
    }
  }
  return table;
}

MatchGraph prune_suboptimal(const MatchGraph& g, const QosLabels& labels,
                            const MaxBoundTable& bounds, const QosAlgebra& algebra,
                            PruneReport* report) {
  auto t0 = Clock::now();
  std::vector<char> alive(g.services.size(), 1);
  for (int svc = 2; svc < static_cast<int>(g.services.size()); ++svc) {
    const Qos value = labels.service_qos[svc];
    bool within_some = false;
    for (int ov : g.services[svc].outputs) {
      for (int iv : g.outputs[ov].children) {
        if (bounds.reached[iv] && algebra.better_or_equal(value, bounds.value[iv])) {
          within_some = true;
          break;
        }
      }
      if (within_some) break;
    }
    if (!within_some) alive[svc] = 0;
  }

  MatchGraph out = compact_graph(g, alive);
  if (report) report->passes.push_back(make_pass_report("suboptimal", g, out, t0));
  return out;
}

namespace {

// Interface signature of a service in the current graph: required input
// concepts, the set of graph inputs its outputs match, and its cost.
struct Signature {
  std::vector<int> in_concepts;
  std::vector<int> coverage;
  Qos cost;

  auto key() const { return std::tie(in_concepts, coverage, cost); }
};

Signature make_signature(const MatchGraph& g, int svc, const QosAlgebra& algebra) {
  Signature s;
  for (int iv : g.services[svc].inputs) s.in_concepts.push_back(g.inputs[iv].concept_id);
  std::sort(s.in_concepts.begin(), s.in_concepts.end());
  for (int ov : g.services[svc].outputs)
    s.coverage.insert(s.coverage.end(), g.outputs[ov].children.begin(),
                      g.outputs[ov].children.end());
  std::sort(s.coverage.begin(), s.coverage.end());
  s.coverage.erase(std::unique(s.coverage.begin(), s.coverage.end()), s.coverage.end());
  s.cost = g.cost(svc, algebra);
  return s;
}

const std::string& registry_id(const MatchGraph& g, int svc) {
  return g.registry->services[g.services[svc].registry_index].id;
}

}  // namespace

MatchGraph combine_equivalent(const MatchGraph& g, const QosAlgebra& algebra,
                              PruneReport* report) {
  auto t0 = Clock::now();

  std::map<std::tuple<std::vector<int>, std::vector<int>, Qos>, std::vector<int>> groups;
  for (int svc = 2; svc < static_cast<int>(g.services.size()); ++svc)
    groups[make_signature(g, svc, algebra).key()].push_back(svc);

  std::vector<char> alive(g.services.size(), 1);
  std::vector<std::vector<int>> extra_members(g.services.size());
  int merges = 0;
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    int rep = members[0];
    for (int m : members)
      if (registry_id(g, m) < registry_id(g, rep)) rep = m;
    for (int m : members) {
      if (m == rep) continue;
      alive[m] = 0;
      extra_members[rep].push_back(g.services[m].registry_index);
      for (int r : g.services[m].members) extra_members[rep].push_back(r);
      ++merges;
    }
  }

  MatchGraph merged = g;
  for (int svc = 2; svc < static_cast<int>(g.services.size()); ++svc) {
    if (extra_members[svc].empty()) continue;
    auto& mem = merged.services[svc].members;
    mem.insert(mem.end(), extra_members[svc].begin(), extra_members[svc].end());
    std::sort(mem.begin(), mem.end(), [&](int a, int b) {
      return g.registry->services[a].id < g.registry->services[b].id;
    });
  }

  MatchGraph out = compact_graph(merged, alive);
  if (report) {
    auto r = make_pass_report("equivalence", g, out, t0);
    r.merges = merges;
    report->passes.push_back(r);
  }
  return out;
}

std::vector<char> mark_dominated(const MatchGraph& g, const QosAlgebra& algebra,
                                 const ParallelConfig& par, bool parallel) {
  const int n = static_cast<int>(g.services.size());
  std::vector<Signature> sig(n);
  for (int svc = 2; svc < n; ++svc) sig[svc] = make_signature(g, svc, algebra);

  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };

  // a dominates b: needs no more, covers no less, costs no more, and is
  // strictly ahead somewhere. Ties on everything keep the smaller id.
  auto dominated_by = [&](int b, int a) {
    const Signature &sa = sig[a], &sb = sig[b];
    if (!subset(sa.in_concepts, sb.in_concepts)) return false;
    if (!subset(sb.coverage, sa.coverage)) return false;
    if (!algebra.better_or_equal(sa.cost, sb.cost)) return false;
    const bool strict = sa.in_concepts.size() < sb.in_concepts.size() ||
                        sa.coverage.size() > sb.coverage.size() ||
                        algebra.strictly_better(sa.cost, sb.cost);
    if (strict) return true;
    return registry_id(g, a) < registry_id(g, b);  // mutual domination
  };

  std::vector<char> mark(n, 0);
  const int threads = parallel ? effective_threads(par) : 1;
  (void)threads;
#ifdef COMPOSER_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads) if (parallel && threads > 1)
#endif
  for (int b = 2; b < n; ++b) {
    for (int a = 2; a < n; ++a) {
      if (a == b) continue;
      if (dominated_by(b, a)) {
        mark[b] = 1;
        break;
      }
    }
  }
  return mark;
}

MatchGraph remove_dominated(const MatchGraph& g, const QosAlgebra& algebra,
                            PruneReport* report, const ParallelConfig& par) {
  auto t0 = Clock::now();
  MatchGraph cur = g;
  while (true) {
    std::vector<char> mark = mark_dominated(cur, algebra, par, !par.force_serial);
    if (std::find(mark.begin(), mark.end(), 1) == mark.end()) break;
    std::vector<char> alive(cur.services.size());
    for (std::size_t s = 0; s < alive.size(); ++s) alive[s] = !mark[s];
    cur = compact_graph(cur, alive);
  }
  if (report) report->passes.push_back(make_pass_report("dominance", g, cur, t0));
  return cur;
}

MatchGraph optimize_pipeline(const MatchGraph& g, const QosAlgebra& algebra,
                             PruneReport* report, const ParallelConfig& par) {
  auto t0 = Clock::now();
  if (report) report->services_before = g.service_count();

  MatchGraph cur = prune_unreachable(g, report);

  // Bound pruning can strand feeders or worsen labels, so passes 1 and 2
  // iterate together until nothing moves.
  while (true) {
    QosLabels labels = compute_qos_labels(cur, algebra);
    MaxBoundTable bounds = compute_max_bounds(cur, labels, algebra);
    MatchGraph next = prune_suboptimal(cur, labels, bounds, algebra, report);
    const bool removed = next.service_count() != cur.service_count();
    cur = std::move(next);
    if (!removed) break;
    cur = prune_unreachable(cur, report);
  }

  cur = combine_equivalent(cur, algebra, report);
  cur = remove_dominated(cur, algebra, report, par);

  if (report) {
    report->services_after = cur.service_count();
    report->seconds = seconds_since(t0);
  }
  return cur;
}

}  // namespace composer
