// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/oracle.hpp"

#include <algorithm>
#include <functional>

#include "composer/error.hpp"

namespace composer {

namespace {

// Acyclic feasibility of a candidate selection: schedule services in layers,
// a service becoming schedulable once every input has a parent owned by an
// already scheduled service. Feasible iff the sink and every selected
// service get scheduled (any topological resolution then exists).
bool closure_feasible(const MatchGraph& g, const std::vector<char>& in_subset) {
  const int n = static_cast<int>(g.services.size());
  std::vector<char> scheduled(n, 0);
  scheduled[MatchGraph::kSource] = 1;

  bool progress = true;
  while (progress) {
    progress = false;
    for (int svc = 0; svc < n; ++svc) {
      if (scheduled[svc] || !in_subset[svc]) continue;
      bool ready = true;
      for (int iv : g.services[svc].inputs) {
        bool matched = false;
        for (int p : g.inputs[iv].parents) {
          int provider = g.outputs[p].owner;
          if (in_subset[provider] && scheduled[provider]) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          ready = false;
          break;
        }
      }
      if (ready) {
        scheduled[svc] = 1;
        progress = true;
      }
    }
  }
  for (int svc = 0; svc < n; ++svc)
    if (in_subset[svc] && !scheduled[svc]) return false;
  return true;
}

// Best QoS achievable inside a selection: repeated full sweeps of the
// input/service value equations until nothing improves.
Qos subset_optimum(const MatchGraph& g, const std::vector<char>& in_subset,
                   const QosAlgebra& algebra) {
  const int n = static_cast<int>(g.services.size());
  std::vector<Qos> svc_value(n, algebra.zero);
  for (int svc = 0; svc < n; ++svc)
    if (in_subset[svc] && g.services[svc].inputs.empty())
      svc_value[svc] = g.cost(svc, algebra);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int svc = 0; svc < n; ++svc) {
      if (!in_subset[svc] || g.services[svc].inputs.empty()) continue;
      Qos worst = algebra.identity;
      bool ok = true;
      for (int iv : g.services[svc].inputs) {
        Qos best = algebra.zero;
        for (int p : g.inputs[iv].parents) {
          int provider = g.outputs[p].owner;
          if (in_subset[provider]) best = algebra.best(best, svc_value[provider]);
        }
        if (best == algebra.zero) {
          ok = false;
          break;
        }
        worst = algebra.worst(worst, best);
      }
      if (!ok) continue;
      Qos v = algebra.aggregate(worst, g.cost(svc, algebra));
      if (algebra.strictly_better(v, svc_value[svc])) {
        svc_value[svc] = v;
        changed = true;
      }
    }
  }
  return svc_value[MatchGraph::kSink];
}

// Visit every subset of `pool` with exactly k elements.
void for_each_subset(const std::vector<int>& pool, int k,
                     const std::function<void(const std::vector<int>&)>& visit) {
  const int n = static_cast<int>(pool.size());
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> subset(k);
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    visit(subset);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct OracleSetup {
  std::vector<int> pool;  // non-endpoint service ids
  Qos optimum;
  bool feasible_at_all;
};

OracleSetup setup(const MatchGraph& g, const QosAlgebra& algebra, int max_services) {
  if (g.service_count() > max_services)
    throw Error("oracle: graph has " + std::to_string(g.service_count()) +
                " services, above the guard of " + std::to_string(max_services));
  OracleSetup s;
  for (int svc = 2; svc < static_cast<int>(g.services.size()); ++svc)
    s.pool.push_back(svc);

  std::vector<char> all(g.services.size(), 1);
  s.feasible_at_all = closure_feasible(g, all);
  s.optimum = s.feasible_at_all ? subset_optimum(g, all, algebra) : algebra.zero;
  if (s.optimum == algebra.zero) s.feasible_at_all = false;
  return s;
}

}  // namespace

OracleResult brute_force_min_composition(const MatchGraph& g, const QosAlgebra& algebra,
                                         int max_services) {
  OracleSetup s = setup(g, algebra, max_services);
  OracleResult result;
  if (!s.feasible_at_all) return result;

  std::vector<char> mask(g.services.size(), 0);
  mask[MatchGraph::kSource] = mask[MatchGraph::kSink] = 1;

  for (int k = 0; k <= static_cast<int>(s.pool.size()); ++k) {
    std::optional<std::vector<int>> found;
    for_each_subset(s.pool, k, [&](const std::vector<int>& subset) {
      if (found) return;
      for (int svc : subset) mask[svc] = 1;
      if (closure_feasible(g, mask) && subset_optimum(g, mask, algebra) == s.optimum)
        found = subset;
      for (int svc : subset) mask[svc] = 0;
    });
    if (found) {
      result.feasible = true;
      result.optimal_qos = s.optimum;
      result.min_services = k;
      result.witness = *found;
      return result;
    }
  }
  return result;
}

std::vector<Qos> oracle_input_optima(const MatchGraph& g, const QosAlgebra& algebra) {
  const int n = static_cast<int>(g.services.size());
  std::vector<char> all(g.services.size(), 1);
  std::vector<Qos> svc_value(n, algebra.zero);
  for (int svc = 0; svc < n; ++svc)
    if (g.services[svc].inputs.empty()) svc_value[svc] = g.cost(svc, algebra);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int svc = 0; svc < n; ++svc) {
      if (g.services[svc].inputs.empty()) continue;
      Qos worst = algebra.identity;
      bool ok = true;
      for (int iv : g.services[svc].inputs) {
        Qos best = algebra.zero;
        for (int p : g.inputs[iv].parents)
          best = algebra.best(best, svc_value[g.outputs[p].owner]);
        if (best == algebra.zero) {
          ok = false;
          break;
        }
        worst = algebra.worst(worst, best);
      }
      if (!ok) continue;
      Qos v = algebra.aggregate(worst, g.cost(svc, algebra));
      if (algebra.strictly_better(v, svc_value[svc])) {
        svc_value[svc] = v;
        changed = true;
      }
    }
  }

  std::vector<Qos> input_optima(g.inputs.size(), algebra.zero);
  for (std::size_t iv = 0; iv < g.inputs.size(); ++iv)
    for (int p : g.inputs[iv].parents)
      input_optima[iv] = algebra.best(input_optima[iv], svc_value[g.outputs[p].owner]);
  return input_optima;
}

std::vector<std::vector<int>> oracle_all_min_compositions(const MatchGraph& g,
                                                          const QosAlgebra& algebra,
                                                          int max_services) {
  OracleSetup s = setup(g, algebra, max_services);
  std::vector<std::vector<int>> out;
  if (!s.feasible_at_all) return out;

  std::vector<char> mask(g.services.size(), 0);
  mask[MatchGraph::kSource] = mask[MatchGraph::kSink] = 1;
  for (int k = 0; k <= static_cast<int>(s.pool.size()); ++k) {
    for_each_subset(s.pool, k, [&](const std::vector<int>& subset) {
      for (int svc : subset) mask[svc] = 1;
      if (closure_feasible(g, mask) && subset_optimum(g, mask, algebra) == s.optimum)
        out.push_back(subset);
      for (int svc : subset) mask[svc] = 0;
    });
    if (!out.empty()) return out;
  }
  return out;
}

}  // namespace composer
