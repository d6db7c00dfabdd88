// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/qos_labels.hpp"

#include <queue>

#include "composer/error.hpp"

namespace composer {

Qos aggregated_service_qos(const MatchGraph& g, int svc,
                           std::span<const Qos> input_qos,
                           const QosAlgebra& algebra) {
  const auto& in = g.services[svc].inputs;
  if (in.empty()) return g.cost(svc, algebra);
  Qos worst = input_qos[in[0]];
  for (std::size_t k = 1; k < in.size(); ++k)
    worst = algebra.worst(worst, input_qos[in[k]]);
  return algebra.aggregate(worst, g.cost(svc, algebra));
}

Qos optimal_input_qos(const MatchGraph& g, int input_vertex,
                      std::span<const Qos> service_qos,
                      const QosAlgebra& algebra) {
  const auto& parents = g.inputs[input_vertex].parents;
  if (parents.empty()) return algebra.zero;
  Qos best = service_qos[g.outputs[parents[0]].owner];
  for (std::size_t k = 1; k < parents.size(); ++k)
    best = algebra.best(best, service_qos[g.outputs[parents[k]].owner]);
  return best;
}

QosLabels compute_qos_labels(const MatchGraph& g, const QosAlgebra& algebra,
                             std::vector<int>* witness_parent) {
  QosLabels labels;
  labels.input_qos.assign(g.inputs.size(), algebra.zero);
  labels.service_qos.assign(g.services.size(), algebra.zero);
  if (witness_parent) witness_parent->assign(g.inputs.size(), -1);

  // min-heap on (value under the order, service id); lazy deletion
  struct Entry {
    Qos value;
    int svc;
  };
  auto cmp = [&](const Entry& a, const Entry& b) {
    if (a.value != b.value) return !algebra.strictly_better(a.value, b.value);
    return a.svc > b.svc;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);

  // Services without inputs (the source among them) are available upfront.
  for (int s = 0; s < static_cast<int>(g.services.size()); ++s) {
    if (!g.services[s].inputs.empty()) continue;
    labels.service_qos[s] = aggregated_service_qos(g, s, labels.input_qos, algebra);
    queue.push({labels.service_qos[s], s});
  }

  std::vector<char> touched(g.services.size(), 0);
  std::vector<int> touched_list;

  while (!queue.empty()) {
    Entry top = queue.top();
    queue.pop();
    if (top.value != labels.service_qos[top.svc]) continue;  // stale

    touched_list.clear();
    for (int ov : g.services[top.svc].outputs) {
      for (int iv : g.outputs[ov].children) {
        if (algebra.strictly_better(top.value, labels.input_qos[iv])) {
          labels.input_qos[iv] = top.value;
          if (witness_parent) (*witness_parent)[iv] = ov;
          int consumer = g.inputs[iv].owner;
          if (!touched[consumer]) {
            touched[consumer] = 1;
            touched_list.push_back(consumer);
          }
        }
      }
    }
    for (int w : touched_list) {
      touched[w] = 0;
      Qos v = aggregated_service_qos(g, w, labels.input_qos, algebra);
      if (algebra.strictly_better(v, labels.service_qos[w])) {
        labels.service_qos[w] = v;
        queue.push({v, w});
      }
    }
  }
  return labels;
}

Qos graph_optimal_qos(const MatchGraph& g, const QosAlgebra& algebra) {
  QosLabels labels = compute_qos_labels(g, algebra);
  return labels.service_qos[MatchGraph::kSink];
}

}  // namespace composer
