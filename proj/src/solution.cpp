// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/solution.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "composer/error.hpp"

namespace composer {

Qos selection_total_qos(const MatchGraph& g, const std::vector<char>& selected,
                        const QosAlgebra& algebra) {
  const int n = static_cast<int>(g.services.size());
  // dependency edges: provider -> consumer over single-parent inputs
  std::vector<std::vector<int>> consumers(n);
  std::vector<int> pending(n, 0);
  for (int svc = 0; svc < n; ++svc) {
    if (!selected[svc]) continue;
    for (int iv : g.services[svc].inputs) {
      if (g.inputs[iv].parents.size() != 1) return algebra.zero;  // incomplete
      int provider = g.outputs[g.inputs[iv].parents[0]].owner;
      if (!selected[provider]) return algebra.zero;
      consumers[provider].push_back(svc);
      ++pending[svc];
    }
  }

  std::vector<Qos> value(n, algebra.zero);
  std::deque<int> ready;
  int processed = 0, total = 0;
  for (int svc = 0; svc < n; ++svc) {
    if (!selected[svc]) continue;
    ++total;
    if (pending[svc] == 0) ready.push_back(svc);
  }

  std::vector<Qos> worst_in(n, algebra.identity);
  while (!ready.empty()) {
    int svc = ready.front();
    ready.pop_front();
    ++processed;
    value[svc] = g.services[svc].inputs.empty()
                     ? g.cost(svc, algebra)
                     : algebra.aggregate(worst_in[svc], g.cost(svc, algebra));
    for (int consumer : consumers[svc]) {
      worst_in[consumer] = algebra.worst(worst_in[consumer], value[svc]);
      if (--pending[consumer] == 0) ready.push_back(consumer);
    }
  }
  if (processed != total) return algebra.zero;  // cycle among selected services
  return value[MatchGraph::kSink];
}

Composition extract_composition(const MatchGraph& g, const std::vector<char>& selected,
                                const QosAlgebra& algebra) {
  Composition comp;

  std::vector<int> order;
  for (int svc = 0; svc < static_cast<int>(g.services.size()); ++svc)
    if (selected[svc] && !g.is_endpoint(svc)) order.push_back(svc);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return g.service_name(a) < g.service_name(b);
  });

  auto add_service = [&](int svc) {
    Composition::Svc s;
    s.id = g.service_name(svc);
    s.qos = g.cost(svc, algebra);
    if (!g.is_endpoint(svc)) {
      s.members.push_back(s.id);
      for (int reg : g.services[svc].members)
        s.members.push_back(g.registry->services[reg].id);
      std::sort(s.members.begin(), s.members.end());
      s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
    }
    comp.services.push_back(std::move(s));
  };
  add_service(MatchGraph::kSource);
  for (int svc : order) add_service(svc);
  add_service(MatchGraph::kSink);

  for (int svc : order) {
    for (int iv : g.services[svc].inputs) {
      if (g.inputs[iv].parents.size() != 1)
        throw Error("extract: input " + g.input_name(iv) + " is not resolved");
      int p = g.inputs[iv].parents[0];
      comp.matches.push_back({g.service_name(g.outputs[p].owner),
                              g.concept_name(g.outputs[p].concept_id),
                              g.service_name(svc), g.concept_name(g.inputs[iv].concept_id)});
    }
  }
  for (int iv : g.services[MatchGraph::kSink].inputs) {
    if (g.inputs[iv].parents.size() != 1)
      throw Error("extract: input " + g.input_name(iv) + " is not resolved");
    int p = g.inputs[iv].parents[0];
    comp.matches.push_back({g.service_name(g.outputs[p].owner),
                            g.concept_name(g.outputs[p].concept_id), "Si",
                            g.concept_name(g.inputs[iv].concept_id)});
  }
  std::sort(comp.matches.begin(), comp.matches.end(), [](const auto& a, const auto& b) {
    return std::tie(a.to_service, a.input, a.from_service, a.output) <
           std::tie(b.to_service, b.input, b.from_service, b.output);
  });
  return comp;
}

ValidationReport validate_composition(const Registry& registry, const Request& request,
                                      const Composition& comp, const QosAlgebra& algebra) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };
  const Ontology& ont = registry.ontology;

  std::map<std::string, int> pos;
  for (std::size_t k = 0; k < comp.services.size(); ++k) {
    const auto& s = comp.services[k];
    if (pos.count(s.id)) fail("duplicate service '" + s.id + "'");
    pos[s.id] = static_cast<int>(k);
  }
  if (!pos.count("So")) fail("missing So");
  if (!pos.count("Si")) fail("missing Si");

  // interface of each node, by name
  auto node_inputs = [&](const std::string& id) -> std::vector<ConceptHandle> {
    if (id == "So") return {};
    if (id == "Si") return request.wanted;
    const Service* s = registry.find(id);
    return s ? s->inputs : std::vector<ConceptHandle>{};
  };
  auto node_outputs = [&](const std::string& id) -> std::vector<ConceptHandle> {
    if (id == "So") return request.provided;
    if (id == "Si") return {};
    const Service* s = registry.find(id);
    return s ? s->outputs : std::vector<ConceptHandle>{};
  };

  for (const auto& s : comp.services) {
    if (s.id == "So" || s.id == "Si") continue;
    const Service* reg = registry.find(s.id);
    if (!reg) {
      fail("unknown service '" + s.id + "'");
      continue;
    }
    if (reg->qos_value(algebra.criterion) != s.qos)
      fail("service '" + s.id + "' declares qos " + std::to_string(s.qos) +
           " but the registry says " +
           std::to_string(reg->qos_value(algebra.criterion)));
    for (const auto& m : s.members) {
      const Service* member = registry.find(m);
      if (!member) {
        fail("unknown member '" + m + "' of '" + s.id + "'");
        continue;
      }
      if (member->inputs != reg->inputs || member->outputs != reg->outputs ||
          member->qos_value(algebra.criterion) != reg->qos_value(algebra.criterion))
        fail("member '" + m + "' is not interchangeable with '" + s.id + "'");
    }
  }

  // exactly one match per input of every retained consumer
  std::map<std::pair<std::string, std::string>, int> matched;
  for (const auto& m : comp.matches) {
    if (!pos.count(m.from_service) || !pos.count(m.to_service)) {
      fail("match references service outside the composition: " + m.from_service +
           " -> " + m.to_service);
      continue;
    }
    auto out_c = ont.find(m.output);
    auto in_c = ont.find(m.input);
    if (!out_c || !in_c) {
      fail("match references unknown concept '" + (out_c ? m.input : m.output) + "'");
      continue;
    }
    auto outs = node_outputs(m.from_service);
    if (std::find(outs.begin(), outs.end(), *out_c) == outs.end())
      fail("'" + m.from_service + "' does not produce '" + m.output + "'");
    auto ins = node_inputs(m.to_service);
    if (std::find(ins.begin(), ins.end(), *in_c) == ins.end())
      fail("'" + m.to_service + "' does not require '" + m.input + "'");
    if (!concept_matches(ont, *out_c, *in_c, request.policy))
      fail("no semantic match from '" + m.output + "' to '" + m.input + "'");
    matched[{m.to_service, m.input}]++;
  }
  for (const auto& s : comp.services) {
    if (s.id == "So") continue;
    for (ConceptHandle c : node_inputs(s.id)) {
      int k = 0;
      if (auto it = matched.find({s.id, ont.name(c)}); it != matched.end()) k = it->second;
      if (k == 0) fail("input " + s.id + "/" + ont.name(c) + " is unmatched");
      if (k > 1)
        fail("input " + s.id + "/" + ont.name(c) + " is matched " + std::to_string(k) +
             " times");
    }
  }
  if (!report.ok()) return report;

  // cycle check + from-scratch QoS over the dependency DAG
  const int n = static_cast<int>(comp.services.size());
  std::vector<std::vector<int>> consumers(n);
  std::vector<int> pending(n, 0);
  for (const auto& m : comp.matches) {
    consumers[pos[m.from_service]].push_back(pos[m.to_service]);
    ++pending[pos[m.to_service]];
  }
  std::vector<Qos> worst_in(n, algebra.identity);
  std::vector<Qos> value(n, algebra.zero);
  std::deque<int> ready;
  for (int k = 0; k < n; ++k)
    if (pending[k] == 0) ready.push_back(k);
  int processed = 0;
  while (!ready.empty()) {
    int k = ready.front();
    ready.pop_front();
    ++processed;
    const bool no_inputs = node_inputs(comp.services[k].id).empty();
    Qos own = comp.services[k].id == "So" || comp.services[k].id == "Si"
                  ? algebra.identity
                  : registry.find(comp.services[k].id)->qos_value(algebra.criterion);
    value[k] = no_inputs ? own : algebra.aggregate(worst_in[k], own);
    for (int c : consumers[k]) {
      worst_in[c] = algebra.worst(worst_in[c], value[k]);
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (processed != n) {
    std::string cyc = "cycle through:";
    for (int k = 0; k < n; ++k)
      if (pending[k] > 0) cyc += " " + comp.services[k].id;
    fail(cyc);
    return report;
  }

  report.recomputed_total = value[pos["Si"]];
  report.recomputed_count = comp.service_count();
  return report;
}

}  // namespace composer
