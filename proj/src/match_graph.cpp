// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/match_graph.hpp"

#include <algorithm>
#include <deque>

#include "composer/error.hpp"

namespace composer {

std::size_t MatchGraph::match_edge_count() const {
  std::size_t n = 0;
  for (const auto& iv : inputs) n += iv.parents.size();
  return n;
}

std::string MatchGraph::service_name(int svc) const {
  if (svc == kSource) return "So";
  if (svc == kSink) return "Si";
  int reg = services[svc].registry_index;
  return registry->services[reg].id;
}

const std::string& MatchGraph::concept_name(ConceptHandle c) const {
  return registry->ontology.name(c);
}

std::string MatchGraph::input_name(int input_vertex) const {
  const InputVertex& iv = inputs[input_vertex];
  return service_name(iv.owner) + "/" + concept_name(iv.concept_id);
}

namespace {

// Naive pairwise reference: every (output, input) pair through match_degree.
void match_edges_reference(MatchGraph& g) {
  const Ontology& ont = g.registry->ontology;
  for (auto& iv : g.inputs) iv.parents.clear();
  for (auto& ov : g.outputs) ov.children.clear();
  for (std::size_t o = 0; o < g.outputs.size(); ++o) {
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
      if (concept_matches(ont, g.outputs[o].concept_id, g.inputs[i].concept_id, g.policy)) {
        g.outputs[o].children.push_back(static_cast<int>(i));
        g.inputs[i].parents.push_back(static_cast<int>(o));
      }
    }
  }
}

// Fast kernel: bucket inputs by concept, then per output vertex collect
// buckets along the ancestor chain (exact + plugin) and, when the policy
// admits subsume matches, over the concept's subtree interval.
void match_edges_fast(MatchGraph& g, const ParallelConfig& par) {
  const Ontology& ont = g.registry->ontology;
  const int num_inputs = static_cast<int>(g.inputs.size());
  const int num_outputs = static_cast<int>(g.outputs.size());

  std::vector<std::vector<int>> bucket(ont.size());
  for (int i = 0; i < num_inputs; ++i) bucket[g.inputs[i].concept_id].push_back(i);

  // Distinct input concepts ordered by preorder time, for subtree ranges.
  std::vector<ConceptHandle> in_concepts;
  if (g.policy.allow_subsume) {
    for (std::size_t c = 0; c < ont.size(); ++c)
      if (!bucket[c].empty()) in_concepts.push_back(static_cast<ConceptHandle>(c));
    std::sort(in_concepts.begin(), in_concepts.end(),
              [&](ConceptHandle a, ConceptHandle b) { return ont.tin(a) < ont.tin(b); });
  }

  std::vector<std::vector<int>> children(num_outputs);
  const int threads = effective_threads(par);
  // thread spin-up costs more than the kernel below this size
  const bool go_parallel = threads > 1 && num_outputs >= 4096;
  (void)threads;
  (void)go_parallel;

#ifdef COMPOSER_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads) if (go_parallel)
#endif
  for (int o = 0; o < num_outputs; ++o) {
    std::vector<int>& out = children[o];
    const ConceptHandle c = g.outputs[o].concept_id;
    // walk up: t == c is exact, strict ancestors of c are plugin targets
    for (ConceptHandle t = c; t != kNoConcept; t = ont.parent(t)) {
      if (t != c && !g.policy.allow_plugin) break;
      for (int i : bucket[t]) out.push_back(i);
    }
    if (g.policy.allow_subsume) {
      // strict descendants of c via the preorder interval
      auto lo = std::upper_bound(in_concepts.begin(), in_concepts.end(), ont.tin(c),
                                 [&](int t, ConceptHandle x) { return t < ont.tin(x); });
      for (auto it = lo; it != in_concepts.end() && ont.tin(*it) < ont.tout(c); ++it)
        for (int i : bucket[*it]) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
  }

  for (auto& iv : g.inputs) iv.parents.clear();
  for (int o = 0; o < num_outputs; ++o) {
    g.outputs[o].children = std::move(children[o]);
    for (int i : g.outputs[o].children) g.inputs[i].parents.push_back(o);
  }
  // parents end up sorted because outputs are visited in ascending order
}

}  // namespace

void compute_match_edges(MatchGraph& g, const ParallelConfig& par, MatchKernel kernel) {
  if (kernel == MatchKernel::Reference)
    match_edges_reference(g);
  else
    match_edges_fast(g, par);
}

namespace {

void add_service_vertices(MatchGraph& g, int svc, std::span<const ConceptHandle> in,
                          std::span<const ConceptHandle> out) {
  for (ConceptHandle c : in) {
    g.services[svc].inputs.push_back(static_cast<int>(g.inputs.size()));
    g.inputs.push_back({c, svc, {}});
  }
  for (ConceptHandle c : out) {
    g.services[svc].outputs.push_back(static_cast<int>(g.outputs.size()));
    g.outputs.push_back({c, svc, {}});
  }
}

}  // namespace

MatchGraph build_match_graph(const Registry& registry, const Request& request,
                             const ParallelConfig& par, MatchKernel kernel) {
  const Ontology& ont = registry.ontology;
  const MatchPolicy& policy = request.policy;
  const int n = static_cast<int>(registry.services.size());

  // For each concept, the services that want it as an input. A provider
  // concept c satisfies input concept t when t lies on c's ancestor chain
  // (exact/plugin) or inside c's subtree (subsume).
  std::vector<std::vector<int>> wanting(ont.size());
  std::vector<int> unmatched_count(n);
  std::vector<std::vector<char>> input_pending(n);
  for (int s = 0; s < n; ++s) {
    const Service& svc = registry.services[s];
    unmatched_count[s] = static_cast<int>(svc.inputs.size());
    input_pending[s].assign(svc.inputs.size(), 1);
    for (std::size_t k = 0; k < svc.inputs.size(); ++k)
      wanting[svc.inputs[k]].push_back(s);
  }

  std::vector<ConceptHandle> wanted_concepts;  // distinct, for subsume ranges
  if (policy.allow_subsume) {
    for (std::size_t c = 0; c < ont.size(); ++c)
      if (!wanting[c].empty()) wanted_concepts.push_back(static_cast<ConceptHandle>(c));
    std::sort(wanted_concepts.begin(), wanted_concepts.end(),
              [&](ConceptHandle a, ConceptHandle b) { return ont.tin(a) < ont.tin(b); });
  }

  std::vector<char> concept_seen(ont.size(), 0);
  std::vector<char> selected(n, 0);
  std::vector<int> selection_order;

  // mark one input slot of service s (the one asking for concept t) matched
  auto satisfy = [&](int s, ConceptHandle t, std::vector<int>& newly) {
    const Service& svc = registry.services[s];
    auto it = std::lower_bound(svc.inputs.begin(), svc.inputs.end(), t);
    std::size_t slot = static_cast<std::size_t>(it - svc.inputs.begin());
    if (!input_pending[s][slot]) return;
    input_pending[s][slot] = 0;
    if (--unmatched_count[s] == 0 && !selected[s]) newly.push_back(s);
  };

  auto process_concept = [&](ConceptHandle c, std::vector<int>& newly) {
    if (concept_seen[c]) return;
    concept_seen[c] = 1;
    for (ConceptHandle t = c; t != kNoConcept; t = ont.parent(t)) {
      if (t != c && !policy.allow_plugin) break;
      for (int s : wanting[t]) satisfy(s, t, newly);
    }
    if (policy.allow_subsume) {
      auto lo = std::upper_bound(wanted_concepts.begin(), wanted_concepts.end(), ont.tin(c),
                                 [&](int tv, ConceptHandle x) { return tv < ont.tin(x); });
      for (auto it = lo; it != wanted_concepts.end() && ont.tin(*it) < ont.tout(c); ++it)
        for (int s : wanting[*it]) satisfy(s, *it, newly);
    }
  };

  // Layered expansion: concepts made available by one layer select the next.
  // Services with no inputs are invokable upfront and join the first layer.
  std::vector<int> newly;
  for (int s = 0; s < n; ++s)
    if (unmatched_count[s] == 0) newly.push_back(s);
  std::vector<ConceptHandle> frontier(request.provided.begin(), request.provided.end());
  while (true) {
    for (ConceptHandle c : frontier) process_concept(c, newly);
    frontier.clear();
    if (newly.empty()) break;
    std::sort(newly.begin(), newly.end());
    for (int s : newly) {
      if (selected[s]) continue;
      selected[s] = 1;
      selection_order.push_back(s);
      for (ConceptHandle c : registry.services[s].outputs)
        if (!concept_seen[c]) frontier.push_back(c);
    }
    newly.clear();
  }

  // The sink is invokable iff every wanted concept was seen matched.
  std::vector<ConceptHandle> available;
  available.reserve(request.provided.size());
  for (std::size_t c = 0; c < ont.size(); ++c)
    if (concept_seen[c]) available.push_back(static_cast<ConceptHandle>(c));
  std::vector<ConceptHandle> got = matched_subset(ont, available, request.wanted, policy);
  if (got.size() != request.wanted.size()) {
    std::vector<std::string> missing;
    for (ConceptHandle w : request.wanted)
      if (std::find(got.begin(), got.end(), w) == got.end())
        missing.push_back(ont.name(w));
    std::string msg = "no solution: request outputs not producible:";
    for (const auto& m : missing) msg += " " + m;
    throw NoSolutionError(msg, std::move(missing));
  }

  MatchGraph g;
  g.registry = &registry;
  g.policy = policy;
  g.services.resize(2 + selection_order.size());
  for (auto& q : g.service_qos) q.assign(g.services.size(), 0);

  add_service_vertices(g, MatchGraph::kSource, {}, request.provided);
  add_service_vertices(g, MatchGraph::kSink, request.wanted, {});
  g.service_qos[static_cast<int>(Criterion::ResponseTime)][MatchGraph::kSource] = 0;
  g.service_qos[static_cast<int>(Criterion::ResponseTime)][MatchGraph::kSink] = 0;
  g.service_qos[static_cast<int>(Criterion::Throughput)][MatchGraph::kSource] = kQosInfinity;
  g.service_qos[static_cast<int>(Criterion::Throughput)][MatchGraph::kSink] = kQosInfinity;

  for (std::size_t k = 0; k < selection_order.size(); ++k) {
    const int svc = static_cast<int>(2 + k);
    const int reg = selection_order[k];
    const Service& s = registry.services[reg];
    g.services[svc].registry_index = reg;
    add_service_vertices(g, svc, s.inputs, s.outputs);
    g.service_qos[0][svc] = s.qos[0];
    g.service_qos[1][svc] = s.qos[1];
  }

  compute_match_edges(g, par, kernel);
  return g;
}

MatchGraph resolve_inputs(const MatchGraph& g, int svc, std::span<const int> resolved) {
  MatchGraph out = g;
  for (int i : resolved) {
    // pick the surviving parent: an output of svc, smallest concept name
    int keep = -1;
    for (int p : out.inputs[i].parents) {
      if (out.outputs[p].owner != svc) continue;
      if (keep == -1 || out.concept_name(out.outputs[p].concept_id) <
                            out.concept_name(out.outputs[keep].concept_id))
        keep = p;
    }
    if (keep == -1)
      throw Error("resolve: service " + g.service_name(svc) +
                  " has no match edge into input " + g.input_name(i));
    for (int p : out.inputs[i].parents) {
      if (p == keep) continue;
      auto& ch = out.outputs[p].children;
      ch.erase(std::remove(ch.begin(), ch.end(), i), ch.end());
    }
    out.inputs[i].parents.assign(1, keep);
  }
  return out;
}

MatchGraph compact_graph(const MatchGraph& g, const std::vector<char>& alive) {
  if (!alive[MatchGraph::kSource] || !alive[MatchGraph::kSink])
    throw Error("compact: endpoints must stay alive");

  const int n = static_cast<int>(g.services.size());
  std::vector<int> svc_map(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s)
    if (alive[s]) svc_map[s] = next++;

  std::vector<int> in_map(g.inputs.size(), -1), out_map(g.outputs.size(), -1);
  MatchGraph out;
  out.registry = g.registry;
  out.policy = g.policy;
  out.services.resize(next);
  for (auto& q : out.service_qos) q.resize(next);

  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    const int ns = svc_map[s];
    out.services[ns].registry_index = g.services[s].registry_index;
    out.services[ns].members = g.services[s].members;
    for (std::size_t c = 0; c < kCriterionCount; ++c)
      out.service_qos[c][ns] = g.service_qos[c][s];
    for (int iv : g.services[s].inputs) {
      in_map[iv] = static_cast<int>(out.inputs.size());
      out.services[ns].inputs.push_back(in_map[iv]);
      out.inputs.push_back({g.inputs[iv].concept_id, ns, {}});
    }
    for (int ov : g.services[s].outputs) {
      out_map[ov] = static_cast<int>(out.outputs.size());
      out.services[ns].outputs.push_back(out_map[ov]);
      out.outputs.push_back({g.outputs[ov].concept_id, ns, {}});
    }
  }

  for (std::size_t iv = 0; iv < g.inputs.size(); ++iv) {
    if (in_map[iv] < 0) continue;
    for (int p : g.inputs[iv].parents)
      if (out_map[p] >= 0) out.inputs[in_map[iv]].parents.push_back(out_map[p]);
  }
  for (std::size_t ov = 0; ov < g.outputs.size(); ++ov) {
    if (out_map[ov] < 0) continue;
    for (int ch : g.outputs[ov].children)
      if (in_map[ch] >= 0) out.outputs[out_map[ov]].children.push_back(in_map[ch]);
  }
  return out;
}

}  // namespace composer
