// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "composer/error.hpp"

namespace composer {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  return doc;
}

const json& need(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

std::vector<ConceptHandle> concept_list(const json& arr, const Ontology& ont,
                                        const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array of concepts");
  std::vector<ConceptHandle> out;
  for (const auto& c : arr) {
    auto h = ont.find(c.get<std::string>());
    if (!h) throw ParseError(where + ": unknown concept '" + c.get<std::string>() + "'");
    out.push_back(*h);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ordered_json qos_to_json(Qos v) {
  if (!std::isfinite(v)) return ordered_json("unbounded");
  // integral values render as integers so documents round-trip exactly
  if (v == static_cast<Qos>(static_cast<std::int64_t>(v)))
    return ordered_json(static_cast<std::int64_t>(v));
  return ordered_json(v);
}

Qos qos_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "unbounded") return kQosInfinity;
    throw ParseError("qos value must be a number or \"unbounded\"");
  }
  return v.get<double>();
}

Registry load_registry(const json& doc) {
  Registry reg;
  const json& ontology = need(doc, "ontology", "registry");
  for (const auto& entry : ontology) {
    const std::string name = need(entry, "concept", "ontology entry").get<std::string>();
    reg.ontology.add_concept(name);
  }
  for (const auto& entry : ontology) {
    if (!entry.contains("parent") || entry["parent"].is_null()) continue;
    const std::string child = entry["concept"].get<std::string>();
    const std::string parent = entry["parent"].get<std::string>();
    auto p = reg.ontology.find(parent);
    if (!p)
      throw ParseError("ontology: concept '" + child + "' references unknown parent '" +
                       parent + "'");
    reg.ontology.set_parent(reg.ontology.require(child), *p);
  }
  reg.ontology.finalize();

  const json& services = need(doc, "services", "registry");
  for (const auto& entry : services) {
    Service s;
    s.id = need(entry, "id", "service").get<std::string>();
    if (s.id.empty()) throw ParseError("service with empty id");
    if (s.id == "So" || s.id == "Si")
      throw ParseError("service id '" + s.id + "' is reserved");
    if (reg.index.count(s.id)) throw ParseError("duplicate service id '" + s.id + "'");
    s.inputs = concept_list(need(entry, "inputs", "service '" + s.id + "'"),
                            reg.ontology, "service '" + s.id + "' inputs");
    s.outputs = concept_list(need(entry, "outputs", "service '" + s.id + "'"),
                             reg.ontology, "service '" + s.id + "' outputs");
    if (entry.contains("qos")) {
      const json& q = entry["qos"];
      if (q.contains("responseTime"))
        s.qos[static_cast<int>(Criterion::ResponseTime)] = q["responseTime"].get<double>();
      if (q.contains("throughput"))
        s.qos[static_cast<int>(Criterion::Throughput)] = q["throughput"].get<double>();
    }
    for (std::size_t c = 0; c < kCriterionCount; ++c)
      if (!std::isnan(s.qos[c]) && s.qos[c] < 0)
        throw ParseError("service '" + s.id + "': negative QoS value");
    reg.index.emplace(s.id, static_cast<int>(reg.services.size()));
    reg.services.push_back(std::move(s));
  }
  return reg;
}

Registry load_registry_file(const std::string& path) {
  return load_registry(parse_file(path));
}

ordered_json registry_to_json(const Registry& registry) {
  ordered_json doc;
  doc["ontology"] = ordered_json::array();
  const Ontology& ont = registry.ontology;
  for (std::size_t c = 0; c < ont.size(); ++c) {
    ordered_json e;
    e["concept"] = ont.name(static_cast<ConceptHandle>(c));
    if (ont.parent(static_cast<ConceptHandle>(c)) != kNoConcept)
      e["parent"] = ont.name(ont.parent(static_cast<ConceptHandle>(c)));
    doc["ontology"].push_back(std::move(e));
  }
  doc["services"] = ordered_json::array();
  for (const Service& s : registry.services) {
    ordered_json e;
    e["id"] = s.id;
    e["inputs"] = ordered_json::array();
    for (ConceptHandle c : s.inputs) e["inputs"].push_back(ont.name(c));
    e["outputs"] = ordered_json::array();
    for (ConceptHandle c : s.outputs) e["outputs"].push_back(ont.name(c));
    ordered_json q;
    if (s.has_qos(Criterion::ResponseTime))
      q["responseTime"] = qos_to_json(s.qos_value(Criterion::ResponseTime));
    if (s.has_qos(Criterion::Throughput))
      q["throughput"] = qos_to_json(s.qos_value(Criterion::Throughput));
    e["qos"] = std::move(q);
    doc["services"].push_back(std::move(e));
  }
  return doc;
}

Request load_request(const json& doc, const Registry& registry) {
  Request req;
  req.provided = concept_list(need(doc, "provided", "request"), registry.ontology,
                              "request provided");
  req.wanted = concept_list(need(doc, "wanted", "request"), registry.ontology,
                            "request wanted");
  if (req.provided.empty()) throw ParseError("request: provided is empty");
  if (req.wanted.empty()) throw ParseError("request: wanted is empty");
  if (doc.contains("criterion")) {
    auto c = criterion_from_string(doc["criterion"].get<std::string>());
    if (!c)
      throw ParseError("request: unknown criterion '" +
                       doc["criterion"].get<std::string>() + "'");
    req.criterion = *c;
  }
  if (doc.contains("matchPolicy")) {
    const std::string p = doc["matchPolicy"].get<std::string>();
    if (p == "exact-plugin")
      req.policy = MatchPolicy::exact_plugin();
    else if (p == "paper")
      req.policy = MatchPolicy::with_subsume();
    else
      throw ParseError("request: unknown matchPolicy '" + p + "'");
  }
  if (doc.contains("timeoutSecs")) req.timeout_secs = doc["timeoutSecs"].get<double>();
  return req;
}

Request load_request_file(const std::string& path, const Registry& registry) {
  return load_request(parse_file(path), registry);
}

ordered_json request_to_json(const Request& request, const Registry& registry) {
  ordered_json doc;
  doc["provided"] = ordered_json::array();
  for (ConceptHandle c : request.provided)
    doc["provided"].push_back(registry.ontology.name(c));
  doc["wanted"] = ordered_json::array();
  for (ConceptHandle c : request.wanted)
    doc["wanted"].push_back(registry.ontology.name(c));
  doc["criterion"] = to_string(request.criterion);
  doc["matchPolicy"] = request.policy.allow_subsume ? "paper" : "exact-plugin";
  if (request.timeout_secs) doc["timeoutSecs"] = *request.timeout_secs;
  return doc;
}

Composition composition_from_json(const json& doc) {
  Composition comp;
  for (const auto& s : need(doc, "services", "solution")) {
    Composition::Svc svc;
    svc.id = need(s, "id", "solution service").get<std::string>();
    svc.qos = s.contains("qos") ? qos_from_json(s["qos"]) : 0;
    if (s.contains("members"))
      for (const auto& m : s["members"]) svc.members.push_back(m.get<std::string>());
    comp.services.push_back(std::move(svc));
  }
  for (const auto& m : need(doc, "matches", "solution")) {
    comp.matches.push_back({need(m, "fromService", "match").get<std::string>(),
                            need(m, "output", "match").get<std::string>(),
                            need(m, "toService", "match").get<std::string>(),
                            need(m, "input", "match").get<std::string>()});
  }
  return comp;
}

ordered_json composition_to_json(const Composition& comp) {
  ordered_json doc;
  doc["services"] = ordered_json::array();
  for (const auto& s : comp.services) {
    ordered_json e;
    e["id"] = s.id;
    e["qos"] = qos_to_json(s.qos);
    if (!s.members.empty()) e["members"] = s.members;
    doc["services"].push_back(std::move(e));
  }
  doc["matches"] = ordered_json::array();
  for (const auto& m : comp.matches) {
    ordered_json e;
    e["fromService"] = m.from_service;
    e["output"] = m.output;
    e["toService"] = m.to_service;
    e["input"] = m.input;
    doc["matches"].push_back(std::move(e));
  }
  return doc;
}

namespace {

std::string padded(const char* prefix, int i, int width) {
  std::ostringstream out;
  out << prefix;
  std::string n = std::to_string(i);
  for (int k = static_cast<int>(n.size()); k < width; ++k) out << '0';
  out << n;
  return out.str();
}


}  // namespace

GeneratedDataset generate_dataset(const GeneratorParams& p) {
  auto check_range = [](std::pair<int, int> r, const char* what) {
    if (r.first < 0 || r.second < r.first)
      throw Error(std::string("generator: degenerate range for ") + what);
  };
  check_range(p.inputs_per_service, "inputsPerService");
  check_range(p.outputs_per_service, "outputsPerService");
  check_range(p.response_time_range, "responseTime");
  check_range(p.throughput_range, "throughput");
  if (p.inputs_per_service.first < 1 || p.outputs_per_service.first < 1)
    throw Error("generator: services need at least one input and one output");
  if (p.num_services < 1) throw Error("generator: numServices must be positive");
  if (p.ontology_depth < 1) throw Error("generator: ontologyDepth must be positive");

  const int request_inputs = 3, request_outputs = 2;
  const int plant_layers = p.solvable ? std::min(4, p.num_services) : 0;
  const int plant_width = 2;
  const int reserved = request_inputs + request_outputs + plant_layers * plant_width;
  // Concepts and services fall into vocabulary clusters; services draw
  // their interface mostly from their own cluster, so only the request's
  // cluster (plus some cross-talk) is relevant to a given request. This
  // keeps the share of relevant services roughly flat as datasets grow.
  const int clusters = std::clamp(p.num_services / 500, 1, 24);
  if (p.num_concepts < clusters * std::max({p.inputs_per_service.second + 1,
                                            p.outputs_per_service.second + 1,
                                            reserved + 1}))
    throw Error("generator: numConcepts too small for the requested fan-out");

  const int cwidth = static_cast<int>(std::to_string(p.num_concepts - 1).size());
  const int swidth = static_cast<int>(std::to_string(p.num_services - 1).size());

  // ontology: a forest with bounded depth; parent chains stay inside one
  // cluster so subsumption cannot couple unrelated vocabularies
  SplitMix64 rng_ont(p.seed ^ 0x6f6e746f6c6f6779ull);
  std::vector<int> parent(p.num_concepts, -1), depth(p.num_concepts, 0);
  const int roots_per_cluster = std::max(1, p.num_concepts / clusters / 16);
  for (int c = 0; c < p.num_concepts; ++c) {
    const int earlier_in_cluster = c / clusters;
    if (earlier_in_cluster < roots_per_cluster) continue;  // root
    for (int attempt = 0; attempt < 8; ++attempt) {
      int q = c % clusters + clusters * rng_ont.bounded_int(0, earlier_in_cluster - 1);
      if (depth[q] + 1 < p.ontology_depth) {
        parent[c] = q;
        depth[c] = depth[q] + 1;
        break;
      }
    }
  }

  // reserved concept indices: request inputs, plant chain, request outputs;
  // all in cluster 0 (the request's cluster), from the top of the pool
  std::vector<int> provided, wanted;
  std::vector<std::vector<int>> plant_out(plant_layers);
  {
    int next = p.num_concepts - 1;
    auto take = [&] {
      while (next % clusters != 0) --next;
      return next--;
    };
    for (int k = 0; k < request_outputs; ++k) wanted.push_back(take());
    for (int l = plant_layers - 1; l >= 0; --l)
      for (int k = 0; k < plant_width; ++k) plant_out[l].push_back(take());
    for (int k = 0; k < request_inputs; ++k) provided.push_back(take());
    std::sort(provided.begin(), provided.end());
    std::sort(wanted.begin(), wanted.end());
  }
  if (p.solvable && plant_layers > 0) plant_out[plant_layers - 1] = wanted;

  SplitMix64 rng_svc(p.seed ^ 0x7365727669636573ull);
  SplitMix64 rng_qos(p.seed ^ 0x716f732d76616c75ull);

  ordered_json registry;
  registry["meta"] = {{"generator", "splitmix64"},
                      {"seed", p.seed},
                      {"services", p.num_services},
                      {"concepts", p.num_concepts}};
  registry["ontology"] = ordered_json::array();
  for (int c = 0; c < p.num_concepts; ++c) {
    ordered_json e;
    e["concept"] = padded("c", c, cwidth);
    if (parent[c] >= 0) e["parent"] = padded("c", parent[c], cwidth);
    registry["ontology"].push_back(std::move(e));
  }

  // Each cluster keeps a pool of concepts already produced inside it;
  // inputs come from the pool (with a little cross-cluster leakage) and
  // outputs extend it. Services in the request's cluster therefore chain
  // into reachable layers, like real registries do around one vocabulary.
  const int per_cluster = p.num_concepts / clusters;
  std::vector<std::vector<int>> pool(clusters);
  pool[0] = provided;
  for (int c = 1; c < clusters; ++c)
    for (int k = 0; k < 3; ++k)
      pool[c].push_back(c + clusters * rng_svc.bounded_int(0, per_cluster - 1));

  auto draw_inputs = [&](int cluster, int count) {
    std::set<int> got;
    for (int attempts = 0; static_cast<int>(got.size()) < count && attempts < 64;
         ++attempts) {
      // the first input stays in the home cluster so a lone leaked input
      // cannot ignite a foreign cluster's closure
      const bool leak =
          !got.empty() && clusters > 1 && rng_svc.bounded_int(0, 99) < 5;
      const auto& from = pool[leak ? rng_svc.bounded_int(0, clusters - 1) : cluster];
      got.insert(from[rng_svc.bounded_int(0, static_cast<int>(from.size()) - 1)]);
    }
    return std::vector<int>(got.begin(), got.end());
  };
  auto draw_outputs = [&](int cluster, int count) {
    std::set<int> got;
    while (static_cast<int>(got.size()) < count)
      got.insert(cluster + clusters * rng_svc.bounded_int(0, per_cluster - 1));
    for (int c : got) pool[cluster].push_back(c);
    return std::vector<int>(got.begin(), got.end());
  };

  registry["services"] = ordered_json::array();
  const int plant_stride = clusters;  // planted services: s = 0, K, 2K, ... in cluster 0
  for (int s = 0; s < p.num_services; ++s) {
    std::vector<int> in, out_c;
    if (p.solvable && s % plant_stride == 0 && s / plant_stride < plant_layers) {
      const int layer = s / plant_stride;
      in = (layer == 0) ? provided : plant_out[layer - 1];
      out_c = plant_out[layer];
    } else {
      const int ni = rng_svc.bounded_int(p.inputs_per_service.first,
                                         p.inputs_per_service.second);
      const int no = rng_svc.bounded_int(p.outputs_per_service.first,
                                         p.outputs_per_service.second);
      in = draw_inputs(s % clusters, ni);
      out_c = draw_outputs(s % clusters, no);
    }
    ordered_json e;
    e["id"] = padded("s", s, swidth);
    e["inputs"] = ordered_json::array();
    for (int c : in) e["inputs"].push_back(padded("c", c, cwidth));
    e["outputs"] = ordered_json::array();
    for (int c : out_c) e["outputs"].push_back(padded("c", c, cwidth));
    e["qos"] = {{"responseTime", rng_qos.bounded_int(p.response_time_range.first,
                                                     p.response_time_range.second)},
                {"throughput", rng_qos.bounded_int(p.throughput_range.first,
                                                   p.throughput_range.second)}};
    registry["services"].push_back(std::move(e));
  }

  ordered_json request;
  request["provided"] = ordered_json::array();
  for (int c : provided) request["provided"].push_back(padded("c", c, cwidth));
  request["wanted"] = ordered_json::array();
  for (int c : wanted) request["wanted"].push_back(padded("c", c, cwidth));
  request["criterion"] = "responseTime";
  request["matchPolicy"] = "exact-plugin";

  return {std::move(registry), std::move(request)};
}

}  // namespace composer
