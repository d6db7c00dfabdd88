// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <string>
#include <vector>

#include "composer/dataset.hpp"
#include "composer/match_graph.hpp"

namespace composer::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(COMPOSER_FIXTURE_DIR) + "/" + name;
}

inline Registry fixture_registry() {
  return load_registry_file(fixture_path("fraud_detection.registry.json"));
}

inline Request fixture_request(const Registry& reg) {
  return load_request_file(fixture_path("fraud_detection.request.json"), reg);
}

/// Compact builder for hand-written registries in tests.
/// ontology: {concept, parent-or-""}; services: {id, ins, outs, rt, th}.
struct ServiceSpec {
  std::string id;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double rt = 1;
  double th = 1000;
};

inline Registry make_registry(
    const std::vector<std::pair<std::string, std::string>>& concepts,
    const std::vector<ServiceSpec>& services) {
  nlohmann::json doc;
  doc["ontology"] = nlohmann::json::array();
  for (const auto& [c, p] : concepts) {
    nlohmann::json e;
    e["concept"] = c;
    if (!p.empty()) e["parent"] = p;
    doc["ontology"].push_back(e);
  }
  doc["services"] = nlohmann::json::array();
  for (const auto& s : services) {
    nlohmann::json e;
    e["id"] = s.id;
    e["inputs"] = s.inputs;
    e["outputs"] = s.outputs;
    e["qos"] = {{"responseTime", s.rt}, {"throughput", s.th}};
    doc["services"].push_back(e);
  }
  return load_registry(doc);
}

inline Request make_request(const Registry& reg, const std::vector<std::string>& provided,
                            const std::vector<std::string>& wanted,
                            Criterion criterion = Criterion::ResponseTime) {
  Request req;
  for (const auto& c : provided) req.provided.push_back(reg.ontology.require(c));
  for (const auto& c : wanted) req.wanted.push_back(reg.ontology.require(c));
  std::sort(req.provided.begin(), req.provided.end());
  std::sort(req.wanted.begin(), req.wanted.end());
  req.criterion = criterion;
  return req;
}

/// Small seeded instances for oracle-vs-engine property tests.
inline std::pair<Registry, Request> small_instance(std::uint64_t seed, int services = 10,
                                                   int concepts = 24) {
  GeneratorParams params;
  params.seed = seed;
  params.num_services = services;
  params.num_concepts = concepts;
  params.ontology_depth = 4;
  params.inputs_per_service = {1, 2};
  params.outputs_per_service = {1, 2};
  params.response_time_range = {10, 200};
  params.throughput_range = {100, 5000};
  params.solvable = true;
  GeneratedDataset ds = generate_dataset(params);
  // the Registry holds pointers into itself only; copy elision applies
  Registry reg = load_registry(ds.registry_doc);
  Request req = load_request(ds.request_doc, reg);
  return {std::move(reg), std::move(req)};
}

}  // namespace composer::test
