// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "composer/ontology.hpp"
#include "composer/qos.hpp"

namespace composer {

/// A registered service: required input concepts, produced output concepts,
/// and one QoS value per criterion. Concept lists are sorted and unique.
struct Service {
  std::string id;
  std::vector<ConceptHandle> inputs;
  std::vector<ConceptHandle> outputs;
  std::array<Qos, kCriterionCount> qos{std::nan(""), std::nan("")};

  bool has_qos(Criterion c) const { return !std::isnan(qos[static_cast<int>(c)]); }
  Qos qos_value(Criterion c) const { return qos[static_cast<int>(c)]; }
};

/// What the user provides and what they want back.
struct Request {
  std::vector<ConceptHandle> provided;
  std::vector<ConceptHandle> wanted;
  Criterion criterion = Criterion::ResponseTime;
  MatchPolicy policy = MatchPolicy::exact_plugin();
  std::optional<double> timeout_secs;
};

/// Immutable after load; safe for concurrent reads from any number of
/// searches.
struct Registry {
  Ontology ontology;
  std::vector<Service> services;
  std::unordered_map<std::string, int> index;

  const Service* find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? nullptr : &services[it->second];
  }
};

/// True iff the provided concepts fully match the service inputs. A service
/// with no inputs is always invokable.
bool is_invokable(const Ontology& ont, std::span<const ConceptHandle> provided,
                  const Service& service, const MatchPolicy& policy);

/// Throws Error naming the first service that lacks a value for `criterion`.
void require_criterion(const Registry& registry, Criterion criterion);

}  // namespace composer
