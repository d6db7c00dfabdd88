// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/registry.hpp"

#include "composer/error.hpp"

namespace composer {

bool is_invokable(const Ontology& ont, std::span<const ConceptHandle> provided,
                  const Service& service, const MatchPolicy& policy) {
  if (service.inputs.empty()) return true;
  return full_match(ont, provided, service.inputs, policy);
}

void require_criterion(const Registry& registry, Criterion criterion) {
  for (const Service& s : registry.services) {
    if (!s.has_qos(criterion))
      throw Error("service '" + s.id + "' has no " +
                  std::string(to_string(criterion)) + " value");
  }
}

}  // namespace composer
