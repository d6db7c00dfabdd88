// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/qos.hpp"

#include "composer/error.hpp"

namespace composer {

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::ResponseTime:
      return "responseTime";
    case Criterion::Throughput:
      return "throughput";
  }
  return "?";
}

std::optional<Criterion> criterion_from_string(std::string_view name) {
  if (name == "responseTime") return Criterion::ResponseTime;
  if (name == "throughput") return Criterion::Throughput;
  return std::nullopt;
}

Qos best_of(std::span<const Qos> values, const QosAlgebra& algebra) {
  if (values.empty()) throw Error("best_of: empty value list");
  Qos acc = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) acc = algebra.best(acc, values[i]);
  return acc;
}

Qos worst_of(std::span<const Qos> values, const QosAlgebra& algebra) {
  if (values.empty()) throw Error("worst_of: empty value list");
  Qos acc = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) acc = algebra.worst(acc, values[i]);
  return acc;
}

}  // namespace composer
