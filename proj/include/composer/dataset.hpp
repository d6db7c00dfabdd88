// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <json.hpp>

#include "composer/registry.hpp"
#include "composer/solution.hpp"

namespace composer {

/// Keys appear in documents exactly as written here; unknown keys are
/// ignored on load. All documents are UTF-8 JSON.

Registry load_registry(const nlohmann::json& doc);
Registry load_registry_file(const std::string& path);
nlohmann::ordered_json registry_to_json(const Registry& registry);

Request load_request(const nlohmann::json& doc, const Registry& registry);
Request load_request_file(const std::string& path, const Registry& registry);
nlohmann::ordered_json request_to_json(const Request& request, const Registry& registry);

Composition composition_from_json(const nlohmann::json& doc);
nlohmann::ordered_json composition_to_json(const Composition& comp);

/// QoS values render as integers when integral and as the string
/// "unbounded" when infinite (JSON has no infinity); the throughput
/// identity on the endpoints is the one value that needs it.
nlohmann::ordered_json qos_to_json(Qos v);
Qos qos_from_json(const nlohmann::json& v);

/// Deterministic dataset generation: the same seed and parameters produce
/// byte-identical documents. The PRNG is pinned to splitmix64 and bounded
/// draws use rejection sampling, so results do not depend on the standard
/// library. When `solvable` is set a layered solution path from the
/// provided concepts to the wanted concepts is planted over the first few
/// service slots.
struct GeneratorParams {
  std::uint64_t seed = 1;
  int num_services = 100;
  int num_concepts = 300;
  int ontology_depth = 6;
  std::pair<int, int> inputs_per_service{1, 3};
  std::pair<int, int> outputs_per_service{1, 3};
  std::pair<int, int> response_time_range{10, 1000};
  std::pair<int, int> throughput_range{100, 10000};
  bool solvable = true;
};

struct GeneratedDataset {
  nlohmann::ordered_json registry_doc;
  nlohmann::ordered_json request_doc;
};

GeneratedDataset generate_dataset(const GeneratorParams& params);

/// splitmix64; fixed here so generated datasets replay anywhere.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi] via rejection sampling.
  std::uint64_t bounded(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return lo + v % span;
  }

  int bounded_int(int lo, int hi) {
    return static_cast<int>(bounded(static_cast<std::uint64_t>(lo),
                                    static_cast<std::uint64_t>(hi)));
  }
};

}  // namespace composer
