// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "composer/dataset.hpp"
#include "composer/error.hpp"
#include "composer/ontology.hpp"
#include "test_support.hpp"

using namespace composer;

namespace {

Ontology chain_ontology() {
  // base <- mid <- leaf, plus two unrelated roots
  Ontology ont;
  auto base = ont.add_concept("base");
  auto mid = ont.add_concept("mid");
  auto leaf = ont.add_concept("leaf");
  ont.add_concept("r1");
  ont.add_concept("r2");
  ont.set_parent(mid, base);
  ont.set_parent(leaf, mid);
  ont.finalize();
  return ont;
}

}  // namespace

TEST_CASE("match degrees") {
  Ontology ont = chain_ontology();
  CHECK(match_degree(ont, "leaf", "leaf") == MatchDegree::Exact);
  CHECK(match_degree(ont, "mid", "base") == MatchDegree::Plugin);
  CHECK(match_degree(ont, "leaf", "base") == MatchDegree::Plugin);
  CHECK(match_degree(ont, "base", "leaf") == MatchDegree::Subsume);
  CHECK(match_degree(ont, "r1", "r2") == MatchDegree::Fail);
  CHECK(match_degree(ont, "r1", "leaf") == MatchDegree::Fail);
  CHECK_THROWS_WITH_AS(match_degree(ont, "nope", "base"),
                       "unknown concept 'nope'", Error);
}

TEST_CASE("policy filtering") {
  Ontology ont = chain_ontology();
  const auto exact_plugin = MatchPolicy::exact_plugin();
  const auto with_subsume = MatchPolicy::with_subsume();
  auto leaf = ont.require("leaf");
  auto base = ont.require("base");
  CHECK(concept_matches(ont, leaf, leaf, exact_plugin));
  CHECK(concept_matches(ont, leaf, base, exact_plugin));
  CHECK(!concept_matches(ont, base, leaf, exact_plugin));
  CHECK(concept_matches(ont, base, leaf, with_subsume));
}

TEST_CASE("matched subset") {
  // a1 under a; providers {a1, b} against wanted {a, c}
  Ontology ont;
  auto a = ont.add_concept("a");
  auto a1 = ont.add_concept("a1");
  auto b = ont.add_concept("b");
  auto c = ont.add_concept("c");
  ont.set_parent(a1, a);
  ont.finalize();

  const auto policy = MatchPolicy::exact_plugin();
  std::vector<ConceptHandle> providers{a1, b}, wanted{a, c}, all{a, a1, b, c};
  CHECK(matched_subset(ont, providers, wanted, policy) == std::vector<ConceptHandle>{a});
  CHECK(matched_subset(ont, {}, wanted, policy).empty());
  CHECK(matched_subset(ont, all, all, policy) == all);
  CHECK(full_match(ont, all, all, policy));
  CHECK(!full_match(ont, providers, wanted, policy));
}

TEST_CASE("invokability") {
  Registry reg = test::make_registry(
      {{"x", ""}, {"y", ""}, {"z", ""}},
      {{"noInputs", {}, {"z"}}, {"needsXY", {"x", "y"}, {"z"}}});
  const auto policy = MatchPolicy::exact_plugin();
  auto x = reg.ontology.require("x");
  auto y = reg.ontology.require("y");
  std::vector<ConceptHandle> both{x, y}, justX{x};
  CHECK(is_invokable(reg.ontology, {}, reg.services[0], policy));
  CHECK(is_invokable(reg.ontology, both, reg.services[1], policy));
  CHECK(!is_invokable(reg.ontology, justX, reg.services[1], policy));
}

TEST_CASE("degree properties on random ontologies") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GeneratorParams params;
    params.seed = seed;
    params.num_services = 1;
    params.num_concepts = 40;
    params.ontology_depth = 5;
    Registry reg = load_registry(generate_dataset(params).registry_doc);
    const Ontology& ont = reg.ontology;

    const int n = static_cast<int>(ont.size());
    for (int a = 0; a < n; ++a) {
      CHECK(match_degree(ont, a, a) == MatchDegree::Exact);
      for (int b = 0; b < n; ++b) {
        const MatchDegree ab = match_degree(ont, a, b);
        const MatchDegree ba = match_degree(ont, b, a);
        // duality
        CHECK((ab == MatchDegree::Plugin) == (ba == MatchDegree::Subsume));
        if (a == b) continue;
        // classification is exclusive: never Exact for distinct concepts,
        // and Plugin/Subsume cannot hold simultaneously
        CHECK(ab != MatchDegree::Exact);
        CHECK(!(ab == MatchDegree::Plugin && ba == MatchDegree::Plugin));
      }
    }
  }
}

TEST_CASE("matched subset is monotone in providers") {
  auto [reg, req] = test::small_instance(7, 12, 30);
  const Ontology& ont = reg.ontology;
  const auto policy = MatchPolicy::exact_plugin();
  SplitMix64 rng(99);
  for (int round = 0; round < 50; ++round) {
    std::vector<ConceptHandle> p1, wanted;
    for (int k = 0; k < 5; ++k)
      wanted.push_back(rng.bounded_int(0, static_cast<int>(ont.size()) - 1));
    for (int k = 0; k < 3; ++k)
      p1.push_back(rng.bounded_int(0, static_cast<int>(ont.size()) - 1));
    std::vector<ConceptHandle> p2 = p1;
    p2.push_back(rng.bounded_int(0, static_cast<int>(ont.size()) - 1));

    auto m1 = matched_subset(ont, p1, wanted, policy);
    auto m2 = matched_subset(ont, p2, wanted, policy);
    CHECK(m2.size() >= m1.size());
    for (ConceptHandle c : m1)
      CHECK(std::find(m2.begin(), m2.end(), c) != m2.end());
    for (ConceptHandle c : m1)
      CHECK(std::find(wanted.begin(), wanted.end(), c) != wanted.end());
  }
}
