// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace composer {

/// Dense handle into an Ontology. Concepts are interned at load so that all
/// set operations downstream work on small integers.
using ConceptHandle = std::int32_t;
inline constexpr ConceptHandle kNoConcept = -1;

enum class MatchDegree { Exact, Plugin, Subsume, Fail };

const char* to_string(MatchDegree d);

/// Which match degrees count as a match. Exact is always allowed.
struct MatchPolicy {
  bool allow_plugin = true;
  bool allow_subsume = false;

  bool allows(MatchDegree d) const {
    switch (d) {
      case MatchDegree::Exact:
        return true;
      case MatchDegree::Plugin:
        return allow_plugin;
      case MatchDegree::Subsume:
        return allow_subsume;
      case MatchDegree::Fail:
        return false;
    }
    return false;
  }

  static MatchPolicy exact_plugin() { return {true, false}; }
  static MatchPolicy with_subsume() { return {true, true}; }
};

/// Single-inheritance concept forest. Build with add_concept/set_parent,
/// then call finalize() to validate acyclicity and precompute depths and
/// subtree intervals. Immutable afterwards; safe for concurrent reads.
class Ontology {
 public:
  ConceptHandle add_concept(std::string name);
  void set_parent(ConceptHandle child, ConceptHandle parent);
  void finalize();

  std::size_t size() const { return names_.size(); }
  bool finalized() const { return finalized_; }

  std::optional<ConceptHandle> find(std::string_view name) const;
  /// Like find(), but throws Error naming the missing concept.
  ConceptHandle require(std::string_view name) const;

  const std::string& name(ConceptHandle c) const { return names_[c]; }
  ConceptHandle parent(ConceptHandle c) const { return parents_[c]; }
  int depth(ConceptHandle c) const { return depths_[c]; }

  /// Subtree interval from a preorder walk: b is a descendant-or-self of a
  /// iff tin(a) <= tin(b) && tout(b) <= tout(a). Requires finalize().
  int tin(ConceptHandle c) const { return tin_[c]; }
  int tout(ConceptHandle c) const { return tout_[c]; }

 private:
  std::vector<std::string> names_;
  std::vector<ConceptHandle> parents_;
  std::vector<int> depths_;
  std::vector<int> tin_, tout_;
  std::unordered_map<std::string, ConceptHandle> index_;
  bool finalized_ = false;
};

/// Degree of match between two concepts: Exact if equal, Plugin if a is a
/// strict descendant of b, Subsume if a is a strict ancestor of b, Fail
/// otherwise. Answered by a parent-chain walk using memoized depths.
MatchDegree match_degree(const Ontology& ont, ConceptHandle a, ConceptHandle b);

/// String-level overload; throws Error identifying an unknown concept.
MatchDegree match_degree(const Ontology& ont, std::string_view a, std::string_view b);

/// True iff match_degree(a, b) is allowed by the policy.
bool concept_matches(const Ontology& ont, ConceptHandle a, ConceptHandle b,
                     const MatchPolicy& policy);

/// The subset of `wanted` matched by at least one provider concept.
std::vector<ConceptHandle> matched_subset(const Ontology& ont,
                                          std::span<const ConceptHandle> providers,
                                          std::span<const ConceptHandle> wanted,
                                          const MatchPolicy& policy);

/// True iff every concept in `wanted` is matched by some provider.
bool full_match(const Ontology& ont, std::span<const ConceptHandle> providers,
                std::span<const ConceptHandle> wanted, const MatchPolicy& policy);

}  // namespace composer
