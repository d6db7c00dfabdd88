// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#include "composer/ontology.hpp"

#include <algorithm>

#include "composer/error.hpp"

namespace composer {

const char* to_string(MatchDegree d) {
  switch (d) {
    case MatchDegree::Exact:
      return "exact";
    case MatchDegree::Plugin:
      return "plugin";
    case MatchDegree::Subsume:
      return "subsume";
    case MatchDegree::Fail:
      return "fail";
  }
  return "?";
}

ConceptHandle Ontology::add_concept(std::string name) {
  if (name.empty()) throw ParseError("ontology: empty concept name");
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  ConceptHandle h = static_cast<ConceptHandle>(names_.size());
  index_.emplace(name, h);
  names_.push_back(std::move(name));
  parents_.push_back(kNoConcept);
  finalized_ = false;
  return h;
}

void Ontology::set_parent(ConceptHandle child, ConceptHandle parent) {
  if (child == parent)
    throw ParseError("ontology: concept '" + names_[child] + "' is its own parent");
  parents_[child] = parent;
  finalized_ = false;
}

void Ontology::finalize() {
  const std::size_t n = names_.size();
  depths_.assign(n, -1);

  // Depths via chain walk; a walk longer than n concepts means a cycle.
  for (std::size_t c = 0; c < n; ++c) {
    if (depths_[c] >= 0) continue;
    std::vector<ConceptHandle> chain;
    ConceptHandle cur = static_cast<ConceptHandle>(c);
    while (cur != kNoConcept && depths_[cur] < 0) {
      chain.push_back(cur);
      if (chain.size() > n)
        throw ParseError("ontology: cycle through concept '" + names_[c] + "'");
      cur = parents_[cur];
    }
    int base = (cur == kNoConcept) ? -1 : depths_[cur];
    if (chain.size() > n)
      throw ParseError("ontology: cycle through concept '" + names_[c] + "'");
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depths_[*it] = ++base;
  }
  // A cycle never reaches a root, so some depth stays unset only if the
  // chain loop above threw; double-check anyway.
  for (std::size_t c = 0; c < n; ++c)
    if (depths_[c] < 0) throw ParseError("ontology: cycle through concept '" + names_[c] + "'");

  // Preorder intervals for subtree queries.
  std::vector<std::vector<ConceptHandle>> children(n);
  std::vector<ConceptHandle> roots;
  for (std::size_t c = 0; c < n; ++c) {
    if (parents_[c] == kNoConcept)
      roots.push_back(static_cast<ConceptHandle>(c));
    else
      children[parents_[c]].push_back(static_cast<ConceptHandle>(c));
  }
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  int clock = 0;
  std::vector<std::pair<ConceptHandle, std::size_t>> stack;
  for (ConceptHandle r : roots) {
    stack.emplace_back(r, 0);
    tin_[r] = clock++;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < children[v].size()) {
        ConceptHandle ch = children[v][next++];
        tin_[ch] = clock++;
        stack.emplace_back(ch, 0);
      } else {
        tout_[v] = clock;
        stack.pop_back();
      }
    }
  }
  finalized_ = true;
}

std::optional<ConceptHandle> Ontology::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ConceptHandle Ontology::require(std::string_view name) const {
  auto h = find(name);
  if (!h) throw Error("unknown concept '" + std::string(name) + "'");
  return *h;
}

MatchDegree match_degree(const Ontology& ont, ConceptHandle a, ConceptHandle b) {
  if (a == b) return MatchDegree::Exact;
  int da = ont.depth(a), db = ont.depth(b);
  if (da > db) {
    // a could be a strict descendant of b
    ConceptHandle cur = a;
    for (int i = da; i > db; --i) cur = ont.parent(cur);
    return cur == b ? MatchDegree::Plugin : MatchDegree::Fail;
  }
  if (db > da) {
    ConceptHandle cur = b;
    for (int i = db; i > da; --i) cur = ont.parent(cur);
    return cur == a ? MatchDegree::Subsume : MatchDegree::Fail;
  }
  return MatchDegree::Fail;
}

MatchDegree match_degree(const Ontology& ont, std::string_view a, std::string_view b) {
  return match_degree(ont, ont.require(a), ont.require(b));
}

bool concept_matches(const Ontology& ont, ConceptHandle a, ConceptHandle b,
                     const MatchPolicy& policy) {
  return policy.allows(match_degree(ont, a, b));
}

std::vector<ConceptHandle> matched_subset(const Ontology& ont,
                                          std::span<const ConceptHandle> providers,
                                          std::span<const ConceptHandle> wanted,
                                          const MatchPolicy& policy) {
  std::vector<ConceptHandle> out;
  for (ConceptHandle w : wanted) {
    for (ConceptHandle p : providers) {
      if (concept_matches(ont, p, w, policy)) {
        out.push_back(w);
        break;
      }
    }
  }
  return out;
}

bool full_match(const Ontology& ont, std::span<const ConceptHandle> providers,
                std::span<const ConceptHandle> wanted, const MatchPolicy& policy) {
  return matched_subset(ont, providers, wanted, policy).size() == wanted.size();
}

}  // namespace composer
