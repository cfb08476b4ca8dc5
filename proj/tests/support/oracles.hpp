#pragma once

// Test-side reference implementations. None of these call into the engine's
// own algorithms beyond parsing and rendering formulas.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drs/controller.hpp"

namespace drs::testing {

using Rng = std::mt19937_64;

// Closed formula over P/1, Q/2, kinds K1..K3, properties A, B (with random
// occurrence indexes), constants a, b, c and variables x, y, z.
Formula random_formula(Rng& rng, int depth);

// Canonical text with every "#<digits>" removed.
std::string strip_text(const std::string& rendered);
bool equal_mod_occurrence_text(const Formula& p, const Formula& q);
bool complementary_text(const Formula& p, const Formula& q);

// Straightforward recursive substitution; returns nullopt where a variable
// term would be captured.
std::optional<Formula> substitute_ref(const Formula& f, const std::string& var,
                                      const Term& t);

// Treats each distinct atom text as a propositional letter and checks all
// assignments. Quantified subformulas are letters too.
bool is_tautology(const Formula& f);

// Object/kind graph given by edges lower -> upper.
struct Graph {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
};

Graph active_graph(const Hierarchy& h);
// Every simple upward path, as node sequences of length >= 2.
std::vector<std::vector<std::string>> all_paths(const Graph& g);
bool has_cycle(const Graph& g);
// Two paths with the same endpoints, one a proper subsequence of the other.
bool has_redundant_pair(const Graph& g);
std::set<std::string> reachable(const Graph& g, const std::string& from);

// A hierarchy description in terms of the four input forms.
struct PropertyInput {
  std::string kind;
  std::string name;
  bool negated = false;
};

struct InheritanceModel {
  std::vector<std::pair<std::string, std::string>> classifications;  // obj, kind
  std::vector<std::pair<std::string, std::string>> subkinds;         // sub, super
  std::vector<PropertyInput> properties;
};

std::string input_text(const std::pair<std::string, std::string>& classification,
                       bool is_subkind);
std::string input_text(const PropertyInput& p);

// Recovers the model from the inputs that are still believed.
InheritanceModel believed_model(const DerivationPath& path);

// Atomic conclusions (occurrence-free canonical text) that specificity-based
// inheritance yields: every kind reachable from an object, and every property
// on such a kind not overridden by an opposite-signed property on a kind met
// earlier on some path from the object.
std::set<std::string> inheritance_oracle(const InheritanceModel& m);

// Believed kind and property atoms, occurrence-free.
std::set<std::string> believed_atoms(const DerivationPath& path);

// No believed contradiction and no believed complementary atom pair.
bool consistent(const DerivationPath& path);

// Reference revision bookkeeping.
std::set<TimeStamp> culprits_ref(const DerivationPath& path, TimeStamp trigger);
// Entries that retracting `seeds` must disbelieve (believed descendants).
std::set<TimeStamp> cascade_ref(const DerivationPath& path,
                                const std::set<TimeStamp>& seeds);

}  // namespace drs::testing
