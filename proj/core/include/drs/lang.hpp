#pragma once

// First-order formula language with kind- and property-typed unary
// predicates. Negation, implication and universal quantification are the
// only connectives; conjunction is an abbreviation built from them.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace drs {

using TimeStamp = std::uint64_t;

enum class Sort : std::uint8_t { plain, kind, property };

const char* to_string(Sort sort) noexcept;

struct PredicateSymbol {
  std::string name;
  std::size_t arity = 0;
  Sort sort = Sort::plain;
  // Present iff sort == property. Distinguishes attachments of the same
  // property in a hierarchy; carries no semantic weight.
  std::optional<unsigned> occurrence;

  static PredicateSymbol plain(std::string name, std::size_t arity);
  static PredicateSymbol kind(std::string name);
  static PredicateSymbol property(std::string name,
                                  std::optional<unsigned> occurrence = {});

  PredicateSymbol without_occurrence() const;

  friend auto operator<=>(const PredicateSymbol&,
                          const PredicateSymbol&) = default;
  friend bool operator==(const PredicateSymbol&,
                         const PredicateSymbol&) = default;
};

struct Term {
  enum class Kind : std::uint8_t { variable, constant };

  Kind kind = Kind::constant;
  std::string name;

  static Term variable(std::string name) {
    return {Kind::variable, std::move(name)};
  }
  static Term constant(std::string name) {
    return {Kind::constant, std::move(name)};
  }

  bool is_variable() const noexcept { return kind == Kind::variable; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

// Immutable formula tree with shared subterms. Copies are cheap.
class Formula {
 public:
  enum class Kind : std::uint8_t { falsum, atom, negation, implication, forall };

  static Formula falsum();
  static Formula atom(PredicateSymbol predicate, std::vector<Term> args);
  static Formula negation(Formula operand);
  static Formula implies(Formula antecedent, Formula consequent);
  static Formula forall(std::string variable, Formula body);

  Kind kind() const noexcept;
  bool is_falsum() const noexcept { return kind() == Kind::falsum; }
  bool is_atom() const noexcept { return kind() == Kind::atom; }
  bool is_negation() const noexcept { return kind() == Kind::negation; }
  bool is_implication() const noexcept { return kind() == Kind::implication; }
  bool is_forall() const noexcept { return kind() == Kind::forall; }

  // Accessors; calling one that does not match kind() is a logic error.
  const PredicateSymbol& predicate() const;
  const std::vector<Term>& args() const;
  const Formula& operand() const;
  const Formula& antecedent() const;
  const Formula& consequent() const;
  const std::string& variable() const;
  const Formula& body() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Formula& f);

Formula parse_formula(std::string_view text);
std::string render_formula(const Formula& f);

// P & Q, unfolded as ~(P -> ~Q).
Formula conjunction(const Formula& p, const Formula& q);

// Replaces free occurrences of `variable` by `replacement`. Throws
// Error(capture) if a variable replacement would be captured by a binder.
Formula substitute(const Formula& f, const std::string& variable,
                   const Term& replacement);

Formula strip_occurrences(const Formula& f);
bool equal_mod_occurrence(const Formula& p, const Formula& q);
bool complementary_mod_occurrence(const Formula& p, const Formula& q);

std::set<std::string> free_variables(const Formula& f);
bool is_closed(const Formula& f);
bool occurs_free(const Formula& f, const std::string& variable);

// Constants in order of first appearance (left to right).
std::vector<std::string> constants_of(const Formula& f);
// Predicate symbols with occurrence erased, in order of first appearance.
std::vector<PredicateSymbol> predicates_of(const Formula& f);

}  // namespace drs
