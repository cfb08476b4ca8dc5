#pragma once

// Path logic: an append-only sequence of labeled entries. Every entry
// records how it got there (from-list), what was derived from it (to-list),
// whether it is currently believed, how firmly, and its knowledge category.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "drs/hierarchy.hpp"
#include "drs/lang.hpp"

namespace drs {

enum class Rule : std::uint8_t {
  modus_ponens,            // MP
  generalization,          // GEN
  hypothetical_syllogism,  // HS
  aristotelian_syllogism,  // AS
  subsumption,             // SUB
  contradiction_detection, // CD
  conflict_detection,      // CONF
};

enum class Schema : std::uint8_t { a1, a2, a3, q1, q2 };

enum class Status : std::uint8_t { believed, disbelieved };

enum class Category : std::uint8_t { a_priori, a_posteriori, analytic, synthetic };

const char* to_string(Rule rule) noexcept;
const char* to_string(Schema schema) noexcept;
const char* to_string(Status status) noexcept;
const char* to_string(Category category) noexcept;
std::optional<Rule> rule_from_string(std::string_view text);
std::optional<Schema> schema_from_string(std::string_view text);
std::optional<Status> status_from_string(std::string_view text);
std::optional<Category> category_from_string(std::string_view text);

inline constexpr double kLogicalEntrenchment = 1.0;

struct ExternalSource {
  std::string code = "es";
  std::optional<std::string> info;
  friend bool operator==(const ExternalSource&, const ExternalSource&) = default;
};

struct RuleApplication {
  Rule rule = Rule::modus_ponens;
  std::vector<TimeStamp> premises;
  friend bool operator==(const RuleApplication&,
                         const RuleApplication&) = default;
};

struct SchemaInstantiation {
  Schema schema = Schema::a1;
  std::string rule = "inst";
  friend bool operator==(const SchemaInstantiation&,
                         const SchemaInstantiation&) = default;
};

using FromList = std::variant<ExternalSource, RuleApplication, SchemaInstantiation>;

struct Label {
  TimeStamp time_stamp = 0;
  FromList from;
  std::vector<TimeStamp> to;
  Status status = Status::believed;
  double entrenchment = 0.0;
  Category category = Category::a_posteriori;

  friend bool operator==(const Label&, const Label&) = default;
};

struct Entry {
  Formula formula;
  Label label;

  TimeStamp time_stamp() const noexcept { return label.time_stamp; }
  bool believed() const noexcept { return label.status == Status::believed; }
  // Premise time stamps for rule-derived entries; empty otherwise.
  std::span<const TimeStamp> premises() const noexcept;
  bool is_input() const noexcept {
    return std::holds_alternative<ExternalSource>(label.from);
  }

  friend bool operator==(const Entry&, const Entry&) = default;
};

struct SymbolTable {
  std::vector<std::string> constants;
  std::vector<PredicateSymbol> predicates;  // occurrence-free

  // Returns true if anything new was added.
  bool absorb(const Formula& f);

  friend bool operator==(const SymbolTable&, const SymbolTable&) = default;
};

struct SchemaBindings {
  std::map<std::string, Formula> formulas;  // slots "P", "Q", "R"
  std::optional<std::string> variable;      // slot "x"
  std::optional<Term> term;                 // slot "a"
};

struct RuleOptions {
  std::optional<std::string> variable;  // GEN only
};

enum class FormFilter : std::uint8_t { atomic_kind, atomic_property, universal };

// Instantiates a schema template. Throws Error(ill_typed_binding) when a
// slot is missing or a side condition fails.
Formula instantiate(Schema schema, const SchemaBindings& bindings);

// Computes the conclusion of a rule on premise formulas (in template order).
// Throws Error(template_mismatch).
Formula conclude(Rule rule, std::span<const Formula> premises,
                 const RuleOptions& options = {});

// Falsum, or P & ~P written out.
bool is_contradiction(const Formula& f);

// Atomic kind/property formula, or a negated atomic property formula.
bool is_salient_atom(const Formula& f);

class DerivationPath {
 public:
  DerivationPath() = default;

  TimeStamp enter_extralogical(const Formula& f, std::string source_info,
                               double entrenchment);
  TimeStamp instantiate_schema(Schema schema, const SchemaBindings& bindings);
  TimeStamp apply_rule(Rule rule, std::span<const TimeStamp> premises,
                       const RuleOptions& options = {});
  void set_status(TimeStamp t, Status status);

  std::vector<std::pair<TimeStamp, Formula>> believed_formulas(
      std::optional<FormFilter> filter = std::nullopt) const;

  // Earliest believed entry equal to f modulo occurrence indexes.
  std::optional<TimeStamp> find_believed(const Formula& f) const;

  bool has_entry(TimeStamp t) const noexcept {
    return t >= 1 && t <= entries_.size();
  }
  const Entry& entry(TimeStamp t) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  TimeStamp next_time() const noexcept { return entries_.size() + 1; }

  const SymbolTable& symbols() const noexcept { return symbols_; }
  Hierarchy& hierarchy() noexcept { return hierarchy_; }
  const Hierarchy& hierarchy() const noexcept { return hierarchy_; }

  // Structural label invariants; returns one message per violation.
  std::vector<std::string> check_invariants() const;

  static DerivationPath restore(std::vector<Entry> entries, SymbolTable symbols,
                                Hierarchy hierarchy);

  friend bool operator==(const DerivationPath&, const DerivationPath&) = default;

 private:
  Entry& mutable_entry(TimeStamp t);
  TimeStamp append(Formula f, FromList from, double entrenchment,
                   Category category);

  std::vector<Entry> entries_;
  SymbolTable symbols_;
  Hierarchy hierarchy_;
};

inline DerivationPath init_path() { return DerivationPath{}; }

}  // namespace drs
