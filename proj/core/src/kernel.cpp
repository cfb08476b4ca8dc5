#include "drs/kernel.hpp"

#include <algorithm>
#include <array>

#include "drs/error.hpp"

namespace drs {

namespace {

constexpr std::array<std::pair<Rule, const char*>, 7> kRuleNames{{
    {Rule::modus_ponens, "MP"},
    {Rule::generalization, "GEN"},
    {Rule::hypothetical_syllogism, "HS"},
    {Rule::aristotelian_syllogism, "AS"},
    {Rule::subsumption, "SUB"},
    {Rule::contradiction_detection, "CD"},
    {Rule::conflict_detection, "CONF"},
}};

constexpr std::array<std::pair<Schema, const char*>, 5> kSchemaNames{{
    {Schema::a1, "A1"},
    {Schema::a2, "A2"},
    {Schema::a3, "A3"},
    {Schema::q1, "Q1"},
    {Schema::q2, "Q2"},
}};

[[noreturn]] void mismatch(Rule rule, const std::string& why) {
  throw Error(ErrorCode::template_mismatch,
              std::string(to_string(rule)) + ": " + why);
}

// Matches `pattern` against `target`, where free occurrences of `variable`
// in the pattern may stand for any term (consistently). Predicates compare
// modulo occurrence.
bool match_instance(const Formula& pattern, const Formula& target,
                    const std::string& variable, bool shadowed,
                    std::optional<Term>& binding) {
  if (pattern.kind() != target.kind()) return false;
  switch (pattern.kind()) {
    case Formula::Kind::falsum:
      return true;
    case Formula::Kind::atom: {
      const auto& p = pattern.predicate();
      const auto& q = target.predicate();
      if (p.name != q.name || p.arity != q.arity || p.sort != q.sort) {
        return false;
      }
      for (std::size_t i = 0; i < pattern.args().size(); ++i) {
        const Term& pa = pattern.args()[i];
        const Term& ta = target.args()[i];
        if (!shadowed && pa.is_variable() && pa.name == variable) {
          if (!binding) {
            binding = ta;
          } else if (*binding != ta) {
            return false;
          }
        } else if (pa != ta) {
          return false;
        }
      }
      return true;
    }
    case Formula::Kind::negation:
      return match_instance(pattern.operand(), target.operand(), variable,
                            shadowed, binding);
    case Formula::Kind::implication:
      return match_instance(pattern.antecedent(), target.antecedent(),
                            variable, shadowed, binding) &&
             match_instance(pattern.consequent(), target.consequent(),
                            variable, shadowed, binding);
    case Formula::Kind::forall:
      return pattern.variable() == target.variable() &&
             match_instance(pattern.body(), target.body(), variable,
                            shadowed || pattern.variable() == variable,
                            binding);
  }
  return false;
}

// Instance of `pattern` (free in `variable`) that equals `target`; returns
// the witnessing term, or nullopt-in-optional if the variable does not occur.
std::optional<std::optional<Term>> witness(const Formula& pattern,
                                           const std::string& variable,
                                           const Formula& target) {
  std::optional<Term> binding;
  if (!match_instance(pattern, target, variable, false, binding)) {
    return std::nullopt;
  }
  return binding;
}

// Unary atom applied to exactly `variable`.
bool is_unary_on(const Formula& f, const std::string& variable) {
  return f.is_atom() && f.args().size() == 1 && f.args()[0].is_variable() &&
         f.args()[0].name == variable;
}

Formula slot(const SchemaBindings& b, const char* name, Schema schema) {
  auto it = b.formulas.find(name);
  if (it == b.formulas.end()) {
    throw Error(ErrorCode::ill_typed_binding,
                std::string(to_string(schema)) + " needs a formula for " + name);
  }
  return it->second;
}

std::string variable_slot(const SchemaBindings& b, Schema schema) {
  if (!b.variable || b.variable->empty()) {
    throw Error(ErrorCode::ill_typed_binding,
                std::string(to_string(schema)) + " needs a variable for x");
  }
  return *b.variable;
}

}  // namespace

const char* to_string(Rule rule) noexcept {
  for (const auto& [r, name] : kRuleNames) {
    if (r == rule) return name;
  }
  return "?";
}

const char* to_string(Schema schema) noexcept {
  for (const auto& [s, name] : kSchemaNames) {
    if (s == schema) return name;
  }
  return "?";
}

const char* to_string(Status status) noexcept {
  return status == Status::believed ? "believed" : "disbelieved";
}

const char* to_string(Category category) noexcept {
  switch (category) {
    case Category::a_priori: return "a-priori";
    case Category::a_posteriori: return "a-posteriori";
    case Category::analytic: return "analytic";
    case Category::synthetic: return "synthetic";
  }
  return "?";
}

std::optional<Rule> rule_from_string(std::string_view text) {
  for (const auto& [r, name] : kRuleNames) {
    if (text == name) return r;
  }
  return std::nullopt;
}

std::optional<Schema> schema_from_string(std::string_view text) {
  for (const auto& [s, name] : kSchemaNames) {
    if (text == name) return s;
  }
  return std::nullopt;
}

std::optional<Status> status_from_string(std::string_view text) {
  if (text == "believed") return Status::believed;
  if (text == "disbelieved") return Status::disbelieved;
  return std::nullopt;
}

std::optional<Category> category_from_string(std::string_view text) {
  for (auto c : {Category::a_priori, Category::a_posteriori, Category::analytic,
                 Category::synthetic}) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

std::span<const TimeStamp> Entry::premises() const noexcept {
  if (const auto* app = std::get_if<RuleApplication>(&label.from)) {
    return app->premises;
  }
  return {};
}

bool SymbolTable::absorb(const Formula& f) {
  bool grew = false;
  for (auto& c : constants_of(f)) {
    if (std::find(constants.begin(), constants.end(), c) == constants.end()) {
      constants.push_back(std::move(c));
      grew = true;
    }
  }
  for (auto& p : predicates_of(f)) {
    if (std::find(predicates.begin(), predicates.end(), p) == predicates.end()) {
      predicates.push_back(std::move(p));
      grew = true;
    }
  }
  return grew;
}

Formula instantiate(Schema schema, const SchemaBindings& b) {
  Formula result = Formula::falsum();
  switch (schema) {
    case Schema::a1: {
      auto p = slot(b, "P", schema);
      auto q = slot(b, "Q", schema);
      result = Formula::implies(p, Formula::implies(q, p));
      break;
    }
    case Schema::a2: {
      auto p = slot(b, "P", schema);
      auto q = slot(b, "Q", schema);
      auto r = slot(b, "R", schema);
      result = Formula::implies(
          Formula::implies(p, Formula::implies(q, r)),
          Formula::implies(Formula::implies(p, q), Formula::implies(p, r)));
      break;
    }
    case Schema::a3: {
      auto p = slot(b, "P", schema);
      auto q = slot(b, "Q", schema);
      result = Formula::implies(
          Formula::implies(Formula::negation(p), Formula::negation(q)),
          Formula::implies(q, p));
      break;
    }
    case Schema::q1: {
      auto p = slot(b, "P", schema);
      auto x = variable_slot(b, schema);
      if (!b.term) {
        throw Error(ErrorCode::ill_typed_binding, "Q1 needs a term for a");
      }
      Formula instance = Formula::falsum();
      try {
        instance = substitute(p, x, *b.term);
      } catch (const Error& e) {
        throw Error(ErrorCode::ill_typed_binding,
                    std::string("Q1: term not free for variable: ") + e.what());
      }
      result = Formula::implies(Formula::forall(x, p), instance);
      break;
    }
    case Schema::q2: {
      auto p = slot(b, "P", schema);
      auto q = slot(b, "Q", schema);
      auto x = variable_slot(b, schema);
      if (occurs_free(p, x)) {
        throw Error(ErrorCode::ill_typed_binding, "Q2: " + x + " is free in P");
      }
      result = Formula::implies(Formula::forall(x, Formula::implies(p, q)),
                                Formula::implies(p, Formula::forall(x, q)));
      break;
    }
  }
  if (!is_closed(result)) {
    throw Error(ErrorCode::ill_typed_binding,
                std::string(to_string(schema)) + " instance is not closed: " +
                    render_formula(result));
  }
  return result;
}

Formula conclude(Rule rule, std::span<const Formula> premises,
                 const RuleOptions& options) {
  auto need = [&](std::size_t n) {
    if (premises.size() != n) {
      mismatch(rule, "expects " + std::to_string(n) + " premise(s), got " +
                         std::to_string(premises.size()));
    }
  };
  switch (rule) {
    case Rule::modus_ponens: {
      need(2);
      const auto& imp = premises[1];
      if (!imp.is_implication() ||
          !equal_mod_occurrence(imp.antecedent(), premises[0])) {
        mismatch(rule, "second premise must be P -> Q for the first premise P");
      }
      return imp.consequent();
    }
    case Rule::generalization: {
      need(1);
      if (!options.variable || options.variable->empty()) {
        mismatch(rule, "a variable is required");
      }
      return Formula::forall(*options.variable, premises[0]);
    }
    case Rule::hypothetical_syllogism: {
      need(2);
      const auto& a = premises[0];
      const auto& b = premises[1];
      if (!a.is_implication() || !b.is_implication() ||
          !equal_mod_occurrence(a.consequent(), b.antecedent())) {
        mismatch(rule, "premises must be P -> Q and Q -> R");
      }
      return Formula::implies(a.antecedent(), b.consequent());
    }
    case Rule::aristotelian_syllogism: {
      need(2);
      const auto& u = premises[0];
      if (!u.is_forall() || !u.body().is_implication()) {
        mismatch(rule, "first premise must be (forall x)(P -> Q)");
      }
      const auto& x = u.variable();
      auto found = witness(u.body().antecedent(), x, premises[1]);
      if (!found) mismatch(rule, "second premise is not an instance of P");
      if (!*found) {
        if (occurs_free(u.body().consequent(), x)) {
          mismatch(rule, "cannot determine the instance term");
        }
        return u.body().consequent();
      }
      return substitute(u.body().consequent(), x, **found);
    }
    case Rule::subsumption: {
      need(2);
      const auto& a = premises[0];
      const auto& b = premises[1];
      if (!a.is_forall() || !a.body().is_implication() || !b.is_forall() ||
          !b.body().is_implication()) {
        mismatch(rule, "premises must be universal implications");
      }
      const auto& x = a.variable();
      const auto& y = b.variable();
      if (!is_unary_on(a.body().antecedent(), x) ||
          !is_unary_on(a.body().consequent(), x) ||
          !is_unary_on(b.body().antecedent(), y) ||
          !is_unary_on(b.body().consequent(), y)) {
        mismatch(rule, "premises must relate unary predicates");
      }
      if (!equal_mod_occurrence(
              substitute(b.body().antecedent(), y, Term::variable(x)),
              a.body().consequent())) {
        mismatch(rule, "middle predicates differ");
      }
      return Formula::forall(
          x, Formula::implies(a.body().antecedent(),
                              substitute(b.body().consequent(), y,
                                         Term::variable(x))));
    }
    case Rule::contradiction_detection: {
      need(2);
      if (!complementary_mod_occurrence(premises[0], premises[1])) {
        mismatch(rule, "premises must be P and ~P");
      }
      return Formula::falsum();
    }
    case Rule::conflict_detection: {
      need(3);
      const auto& u = premises[0];
      // (forall x)~(P & Q) is (forall x)~~(P -> ~Q)
      if (!u.is_forall() || !u.body().is_negation() ||
          !u.body().operand().is_negation() ||
          !u.body().operand().operand().is_implication() ||
          !u.body().operand().operand().consequent().is_negation()) {
        mismatch(rule, "first premise must be (forall x)~(P & Q)");
      }
      const auto& x = u.variable();
      const auto& p = u.body().operand().operand().antecedent();
      const auto& q = u.body().operand().operand().consequent().operand();
      auto wp = witness(p, x, premises[1]);
      auto wq = witness(q, x, premises[2]);
      if (!wp || !wq) mismatch(rule, "premises are not instances of P and Q");
      if (*wp && *wq && **wp != **wq) {
        mismatch(rule, "P and Q are instantiated at different terms");
      }
      return Formula::falsum();
    }
  }
  throw Error(ErrorCode::unknown_rule, "unknown rule");
}

bool is_contradiction(const Formula& f) {
  if (f.is_falsum()) return true;
  // ~(P -> ~Q) with Q = ~P
  return f.is_negation() && f.operand().is_implication() &&
         f.operand().consequent().is_negation() &&
         complementary_mod_occurrence(f.operand().antecedent(),
                                      f.operand().consequent().operand());
}

bool is_salient_atom(const Formula& f) {
  if (f.is_atom()) {
    return f.predicate().sort == Sort::kind ||
           f.predicate().sort == Sort::property;
  }
  return f.is_negation() && f.operand().is_atom() &&
         f.operand().predicate().sort == Sort::property;
}

const Entry& DerivationPath::entry(TimeStamp t) const {
  if (!has_entry(t)) {
    throw Error(ErrorCode::unknown_entry,
                "no entry with time stamp " + std::to_string(t));
  }
  return entries_[t - 1];
}

Entry& DerivationPath::mutable_entry(TimeStamp t) {
  if (!has_entry(t)) {
    throw Error(ErrorCode::unknown_entry,
                "no entry with time stamp " + std::to_string(t));
  }
  return entries_[t - 1];
}

TimeStamp DerivationPath::append(Formula f, FromList from, double entrenchment,
                                 Category category) {
  TimeStamp t = next_time();
  symbols_.absorb(f);
  entries_.push_back(Entry{std::move(f),
                           Label{t, std::move(from), {}, Status::believed,
                                 entrenchment, category}});
  return t;
}

TimeStamp DerivationPath::enter_extralogical(const Formula& f,
                                             std::string source_info,
                                             double entrenchment) {
  if (is_contradiction(f)) {
    throw Error(ErrorCode::contradiction_input,
                "a contradiction cannot be entered as an extralogical axiom");
  }
  if (!is_closed(f)) {
    throw Error(ErrorCode::open_formula,
                "formula has free variables: " + render_formula(f));
  }
  if (!(entrenchment >= 0.0 && entrenchment <= 1.0)) {
    throw Error(ErrorCode::ill_typed_binding,
                "entrenchment must lie in [0, 1]");
  }
  if (auto existing = find_believed(f)) {
    throw Error(ErrorCode::duplicate, render_formula(f) +
                                          " is already believed at " +
                                          std::to_string(*existing));
  }
  ExternalSource source;
  if (!source_info.empty()) source.info = std::move(source_info);
  return append(f, std::move(source), entrenchment, Category::a_posteriori);
}

TimeStamp DerivationPath::instantiate_schema(Schema schema,
                                             const SchemaBindings& bindings) {
  Formula f = instantiate(schema, bindings);
  return append(std::move(f), SchemaInstantiation{schema, "inst"},
                kLogicalEntrenchment, Category::a_priori);
}

TimeStamp DerivationPath::apply_rule(Rule rule,
                                     std::span<const TimeStamp> premises,
                                     const RuleOptions& options) {
  std::vector<Formula> formulas;
  double entrenchment = kLogicalEntrenchment;
  bool analytic = true;
  for (TimeStamp p : premises) {
    const Entry& e = entry(p);
    if (!e.believed()) {
      throw Error(ErrorCode::disbelieved_premise,
                  "premise " + std::to_string(p) + " is disbelieved");
    }
    formulas.push_back(e.formula);
    entrenchment = std::min(entrenchment, e.label.entrenchment);
    analytic = analytic && (e.label.category == Category::a_priori ||
                            e.label.category == Category::analytic);
  }
  Formula conclusion = conclude(rule, formulas, options);
  TimeStamp t = append(
      std::move(conclusion),
      RuleApplication{rule, std::vector<TimeStamp>(premises.begin(), premises.end())},
      entrenchment, analytic ? Category::analytic : Category::synthetic);
  for (TimeStamp p : premises) {
    auto& to = entries_[p - 1].label.to;
    if (std::find(to.begin(), to.end(), t) == to.end()) to.push_back(t);
  }
  return t;
}

void DerivationPath::set_status(TimeStamp t, Status status) {
  Entry& e = mutable_entry(t);
  if (status == Status::disbelieved &&
      e.label.category == Category::a_priori) {
    throw Error(ErrorCode::a_priori_retraction,
                "a-priori entry " + std::to_string(t) + " cannot be retracted");
  }
  e.label.status = status;
}

std::vector<std::pair<TimeStamp, Formula>> DerivationPath::believed_formulas(
    std::optional<FormFilter> filter) const {
  std::vector<std::pair<TimeStamp, Formula>> out;
  for (const auto& e : entries_) {
    if (!e.believed()) continue;
    const Formula& f = e.formula;
    if (filter) {
      bool keep = false;
      switch (*filter) {
        case FormFilter::atomic_kind:
          keep = f.is_atom() && f.predicate().sort == Sort::kind;
          break;
        case FormFilter::atomic_property:
          keep = (f.is_atom() && f.predicate().sort == Sort::property) ||
                 (f.is_negation() && f.operand().is_atom() &&
                  f.operand().predicate().sort == Sort::property);
          break;
        case FormFilter::universal:
          keep = f.is_forall();
          break;
      }
      if (!keep) continue;
    }
    out.emplace_back(e.time_stamp(), f);
  }
  return out;
}

std::optional<TimeStamp> DerivationPath::find_believed(const Formula& f) const {
  for (const auto& e : entries_) {
    if (e.believed() && equal_mod_occurrence(e.formula, f)) {
      return e.time_stamp();
    }
  }
  return std::nullopt;
}

std::vector<std::string> DerivationPath::check_invariants() const {
  std::vector<std::string> problems;
  auto report = [&](TimeStamp t, const std::string& what) {
    problems.push_back("entry " + std::to_string(t) + ": " + what);
  };
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    const TimeStamp t = e.time_stamp();
    if (t != i + 1) report(t, "time stamps are not dense");
    for (TimeStamp p : e.premises()) {
      if (p >= t || !has_entry(p)) {
        report(t, "premise " + std::to_string(p) + " is not earlier");
        continue;
      }
      const auto& to = entries_[p - 1].label.to;
      if (std::find(to.begin(), to.end(), t) == to.end()) {
        report(t, "missing from to-list of premise " + std::to_string(p));
      }
    }
    for (TimeStamp d : e.label.to) {
      if (d <= t || !has_entry(d)) {
        report(t, "to-list entry " + std::to_string(d) + " is not later");
        continue;
      }
      auto prem = entries_[d - 1].premises();
      if (std::find(prem.begin(), prem.end(), t) == prem.end()) {
        report(t, "to-list entry " + std::to_string(d) +
                      " does not name it as premise");
      }
    }
    const bool schema = std::holds_alternative<SchemaInstantiation>(e.label.from);
    if (schema != (e.label.category == Category::a_priori)) {
      report(t, "a-priori category must match schema instantiation");
    }
    if (e.is_input() != (e.label.category == Category::a_posteriori)) {
      report(t, "a-posteriori category must match external source");
    }
    if (schema && (!e.believed() ||
                   e.label.entrenchment != kLogicalEntrenchment)) {
      report(t, "a-priori entries are believed with maximal entrenchment");
    }
    if (e.label.entrenchment < 0.0 || e.label.entrenchment > 1.0) {
      report(t, "entrenchment out of range");
    }
  }
  return problems;
}

DerivationPath DerivationPath::restore(std::vector<Entry> entries,
                                       SymbolTable symbols,
                                       Hierarchy hierarchy) {
  DerivationPath path;
  path.entries_ = std::move(entries);
  path.symbols_ = std::move(symbols);
  path.hierarchy_ = std::move(hierarchy);
  return path;
}

}  // namespace drs
