#include "drs/lang.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <ostream>
#include <utility>

#include "drs/error.hpp"

namespace drs {

const char* to_string(Sort sort) noexcept {
  switch (sort) {
    case Sort::plain: return "plain";
    case Sort::kind: return "kind";
    case Sort::property: return "property";
  }
  return "plain";
}

PredicateSymbol PredicateSymbol::plain(std::string name, std::size_t arity) {
  return {std::move(name), arity, Sort::plain, std::nullopt};
}

PredicateSymbol PredicateSymbol::kind(std::string name) {
  return {std::move(name), 1, Sort::kind, std::nullopt};
}

PredicateSymbol PredicateSymbol::property(std::string name,
                                          std::optional<unsigned> occurrence) {
  return {std::move(name), 1, Sort::property, occurrence};
}

PredicateSymbol PredicateSymbol::without_occurrence() const {
  PredicateSymbol copy = *this;
  copy.occurrence.reset();
  return copy;
}

struct Formula::Node {
  Kind kind = Kind::falsum;
  PredicateSymbol predicate;
  std::vector<Term> args;
  std::string variable;
  std::vector<Formula> children;
};

Formula Formula::falsum() {
  static const auto node = std::make_shared<const Node>();
  return Formula(node);
}

Formula Formula::atom(PredicateSymbol predicate, std::vector<Term> args) {
  if (args.size() != predicate.arity) {
    throw Error(ErrorCode::arity_mismatch,
                "predicate " + predicate.name + " expects " +
                    std::to_string(predicate.arity) + " argument(s), got " +
                    std::to_string(args.size()));
  }
  if (predicate.sort != Sort::plain && predicate.arity != 1) {
    throw Error(ErrorCode::arity_mismatch,
                "typed predicate " + predicate.name + " must be unary");
  }
  if (predicate.occurrence.has_value() && predicate.sort != Sort::property) {
    throw Error(ErrorCode::occurrence_on_non_property,
                "occurrence index on non-property symbol " + predicate.name);
  }
  if (predicate.occurrence.has_value() && *predicate.occurrence == 0) {
    throw Error(ErrorCode::syntax, "occurrence index must be >= 1");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::atom;
  node->predicate = std::move(predicate);
  node->args = std::move(args);
  return Formula(std::move(node));
}

Formula Formula::negation(Formula operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::negation;
  node->children.push_back(std::move(operand));
  return Formula(std::move(node));
}

Formula Formula::implies(Formula antecedent, Formula consequent) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::implication;
  node->children.push_back(std::move(antecedent));
  node->children.push_back(std::move(consequent));
  return Formula(std::move(node));
}

Formula Formula::forall(std::string variable, Formula body) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::forall;
  node->variable = std::move(variable);
  node->children.push_back(std::move(body));
  return Formula(std::move(node));
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }

const PredicateSymbol& Formula::predicate() const {
  assert(is_atom());
  return node_->predicate;
}

const std::vector<Term>& Formula::args() const {
  assert(is_atom());
  return node_->args;
}

const Formula& Formula::operand() const {
  assert(is_negation());
  return node_->children[0];
}

const Formula& Formula::antecedent() const {
  assert(is_implication());
  return node_->children[0];
}

const Formula& Formula::consequent() const {
  assert(is_implication());
  return node_->children[1];
}

const std::string& Formula::variable() const {
  assert(is_forall());
  return node_->variable;
}

const Formula& Formula::body() const {
  assert(is_forall());
  return node_->children[0];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.predicate == y.predicate && x.args == y.args &&
         x.variable == y.variable && x.children == y.children;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << render_formula(f);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(ErrorCode::syntax, pos_, message);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(std::string_view token) {
    skip_ws();
    return text_.substr(pos_, token.size()) == token;
  }

  void expect(std::string_view token) {
    if (!peek(token)) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  // Identifier at the cursor without consuming it; empty if none.
  std::string_view peek_ident() {
    skip_ws();
    std::size_t end = pos_;
    if (end < text_.size() && is_ident_start(text_[end])) {
      while (end < text_.size() && is_ident_char(text_[end])) ++end;
    }
    return text_.substr(pos_, end - pos_);
  }

  std::string ident() {
    auto id = peek_ident();
    if (id.empty()) fail("expected identifier");
    pos_ += id.size();
    return std::string(id);
  }

  bool at_quantifier() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '(') return false;
    std::size_t saved = pos_;
    ++pos_;
    bool result = peek_ident() == "forall";
    pos_ = saved;
    return result;
  }

  Formula formula() {
    if (at_quantifier()) {
      expect("(");
      ident();  // forall
      std::string var = ident();
      if (var == "forall" || var == "false") fail("keyword used as variable");
      expect(")");
      bound_.push_back(var);
      Formula body = formula();
      bound_.pop_back();
      return Formula::forall(std::move(var), std::move(body));
    }
    Formula lhs = unary();
    if (peek("->")) {
      pos_ += 2;
      Formula rhs = formula();
      return Formula::implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::negation(unary());
    }
    if (c == '(') {
      ++pos_;
      Formula inner = formula();
      expect(")");
      return inner;
    }
    auto id = peek_ident();
    if (id == "false") {
      pos_ += id.size();
      return Formula::falsum();
    }
    if (id.empty()) fail("expected formula");
    return atom();
  }

  Formula atom() {
    std::size_t start = pos_;
    std::string name = ident();
    if (name == "forall") fail("keyword used as predicate");
    Sort sort = Sort::plain;
    std::optional<unsigned> occurrence;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      auto tag = peek_ident();
      if (tag == "k") {
        sort = Sort::kind;
      } else if (tag == "p") {
        sort = Sort::property;
      } else {
        fail("expected sort tag 'k' or 'p'");
      }
      pos_ += 1;
    }
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '#') {
      std::size_t hash = pos_;
      ++pos_;
      skip_ws();
      std::size_t digits_start = pos_;
      unsigned value = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
        ++pos_;
      }
      if (pos_ == digits_start) fail("expected occurrence number");
      if (value == 0) fail("occurrence index must be >= 1");
      if (sort != Sort::property) {
        throw ParseError(ErrorCode::occurrence_on_non_property, hash,
                         "occurrence index on non-property symbol " + name);
      }
      occurrence = value;
    }
    expect("(");
    std::vector<Term> args;
    do {
      std::string arg = ident();
      if (arg == "forall" || arg == "false") fail("keyword used as term");
      bool bound = std::find(bound_.begin(), bound_.end(), arg) != bound_.end();
      args.push_back(bound ? Term::variable(std::move(arg))
                           : Term::constant(std::move(arg)));
    } while (peek(",") && (++pos_, true));
    expect(")");

    if (sort != Sort::plain && args.size() != 1) {
      throw ParseError(ErrorCode::arity_mismatch, start,
                       "typed predicate " + name + " must be unary");
    }
    auto key = std::make_pair(name, sort);
    auto [it, inserted] = arities_.emplace(key, args.size());
    if (!inserted && it->second != args.size()) {
      throw ParseError(ErrorCode::arity_mismatch, start,
                       "predicate " + name + " used with " +
                           std::to_string(args.size()) + " and " +
                           std::to_string(it->second) + " arguments");
    }
    PredicateSymbol symbol{std::move(name), args.size(), sort, occurrence};
    return Formula::atom(std::move(symbol), std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
  std::map<std::pair<std::string, Sort>, std::size_t> arities_;
};

// ---------------------------------------------------------------------------
// Rendering

void render_into(std::string& out, const Formula& f);

void render_wrapped_if(std::string& out, const Formula& f, bool wrap) {
  if (wrap) out += '(';
  render_into(out, f);
  if (wrap) out += ')';
}

void render_into(std::string& out, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      out += "false";
      return;
    case Formula::Kind::atom: {
      const auto& p = f.predicate();
      out += p.name;
      if (p.sort == Sort::kind) out += "^k";
      if (p.sort == Sort::property) out += "^p";
      if (p.occurrence) {
        out += '#';
        out += std::to_string(*p.occurrence);
      }
      out += '(';
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i > 0) out += ", ";
        out += f.args()[i].name;
      }
      out += ')';
      return;
    }
    case Formula::Kind::negation:
      out += '~';
      render_wrapped_if(out, f.operand(),
                        f.operand().is_implication() || f.operand().is_forall());
      return;
    case Formula::Kind::implication:
      render_wrapped_if(
          out, f.antecedent(),
          f.antecedent().is_implication() || f.antecedent().is_forall());
      out += " -> ";
      render_wrapped_if(out, f.consequent(), f.consequent().is_implication());
      return;
    case Formula::Kind::forall:
      out += "(forall ";
      out += f.variable();
      out += ')';
      render_wrapped_if(out, f.body(), f.body().is_implication());
      return;
  }
}

bool equal_mod(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::falsum:
      return true;
    case Formula::Kind::atom: {
      const auto& p = a.predicate();
      const auto& q = b.predicate();
      return p.name == q.name && p.arity == q.arity && p.sort == q.sort &&
             a.args() == b.args();
    }
    case Formula::Kind::negation:
      return equal_mod(a.operand(), b.operand());
    case Formula::Kind::implication:
      return equal_mod(a.antecedent(), b.antecedent()) &&
             equal_mod(a.consequent(), b.consequent());
    case Formula::Kind::forall:
      return a.variable() == b.variable() && equal_mod(a.body(), b.body());
  }
  return false;
}

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      return;
    case Formula::Kind::atom:
      for (const auto& t : f.args()) {
        if (t.is_variable() &&
            std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
          out.insert(t.name);
        }
      }
      return;
    case Formula::Kind::negation:
      collect_free(f.operand(), bound, out);
      return;
    case Formula::Kind::implication:
      collect_free(f.antecedent(), bound, out);
      collect_free(f.consequent(), bound, out);
      return;
    case Formula::Kind::forall:
      bound.push_back(f.variable());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

template <typename Visit>
void for_each_atom(const Formula& f, Visit&& visit) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      return;
    case Formula::Kind::atom:
      visit(f);
      return;
    case Formula::Kind::negation:
      for_each_atom(f.operand(), visit);
      return;
    case Formula::Kind::implication:
      for_each_atom(f.antecedent(), visit);
      for_each_atom(f.consequent(), visit);
      return;
    case Formula::Kind::forall:
      for_each_atom(f.body(), visit);
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(out, f);
  return out;
}

Formula conjunction(const Formula& p, const Formula& q) {
  return Formula::negation(Formula::implies(p, Formula::negation(q)));
}

Formula substitute(const Formula& f, const std::string& variable,
                   const Term& replacement) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      return f;
    case Formula::Kind::atom: {
      bool touched = false;
      std::vector<Term> args = f.args();
      for (auto& t : args) {
        if (t.is_variable() && t.name == variable) {
          t = replacement;
          touched = true;
        }
      }
      return touched ? Formula::atom(f.predicate(), std::move(args)) : f;
    }
    case Formula::Kind::negation:
      return Formula::negation(substitute(f.operand(), variable, replacement));
    case Formula::Kind::implication:
      return Formula::implies(substitute(f.antecedent(), variable, replacement),
                              substitute(f.consequent(), variable, replacement));
    case Formula::Kind::forall:
      if (f.variable() == variable) return f;
      if (replacement.is_variable() && replacement.name == f.variable() &&
          occurs_free(f.body(), variable)) {
        throw Error(ErrorCode::capture, "substituting " + replacement.name +
                                            " for " + variable +
                                            " would be captured by a binder");
      }
      return Formula::forall(f.variable(),
                             substitute(f.body(), variable, replacement));
  }
  return f;
}

Formula strip_occurrences(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      return f;
    case Formula::Kind::atom:
      if (!f.predicate().occurrence) return f;
      return Formula::atom(f.predicate().without_occurrence(), f.args());
    case Formula::Kind::negation:
      return Formula::negation(strip_occurrences(f.operand()));
    case Formula::Kind::implication:
      return Formula::implies(strip_occurrences(f.antecedent()),
                              strip_occurrences(f.consequent()));
    case Formula::Kind::forall:
      return Formula::forall(f.variable(), strip_occurrences(f.body()));
  }
  return f;
}

bool equal_mod_occurrence(const Formula& p, const Formula& q) {
  return equal_mod(p, q);
}

bool complementary_mod_occurrence(const Formula& p, const Formula& q) {
  return (q.is_negation() && equal_mod(q.operand(), p)) ||
         (p.is_negation() && equal_mod(p.operand(), q));
}

std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

bool occurs_free(const Formula& f, const std::string& variable) {
  return free_variables(f).contains(variable);
}

std::vector<std::string> constants_of(const Formula& f) {
  std::vector<std::string> out;
  for_each_atom(f, [&](const Formula& a) {
    for (const auto& t : a.args()) {
      if (!t.is_variable() &&
          std::find(out.begin(), out.end(), t.name) == out.end()) {
        out.push_back(t.name);
      }
    }
  });
  return out;
}

std::vector<PredicateSymbol> predicates_of(const Formula& f) {
  std::vector<PredicateSymbol> out;
  for_each_atom(f, [&](const Formula& a) {
    auto p = a.predicate().without_occurrence();
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  });
  return out;
}

}  // namespace drs
