#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <cctype>

namespace drs::testing {

namespace {

Term random_term(Rng& rng, const std::vector<std::string>& scope) {
  static const char* constants[] = {"a", "b", "c"};
  if (!scope.empty() && rng() % 3 != 0) {
    return Term::variable(scope[rng() % scope.size()]);
  }
  return Term::constant(constants[rng() % 3]);
}

Formula random_atom(Rng& rng, const std::vector<std::string>& scope) {
  switch (rng() % 6) {
    case 0:
      return Formula::atom(PredicateSymbol::plain("P", 1), {random_term(rng, scope)});
    case 1:
      return Formula::atom(PredicateSymbol::plain("Q", 2),
                           {random_term(rng, scope), random_term(rng, scope)});
    case 2:
    case 3:
      return Formula::atom(PredicateSymbol::kind("K" + std::to_string(1 + rng() % 3)),
                           {random_term(rng, scope)});
    default: {
      std::optional<unsigned> occ;
      if (rng() % 2) occ = 1 + static_cast<unsigned>(rng() % 3);
      return Formula::atom(PredicateSymbol::property(rng() % 2 ? "A" : "B", occ),
                           {random_term(rng, scope)});
    }
  }
}

Formula random_formula_in(Rng& rng, int depth, std::vector<std::string>& scope) {
  if (depth <= 0) {
    return rng() % 12 == 0 ? Formula::falsum() : random_atom(rng, scope);
  }
  switch (rng() % 5) {
    case 0:
      return random_atom(rng, scope);
    case 1:
      return Formula::negation(random_formula_in(rng, depth - 1, scope));
    case 2:
    case 3: {
      auto lhs = random_formula_in(rng, depth - 1, scope);
      return Formula::implies(lhs, random_formula_in(rng, depth - 1, scope));
    }
    default: {
      static const char* vars[] = {"x", "y", "z"};
      std::string v = vars[rng() % 3];
      scope.push_back(v);
      auto body = random_formula_in(rng, depth - 1, scope);
      scope.pop_back();
      return Formula::forall(v, body);
    }
  }
}

void collect_letters(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::negation:
      collect_letters(f.operand(), out);
      break;
    case Formula::Kind::implication:
      collect_letters(f.antecedent(), out);
      collect_letters(f.consequent(), out);
      break;
    case Formula::Kind::falsum:
      break;
    default:
      out.insert(render_formula(f));
  }
}

bool evaluate(const Formula& f, const std::map<std::string, bool>& v) {
  switch (f.kind()) {
    case Formula::Kind::falsum: return false;
    case Formula::Kind::negation: return !evaluate(f.operand(), v);
    case Formula::Kind::implication:
      return !evaluate(f.antecedent(), v) || evaluate(f.consequent(), v);
    default: return v.at(render_formula(f));
  }
}

std::string node_label(const Node& n) {
  return (n.kind == NodeKind::object ? "o:" : "k:") + n.name;
}

bool is_proper_subsequence(const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
  if (a.size() >= b.size()) return false;
  std::size_t i = 0;
  for (const auto& x : b) {
    if (i < a.size() && a[i] == x) ++i;
  }
  return i == a.size();
}

}  // namespace

Formula random_formula(Rng& rng, int depth) {
  std::vector<std::string> scope;
  return random_formula_in(rng, depth, scope);
}

std::string strip_text(const std::string& rendered) {
  std::string out;
  out.reserve(rendered.size());
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    if (rendered[i] == '#') {
      while (i + 1 < rendered.size() && std::isdigit(static_cast<unsigned char>(rendered[i + 1]))) ++i;
      continue;
    }
    out += rendered[i];
  }
  return out;
}

bool equal_mod_occurrence_text(const Formula& p, const Formula& q) {
  return strip_text(render_formula(p)) == strip_text(render_formula(q));
}

bool complementary_text(const Formula& p, const Formula& q) {
  return (p.is_negation() && equal_mod_occurrence_text(p.operand(), q)) ||
         (q.is_negation() && equal_mod_occurrence_text(q.operand(), p));
}

std::optional<Formula> substitute_ref(const Formula& f, const std::string& var,
                                      const Term& t) {
  // Returns nullopt on capture.
  std::function<std::optional<Formula>(const Formula&, std::set<std::string>)> go =
      [&](const Formula& g, std::set<std::string> binders) -> std::optional<Formula> {
    switch (g.kind()) {
      case Formula::Kind::falsum:
        return g;
      case Formula::Kind::atom: {
        std::vector<Term> args = g.args();
        for (auto& a : args) {
          if (a.is_variable() && a.name == var) {
            if (t.is_variable() && binders.contains(t.name)) return std::nullopt;
            a = t;
          }
        }
        return Formula::atom(g.predicate(), args);
      }
      case Formula::Kind::negation: {
        auto o = go(g.operand(), binders);
        if (!o) return std::nullopt;
        return Formula::negation(*o);
      }
      case Formula::Kind::implication: {
        auto l = go(g.antecedent(), binders);
        auto r = go(g.consequent(), binders);
        if (!l || !r) return std::nullopt;
        return Formula::implies(*l, *r);
      }
      case Formula::Kind::forall: {
        if (g.variable() == var) return g;  // var is bound below
        binders.insert(g.variable());
        auto b = go(g.body(), binders);
        if (!b) return std::nullopt;
        return Formula::forall(g.variable(), *b);
      }
    }
    return std::nullopt;
  };
  return go(f, {});
}

bool is_tautology(const Formula& f) {
  std::set<std::string> letters;
  collect_letters(f, letters);
  std::vector<std::string> names(letters.begin(), letters.end());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << names.size()); ++mask) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (mask >> i) & 1;
    if (!evaluate(f, v)) return false;
  }
  return true;
}

Graph active_graph(const Hierarchy& h) {
  Graph g;
  for (const auto& [id, n] : h.nodes()) {
    if (n.kind != NodeKind::property) g.nodes.insert(node_label(n));
  }
  for (const auto& l : h.links()) {
    if (l.type == LinkType::has_property) continue;
    g.edges.emplace(node_label(h.node(l.from)), node_label(h.node(l.to)));
  }
  return g;
}

std::vector<std::vector<std::string>> all_paths(const Graph& g) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  std::function<void(const std::string&)> extend = [&](const std::string& n) {
    for (const auto& [from, to] : g.edges) {
      if (from != n) continue;
      if (std::find(current.begin(), current.end(), to) != current.end()) continue;
      current.push_back(to);
      out.push_back(current);
      extend(to);
      current.pop_back();
    }
  };
  for (const auto& n : g.nodes) {
    current = {n};
    extend(n);
  }
  return out;
}

bool has_cycle(const Graph& g) {
  for (const auto& n : g.nodes) {
    for (const auto& [from, to] : g.edges) {
      if (to == n && reachable(g, n).contains(from)) return true;
    }
  }
  return std::any_of(g.edges.begin(), g.edges.end(),
                     [](const auto& e) { return e.first == e.second; });
}

bool has_redundant_pair(const Graph& g) {
  auto paths = all_paths(g);
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_ends;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    by_ends[{paths[i].front(), paths[i].back()}].push_back(i);
  }
  for (const auto& [ends, ids] : by_ends) {
    for (std::size_t i : ids) {
      for (std::size_t j : ids) {
        if (is_proper_subsequence(paths[i], paths[j])) return true;
      }
    }
  }
  return false;
}

std::set<std::string> reachable(const Graph& g, const std::string& from) {
  std::set<std::string> seen;
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : g.edges) {
      if (a == n && seen.insert(b).second) stack.push_back(b);
    }
  }
  return seen;
}

std::string input_text(const std::pair<std::string, std::string>& link,
                       bool is_subkind) {
  if (!is_subkind) return link.second + "^k(" + link.first + ")";
  return "(forall x)(" + link.first + "^k(x) -> " + link.second + "^k(x))";
}

std::string input_text(const PropertyInput& p) {
  return "(forall x)(" + p.kind + "^k(x) -> " + (p.negated ? "~" : "") + p.name +
         "^p(x))";
}

InheritanceModel believed_model(const DerivationPath& path) {
  auto unary_on = [](const Formula& f, Sort sort, const std::string& var) {
    return f.is_atom() && f.predicate().sort == sort && f.args().size() == 1 &&
           f.args()[0].is_variable() && f.args()[0].name == var;
  };
  InheritanceModel m;
  for (const auto& e : path.entries()) {
    if (!e.believed() || !e.is_input()) continue;
    const Formula& f = e.formula;
    if (f.is_atom() && f.predicate().sort == Sort::kind) {
      m.classifications.emplace_back(f.args()[0].name, f.predicate().name);
      continue;
    }
    if (!f.is_forall() || !f.body().is_implication()) continue;
    const std::string& x = f.variable();
    const Formula& lhs = f.body().antecedent();
    const Formula& rhs = f.body().consequent();
    if (!unary_on(lhs, Sort::kind, x)) continue;
    if (unary_on(rhs, Sort::kind, x)) {
      m.subkinds.emplace_back(lhs.predicate().name, rhs.predicate().name);
    } else if (unary_on(rhs, Sort::property, x)) {
      m.properties.push_back({lhs.predicate().name, rhs.predicate().name, false});
    } else if (rhs.is_negation() && unary_on(rhs.operand(), Sort::property, x)) {
      m.properties.push_back({lhs.predicate().name, rhs.operand().predicate().name, true});
    }
  }
  return m;
}

std::set<std::string> inheritance_oracle(const InheritanceModel& m) {
  // Upward edges over kind names; objects only ever start a path.
  std::multimap<std::string, std::string> up;
  for (const auto& [a, b] : m.subkinds) up.emplace(a, b);
  std::map<std::string, std::vector<std::string>> objects;
  for (const auto& [o, k] : m.classifications) objects[o].push_back(k);

  std::set<std::string> out;
  for (const auto& [o, direct] : objects) {
    std::set<std::string> kinds;
    std::set<std::pair<std::string, std::string>> below;  // (specific, general)
    std::vector<std::string> current;
    std::function<void(const std::string&)> walk = [&](const std::string& k) {
      if (std::find(current.begin(), current.end(), k) != current.end()) return;
      kinds.insert(k);
      for (const auto& earlier : current) below.emplace(earlier, k);
      current.push_back(k);
      auto [lo, hi] = up.equal_range(k);
      for (auto it = lo; it != hi; ++it) walk(it->second);
      current.pop_back();
    };
    for (const auto& k : direct) walk(k);

    for (const auto& k : kinds) out.insert(k + "^k(" + o + ")");
    for (const auto& prop : m.properties) {
      if (!kinds.contains(prop.kind)) continue;
      bool blocked = std::any_of(
          m.properties.begin(), m.properties.end(), [&](const PropertyInput& q) {
            return q.name == prop.name && q.negated != prop.negated &&
                   kinds.contains(q.kind) && below.contains({q.kind, prop.kind});
          });
      if (!blocked) {
        out.insert((prop.negated ? "~" : "") + prop.name + "^p(" + o + ")");
      }
    }
  }
  return out;
}

std::set<std::string> believed_atoms(const DerivationPath& path) {
  std::set<std::string> out;
  for (const auto& e : path.entries()) {
    if (!e.believed()) continue;
    const Formula& f = e.formula;
    const Formula& core = f.is_negation() ? f.operand() : f;
    if (!core.is_atom() || core.predicate().sort == Sort::plain) continue;
    out.insert(strip_text(render_formula(f)));
  }
  return out;
}

bool consistent(const DerivationPath& path) {
  std::vector<Formula> atoms;
  for (const auto& e : path.entries()) {
    if (!e.believed()) continue;
    if (e.formula.is_falsum()) return false;
    const Formula& core = e.formula.is_negation() ? e.formula.operand() : e.formula;
    if (core.is_atom()) atoms.push_back(e.formula);
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (complementary_text(atoms[i], atoms[j])) return false;
    }
  }
  return true;
}

std::set<TimeStamp> culprits_ref(const DerivationPath& path, TimeStamp trigger) {
  std::set<TimeStamp> out;
  std::function<void(TimeStamp)> visit = [&](TimeStamp t) {
    const Entry& e = path.entry(t);
    if (std::holds_alternative<ExternalSource>(e.label.from)) out.insert(t);
    if (const auto* r = std::get_if<RuleApplication>(&e.label.from)) {
      for (TimeStamp p : r->premises) visit(p);
    }
  };
  visit(trigger);
  return out;
}

std::set<TimeStamp> cascade_ref(const DerivationPath& path,
                                const std::set<TimeStamp>& seeds) {
  std::set<TimeStamp> seen(seeds.begin(), seeds.end());
  std::vector<TimeStamp> queue(seeds.begin(), seeds.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (TimeStamp d : path.entry(queue[i]).label.to) {
      if (seen.insert(d).second) queue.push_back(d);
    }
  }
  std::set<TimeStamp> out;
  for (TimeStamp t : seen) {
    if (path.entry(t).believed()) out.insert(t);
  }
  return out;
}

}  // namespace drs::testing
