#include "drs/controller.hpp"

#include <algorithm>

#include "drs/error.hpp"

namespace drs {

const char* to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::duplicate: return "duplicate";
    case RejectReason::malformed: return "malformed";
    case RejectReason::loop: return "loop";
    case RejectReason::redundant: return "redundant";
  }
  return "malformed";
}

std::optional<RejectReason> reject_reason_from_string(std::string_view text) {
  for (auto r : {RejectReason::duplicate, RejectReason::malformed,
                 RejectReason::loop, RejectReason::redundant}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

namespace {

bool is_kind_on(const Formula& f, const std::string& var) {
  return f.is_atom() && f.predicate().sort == Sort::kind &&
         f.args()[0].is_variable() && f.args()[0].name == var;
}

bool is_property_on(const Formula& f, const std::string& var) {
  return f.is_atom() && f.predicate().sort == Sort::property &&
         f.args()[0].is_variable() && f.args()[0].name == var;
}

Formula kind_atom(const std::string& kind, const std::string& object) {
  return Formula::atom(PredicateSymbol::kind(kind), {Term::constant(object)});
}

Formula property_atom(const Node& property, const std::string& object) {
  Formula atom = Formula::atom(
      PredicateSymbol::property(property.name, property.occurrence),
      {Term::constant(object)});
  return property.sign == Sign::negative ? Formula::negation(atom) : atom;
}

// Object constant of a salient atom (A(a) or ~A(a)).
const std::string& subject_of(const Formula& f) {
  const Formula& atom = f.is_negation() ? f.operand() : f;
  return atom.args()[0].name;
}

// The universal's body with the property occurrence set.
Formula with_occurrence(const Formula& universal, unsigned occurrence) {
  const Formula& imp = universal.body();
  const Formula& head = imp.consequent();
  const Formula& atom = head.is_negation() ? head.operand() : head;
  Formula numbered = Formula::atom(
      PredicateSymbol::property(atom.predicate().name, occurrence), atom.args());
  if (head.is_negation()) numbered = Formula::negation(numbered);
  return Formula::forall(universal.variable(),
                         Formula::implies(imp.antecedent(), numbered));
}

}  // namespace

std::optional<InputForm> classify_input(const Formula& f) {
  if (f.is_atom()) {
    if (f.predicate().sort == Sort::kind && !f.args()[0].is_variable()) {
      return InputForm::classification;
    }
    return std::nullopt;
  }
  if (!f.is_forall() || !f.body().is_implication()) return std::nullopt;
  const auto& x = f.variable();
  const auto& lhs = f.body().antecedent();
  const auto& rhs = f.body().consequent();
  if (!is_kind_on(lhs, x)) return std::nullopt;
  if (is_kind_on(rhs, x)) return InputForm::subkind;
  if (is_property_on(rhs, x)) return InputForm::property;
  if (rhs.is_negation() && is_property_on(rhs.operand(), x)) {
    return InputForm::negated_property;
  }
  return std::nullopt;
}

Controller::Controller(ChooserPolicy policy) : policy_(std::move(policy)) {}

Controller::Controller(DerivationPath path, ChooserPolicy policy)
    : path_(std::move(path)), policy_(std::move(policy)) {
  for (const auto& e : path_.entries()) {
    if (e.believed() && is_contradiction(e.formula)) {
      pending_trigger_ = e.time_stamp();
    }
  }
}

std::optional<PendingChoice> Controller::pending() const {
  if (!pending_trigger_) return std::nullopt;
  PendingChoice choice;
  choice.trigger = *pending_trigger_;
  for (TimeStamp t : collect_culprits(path_, *pending_trigger_)) {
    if (path_.entry(t).believed()) choice.culprits.insert(t);
  }
  return choice;
}

EventOutcome Controller::reject(RejectReason reason, std::string message) const {
  EventOutcome outcome;
  outcome.accepted = false;
  outcome.reject_reason = reason;
  outcome.message = std::move(message);
  return outcome;
}

void Controller::note(int type, TimeStamp t) {
  trace_.events.push_back({type, t});
  if (type >= 2 && type <= 5) trace_.new_entries.push_back(t);
}

EventOutcome Controller::handle_input(const UserInput& input) {
  if (pending_trigger_) {
    throw Error(ErrorCode::pending_choice,
                "a contradiction awaits resolution; inputs are refused");
  }
  auto form = classify_input(input.formula);
  if (!form) {
    return reject(RejectReason::malformed,
                  "not one of the four accepted input forms: " +
                      render_formula(input.formula));
  }
  const Formula stripped = strip_occurrences(input.formula);
  if (auto existing = path_.find_believed(stripped)) {
    return reject(RejectReason::duplicate,
                  render_formula(stripped) + " is already believed at " +
                      std::to_string(*existing));
  }

  Hierarchy& h = path_.hierarchy();
  NodeDescriptor lower;
  NodeDescriptor upper;
  LinkType link_type = LinkType::subkind_kind;
  switch (*form) {
    case InputForm::classification:
      lower = NodeDescriptor::object(stripped.args()[0].name);
      upper = NodeDescriptor::kind_node(stripped.predicate().name);
      link_type = LinkType::object_kind;
      break;
    case InputForm::subkind:
      lower = NodeDescriptor::kind_node(stripped.body().antecedent().predicate().name);
      upper = NodeDescriptor::kind_node(stripped.body().consequent().predicate().name);
      break;
    case InputForm::property:
    case InputForm::negated_property: {
      const Formula& head = stripped.body().consequent();
      const Formula& atom = head.is_negation() ? head.operand() : head;
      lower = NodeDescriptor::kind_node(stripped.body().antecedent().predicate().name);
      upper = NodeDescriptor::property(
          atom.predicate().name,
          *form == InputForm::property ? Sign::positive : Sign::negative);
      link_type = LinkType::has_property;
      break;
    }
  }
  try {
    h.check_descriptor(lower);
    h.check_descriptor(upper);
  } catch (const Error& e) {
    return reject(RejectReason::malformed, e.what());
  }
  if (link_type != LinkType::has_property) {
    if (lower.kind == upper.kind && lower.name == upper.name) {
      return reject(RejectReason::loop, "a kind cannot be its own subkind");
    }
    auto from = lower.kind == NodeKind::object ? h.find_object(lower.name)
                                               : h.find_kind(lower.name);
    auto to = h.find_kind(upper.name);
    if (from && to) {
      if (h.would_loop(*from, *to)) {
        return reject(RejectReason::loop,
                      render_formula(stripped) + " would close a loop");
      }
      if (h.redundancy_analysis(*from, *to).kind ==
          RedundancyAnalysis::Kind::new_link_redundant) {
        return reject(RejectReason::redundant,
                      render_formula(stripped) +
                          " duplicates an existing hierarchy path");
      }
    }
  }

  trace_ = EventOutcome{};
  Formula entered = stripped;
  if (link_type == LinkType::has_property) {
    entered = with_occurrence(stripped, h.next_occurrence(upper.name));
  }
  TimeStamp t =
      path_.enter_extralogical(entered, input.source_info, kInputEntrenchment);
  trace_.input_entry = t;
  constexpr int kInputEventType[] = {1, 6, 7, 8};
  trace_.events.push_back({kInputEventType[static_cast<int>(*form)], t});

  NodeId from = h.ensure_node(lower, t);
  NodeId to = h.ensure_node(upper, t);
  auto displaced = h.add_link(from, to, link_type, t);
  trace_.removed_links.insert(trace_.removed_links.end(), displaced.begin(),
                              displaced.end());

  salient_closure();

  EventOutcome outcome = std::move(trace_);
  trace_ = EventOutcome{};
  outcome.accepted = true;
  if (auto p = pending()) outcome.pending_choice = p->culprits;
  return outcome;
}

EventOutcome Controller::resolve_pending(const std::set<TimeStamp>& chosen) {
  if (!pending_trigger_) {
    throw Error(ErrorCode::no_pending_choice, "no contradiction awaits resolution");
  }
  trace_ = EventOutcome{};
  RevisionReport report = revise_with_choice(path_, *pending_trigger_, chosen);
  pending_trigger_.reset();
  retractions_ += report.cascade.size();
  sync_hierarchy(report.cascade);
  trace_.revision = report;

  salient_closure();

  EventOutcome outcome = std::move(trace_);
  trace_ = EventOutcome{};
  outcome.accepted = true;
  if (auto p = pending()) outcome.pending_choice = p->culprits;
  return outcome;
}

void Controller::retract(const std::set<TimeStamp>& seeds) {
  auto cascade = retract_cascade(path_, seeds);
  retractions_ += cascade.size();
  sync_hierarchy(cascade);
}

void Controller::sync_hierarchy(const std::vector<TimeStamp>& cascade) {
  Hierarchy& h = path_.hierarchy();
  bool touched = false;
  for (TimeStamp t : cascade) {
    if (!path_.entry(t).is_input()) continue;
    auto removed = h.remove_links_created_at(t);
    trace_.removed_links.insert(trace_.removed_links.end(), removed.begin(),
                                removed.end());
    touched = true;
  }
  if (touched) {
    h.reinstate_dormant(
        [this](TimeStamp t) { return path_.entry(t).believed(); });
  }
}

std::vector<TimeStamp> Controller::propagate_object(TimeStamp t) {
  std::vector<TimeStamp> out;
  std::vector<TimeStamp> work{t};
  const Hierarchy& h = path_.hierarchy();
  while (!work.empty()) {
    TimeStamp s = work.back();
    work.pop_back();
    const Entry& e = path_.entry(s);
    if (!e.believed() || !e.formula.is_atom() ||
        e.formula.predicate().sort != Sort::kind) {
      continue;
    }
    const std::string object = e.formula.args()[0].name;
    auto kind = h.find_kind(e.formula.predicate().name);
    if (!kind) continue;
    for (const auto& link : h.links()) {
      if (link.type != LinkType::subkind_kind || link.from != *kind) continue;
      if (!path_.entry(link.created_at).believed()) continue;
      Formula conclusion = kind_atom(h.node(link.to).name, object);
      if (path_.find_believed(conclusion)) continue;
      const TimeStamp premises[] = {link.created_at, s};
      TimeStamp d = path_.apply_rule(Rule::aristotelian_syllogism, premises);
      note(2, d);
      out.push_back(d);
      work.push_back(d);
    }
  }
  return out;
}

std::vector<TimeStamp> Controller::propagate_properties(const std::string& object) {
  std::vector<TimeStamp> out;
  const Hierarchy& h = path_.hierarchy();
  auto object_node = h.find_object(object);
  if (!object_node) return out;

  std::vector<Formula> targets;
  for (const auto& applicable : h.applicable_properties(*object_node)) {
    const Node& property = h.node(applicable.node);
    auto link = h.incoming_property_link(applicable.node);
    if (!link) continue;
    Formula conclusion = property_atom(property, object);
    targets.push_back(conclusion);
    if (path_.find_believed(conclusion)) continue;
    auto classification =
        path_.find_believed(kind_atom(h.node(link->from).name, object));
    if (!classification || !path_.entry(link->created_at).believed()) continue;
    const TimeStamp premises[] = {link->created_at, *classification};
    TimeStamp d = path_.apply_rule(Rule::aristotelian_syllogism, premises);
    note(property.sign == Sign::positive ? 3 : 4, d);
    out.push_back(d);
  }

  // Anything believed about this object's properties that is no longer
  // inherited (blocked, or its support is gone) is withdrawn.
  std::set<TimeStamp> stale;
  for (const auto& [t, f] : path_.believed_formulas(FormFilter::atomic_property)) {
    if (subject_of(f) != object) continue;
    bool wanted = std::any_of(targets.begin(), targets.end(),
                              [&](const Formula& g) {
                                return equal_mod_occurrence(f, g);
                              });
    if (!wanted) stale.insert(t);
  }
  if (!stale.empty()) retract(stale);
  return out;
}

void Controller::prune_unsupported_kinds() {
  const Hierarchy& h = path_.hierarchy();
  std::set<TimeStamp> stale;
  for (const auto& [t, f] : path_.believed_formulas(FormFilter::atomic_kind)) {
    if (path_.entry(t).is_input()) continue;
    auto object = h.find_object(f.args()[0].name);
    auto kind = h.find_kind(f.predicate().name);
    if (!object || !kind || !h.is_strict_ancestor(*kind, *object)) {
      stale.insert(t);
    }
  }
  if (!stale.empty()) retract(stale);
}

std::optional<RevisionReport> Controller::detect_and_resolve() {
  if (pending_trigger_) return std::nullopt;
  std::vector<std::pair<TimeStamp, Formula>> atoms;
  for (auto& [t, f] : path_.believed_formulas()) {
    if (is_salient_atom(f)) atoms.emplace_back(t, f);
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (!complementary_mod_occurrence(atoms[i].second, atoms[j].second)) {
        continue;
      }
      const TimeStamp premises[] = {atoms[i].first, atoms[j].first};
      TimeStamp bottom =
          path_.apply_rule(Rule::contradiction_detection, premises);
      note(5, bottom);
      auto report = dialectical_revision(path_, bottom, policy_);
      if (!report) {
        pending_trigger_ = bottom;
        return std::nullopt;
      }
      retractions_ += report->cascade.size();
      sync_hierarchy(report->cascade);
      trace_.revision = report;
      return report;
    }
  }
  return std::nullopt;
}

void Controller::salient_closure() {
  std::size_t passes = 0;
  while (!pending_trigger_) {
    if (++passes > 2 * path_.size() + 4) {
      throw Error(ErrorCode::internal, "salient closure failed to converge");
    }
    const std::size_t size_before = path_.size();
    const std::size_t retractions_before = retractions_;

    prune_unsupported_kinds();
    for (const auto& [t, f] : path_.believed_formulas(FormFilter::atomic_kind)) {
      propagate_object(t);
    }
    for (NodeId object : path_.hierarchy().objects()) {
      propagate_properties(path_.hierarchy().node(object).name);
    }
    detect_and_resolve();

    if (path_.size() == size_before && retractions_ == retractions_before) break;
  }
}

ConsistencyResult Controller::consistency_scan() const {
  std::vector<std::pair<TimeStamp, Formula>> atoms;
  for (const auto& [t, f] : path_.believed_formulas()) {
    if (is_contradiction(f)) {
      auto premises = path_.entry(t).premises();
      if (premises.size() >= 2) return {false, std::pair{premises[0], premises[1]}};
      return {false, std::pair{t, t}};
    }
    const Formula& core = f.is_negation() ? f.operand() : f;
    if (core.is_atom()) atoms.emplace_back(t, f);
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (complementary_mod_occurrence(atoms[i].second, atoms[j].second)) {
        return {false, std::pair{atoms[i].first, atoms[j].first}};
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace drs
