#pragma once

// Dialectical belief revision: trace a contradiction back to the external
// inputs it rests on, retract some of them, then retract everything that
// was derived from what was retracted.

#include <functional>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "drs/kernel.hpp"

namespace drs {

struct RevisionReport {
  TimeStamp trigger = 0;
  std::set<TimeStamp> culprits;
  std::set<TimeStamp> chosen;
  std::vector<TimeStamp> cascade;

  friend bool operator==(const RevisionReport&, const RevisionReport&) = default;
};

// Lowest entrenchment wins; ties go to the most recent time stamp.
struct AutomatedChooser {};

// The callback receives the culprits and returns a non-empty subset of them,
// or nullopt to defer the decision (the controller then parks the session).
struct InteractiveChooser {
  std::function<std::optional<std::set<TimeStamp>>(
      const DerivationPath&, const std::set<TimeStamp>&)>
      choose;
};

using ChooserPolicy = std::variant<AutomatedChooser, InteractiveChooser>;

// Interactive policy that always defers.
ChooserPolicy prompt_policy();

// All believed-or-not a-posteriori ancestors of the trigger, reached through
// from-list premises. Throws Error(not_a_contradiction).
std::set<TimeStamp> collect_culprits(const DerivationPath& path,
                                     TimeStamp trigger);

std::set<TimeStamp> automated_choice(const DerivationPath& path,
                                     const std::set<TimeStamp>& culprits);

// Disbelieves the given entries and, in time-stamp order, every believed
// entry with a disbelieved premise reachable through to-lists. Returns the
// entries whose status changed, in the order they changed.
std::vector<TimeStamp> retract_cascade(DerivationPath& path,
                                       const std::set<TimeStamp>& seeds);

// retract_cascade restricted to believed a-posteriori seeds.
// Throws Error(not_retractable).
std::vector<TimeStamp> forward_retract(DerivationPath& path,
                                       const std::set<TimeStamp>& axioms);

// Retracts `chosen` (a non-empty subset of the trigger's culprits) and keeps
// retracting automatically chosen culprits until the trigger is disbelieved.
RevisionReport revise_with_choice(DerivationPath& path, TimeStamp trigger,
                                  const std::set<TimeStamp>& chosen);

// Full round. Returns nullopt iff an interactive policy deferred.
std::optional<RevisionReport> dialectical_revision(DerivationPath& path,
                                                   TimeStamp trigger,
                                                   const ChooserPolicy& policy);

}  // namespace drs
