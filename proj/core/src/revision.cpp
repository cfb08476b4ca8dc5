#include "drs/revision.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "drs/error.hpp"

namespace drs {

ChooserPolicy prompt_policy() {
  return InteractiveChooser{
      [](const DerivationPath&, const std::set<TimeStamp>&)
          -> std::optional<std::set<TimeStamp>> { return std::nullopt; }};
}

std::set<TimeStamp> collect_culprits(const DerivationPath& path,
                                     TimeStamp trigger) {
  const Entry& top = path.entry(trigger);
  if (!is_contradiction(top.formula)) {
    throw Error(ErrorCode::not_a_contradiction,
                "entry " + std::to_string(trigger) + " is not a contradiction");
  }
  std::set<TimeStamp> culprits;
  std::set<TimeStamp> seen{trigger};
  std::vector<TimeStamp> stack{trigger};
  while (!stack.empty()) {
    TimeStamp t = stack.back();
    stack.pop_back();
    const Entry& e = path.entry(t);
    if (e.label.category == Category::a_posteriori) culprits.insert(t);
    for (TimeStamp p : e.premises()) {
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  if (culprits.empty()) {
    throw Error(ErrorCode::internal,
                "contradiction " + std::to_string(trigger) +
                    " has no extralogical ancestry");
  }
  return culprits;
}

std::set<TimeStamp> automated_choice(const DerivationPath& path,
                                     const std::set<TimeStamp>& culprits) {
  if (culprits.empty()) return {};
  TimeStamp best = *culprits.begin();
  for (TimeStamp t : culprits) {
    double e = path.entry(t).label.entrenchment;
    double b = path.entry(best).label.entrenchment;
    if (e < b || (e == b && t > best)) best = t;
  }
  return {best};
}

std::vector<TimeStamp> retract_cascade(DerivationPath& path,
                                       const std::set<TimeStamp>& seeds) {
  std::priority_queue<TimeStamp, std::vector<TimeStamp>, std::greater<>> queue(
      seeds.begin(), seeds.end());
  std::set<TimeStamp> visited;
  std::vector<TimeStamp> order;
  while (!queue.empty()) {
    TimeStamp t = queue.top();
    queue.pop();
    if (!visited.insert(t).second) continue;
    const Entry& e = path.entry(t);
    if (!e.believed()) continue;
    path.set_status(t, Status::disbelieved);
    order.push_back(t);
    for (TimeStamp d : path.entry(t).label.to) queue.push(d);
  }
  return order;
}

std::vector<TimeStamp> forward_retract(DerivationPath& path,
                                       const std::set<TimeStamp>& axioms) {
  for (TimeStamp t : axioms) {
    const Entry& e = path.entry(t);
    if (e.label.category != Category::a_posteriori || !e.believed()) {
      throw Error(ErrorCode::not_retractable,
                  "entry " + std::to_string(t) +
                      " is not a believed extralogical axiom");
    }
  }
  return retract_cascade(path, axioms);
}

RevisionReport revise_with_choice(DerivationPath& path, TimeStamp trigger,
                                  const std::set<TimeStamp>& chosen) {
  RevisionReport report;
  report.trigger = trigger;
  if (!path.entry(trigger).believed()) {
    throw Error(ErrorCode::invalid_choice,
                "contradiction " + std::to_string(trigger) +
                    " is no longer believed");
  }
  report.culprits = collect_culprits(path, trigger);
  if (chosen.empty()) {
    throw Error(ErrorCode::invalid_choice, "choose at least one culprit");
  }
  for (TimeStamp t : chosen) {
    if (!report.culprits.contains(t)) {
      throw Error(ErrorCode::invalid_choice,
                  "entry " + std::to_string(t) + " is not a culprit");
    }
    if (!path.entry(t).believed()) {
      throw Error(ErrorCode::invalid_choice,
                  "culprit " + std::to_string(t) + " is already disbelieved");
    }
  }
  report.chosen = chosen;
  report.cascade = forward_retract(path, chosen);

  // Retracting any ancestor input kills the trigger, so this loop runs only
  // when the choice was made against a stale view.
  while (path.entry(trigger).believed()) {
    std::set<TimeStamp> remaining;
    for (TimeStamp t : report.culprits) {
      if (path.entry(t).believed()) remaining.insert(t);
    }
    if (remaining.empty()) {
      throw Error(ErrorCode::internal,
                  "no culprit retraction invalidates contradiction " +
                      std::to_string(trigger));
    }
    auto extra = automated_choice(path, remaining);
    report.chosen.insert(extra.begin(), extra.end());
    auto more = forward_retract(path, extra);
    report.cascade.insert(report.cascade.end(), more.begin(), more.end());
  }
  return report;
}

std::optional<RevisionReport> dialectical_revision(DerivationPath& path,
                                                   TimeStamp trigger,
                                                   const ChooserPolicy& policy) {
  auto culprits = collect_culprits(path, trigger);
  std::set<TimeStamp> believed;
  for (TimeStamp t : culprits) {
    if (path.entry(t).believed()) believed.insert(t);
  }
  std::set<TimeStamp> chosen;
  if (std::holds_alternative<AutomatedChooser>(policy)) {
    chosen = automated_choice(path, believed);
  } else {
    const auto& interactive = std::get<InteractiveChooser>(policy);
    auto answer = interactive.choose(path, believed);
    if (!answer) return std::nullopt;
    chosen = std::move(*answer);
  }
  return revise_with_choice(path, trigger, chosen);
}

}  // namespace drs
