#pragma once

// Multiple-inheritance controller. Accepts the four input forms
//
//   (i)   A^k(a)                          classification
//   (ii)  (forall x)(A^k(x) -> B^k(x))    subkind
//   (iii) (forall x)(A^k(x) -> B^p(x))    property
//   (iv)  (forall x)(A^k(x) -> ~B^p(x))   negated property
//
// keeps the hierarchy in step with the belief set, derives every
// classification and property the hierarchy implies under the specificity
// principle, and runs belief revision whenever two derived facts clash.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drs/kernel.hpp"
#include "drs/revision.hpp"

namespace drs {

inline constexpr double kInputEntrenchment = 0.5;

enum class RejectReason : std::uint8_t { duplicate, malformed, loop, redundant };

const char* to_string(RejectReason reason) noexcept;
std::optional<RejectReason> reject_reason_from_string(std::string_view text);

enum class InputForm : std::uint8_t {
  classification,
  subkind,
  property,
  negated_property
};

std::optional<InputForm> classify_input(const Formula& f);

struct UserInput {
  Formula formula;
  std::string source_info;
};

// Controller event types 1-8: 1/6/7/8 are user inputs of forms (i)-(iv),
// 2/3/4 are derived classifications, properties and negated properties,
// 5 is a detected contradiction.
struct ControllerEvent {
  int type = 0;
  TimeStamp time_stamp = 0;
  friend bool operator==(const ControllerEvent&, const ControllerEvent&) = default;
};

struct EventOutcome {
  bool accepted = false;
  std::optional<RejectReason> reject_reason;
  std::string message;
  std::optional<TimeStamp> input_entry;
  // Entries derived while processing (AS and CD conclusions).
  std::vector<TimeStamp> new_entries;
  std::vector<Link> removed_links;
  std::optional<RevisionReport> revision;
  std::optional<std::set<TimeStamp>> pending_choice;
  std::vector<ControllerEvent> events;
};

struct PendingChoice {
  TimeStamp trigger = 0;
  std::set<TimeStamp> culprits;
};

struct ConsistencyResult {
  bool consistent = true;
  std::optional<std::pair<TimeStamp, TimeStamp>> witness;
};

class Controller {
 public:
  explicit Controller(ChooserPolicy policy = AutomatedChooser{});
  // Resumes from a restored path; a believed contradiction becomes the
  // pending choice.
  explicit Controller(DerivationPath path,
                      ChooserPolicy policy = AutomatedChooser{});

  void set_policy(ChooserPolicy policy) { policy_ = std::move(policy); }
  const ChooserPolicy& policy() const noexcept { return policy_; }

  // Throws Error(pending_choice) while a revision awaits a decision.
  EventOutcome handle_input(const UserInput& input);

  // Throws Error(no_pending_choice) or Error(invalid_choice).
  EventOutcome resolve_pending(const std::set<TimeStamp>& chosen);

  std::optional<PendingChoice> pending() const;

  std::vector<TimeStamp> propagate_object(TimeStamp t);
  std::vector<TimeStamp> propagate_properties(const std::string& object);
  std::optional<RevisionReport> detect_and_resolve();
  void salient_closure();
  ConsistencyResult consistency_scan() const;

  const DerivationPath& path() const noexcept { return path_; }
  // Direct kernel access for tooling and tests; bypasses input checks.
  DerivationPath& mutable_path() noexcept { return path_; }

 private:
  EventOutcome reject(RejectReason reason, std::string message) const;
  void retract(const std::set<TimeStamp>& seeds);
  void sync_hierarchy(const std::vector<TimeStamp>& cascade);
  void prune_unsupported_kinds();
  void note(int type, TimeStamp t);

  DerivationPath path_;
  ChooserPolicy policy_;
  std::optional<TimeStamp> pending_trigger_;
  std::size_t retractions_ = 0;
  EventOutcome trace_;
};

}  // namespace drs
