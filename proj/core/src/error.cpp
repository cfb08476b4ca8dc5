#include "drs/error.hpp"

namespace drs {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::arity_mismatch: return "arity_mismatch";
    case ErrorCode::occurrence_on_non_property: return "occurrence_on_non_property";
    case ErrorCode::capture: return "capture";
    case ErrorCode::open_formula: return "open_formula";
    case ErrorCode::duplicate: return "duplicate";
    case ErrorCode::contradiction_input: return "contradiction_input";
    case ErrorCode::unknown_schema: return "unknown_schema";
    case ErrorCode::ill_typed_binding: return "ill_typed_binding";
    case ErrorCode::unknown_rule: return "unknown_rule";
    case ErrorCode::template_mismatch: return "template_mismatch";
    case ErrorCode::disbelieved_premise: return "disbelieved_premise";
    case ErrorCode::unknown_entry: return "unknown_entry";
    case ErrorCode::a_priori_retraction: return "a_priori_retraction";
    case ErrorCode::not_a_contradiction: return "not_a_contradiction";
    case ErrorCode::not_retractable: return "not_retractable";
    case ErrorCode::invalid_choice: return "invalid_choice";
    case ErrorCode::node_conflict: return "node_conflict";
    case ErrorCode::loop: return "loop";
    case ErrorCode::redundant: return "redundant";
    case ErrorCode::cycle: return "cycle";
    case ErrorCode::pending_choice: return "pending_choice";
    case ErrorCode::no_pending_choice: return "no_pending_choice";
    case ErrorCode::sequence_gap: return "sequence_gap";
    case ErrorCode::storage: return "storage";
    case ErrorCode::malformed_record: return "malformed_record";
    case ErrorCode::stale_choice: return "stale_choice";
    case ErrorCode::bind_failure: return "bind_failure";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace drs
