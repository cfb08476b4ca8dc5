#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drs {

// Machine-readable error classes. The string form is part of the HTTP and
// script contracts, so values must not be renamed.
enum class ErrorCode {
  syntax,
  arity_mismatch,
  occurrence_on_non_property,
  capture,
  open_formula,
  duplicate,
  contradiction_input,
  unknown_schema,
  ill_typed_binding,
  unknown_rule,
  template_mismatch,
  disbelieved_premise,
  unknown_entry,
  a_priori_retraction,
  not_a_contradiction,
  not_retractable,
  invalid_choice,
  node_conflict,
  loop,
  redundant,
  cycle,
  pending_choice,
  no_pending_choice,
  sequence_gap,
  storage,
  malformed_record,
  stale_choice,
  bind_failure,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t position, const std::string& message)
      : Error(code, message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace drs
