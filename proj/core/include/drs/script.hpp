#pragma once

// Batch scripts: one formula input per line, plus directives.
//
//   #choose auto|prompt
//   #resolve 2,6
//   #expect-believed "<formula>"      #expect-disbelieved "<formula>"
//   #expect-absent "<formula>"        (not believed, entered or not)
//   #expect-rejected <reason>         (about the last input)
//   #expect-consistent                #expect-pending
//   #expect-count <n>                 (number of believed entries)
//   #expect-cascade 2,6,7             (last revision's retraction order)
//
// Blank lines are skipped and `//` starts a comment.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "drs/session.hpp"

namespace drs {

struct ScriptInput { Formula formula; };
struct ScriptChoose { ChoiceMode mode; };
struct ScriptResolve { std::set<TimeStamp> chosen; };
struct ExpectBelieved { Formula formula; };
struct ExpectDisbelieved { Formula formula; };
struct ExpectAbsent { Formula formula; };
struct ExpectRejected { RejectReason reason; };
struct ExpectConsistent {};
struct ExpectPending {};
struct ExpectCount { std::size_t count; };
struct ExpectCascade { std::vector<TimeStamp> order; };

using ScriptCommand =
    std::variant<ScriptInput, ScriptChoose, ScriptResolve, ExpectBelieved,
                 ExpectDisbelieved, ExpectAbsent, ExpectRejected, ExpectConsistent,
                 ExpectPending, ExpectCount, ExpectCascade>;

struct ScriptLine {
  std::size_t number = 0;
  std::string text;
  ScriptCommand command;
};

// Throws Error(syntax) with a "line N: " prefixed message.
std::vector<ScriptLine> parse_script(std::string_view text);

struct ScriptResult {
  std::size_t line = 0;
  std::string text;
  bool passed = false;
  std::string detail;  // actual outcome when the check failed
};

struct ScriptReport {
  std::vector<ScriptResult> results;
  bool passed() const;
  std::size_t failures() const;
};

struct ScriptOptions {
  ChoiceMode mode = ChoiceMode::prompt;
};

// Runs against `session` (a fresh one when null). Expectations and engine
// errors become report lines; only script syntax errors throw.
ScriptReport run_script(std::string_view text, const ScriptOptions& options = {},
                        Session* session = nullptr);
ScriptReport run_script_file(const std::filesystem::path& file,
                             const ScriptOptions& options = {},
                             Session* session = nullptr);

void print_report(std::ostream& out, const ScriptReport& report);

}  // namespace drs
