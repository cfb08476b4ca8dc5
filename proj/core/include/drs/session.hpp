#pragma once

// Persistence: JSON exports of engine state, an append-only JSONL journal
// of user inputs and revision choices, and deterministic replay.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "drs/controller.hpp"

namespace drs {

using json = nlohmann::json;

json export_entry(const Entry& entry);
Entry import_entry(const json& doc);

// Entry exports in time-stamp order, optionally filtered by status.
json export_entries(const DerivationPath& path,
                    std::optional<Status> status = std::nullopt);
json export_report(const RevisionReport& report);
json export_link(const Link& link);
// Nodes (with addresses when requested), links and dormant links.
json export_hierarchy(const Hierarchy& hierarchy, bool with_addresses = true);
json export_pending(const DerivationPath& path,
                    const std::optional<PendingChoice>& pending);
json export_outcome(const EventOutcome& outcome, const DerivationPath& path);

json export_snapshot(const DerivationPath& path);
// Throws Error(malformed_record) on structural problems.
DerivationPath import_snapshot(const json& doc);
// The canonical text form: loading it back and dumping again is byte-stable.
std::string dump_snapshot(const DerivationPath& path);

enum class RecordKind : std::uint8_t { user_input, resolution_choice };

const char* to_string(RecordKind kind) noexcept;

struct JournalRecord {
  std::uint64_t seq = 0;
  RecordKind kind = RecordKind::user_input;
  std::string formula;               // user_input payload
  std::set<TimeStamp> choice;        // resolution_choice payload
  std::string source;
  std::string wall_time;             // informational only

  static JournalRecord input(std::string formula, std::string source = "user");
  static JournalRecord resolution(std::set<TimeStamp> choice,
                                  std::string source = "user");
};

// Keys in schema order: seq, kind, payload, source, wall_time.
nlohmann::ordered_json record_to_json(const JournalRecord& record);
// Throws Error(malformed_record).
JournalRecord record_from_json(const json& doc);

class Journal {
 public:
  Journal() = default;
  Journal(Journal&&) noexcept = default;
  Journal& operator=(Journal&&) noexcept = default;
  ~Journal();

  // Loads an existing file (or starts a new one) and appends to it from then
  // on. A partial final line left by a crash is discarded.
  static Journal open(const std::filesystem::path& file);
  // Parses JSONL text; a final line without a newline is ignored.
  static Journal parse(std::string_view text);

  // Assigns seq when the record carries 0. Throws Error(sequence_gap) or
  // Error(storage). The line is flushed before returning.
  void append(JournalRecord record);

  const std::vector<JournalRecord>& records() const noexcept { return records_; }
  std::uint64_t next_seq() const noexcept { return records_.size() + 1; }
  std::string to_jsonl() const;
  const std::optional<std::filesystem::path>& file() const noexcept {
    return file_;
  }

 private:
  std::vector<JournalRecord> records_;
  std::optional<std::filesystem::path> file_;
  std::unique_ptr<std::ofstream> out_;
};

enum class ChoiceMode : std::uint8_t { automated, prompt };

const char* to_string(ChoiceMode mode) noexcept;

// Rebuilds a controller from journal records. Recorded choices are applied
// where they appear; a contradiction with no recorded choice is resolved
// automatically under ChoiceMode::automated, and otherwise left pending if
// it is the last thing in the journal. Throws Error(malformed_record) or
// Error(stale_choice).
Controller replay(const std::vector<JournalRecord>& records, ChoiceMode mode);

// A controller plus its journal. Every mutation is journaled before it is
// applied.
class Session {
 public:
  explicit Session(ChoiceMode mode = ChoiceMode::prompt);
  // Replays the file if it exists and keeps appending to it.
  static Session open(const std::filesystem::path& journal_file,
                      ChoiceMode mode = ChoiceMode::prompt);
  static Session from_records(const std::vector<JournalRecord>& records,
                              ChoiceMode mode = ChoiceMode::prompt);
  // The snapshot becomes the base state; only later inputs are journaled.
  static Session from_snapshot(DerivationPath path,
                               ChoiceMode mode = ChoiceMode::prompt);

  // Parses and submits one input. Throws ParseError for unparsable text and
  // Error(pending_choice) while a revision is pending; neither is journaled.
  EventOutcome submit(std::string_view formula_text,
                      std::string source = "user");
  EventOutcome submit(const Formula& formula, std::string source = "user");

  // Throws Error(no_pending_choice) or Error(invalid_choice).
  EventOutcome resolve(const std::set<TimeStamp>& chosen,
                       std::string source = "user");

  // Switching to automated settles any pending choice at once.
  void set_mode(ChoiceMode mode);
  ChoiceMode mode() const noexcept { return mode_; }
  std::optional<PendingChoice> pending() const { return controller_.pending(); }

  const Controller& controller() const noexcept { return controller_; }
  const DerivationPath& path() const noexcept { return controller_.path(); }
  const Journal& journal() const noexcept { return journal_; }

 private:
  EventOutcome settle(EventOutcome outcome);

  Controller controller_{prompt_policy()};
  Journal journal_;
  ChoiceMode mode_;
};

}  // namespace drs
