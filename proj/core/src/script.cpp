#include "drs/script.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "drs/error.hpp"

namespace drs {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '/' && line[i + 1] == '/') return line.substr(0, i);
  }
  return line;
}

struct LineError {
  std::string message;
};

std::vector<TimeStamp> parse_stamps(std::string_view text) {
  std::vector<TimeStamp> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto piece = trim(text.substr(pos, comma == std::string_view::npos
                                           ? std::string_view::npos
                                           : comma - pos));
    TimeStamp t = 0;
    auto [p, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), t);
    if (piece.empty() || ec != std::errc{} || p != piece.data() + piece.size() ||
        t == 0) {
      throw LineError{"expected a comma-separated list of time stamps"};
    }
    out.push_back(t);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

Formula parse_quoted(std::string_view arg) {
  if (arg.size() < 2 || arg.front() != '"' || arg.back() != '"') {
    throw LineError{"expected a double-quoted formula"};
  }
  try {
    return parse_formula(arg.substr(1, arg.size() - 2));
  } catch (const Error& e) {
    throw LineError{e.what()};
  }
}

void expect_no_arg(std::string_view arg) {
  if (!arg.empty()) throw LineError{"unexpected argument"};
}

ScriptCommand parse_directive(std::string_view name, std::string_view arg) {
  if (name == "choose") {
    if (arg == "auto") return ScriptChoose{ChoiceMode::automated};
    if (arg == "prompt") return ScriptChoose{ChoiceMode::prompt};
    throw LineError{"#choose takes auto or prompt"};
  }
  if (name == "resolve") {
    auto stamps = parse_stamps(arg);
    return ScriptResolve{{stamps.begin(), stamps.end()}};
  }
  if (name == "expect-believed") return ExpectBelieved{parse_quoted(arg)};
  if (name == "expect-disbelieved") return ExpectDisbelieved{parse_quoted(arg)};
  if (name == "expect-absent") return ExpectAbsent{parse_quoted(arg)};
  if (name == "expect-rejected") {
    if (auto r = reject_reason_from_string(arg)) return ExpectRejected{*r};
    throw LineError{"unknown rejection reason '" + std::string(arg) + "'"};
  }
  if (name == "expect-consistent") {
    expect_no_arg(arg);
    return ExpectConsistent{};
  }
  if (name == "expect-pending") {
    expect_no_arg(arg);
    return ExpectPending{};
  }
  if (name == "expect-count") {
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (arg.empty() || ec != std::errc{} || p != arg.data() + arg.size()) {
      throw LineError{"#expect-count takes a number"};
    }
    return ExpectCount{n};
  }
  if (name == "expect-cascade") return ExpectCascade{parse_stamps(arg)};
  throw LineError{"unknown directive #" + std::string(name)};
}

bool has_occurrence(const Formula& f) { return !(strip_occurrences(f) == f); }

// Occurrence indexes in an expectation are checked only when written.
bool matches(const Formula& expected, const Formula& actual) {
  if (has_occurrence(expected)) return render_formula(expected) == render_formula(actual);
  return equal_mod_occurrence(expected, actual);
}

std::string join(const std::vector<TimeStamp>& ts) {
  std::string out;
  for (TimeStamp t : ts) out += (out.empty() ? "" : ",") + std::to_string(t);
  return out;
}

class Runner {
 public:
  Runner(Session& session, ScriptReport& report) : s_(session), report_(report) {}

  void run(const ScriptLine& line) {
    line_ = &line;
    std::visit([this](const auto& cmd) { apply(cmd); }, line.command);
  }

 private:
  void record(bool passed, std::string detail = {}) {
    report_.results.push_back({line_->number, line_->text, passed,
                               passed ? std::string() : std::move(detail)});
  }

  template <typename F>
  void guarded(F&& action) {
    try {
      action();
    } catch (const Error& e) {
      record(false, std::string(to_string(e.code())) + ": " + e.what());
    }
  }

  void apply(const ScriptInput& c) {
    guarded([&] {
      last_ = s_.submit(c.formula, "script");
      if (last_->revision) cascade_ = last_->revision->cascade;
    });
  }

  void apply(const ScriptChoose& c) { guarded([&] { s_.set_mode(c.mode); }); }

  void apply(const ScriptResolve& c) {
    guarded([&] {
      auto out = s_.resolve(c.chosen, "script");
      if (out.revision) cascade_ = out.revision->cascade;
    });
  }

  void apply(const ExpectBelieved& c) {
    for (const auto& e : s_.path().entries()) {
      if (e.believed() && matches(c.formula, e.formula)) return record(true);
    }
    record(false, "not believed");
  }

  void apply(const ExpectDisbelieved& c) {
    bool seen = false;
    for (const auto& e : s_.path().entries()) {
      if (!matches(c.formula, e.formula)) continue;
      if (e.believed()) {
        return record(false, "believed at " + std::to_string(e.time_stamp()));
      }
      seen = true;
    }
    record(seen, "never entered");
  }

  void apply(const ExpectAbsent& c) {
    for (const auto& e : s_.path().entries()) {
      if (e.believed() && matches(c.formula, e.formula)) {
        return record(false, "believed at " + std::to_string(e.time_stamp()));
      }
    }
    record(true);
  }

  void apply(const ExpectRejected& c) {
    if (!last_) return record(false, "no input yet");
    if (last_->accepted) return record(false, "accepted");
    record(last_->reject_reason == c.reason,
           std::string("rejected as ") + to_string(*last_->reject_reason));
  }

  void apply(const ExpectConsistent&) {
    auto scan = s_.controller().consistency_scan();
    if (scan.consistent) return record(true);
    record(false, "entries " + std::to_string(scan.witness->first) + " and " +
                      std::to_string(scan.witness->second) + " clash");
  }

  void apply(const ExpectPending&) {
    record(s_.pending().has_value(), "nothing pending");
  }

  void apply(const ExpectCount& c) {
    auto n = s_.path().believed_formulas().size();
    record(n == c.count, std::to_string(n) + " believed");
  }

  void apply(const ExpectCascade& c) {
    record(cascade_ == c.order, "cascade was [" + join(cascade_) + "]");
  }

  Session& s_;
  ScriptReport& report_;
  const ScriptLine* line_ = nullptr;
  std::optional<EventOutcome> last_;
  std::vector<TimeStamp> cascade_;
};

}  // namespace

std::vector<ScriptLine> parse_script(std::string_view text) {
  std::vector<ScriptLine> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                             : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++number;
    auto body = trim(strip_comment(raw));
    if (body.empty()) continue;
    try {
      if (body.front() == '#') {
        auto space = body.find_first_of(" \t");
        auto name = body.substr(1, space == std::string_view::npos
                                       ? std::string_view::npos
                                       : space - 1);
        auto arg = space == std::string_view::npos ? std::string_view{}
                                                   : trim(body.substr(space));
        lines.push_back({number, std::string(body), parse_directive(name, arg)});
      } else {
        try {
          lines.push_back({number, std::string(body), ScriptInput{parse_formula(body)}});
        } catch (const Error& e) {
          throw LineError{e.what()};
        }
      }
    } catch (const LineError& e) {
      throw Error(ErrorCode::syntax,
                  "line " + std::to_string(number) + ": " + e.message);
    }
  }
  return lines;
}

bool ScriptReport::passed() const { return failures() == 0; }

std::size_t ScriptReport::failures() const {
  return std::count_if(results.begin(), results.end(),
                       [](const ScriptResult& r) { return !r.passed; });
}

ScriptReport run_script(std::string_view text, const ScriptOptions& options,
                        Session* session) {
  auto lines = parse_script(text);
  Session fresh(options.mode);
  Session& s = session ? *session : fresh;
  ScriptReport report;
  Runner runner(s, report);
  for (const auto& line : lines) runner.run(line);
  return report;
}

ScriptReport run_script_file(const std::filesystem::path& file,
                             const ScriptOptions& options, Session* session) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::storage, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_script(buf.str(), options, session);
}

void print_report(std::ostream& out, const ScriptReport& report) {
  for (const auto& r : report.results) {
    out << (r.passed ? "PASS" : "FAIL") << " line " << r.line << ": " << r.text;
    if (!r.passed) out << "  (" << r.detail << ")";
    out << '\n';
  }
  out << report.results.size() - report.failures() << " passed, "
      << report.failures() << " failed\n";
}

}  // namespace drs
