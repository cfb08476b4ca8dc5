// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "drs/controller.hpp"
#include "drs/error.hpp"
#include "drs/script.hpp"
#include "drs/session.hpp"
#include "oracles.hpp"
#include "suites.hpp"

namespace {

using namespace drs;
using namespace drs::testing;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool passed = true;
  std::string detail;
};

Verdict fail(std::string detail) { return {false, std::move(detail)}; }

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

const std::vector<std::string> kOpusInputs = {
    "(forall x)(Penguin^k(x) -> Bird^k(x))",
    "(forall x)(Bird^k(x) -> CanFly^p(x))",
    "(forall x)(Penguin^k(x) -> ~CanFly^p(x))",
    "Bird^k(Tweety)",
    "Penguin^k(Opus)",
};

// The Republican rule is written with occurrence #1; the controller numbers
// occurrences itself and assigns #2.
const std::vector<std::string> kNixonInputs = {
    "(forall x)(Quaker^k(x) -> Pacifist^p#1(x))",
    "(forall x)(Republican^k(x) -> ~Pacifist^p#1(x))",
    "Quaker^k(Nixon)",
    "Republican^k(Nixon)",
};

std::set<std::string> believed_strings(const DerivationPath& path) {
  std::set<std::string> out;
  for (const auto& e : path.entries()) {
    if (e.believed()) out.insert(render_formula(e.formula));
  }
  return out;
}

Verdict opus_golden() {
  auto start = Clock::now();
  Controller c;
  for (const auto& s : kOpusInputs) {
    if (!c.handle_input({parse_formula(s), ""}).accepted) return fail("rejected " + s);
  }
  double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  const std::set<std::string> expected = {
      "(forall x)(Penguin^k(x) -> Bird^k(x))",
      "(forall x)(Bird^k(x) -> CanFly^p#1(x))",
      "(forall x)(Penguin^k(x) -> ~CanFly^p#2(x))",
      "Bird^k(Tweety)",
      "CanFly^p#1(Tweety)",
      "Penguin^k(Opus)",
      "Bird^k(Opus)",
      "~CanFly^p#2(Opus)",
  };
  if (believed_strings(c.path()) != expected) return fail("belief set differs");
  if (c.path().size() != 8) return fail("unexpected extra entries");
  for (const auto& e : c.path().entries()) {
    if (strip_text(render_formula(e.formula)) == "CanFly^p(Opus)") {
      return fail("CanFly(Opus) was entered");
    }
  }
  if (elapsed >= 1.0) return fail("took " + seconds(elapsed));
  return {true, "8 believed, " + seconds(elapsed)};
}

Verdict nixon_golden() {
  Controller c(prompt_policy());
  for (const auto& s : kNixonInputs) c.handle_input({parse_formula(s), ""});
  const std::vector<std::string> expected = {
      "(forall x)(Quaker^k(x) -> Pacifist^p#1(x))",
      "(forall x)(Republican^k(x) -> ~Pacifist^p#2(x))",
      "Quaker^k(Nixon)",
      "Pacifist^p#1(Nixon)",
      "Republican^k(Nixon)",
      "~Pacifist^p#2(Nixon)",
      "false",
  };
  std::vector<std::string> actual;
  for (const auto& e : c.path().entries()) {
    if (e.believed()) actual.push_back(render_formula(e.formula));
  }
  if (actual != expected) return fail("pre-revision belief set differs");
  auto pending = c.pending();
  if (!pending || pending->trigger != 7) return fail("no pending contradiction at 7");
  auto outcome = c.resolve_pending({2});
  if (!outcome.revision || outcome.revision->cascade != std::vector<TimeStamp>{2, 6, 7}) {
    return fail("retraction order differs from 2, 6, 7");
  }
  std::set<TimeStamp> disbelieved;
  for (const auto& e : c.path().entries()) {
    if (!e.believed()) disbelieved.insert(e.time_stamp());
  }
  if (disbelieved != std::set<TimeStamp>{2, 6, 7}) return fail("disbelieved set differs");
  if (!c.consistency_scan().consistent) return fail("inconsistent after revision");
  return {true, "retracted 2, 6, 7"};
}

Verdict from_suite(const SuiteResult& r, const std::string& what) {
  std::string summary = std::to_string(r.cases) + " " + what + ", " +
                        std::to_string(r.violations) + " violations, " +
                        seconds(r.seconds);
  if (r.violations) return fail(summary + "; first: " + r.first_failure);
  return {true, summary};
}

SuiteResult g_structure;
SuiteResult g_inheritance;
SuiteResult g_revision;

Verdict structure_suite() {
  g_structure = hierarchy_structure_suite(10000, 51);
  return from_suite(g_structure, "sequences");
}

Verdict inheritance_suite() {
  auto start = Clock::now();
  SuiteResult exhaustive = inheritance_exhaustive_suite();
  SuiteResult random = inheritance_random_suite(1000, 52);
  g_inheritance = exhaustive;
  g_inheritance += random;
  g_inheritance.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  Verdict v = from_suite(g_inheritance, "hierarchies");
  v.detail += " (" + std::to_string(exhaustive.cases) + " exhaustive)";
  if (v.passed && g_inheritance.seconds >= 60.0) return fail("too slow: " + v.detail);
  return v;
}

Verdict consistency_suite() {
  std::size_t inputs = g_structure.inputs + g_inheritance.inputs;
  std::size_t bad = g_structure.inconsistencies + g_inheritance.inconsistencies;
  if (inputs == 0) return fail("property suites did not run");
  std::string summary = std::to_string(inputs) + " inputs checked, " +
                        std::to_string(bad) + " inconsistent states";
  return bad ? fail(summary) : Verdict{true, summary};
}

std::vector<JournalRecord> journal_of(const std::vector<std::string>& inputs,
                                      std::optional<std::set<TimeStamp>> choice) {
  Session s(ChoiceMode::prompt);
  for (const auto& in : inputs) s.submit(in);
  if (choice) s.resolve(*choice);
  return s.journal().records();
}

Verdict replay_determinism() {
  struct Case {
    std::string name;
    std::vector<std::string> inputs;
    std::optional<std::set<TimeStamp>> choice;
  };
  const std::vector<Case> cases = {{"opus", kOpusInputs, std::nullopt},
                                   {"nixon", kNixonInputs, std::set<TimeStamp>{2}}};
  std::size_t prefixes = 0;
  for (const auto& c : cases) {
    auto records = journal_of(c.inputs, c.choice);
    auto first = dump_snapshot(replay(records, ChoiceMode::prompt).path());
    auto second = dump_snapshot(replay(records, ChoiceMode::prompt).path());
    if (first != second) return fail(c.name + ": two replays differ");
    Journal j;
    for (const auto& r : records) j.append(r);
    auto round = Journal::parse(j.to_jsonl()).records();
    if (dump_snapshot(replay(round, ChoiceMode::prompt).path()) != first) {
      return fail(c.name + ": exported journal replays differently");
    }
    // Live state after each record against a replay of that prefix.
    Session live(ChoiceMode::prompt);
    for (std::size_t k = 0; k < records.size(); ++k) {
      if (records[k].kind == RecordKind::user_input) {
        live.submit(records[k].formula);
      } else {
        live.resolve(records[k].choice);
      }
      std::vector<JournalRecord> prefix(records.begin(), records.begin() + k + 1);
      if (dump_snapshot(replay(prefix, ChoiceMode::prompt).path()) !=
          dump_snapshot(live.path())) {
        return fail(c.name + ": prefix of " + std::to_string(k + 1) + " differs");
      }
      ++prefixes;
    }
  }
  return {true, "2 journals, " + std::to_string(prefixes) + " prefixes"};
}

Verdict revision_fuzz() {
  g_revision = revision_fuzz_suite(1000, 53);
  return from_suite(g_revision, "scenarios");
}

Verdict corpus(const std::filesystem::path& dir) {
  std::size_t checks = 0;
  for (const char* name : {"clyde", "bosco", "suzie", "expanded_nixon"}) {
    Session s(ChoiceMode::automated);
    ScriptReport report;
    try {
      report = run_script_file(dir / (std::string(name) + ".drs"), {}, &s);
    } catch (const Error& e) {
      return fail(std::string(name) + ": " + e.what());
    }
    if (!report.passed()) return fail(std::string(name) + ": expectation failed");
    if (s.pending()) return fail(std::string(name) + ": not quiescent");
    if (!s.controller().consistency_scan().consistent) {
      return fail(std::string(name) + ": inconsistent");
    }
    if (believed_atoms(s.path()) != inheritance_oracle(believed_model(s.path()))) {
      return fail(std::string(name) + ": belief set differs from inheritance oracle");
    }
    checks += report.results.size();
  }
  return {true, "4 scripts, " + std::to_string(checks) + " expectations"};
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path fixtures = DRS_FIXTURE_DIR;
  if (argc > 1) fixtures = argv[1];

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"Opus golden belief set", opus_golden},
      {"Nixon golden revision", nixon_golden},
      {"Hierarchy stays acyclic and irredundant", structure_suite},
      {"Closure matches inheritance oracle", inheritance_suite},
      {"Belief set stays consistent", consistency_suite},
      {"Replay determinism", replay_determinism},
      {"Revision postcondition fuzz", revision_fuzz},
      {"Corpus fixtures", [&] { return corpus(fixtures); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.passed ? "PASS " : "FAIL ") << name << " -- " << v.detail
              << std::endl;
    if (!v.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
