#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "drs/error.hpp"
#include "drs/repl.hpp"
#include "drs/script.hpp"

namespace drs {
namespace {

namespace fs = std::filesystem;

const char* kNixonScript = R"(// comment
(forall x)(Quaker^k(x) -> Pacifist^p(x))
(forall x)(Republican^k(x) -> ~Pacifist^p(x))

Quaker^k(Nixon)
Republican^k(Nixon)
#resolve 2
)";

TEST(Script, EmptyScriptPasses) {
  EXPECT_TRUE(parse_script("").empty());
  EXPECT_TRUE(parse_script("\n  \n// only a comment\n").empty());
  auto report = run_script("");
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(report.results.empty());
}

TEST(Script, ParsesEveryDirective) {
  auto lines = parse_script(
      "Bird^k(Tweety)\n"
      "#choose auto\n"
      "#resolve 2, 6\n"
      "#expect-believed \"Bird^k(Tweety)\"\n"
      "#expect-disbelieved \"Bird^k(Opus)\"\n"
      "#expect-absent \"CanFly^p(Opus)\"\n"
      "#expect-rejected duplicate\n"
      "#expect-consistent\n"
      "#expect-pending\n"
      "#expect-count 3\n"
      "#expect-cascade 2,6,7\n");
  ASSERT_EQ(lines.size(), 11u);
  EXPECT_EQ(lines[0].number, 1u);
  EXPECT_EQ(std::get<ScriptChoose>(lines[1].command).mode, ChoiceMode::automated);
  EXPECT_EQ(std::get<ScriptResolve>(lines[2].command).chosen, (std::set<TimeStamp>{2, 6}));
  EXPECT_EQ(std::get<ExpectRejected>(lines[6].command).reason, RejectReason::duplicate);
  EXPECT_EQ(std::get<ExpectCount>(lines[9].command).count, 3u);
  EXPECT_EQ(std::get<ExpectCascade>(lines[10].command).order,
            (std::vector<TimeStamp>{2, 6, 7}));
}

TEST(Script, SyntaxErrorsNameTheLine) {
  for (const char* bad : {"Bird^k(\n", "#frobnicate\n", "#expect-count many\n",
                          "#resolve\n", "#choose sometimes\n",
                          "#expect-believed Bird^k(a)\n", "#expect-rejected sulky\n"}) {
    std::string text = std::string("Bird^k(a)\n") + bad;
    try {
      parse_script(text);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::syntax);
      EXPECT_EQ(std::string(e.what()).rfind("line 2: ", 0), 0u) << e.what();
    }
  }
}

TEST(Script, FailuresAndEngineErrorsBecomeReportLines) {
  auto report = run_script(
      "Bird^k(Tweety)\n"
      "#expect-believed \"Bird^k(Opus)\"\n"
      "#resolve 1\n"
      "#expect-count 1\n");
  ASSERT_EQ(report.results.size(), 3u);
  EXPECT_FALSE(report.results[0].passed);
  EXPECT_FALSE(report.results[1].passed);
  EXPECT_NE(report.results[1].detail.find("no_pending_choice"), std::string::npos);
  EXPECT_TRUE(report.results[2].passed);
  EXPECT_EQ(report.failures(), 2u);

  std::ostringstream out;
  print_report(out, report);
  EXPECT_NE(out.str().find("FAIL line 2"), std::string::npos);
  EXPECT_NE(out.str().find("PASS line 4"), std::string::npos);
  EXPECT_NE(out.str().find("1 passed, 2 failed"), std::string::npos);
}

TEST(Script, ExpectationsIgnoreOccurrenceUnlessGiven) {
  std::string text = std::string(kNixonScript) +
                     "#expect-believed \"Pacifist^p(Nixon)\"\n"
                     "#expect-believed \"Pacifist^p#1(Nixon)\"\n"
                     "#expect-absent \"~Pacifist^p(Nixon)\"\n"
                     "#expect-disbelieved \"~Pacifist^p#2(Nixon)\"\n"
                     "#expect-cascade 2,6,7\n"
                     "#expect-consistent\n";
  auto report = run_script(text);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.results.size(), 6u);

  auto wrong = run_script(std::string(kNixonScript) +
                          "#expect-believed \"Pacifist^p#2(Nixon)\"\n");
  EXPECT_FALSE(wrong.passed());
}

TEST(Script, ChooseDirectiveSwitchesMode) {
  auto report = run_script(
      "#choose auto\n"
      "(forall x)(Quaker^k(x) -> Pacifist^p(x))\n"
      "(forall x)(Republican^k(x) -> ~Pacifist^p(x))\n"
      "Quaker^k(Nixon)\n"
      "Republican^k(Nixon)\n"
      "#expect-cascade 5,6,7\n"
      "#expect-consistent\n");
  EXPECT_TRUE(report.passed());
}

class Fixture : public ::testing::TestWithParam<const char*> {};

TEST_P(Fixture, RunsClean) {
  fs::path file = fs::path(DRS_FIXTURE_DIR) / (std::string(GetParam()) + ".drs");
  Session session(ChoiceMode::automated);
  auto report = run_script_file(file, {ChoiceMode::automated}, &session);
  std::ostringstream out;
  print_report(out, report);
  EXPECT_TRUE(report.passed()) << out.str();
  EXPECT_FALSE(report.results.empty());
}

INSTANTIATE_TEST_SUITE_P(Corpus, Fixture,
                         ::testing::Values("opus", "nixon", "clyde", "bosco", "suzie",
                                           "expanded_nixon"));

TEST(Script, MissingFileIsAStorageError) {
  try {
    run_script_file("/nonexistent/x.drs");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::storage);
  }
}

TEST(Repl, CommandsDriveTheSession) {
  Repl repl{Session(ChoiceMode::prompt)};
  std::ostringstream out;
  for (const char* line : {"(forall x)(Quaker^k(x) -> Pacifist^p(x))",
                           "(forall x)(Republican^k(x) -> ~Pacifist^p(x))",
                           "Quaker^k(Nixon)", "Republican^k(Nixon)", ":pending"}) {
    EXPECT_TRUE(repl.execute(line, out));
  }
  EXPECT_NE(out.str().find("Pacifist^p#1(Nixon)"), std::string::npos);
  ASSERT_TRUE(repl.session().pending());
  repl.execute(":resolve 2", out);
  EXPECT_FALSE(repl.session().pending());

  std::ostringstream beliefs;
  repl.execute(":beliefs disbelieved", beliefs);
  EXPECT_NE(beliefs.str().find("~Pacifist^p#2(Nixon)"), std::string::npos);
  EXPECT_EQ(beliefs.str().find("Quaker^k(Nixon)"), std::string::npos);

  std::ostringstream errors;
  repl.execute("Bird^k(", errors);
  repl.execute(":nonsense", errors);
  EXPECT_NE(errors.str().find("syntax"), std::string::npos);
  EXPECT_FALSE(repl.execute(":quit", out));
}

TEST(Repl, SaveAndLoadBothFormats) {
  fs::path dir = fs::temp_directory_path() / ("drs_repl_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  Repl repl{Session(ChoiceMode::prompt)};
  std::ostringstream out;
  repl.execute("(forall x)(Penguin^k(x) -> Bird^k(x))", out);
  repl.execute("Penguin^k(Opus)", out);
  std::string expected = dump_snapshot(repl.session().path());
  repl.execute(":save " + (dir / "s.jsonl").string(), out);
  repl.execute(":save " + (dir / "s.json").string(), out);
  repl.execute(":dot " + (dir / "h.dot").string(), out);
  EXPECT_TRUE(fs::exists(dir / "h.dot"));

  for (const char* name : {"s.jsonl", "s.json"}) {
    Repl other{Session(ChoiceMode::prompt)};
    other.execute(std::string(":load ") + (dir / name).string(), out);
    EXPECT_EQ(dump_snapshot(other.session().path()), expected) << name;
  }
  fs::remove_all(dir);
}

TEST(Repl, RunReadsUntilQuit) {
  std::istringstream in("Bird^k(Tweety)\n:quit\nBird^k(Opus)\n");
  std::ostringstream out;
  Repl repl{Session(ChoiceMode::prompt)};
  repl.run(in, out);
  EXPECT_EQ(repl.session().path().size(), 1u);
}

TEST(Interfaces, ScriptReplAndSessionAgree) {
  const std::vector<std::string> inputs = {
      "(forall x)(Bird^k(x) -> CanFly^p(x))", "(forall x)(Penguin^k(x) -> Bird^k(x))",
      "(forall x)(Penguin^k(x) -> ~CanFly^p(x))", "Penguin^k(Opus)", "Bird^k(Tweety)",
      "CanFly^p(Opus)"};
  Session direct(ChoiceMode::prompt);
  for (const auto& in : inputs) direct.submit(in);

  std::string script;
  for (const auto& in : inputs) script += in + "\n";
  Session scripted(ChoiceMode::prompt);
  run_script(script, {}, &scripted);

  Repl repl{Session(ChoiceMode::prompt)};
  std::ostringstream out;
  for (const auto& in : inputs) repl.execute(in, out);

  EXPECT_EQ(dump_snapshot(scripted.path()), dump_snapshot(direct.path()));
  EXPECT_EQ(dump_snapshot(repl.session().path()), dump_snapshot(direct.path()));
}

}  // namespace
}  // namespace drs
