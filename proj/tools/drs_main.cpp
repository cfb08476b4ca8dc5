// drs: command-line front end for the reasoning engine.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "drs/error.hpp"
#include "drs/repl.hpp"
#include "drs/script.hpp"
#include "drs/service.hpp"

namespace {

drs::ChoiceMode mode_from(const std::string& choose) {
  return choose == "auto" ? drs::ChoiceMode::automated : drs::ChoiceMode::prompt;
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw drs::Error(drs::ErrorCode::storage, "cannot read " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A session file is either a snapshot document or a JSONL journal.
drs::DerivationPath load_session_file(const std::string& file) {
  std::string text = read_file(file);
  auto doc = drs::json::parse(text, nullptr, false);
  if (!doc.is_discarded() && doc.is_object() && doc.contains("entries")) {
    return drs::import_snapshot(doc);
  }
  auto journal = drs::Journal::parse(text);
  return drs::replay(journal.records(), drs::ChoiceMode::automated).path();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic reasoning system for multiple-inheritance hierarchies"};
  app.require_subcommand(1);

  std::string choose = "prompt";
  const std::vector<std::string> modes{"auto", "prompt"};

  auto* repl = app.add_subcommand("repl", "Interactive console");
  std::string journal_file;
  repl->add_option("--choose", choose, "Contradiction handling")
      ->check(CLI::IsMember(modes));
  repl->add_option("--journal", journal_file,
                   "Journal file to resume from and append to");

  auto* run = app.add_subcommand("run", "Run a script and report expectations");
  std::string script;
  run->add_option("script", script, "Script file")->required()->check(CLI::ExistingFile);
  run->add_option("--choose", choose, "Contradiction handling")
      ->check(CLI::IsMember(modes));

  auto* serve = app.add_subcommand("serve", "HTTP+JSON service");
  drs::ServiceConfig config;
  std::string data_dir;
  serve->add_option("--port", config.port, "Port (0 picks a free one)");
  serve->add_option("--host", config.host, "Address to bind");
  serve->add_option("--data", data_dir, "Directory for session journals");
  serve->add_option("--choose", choose, "Default for new sessions")
      ->check(CLI::IsMember(modes));

  auto* exp = app.add_subcommand("export", "Export a saved journal or snapshot");
  std::string dot_source;
  std::string snapshot_source;
  auto* dot_opt = exp->add_option("--dot", dot_source, "Hierarchy as Graphviz");
  auto* snap_opt =
      exp->add_option("--snapshot", snapshot_source, "Canonical snapshot JSON");
  dot_opt->excludes(snap_opt);
  exp->require_option(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*repl) {
      auto mode = mode_from(choose);
      drs::Repl console(journal_file.empty() ? drs::Session(mode)
                                             : drs::Session::open(journal_file, mode));
      console.run(std::cin, std::cout);
      return 0;
    }
    if (*run) {
      drs::ScriptReport report;
      try {
        report = drs::run_script_file(script, {mode_from(choose)});
      } catch (const drs::Error& e) {
        if (e.code() != drs::ErrorCode::syntax) throw;
        std::cerr << script << ": " << e.what() << '\n';
        return 2;
      }
      drs::print_report(std::cout, report);
      return report.passed() ? 0 : 1;
    }
    if (*serve) {
      if (!data_dir.empty()) config.data_dir = data_dir;
      config.default_mode = mode_from(choose);
      drs::Service service(config);
      int port = service.bind();
      std::cout << "listening on http://" << config.host << ':' << port << std::endl;
      service.listen();
      return 0;
    }
    if (*exp) {
      if (!dot_source.empty()) {
        std::cout << load_session_file(dot_source).hierarchy().to_dot();
      } else {
        std::cout << drs::dump_snapshot(load_session_file(snapshot_source));
      }
      return 0;
    }
  } catch (const drs::Error& e) {
    std::cerr << "error (" << drs::to_string(e.code()) << "): " << e.what() << '\n';
    return 1;
  }
  return 0;
}
