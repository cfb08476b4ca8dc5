#pragma once

// Line-oriented console. Bare lines are formula inputs; commands are
//
//   :beliefs [all|believed|disbelieved]   :hierarchy     :entry <t>
//   :pending     :resolve <t,...>         :choose auto|prompt
//   :save <file> :load <file>             :dot <file>    :help   :quit
//
// :save writes the journal when the file name ends in .jsonl and a snapshot
// otherwise; :load accepts either.

#include <iosfwd>
#include <string>

#include "drs/session.hpp"

namespace drs {

class Repl {
 public:
  explicit Repl(Session session) : session_(std::move(session)) {}

  // Handles one line. Returns false once the user asked to quit.
  bool execute(const std::string& line, std::ostream& out);
  // Prompts on `out` and reads until end of input or :quit.
  void run(std::istream& in, std::ostream& out);

  const Session& session() const noexcept { return session_; }

 private:
  void input(const std::string& text, std::ostream& out);
  void command(const std::string& name, const std::string& arg, std::ostream& out);
  void print_entry(const Entry& e, std::ostream& out) const;
  void print_outcome(const EventOutcome& outcome, std::ostream& out) const;

  Session session_;
};

}  // namespace drs
