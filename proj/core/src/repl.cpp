#include "drs/repl.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "drs/error.hpp"

namespace drs {

namespace {

std::string from_text(const FromList& from) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExternalSource>) {
          return f.code;
        } else if constexpr (std::is_same_v<T, RuleApplication>) {
          std::string out = to_string(f.rule);
          for (std::size_t i = 0; i < f.premises.size(); ++i) {
            out += (i ? "," : " ") + std::to_string(f.premises[i]);
          }
          return out;
        } else {
          return f.rule + " " + to_string(f.schema);
        }
      },
      from);
}

std::set<TimeStamp> parse_choice(const std::string& arg) {
  std::set<TimeStamp> out;
  std::stringstream in(arg);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    TimeStamp t = 0;
    auto b = piece.find_first_not_of(' ');
    auto e = piece.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    auto [p, ec] = std::from_chars(piece.data() + b, piece.data() + e + 1, t);
    if (ec != std::errc{} || p != piece.data() + e + 1) {
      throw Error(ErrorCode::invalid_choice, "'" + piece + "' is not a time stamp");
    }
    out.insert(t);
  }
  return out;
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::storage, "cannot read " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::storage, "cannot write " + file);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

constexpr const char* kHelp =
    "bare line            submit a formula\n"
    ":beliefs [all|believed|disbelieved]\n"
    ":hierarchy           nodes with addresses, then links\n"
    ":entry <t>           one entry with its label\n"
    ":pending             culprits awaiting a choice\n"
    ":resolve <t,...>     retract the chosen culprits\n"
    ":choose auto|prompt  how contradictions are resolved\n"
    ":save <file>         journal (.jsonl) or snapshot\n"
    ":load <file>         journal or snapshot\n"
    ":dot <file>          hierarchy as Graphviz\n"
    ":quit\n";

}  // namespace

bool Repl::execute(const std::string& raw, std::ostream& out) {
  auto b = raw.find_first_not_of(" \t\r");
  if (b == std::string::npos) return true;
  auto e = raw.find_last_not_of(" \t\r");
  std::string line = raw.substr(b, e - b + 1);
  try {
    if (line.front() != ':') {
      input(line, out);
      return true;
    }
    auto space = line.find(' ');
    std::string name = line.substr(1, space == std::string::npos ? std::string::npos
                                                                 : space - 1);
    std::string arg =
        space == std::string::npos ? "" : line.substr(line.find_first_not_of(' ', space));
    if (name == "quit" || name == "q") return false;
    command(name, arg, out);
  } catch (const Error& err) {
    out << "error (" << to_string(err.code()) << "): " << err.what() << '\n';
  }
  return true;
}

void Repl::run(std::istream& in, std::ostream& out) {
  std::string line;
  while (true) {
    out << (session_.pending() ? "drs[pending]> " : "drs> ") << std::flush;
    if (!std::getline(in, line)) break;
    if (!execute(line, out)) break;
  }
  out << '\n';
}

void Repl::input(const std::string& text, std::ostream& out) {
  print_outcome(session_.submit(text, "repl"), out);
}

void Repl::command(const std::string& name, const std::string& arg,
                   std::ostream& out) {
  const DerivationPath& path = session_.path();
  if (name == "help") {
    out << kHelp;
  } else if (name == "beliefs") {
    std::optional<Status> filter = Status::believed;
    if (arg == "all") {
      filter.reset();
    } else if (arg == "disbelieved") {
      filter = Status::disbelieved;
    } else if (!arg.empty() && arg != "believed") {
      throw Error(ErrorCode::syntax, ":beliefs takes all, believed or disbelieved");
    }
    for (const auto& entry : path.entries()) {
      if (!filter || entry.label.status == *filter) print_entry(entry, out);
    }
  } else if (name == "hierarchy") {
    const Hierarchy& h = path.hierarchy();
    auto addresses = h.compute_addresses();
    for (const auto& [id, node] : h.nodes()) {
      out << "  " << node.stable_name();
      if (node.kind == NodeKind::property && node.sign == Sign::negative) out << " (negated)";
      for (const auto& a : addresses[id]) {
        out << " (";
        for (std::size_t i = 0; i < a.size(); ++i) out << (i ? "," : "") << a[i];
        out << ')';
      }
      out << '\n';
    }
    for (const auto& l : h.links()) {
      out << "  " << h.node(l.from).stable_name() << " -> "
          << h.node(l.to).stable_name() << "  " << to_string(l.type) << " @"
          << l.created_at << '\n';
    }
  } else if (name == "entry") {
    TimeStamp t = 0;
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), t);
    if (arg.empty() || ec != std::errc{} || p != arg.data() + arg.size() ||
        !path.has_entry(t)) {
      throw Error(ErrorCode::unknown_entry, "no entry '" + arg + "'");
    }
    const Entry& entry = path.entry(t);
    print_entry(entry, out);
    out << "     to: [";
    for (std::size_t i = 0; i < entry.label.to.size(); ++i) {
      out << (i ? "," : "") << entry.label.to[i];
    }
    out << "]\n";
  } else if (name == "pending") {
    auto p = session_.pending();
    if (!p) {
      out << "nothing pending\n";
      return;
    }
    out << "contradiction at " << p->trigger << "; culprits:\n";
    for (TimeStamp t : p->culprits) print_entry(path.entry(t), out);
  } else if (name == "resolve") {
    print_outcome(session_.resolve(parse_choice(arg), "repl"), out);
  } else if (name == "choose") {
    if (arg == "auto") {
      session_.set_mode(ChoiceMode::automated);
    } else if (arg == "prompt") {
      session_.set_mode(ChoiceMode::prompt);
    } else {
      throw Error(ErrorCode::syntax, ":choose takes auto or prompt");
    }
  } else if (name == "save") {
    if (arg.empty()) throw Error(ErrorCode::syntax, ":save needs a file name");
    write_file(arg, ends_with(arg, ".jsonl") ? session_.journal().to_jsonl()
                                             : dump_snapshot(path));
    out << "saved " << arg << '\n';
  } else if (name == "load") {
    if (arg.empty()) throw Error(ErrorCode::syntax, ":load needs a file name");
    std::string text = read_file(arg);
    json doc = json::parse(text, nullptr, false);
    if (!doc.is_discarded() && doc.is_object() && doc.contains("entries")) {
      session_ = Session::from_snapshot(import_snapshot(doc), session_.mode());
    } else {
      session_ = Session::from_records(Journal::parse(text).records(), session_.mode());
    }
    out << "loaded " << path.size() << " entries\n";
  } else if (name == "dot") {
    if (arg.empty()) throw Error(ErrorCode::syntax, ":dot needs a file name");
    write_file(arg, path.hierarchy().to_dot());
    out << "wrote " << arg << '\n';
  } else {
    throw Error(ErrorCode::syntax, "unknown command :" + name + " (try :help)");
  }
}

void Repl::print_entry(const Entry& e, std::ostream& out) const {
  out << std::setw(5) << e.time_stamp() << "  " << render_formula(e.formula)
      << "  [" << from_text(e.label.from) << "; "
      << (e.believed() ? "bel" : "disbel") << "; " << e.label.entrenchment << "; "
      << to_string(e.label.category) << "]\n";
}

void Repl::print_outcome(const EventOutcome& o, std::ostream& out) const {
  const DerivationPath& path = session_.path();
  if (!o.accepted && !o.revision) {
    out << "rejected (" << to_string(*o.reject_reason) << "): " << o.message << '\n';
    return;
  }
  if (o.input_entry) print_entry(path.entry(*o.input_entry), out);
  for (TimeStamp t : o.new_entries) print_entry(path.entry(t), out);
  if (o.revision) {
    out << "revision: retracted";
    for (TimeStamp t : o.revision->cascade) out << ' ' << t;
    out << '\n';
  }
  if (o.pending_choice) {
    out << "contradiction: choose culprits to retract with :resolve from";
    for (TimeStamp t : *o.pending_choice) out << ' ' << t;
    out << '\n';
  }
}

}  // namespace drs
