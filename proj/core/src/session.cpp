#include "drs/session.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "drs/error.hpp"

namespace drs {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::malformed_record, what);
}

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    malformed(std::string("missing field '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    malformed(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename Enum, std::size_t N>
Enum enum_field(const json& doc, const char* key, const Enum (&values)[N]) {
  auto text = field<std::string>(doc, key);
  for (Enum v : values) {
    if (text == to_string(v)) return v;
  }
  malformed(std::string("unknown value '") + text + "' for '" + key + "'");
}

constexpr NodeKind kNodeKinds[] = {NodeKind::object, NodeKind::kind,
                                   NodeKind::property};
constexpr Sign kSigns[] = {Sign::positive, Sign::negative};
constexpr LinkType kLinkTypes[] = {LinkType::object_kind, LinkType::subkind_kind,
                                   LinkType::has_property};
constexpr Sort kSorts[] = {Sort::plain, Sort::kind, Sort::property};
constexpr Status kStatuses[] = {Status::believed, Status::disbelieved};
constexpr Category kCategories[] = {Category::a_priori, Category::a_posteriori,
                                    Category::analytic, Category::synthetic};
constexpr Rule kRules[] = {Rule::modus_ponens,
                           Rule::generalization,
                           Rule::hypothetical_syllogism,
                           Rule::aristotelian_syllogism,
                           Rule::subsumption,
                           Rule::contradiction_detection,
                           Rule::conflict_detection};
constexpr Schema kSchemas[] = {Schema::a1, Schema::a2, Schema::a3, Schema::q1,
                               Schema::q2};

Formula formula_field(const json& doc, const char* key) {
  auto text = field<std::string>(doc, key);
  try {
    return parse_formula(text);
  } catch (const Error& e) {
    malformed(std::string("unparsable formula '") + text + "': " + e.what());
  }
}

json export_node(const Node& n) {
  json doc = {{"id", n.id.value},
              {"kind", to_string(n.kind)},
              {"name", n.name},
              {"created_at", n.created_at},
              {"stable_name", n.stable_name()}};
  if (n.kind == NodeKind::property) {
    doc["occurrence"] = n.occurrence;
    doc["sign"] = to_string(n.sign);
  }
  return doc;
}

Node import_node(const json& doc) {
  Node n;
  n.id = NodeId{field<std::uint32_t>(doc, "id")};
  n.kind = enum_field(doc, "kind", kNodeKinds);
  n.name = field<std::string>(doc, "name");
  n.created_at = field<TimeStamp>(doc, "created_at");
  if (n.kind == NodeKind::property) {
    n.occurrence = field<unsigned>(doc, "occurrence");
    n.sign = enum_field(doc, "sign", kSigns);
  }
  return n;
}

Link import_link(const json& doc) {
  return Link{NodeId{field<std::uint32_t>(doc, "from")},
              NodeId{field<std::uint32_t>(doc, "to")},
              enum_field(doc, "type", kLinkTypes),
              field<TimeStamp>(doc, "created_at")};
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json export_entry(const Entry& entry) {
  json from;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExternalSource>) {
          from = {{"kind", "es"}};
          if (f.info) from["source"] = *f.info;
        } else if constexpr (std::is_same_v<T, RuleApplication>) {
          from = {{"kind", "rule"}, {"rule", to_string(f.rule)},
                  {"premises", f.premises}};
        } else {
          from = {{"kind", "schema"}, {"schema", to_string(f.schema)},
                  {"rule", f.rule}};
        }
      },
      entry.label.from);
  return {{"t", entry.time_stamp()},
          {"formula", render_formula(entry.formula)},
          {"from", from},
          {"to", entry.label.to},
          {"status", to_string(entry.label.status)},
          {"entrenchment", entry.label.entrenchment},
          {"category", to_string(entry.label.category)}};
}

Entry import_entry(const json& doc) {
  Entry e{formula_field(doc, "formula"), Label{}};
  e.label.time_stamp = field<TimeStamp>(doc, "t");
  e.label.to = field<std::vector<TimeStamp>>(doc, "to");
  e.label.status = enum_field(doc, "status", kStatuses);
  e.label.entrenchment = field<double>(doc, "entrenchment");
  e.label.category = enum_field(doc, "category", kCategories);
  const json from = field<json>(doc, "from");
  const auto kind = field<std::string>(from, "kind");
  if (kind == "es") {
    ExternalSource source;
    if (from.contains("source")) source.info = field<std::string>(from, "source");
    e.label.from = source;
  } else if (kind == "rule") {
    e.label.from = RuleApplication{enum_field(from, "rule", kRules),
                                   field<std::vector<TimeStamp>>(from, "premises")};
  } else if (kind == "schema") {
    e.label.from = SchemaInstantiation{enum_field(from, "schema", kSchemas)};
  } else {
    malformed("unknown from-list kind '" + kind + "'");
  }
  return e;
}

json export_entries(const DerivationPath& path, std::optional<Status> status) {
  json out = json::array();
  for (const auto& e : path.entries()) {
    if (!status || e.label.status == *status) out.push_back(export_entry(e));
  }
  return out;
}

json export_report(const RevisionReport& report) {
  return {{"trigger", report.trigger},
          {"culprits", report.culprits},
          {"chosen", report.chosen},
          {"cascade", report.cascade}};
}

json export_link(const Link& link) {
  return {{"from", link.from.value},
          {"to", link.to.value},
          {"type", to_string(link.type)},
          {"created_at", link.created_at}};
}

json export_hierarchy(const Hierarchy& h, bool with_addresses) {
  std::map<NodeId, std::vector<Address>> addresses;
  if (with_addresses) addresses = h.compute_addresses();
  json nodes = json::array();
  for (const auto& [id, n] : h.nodes()) {
    json node = export_node(n);
    if (with_addresses) {
      auto it = addresses.find(id);
      node["addresses"] = it == addresses.end() ? json::array() : json(it->second);
    }
    nodes.push_back(std::move(node));
  }
  json links = json::array();
  for (const auto& l : h.links()) links.push_back(export_link(l));
  json dormant = json::array();
  for (const auto& l : h.dormant_links()) dormant.push_back(export_link(l));
  return {{"nodes", nodes},
          {"links", links},
          {"dormant", dormant},
          {"next_node_id", h.next_node_id()}};
}

json export_pending(const DerivationPath& path,
                    const std::optional<PendingChoice>& pending) {
  if (!pending) return {{"pending", false}, {"culprits", json::array()}};
  json culprits = json::array();
  for (TimeStamp t : pending->culprits) {
    const Entry& e = path.entry(t);
    culprits.push_back({{"t", t},
                        {"formula", render_formula(e.formula)},
                        {"entrenchment", e.label.entrenchment},
                        {"category", to_string(e.label.category)}});
  }
  return {{"pending", true}, {"trigger", pending->trigger}, {"culprits", culprits}};
}

json export_outcome(const EventOutcome& outcome, const DerivationPath& path) {
  json doc = {{"accepted", outcome.accepted}, {"message", outcome.message}};
  doc["reject_reason"] =
      outcome.reject_reason ? json(to_string(*outcome.reject_reason)) : json();
  doc["input_entry"] = outcome.input_entry
                           ? export_entry(path.entry(*outcome.input_entry))
                           : json();
  json entries = json::array();
  for (TimeStamp t : outcome.new_entries) entries.push_back(export_entry(path.entry(t)));
  doc["new_entries"] = entries;
  json removed = json::array();
  for (const auto& l : outcome.removed_links) removed.push_back(export_link(l));
  doc["removed_links"] = removed;
  doc["revision"] = outcome.revision ? export_report(*outcome.revision) : json();
  doc["pending_choice"] =
      outcome.pending_choice ? json(*outcome.pending_choice) : json();
  json events = json::array();
  for (const auto& ev : outcome.events) {
    events.push_back({{"type", ev.type}, {"t", ev.time_stamp}});
  }
  doc["events"] = events;
  return doc;
}

json export_snapshot(const DerivationPath& path) {
  json predicates = json::array();
  for (const auto& p : path.symbols().predicates) {
    predicates.push_back(
        {{"name", p.name}, {"arity", p.arity}, {"sort", to_string(p.sort)}});
  }
  json hierarchy = export_hierarchy(path.hierarchy(), false);
  return {{"entries", export_entries(path)},
          {"symbols",
           {{"constants", path.symbols().constants}, {"predicates", predicates}}},
          {"hierarchy", hierarchy},
          {"counters", path.hierarchy().occurrence_counters()},
          {"next_time", path.next_time()}};
}

DerivationPath import_snapshot(const json& doc) {
  std::vector<Entry> entries;
  for (const auto& e : field<json>(doc, "entries")) entries.push_back(import_entry(e));

  SymbolTable symbols;
  const json sym = field<json>(doc, "symbols");
  symbols.constants = field<std::vector<std::string>>(sym, "constants");
  for (const auto& p : field<json>(sym, "predicates")) {
    PredicateSymbol s;
    s.name = field<std::string>(p, "name");
    s.arity = field<std::size_t>(p, "arity");
    s.sort = enum_field(p, "sort", kSorts);
    symbols.predicates.push_back(std::move(s));
  }

  const json h = field<json>(doc, "hierarchy");
  std::vector<Node> nodes;
  for (const auto& n : field<json>(h, "nodes")) nodes.push_back(import_node(n));
  std::vector<Link> links;
  for (const auto& l : field<json>(h, "links")) links.push_back(import_link(l));
  std::vector<Link> dormant;
  for (const auto& l : field<json>(h, "dormant")) dormant.push_back(import_link(l));
  auto counters = field<std::map<std::string, unsigned>>(doc, "counters");

  auto path = DerivationPath::restore(
      std::move(entries), std::move(symbols),
      Hierarchy::restore(std::move(nodes), std::move(links), std::move(dormant),
                         std::move(counters),
                         field<std::uint32_t>(h, "next_node_id")));
  if (field<TimeStamp>(doc, "next_time") != path.next_time()) {
    malformed("next_time disagrees with the number of entries");
  }
  if (auto problems = path.check_invariants(); !problems.empty()) {
    malformed("inconsistent snapshot: " + problems.front());
  }
  return path;
}

std::string dump_snapshot(const DerivationPath& path) {
  return export_snapshot(path).dump(2) + "\n";
}

const char* to_string(RecordKind kind) noexcept {
  return kind == RecordKind::user_input ? "user_input" : "resolution_choice";
}

const char* to_string(ChoiceMode mode) noexcept {
  return mode == ChoiceMode::automated ? "auto" : "prompt";
}

JournalRecord JournalRecord::input(std::string formula, std::string source) {
  JournalRecord r;
  r.kind = RecordKind::user_input;
  r.formula = std::move(formula);
  r.source = std::move(source);
  return r;
}

JournalRecord JournalRecord::resolution(std::set<TimeStamp> choice,
                                        std::string source) {
  JournalRecord r;
  r.kind = RecordKind::resolution_choice;
  r.choice = std::move(choice);
  r.source = std::move(source);
  return r;
}

nlohmann::ordered_json record_to_json(const JournalRecord& r) {
  nlohmann::ordered_json payload = r.kind == RecordKind::user_input
                                       ? nlohmann::ordered_json(r.formula)
                                       : nlohmann::ordered_json(r.choice);
  return {{"seq", r.seq},
          {"kind", to_string(r.kind)},
          {"payload", payload},
          {"source", r.source},
          {"wall_time", r.wall_time}};
}

JournalRecord record_from_json(const json& doc) {
  JournalRecord r;
  r.seq = field<std::uint64_t>(doc, "seq");
  auto kind = field<std::string>(doc, "kind");
  if (kind == "user_input") {
    r.kind = RecordKind::user_input;
    r.formula = field<std::string>(doc, "payload");
  } else if (kind == "resolution_choice") {
    r.kind = RecordKind::resolution_choice;
    r.choice = field<std::set<TimeStamp>>(doc, "payload");
  } else {
    malformed("unknown record kind '" + kind + "'");
  }
  r.source = doc.contains("source") ? field<std::string>(doc, "source") : "";
  r.wall_time = doc.contains("wall_time") ? field<std::string>(doc, "wall_time") : "";
  return r;
}

Journal::~Journal() = default;

Journal Journal::parse(std::string_view text) {
  Journal j;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) break;  // partial final line
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) malformed("journal line is not JSON");
    j.append(record_from_json(doc));
  }
  return j;
}

Journal Journal::open(const std::filesystem::path& file) {
  std::string text;
  if (std::filesystem::exists(file)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::storage, "cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  Journal j = parse(text);
  auto committed = text.rfind('\n');
  committed = committed == std::string::npos ? 0 : committed + 1;
  if (committed != text.size()) std::filesystem::resize_file(file, committed);
  j.file_ = file;
  j.out_ = std::make_unique<std::ofstream>(file, std::ios::app | std::ios::binary);
  if (!*j.out_) throw Error(ErrorCode::storage, "cannot open " + file.string());
  return j;
}

void Journal::append(JournalRecord record) {
  if (record.seq == 0) record.seq = next_seq();
  if (record.seq != next_seq()) {
    throw Error(ErrorCode::sequence_gap,
                "expected seq " + std::to_string(next_seq()) + ", got " +
                    std::to_string(record.seq));
  }
  if (record.wall_time.empty()) record.wall_time = utc_now();
  if (out_) {
    *out_ << record_to_json(record).dump() << '\n';
    out_->flush();
    if (!*out_) throw Error(ErrorCode::storage, "journal write failed");
  }
  records_.push_back(std::move(record));
}

std::string Journal::to_jsonl() const {
  std::string out;
  for (const auto& r : records_) out += record_to_json(r).dump() + "\n";
  return out;
}

Controller replay(const std::vector<JournalRecord>& records, ChoiceMode mode) {
  Controller c(prompt_policy());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.kind == RecordKind::resolution_choice) {
      if (!c.pending()) {
        throw Error(ErrorCode::stale_choice,
                    "record " + std::to_string(r.seq) +
                        " chooses culprits but nothing is pending");
      }
      try {
        c.resolve_pending(r.choice);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::invalid_choice) throw;
        throw Error(ErrorCode::stale_choice,
                    "record " + std::to_string(r.seq) + ": " + e.what());
      }
    } else {
      Formula f = [&] {
        try {
          return parse_formula(r.formula);
        } catch (const Error& e) {
          malformed("record " + std::to_string(r.seq) + ": " + e.what());
        }
      }();
      c.handle_input({f, ""});
    }
    // Settle a contradiction the journal does not resolve itself.
    while (auto p = c.pending()) {
      bool chosen_next = i + 1 < records.size() &&
                         records[i + 1].kind == RecordKind::resolution_choice;
      if (chosen_next) break;
      if (mode == ChoiceMode::automated) {
        c.resolve_pending(automated_choice(c.path(), p->culprits));
        continue;
      }
      if (i + 1 < records.size()) {
        throw Error(ErrorCode::malformed_record,
                    "record " + std::to_string(records[i + 1].seq) +
                        " arrives while a choice is pending");
      }
      break;
    }
  }
  return c;
}

Session::Session(ChoiceMode mode) : mode_(mode) {}

Session Session::open(const std::filesystem::path& journal_file, ChoiceMode mode) {
  Session s(mode);
  s.journal_ = Journal::open(journal_file);
  s.controller_ = replay(s.journal_.records(), mode);
  return s;
}

Session Session::from_records(const std::vector<JournalRecord>& records,
                              ChoiceMode mode) {
  Session s(mode);
  for (const auto& r : records) {
    JournalRecord copy = r;
    copy.seq = 0;
    s.journal_.append(std::move(copy));
  }
  s.controller_ = replay(s.journal_.records(), mode);
  return s;
}

Session Session::from_snapshot(DerivationPath path, ChoiceMode mode) {
  Session s(mode);
  s.controller_ = Controller(std::move(path), prompt_policy());
  return s;
}

EventOutcome Session::submit(std::string_view formula_text, std::string source) {
  return submit(parse_formula(formula_text), std::move(source));
}

EventOutcome Session::submit(const Formula& formula, std::string source) {
  if (auto p = controller_.pending()) {
    throw Error(ErrorCode::pending_choice,
                "contradiction " + std::to_string(p->trigger) +
                    " awaits resolution");
  }
  // The interface name lives in the journal only, so every front end
  // produces the same engine state.
  journal_.append(JournalRecord::input(render_formula(formula), std::move(source)));
  return settle(controller_.handle_input({formula, ""}));
}

EventOutcome Session::resolve(const std::set<TimeStamp>& chosen,
                              std::string source) {
  auto p = controller_.pending();
  if (!p) throw Error(ErrorCode::no_pending_choice, "nothing to resolve");
  if (chosen.empty()) {
    throw Error(ErrorCode::invalid_choice, "choose at least one culprit");
  }
  for (TimeStamp t : chosen) {
    if (!p->culprits.contains(t)) {
      throw Error(ErrorCode::invalid_choice,
                  "entry " + std::to_string(t) + " is not a culprit");
    }
  }
  journal_.append(JournalRecord::resolution(chosen, std::move(source)));
  return settle(controller_.resolve_pending(chosen));
}

void Session::set_mode(ChoiceMode mode) {
  mode_ = mode;
  settle(EventOutcome{});
}

// In automated mode, pending choices are resolved on the spot and journaled
// like any other choice, so the journal alone determines replay.
EventOutcome Session::settle(EventOutcome outcome) {
  while (mode_ == ChoiceMode::automated) {
    auto p = controller_.pending();
    if (!p) break;
    auto chosen = automated_choice(controller_.path(), p->culprits);
    journal_.append(JournalRecord::resolution(chosen, "auto"));
    EventOutcome next = controller_.resolve_pending(chosen);
    outcome.new_entries.insert(outcome.new_entries.end(), next.new_entries.begin(),
                               next.new_entries.end());
    outcome.removed_links.insert(outcome.removed_links.end(),
                                 next.removed_links.begin(),
                                 next.removed_links.end());
    outcome.events.insert(outcome.events.end(), next.events.begin(),
                          next.events.end());
    outcome.revision = next.revision;
    outcome.pending_choice = next.pending_choice;
  }
  return outcome;
}

}  // namespace drs
