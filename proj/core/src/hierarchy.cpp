#include "drs/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "drs/error.hpp"

namespace drs {

const char* to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::object: return "object";
    case NodeKind::kind: return "kind";
    case NodeKind::property: return "property";
  }
  return "kind";
}

const char* to_string(Sign sign) noexcept {
  return sign == Sign::positive ? "positive" : "negative";
}

const char* to_string(LinkType type) noexcept {
  switch (type) {
    case LinkType::object_kind: return "object-kind";
    case LinkType::subkind_kind: return "subkind-kind";
    case LinkType::has_property: return "has-property";
  }
  return "subkind-kind";
}

std::string Node::stable_name() const {
  switch (kind) {
    case NodeKind::object: return "obj_" + name;
    case NodeKind::kind: return "kind_" + name;
    case NodeKind::property:
      return "prop_" + name + "_" + std::to_string(occurrence);
  }
  return name;
}

namespace {

bool is_structural(const Link& link) {
  return link.type != LinkType::has_property;
}

}  // namespace

NodeId Hierarchy::ensure_node(const NodeDescriptor& spec,
                              TimeStamp created_at) {
  check_descriptor(spec);
  auto make = [&](unsigned occurrence) {
    NodeId id{next_id_++};
    nodes_.emplace(id, Node{id, spec.kind, spec.name, occurrence, spec.sign,
                            created_at});
    return id;
  };
  switch (spec.kind) {
    case NodeKind::object: {
      if (auto it = objects_.find(spec.name); it != objects_.end()) {
        return it->second;
      }
      NodeId id = make(0);
      objects_.emplace(spec.name, id);
      return id;
    }
    case NodeKind::kind: {
      if (auto it = kinds_.find(spec.name); it != kinds_.end()) {
        return it->second;
      }
      NodeId id = make(0);
      kinds_.emplace(spec.name, id);
      return id;
    }
    case NodeKind::property: {
      unsigned occurrence = next_occurrence(spec.name);
      counters_[spec.name] = occurrence + 1;
      return make(occurrence);
    }
  }
  throw Error(ErrorCode::internal, "unknown node kind");
}

void Hierarchy::check_descriptor(const NodeDescriptor& spec) const {
  if (spec.name.empty()) {
    throw Error(ErrorCode::node_conflict, "node name must be non-empty");
  }
  if (spec.kind == NodeKind::kind && counters_.contains(spec.name)) {
    throw Error(ErrorCode::node_conflict,
                spec.name + " is already a property predicate");
  }
  if (spec.kind == NodeKind::property && kinds_.contains(spec.name)) {
    throw Error(ErrorCode::node_conflict,
                spec.name + " is already a kind predicate");
  }
}

unsigned Hierarchy::next_occurrence(const std::string& property) const {
  auto it = counters_.find(property);
  return it == counters_.end() ? 1u : it->second;
}

std::optional<NodeId> Hierarchy::find_object(std::string_view constant) const {
  auto it = objects_.find(constant);
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> Hierarchy::find_kind(std::string_view predicate) const {
  auto it = kinds_.find(predicate);
  if (it == kinds_.end()) return std::nullopt;
  return it->second;
}

const Node& Hierarchy::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorCode::unknown_entry,
                "unknown node " + std::to_string(id.value));
  }
  return it->second;
}

namespace {

// Stable insertion sort; the lists are short and usually already ordered,
// and std::stable_sort would allocate a buffer on every call.
void sort_by_creation(std::vector<const Link*>& links) {
  for (std::size_t i = 1; i < links.size(); ++i) {
    const Link* item = links[i];
    std::size_t j = i;
    while (j > 0 && links[j - 1]->created_at > item->created_at) {
      links[j] = links[j - 1];
      --j;
    }
    links[j] = item;
  }
}

}  // namespace

std::vector<NodeId> Hierarchy::parents(NodeId id) const {
  std::vector<const Link*> found;
  for (const auto& link : links_) {
    if (is_structural(link) && link.from == id) found.push_back(&link);
  }
  sort_by_creation(found);
  std::vector<NodeId> out;
  for (const auto* link : found) out.push_back(link->to);
  return out;
}

std::vector<NodeId> Hierarchy::children(NodeId id) const {
  std::vector<const Link*> found;
  for (const auto& link : links_) {
    if (is_structural(link) && link.to == id) found.push_back(&link);
  }
  sort_by_creation(found);
  std::vector<NodeId> out;
  for (const auto* link : found) out.push_back(link->from);
  return out;
}

std::vector<NodeId> Hierarchy::ancestors(NodeId id) const {
  // Hierarchies are small; linear scans beat node-based containers here.
  std::vector<NodeId> out;
  std::vector<const Link*> found;
  for (std::size_t head = 0; head <= out.size(); ++head) {
    NodeId current = head == 0 ? id : out[head - 1];
    found.clear();
    for (const auto& link : links_) {
      if (is_structural(link) && link.from == current) found.push_back(&link);
    }
    sort_by_creation(found);
    for (const auto* link : found) {
      if (link->to != id && std::find(out.begin(), out.end(), link->to) == out.end()) {
        out.push_back(link->to);
      }
    }
  }
  return out;
}

std::vector<NodeId> Hierarchy::descendants(NodeId id) const {
  std::vector<NodeId> out;
  std::set<NodeId> seen{id};
  std::deque<NodeId> queue{id};
  while (!queue.empty()) {
    NodeId current = queue.front();
    queue.pop_front();
    for (NodeId child : children(current)) {
      if (seen.insert(child).second) {
        out.push_back(child);
        queue.push_back(child);
      }
    }
  }
  return out;
}

bool Hierarchy::is_strict_ancestor(NodeId ancestor, NodeId id) const {
  auto all = ancestors(id);
  return std::find(all.begin(), all.end(), ancestor) != all.end();
}

std::vector<NodeId> Hierarchy::roots() const {
  std::vector<const Node*> found;
  for (const auto& [id, n] : nodes_) {
    if (n.kind != NodeKind::property && parents(id).empty()) {
      found.push_back(&n);
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Node* a, const Node* b) {
    return a->created_at < b->created_at;
  });
  std::vector<NodeId> out;
  for (const auto* n : found) out.push_back(n->id);
  return out;
}

std::vector<NodeId> Hierarchy::objects() const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : nodes_) {
    if (n.kind == NodeKind::object) out.push_back(id);
  }
  return out;
}

std::optional<Link> Hierarchy::incoming_property_link(NodeId property) const {
  for (const auto& link : links_) {
    if (link.type == LinkType::has_property && link.to == property) return link;
  }
  return std::nullopt;
}

std::vector<Link> Hierarchy::property_links(NodeId kind) const {
  std::vector<Link> out;
  for (const auto& link : links_) {
    if (link.type == LinkType::has_property && link.from == kind) {
      out.push_back(link);
    }
  }
  return out;
}

std::optional<Link> Hierarchy::link_created_at(TimeStamp t) const {
  for (const auto& link : links_) {
    if (link.created_at == t) return link;
  }
  return std::nullopt;
}

bool Hierarchy::would_loop(NodeId from, NodeId to) const {
  return from == to || is_strict_ancestor(from, to);
}

RedundancyAnalysis Hierarchy::redundancy_analysis(NodeId from,
                                                  NodeId to) const {
  RedundancyAnalysis result;
  if (is_strict_ancestor(to, from)) {
    result.kind = RedundancyAnalysis::Kind::new_link_redundant;
    return result;
  }
  // Once from -> to exists, every existing link from {from} u desc(from) to
  // {to} u anc(to) is a shortcut of a longer path through the new link.
  std::set<NodeId> lower{from};
  for (NodeId d : descendants(from)) lower.insert(d);
  std::set<NodeId> upper{to};
  for (NodeId a : ancestors(to)) upper.insert(a);
  for (const auto& link : links_) {
    if (is_structural(link) && lower.contains(link.from) &&
        upper.contains(link.to)) {
      result.redundant_links.push_back(link);
    }
  }
  if (!result.redundant_links.empty()) {
    result.kind = RedundancyAnalysis::Kind::existing_links_redundant;
  }
  return result;
}

std::vector<Link> Hierarchy::add_link(NodeId from, NodeId to, LinkType type,
                                      TimeStamp created_at) {
  const Node& source = node(from);
  const Node& target = node(to);
  bool well_typed = false;
  switch (type) {
    case LinkType::object_kind:
      well_typed = source.kind == NodeKind::object && target.kind == NodeKind::kind;
      break;
    case LinkType::subkind_kind:
      well_typed = source.kind == NodeKind::kind && target.kind == NodeKind::kind;
      break;
    case LinkType::has_property:
      well_typed =
          source.kind == NodeKind::kind && target.kind == NodeKind::property;
      break;
  }
  if (!well_typed) {
    throw Error(ErrorCode::node_conflict,
                std::string("link type ") + to_string(type) +
                    " does not fit " + source.stable_name() + " -> " +
                    target.stable_name());
  }

  if (type == LinkType::has_property) {
    if (incoming_property_link(to)) {
      throw Error(ErrorCode::node_conflict,
                  target.stable_name() + " already has a kind");
    }
    links_.push_back(Link{from, to, type, created_at});
    return {};
  }

  if (would_loop(from, to)) {
    throw Error(ErrorCode::loop, "link " + source.stable_name() + " -> " +
                                     target.stable_name() + " closes a loop");
  }
  auto analysis = redundancy_analysis(from, to);
  if (analysis.kind == RedundancyAnalysis::Kind::new_link_redundant) {
    throw Error(ErrorCode::redundant,
                "link " + source.stable_name() + " -> " +
                    target.stable_name() + " duplicates an existing path");
  }
  for (const auto& displaced : analysis.redundant_links) {
    std::erase(links_, displaced);
    dormant_.push_back(displaced);
  }
  links_.push_back(Link{from, to, type, created_at});
  return analysis.redundant_links;
}

void Hierarchy::erase_node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return;
  if (it->second.kind == NodeKind::object) objects_.erase(it->second.name);
  if (it->second.kind == NodeKind::kind) kinds_.erase(it->second.name);
  nodes_.erase(it);
}

std::vector<Link> Hierarchy::remove_links_created_at(TimeStamp t) {
  std::vector<Link> removed;
  for (const auto& link : links_) {
    if (link.created_at == t) removed.push_back(link);
  }
  std::erase_if(links_, [t](const Link& l) { return l.created_at == t; });
  std::erase_if(dormant_, [t](const Link& l) { return l.created_at == t; });
  for (const auto& link : removed) {
    if (link.type == LinkType::has_property) erase_node(link.to);
  }
  return removed;
}

std::vector<Link> Hierarchy::reinstate_dormant(
    const std::function<bool(TimeStamp)>& source_believed) {
  std::vector<Link> reinstated;
  std::erase_if(dormant_, [&](const Link& l) {
    return !source_believed(l.created_at) || !contains(l.from) ||
           !contains(l.to);
  });
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<Link> candidates = dormant_;
    std::sort(candidates.begin(), candidates.end(),
              [](const Link& a, const Link& b) {
                return a.created_at < b.created_at;
              });
    for (const auto& link : candidates) {
      if (would_loop(link.from, link.to)) continue;
      if (redundancy_analysis(link.from, link.to).kind ==
          RedundancyAnalysis::Kind::new_link_redundant) {
        continue;
      }
      std::erase(dormant_, link);
      add_link(link.from, link.to, link.type, link.created_at);
      reinstated.push_back(link);
      progress = true;
      break;
    }
  }
  return reinstated;
}

std::map<NodeId, std::vector<Address>> Hierarchy::compute_addresses() const {
  std::map<NodeId, std::vector<Address>> result;
  // Kahn's algorithm from the roots downward; each node is finalized once all
  // of its parents are.
  std::map<NodeId, std::size_t> pending_parents;
  std::deque<NodeId> ready;
  std::size_t structural_nodes = 0;
  for (const auto& [id, n] : nodes_) {
    if (n.kind == NodeKind::property) continue;
    ++structural_nodes;
    pending_parents[id] = parents(id).size();
  }
  auto root_ids = roots();
  for (std::size_t i = 0; i < root_ids.size(); ++i) {
    result[root_ids[i]].push_back(Address{static_cast<unsigned>(i + 1)});
    ready.push_back(root_ids[i]);
  }
  std::size_t finalized = 0;
  while (!ready.empty()) {
    NodeId current = ready.front();
    ready.pop_front();
    ++finalized;
    auto kids = children(current);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      auto& child_addresses = result[kids[i]];
      for (const auto& prefix : result[current]) {
        Address address = prefix;
        address.push_back(static_cast<unsigned>(i + 1));
        child_addresses.push_back(std::move(address));
      }
      if (--pending_parents[kids[i]] == 0) ready.push_back(kids[i]);
    }
  }
  if (finalized != structural_nodes) {
    throw Error(ErrorCode::cycle, "hierarchy contains a cycle");
  }
  for (auto& [id, addresses] : result) {
    std::sort(addresses.begin(), addresses.end());
  }
  return result;
}

NodeId Hierarchy::ranked_node(NodeId id) const {
  if (node(id).kind != NodeKind::property) return id;
  auto link = incoming_property_link(id);
  if (!link) {
    throw Error(ErrorCode::internal, "detached property node " +
                                         node(id).stable_name());
  }
  return link->from;
}

Specificity Hierarchy::more_specific(NodeId a, NodeId b) const {
  NodeId x = ranked_node(a);
  NodeId y = ranked_node(b);
  if (is_strict_ancestor(y, x)) return Specificity::yes;
  if (is_strict_ancestor(x, y)) return Specificity::no;
  return Specificity::incomparable;
}

std::vector<ApplicableProperty> Hierarchy::applicable_properties(
    NodeId object) const {
  node(object);
  struct Candidate {
    NodeId property;
    NodeId kind;
    const Node* node;
  };
  std::vector<Candidate> candidates;
  for (NodeId kind : ancestors(object)) {
    for (const auto& link : property_links(kind)) {
      candidates.push_back({link.to, kind, &node(link.to)});
    }
  }
  std::vector<ApplicableProperty> out;
  for (const auto& c1 : candidates) {
    bool blocked = std::any_of(
        candidates.begin(), candidates.end(), [&](const Candidate& c2) {
          return c2.node->name == c1.node->name &&
                 c2.node->sign != c1.node->sign &&
                 is_strict_ancestor(c1.kind, c2.kind);
        });
    if (!blocked) out.push_back({c1.property, c1.node->sign});
  }
  std::sort(out.begin(), out.end(),
            [](const ApplicableProperty& a, const ApplicableProperty& b) {
              return a.node < b.node;
            });
  return out;
}

std::string Hierarchy::to_dot() const {
  std::ostringstream os;
  os << "digraph hierarchy {\n  rankdir=BT;\n";
  for (const auto& [id, n] : nodes_) {
    os << "  " << n.stable_name() << " [";
    switch (n.kind) {
      case NodeKind::object:
        os << "shape=box, label=\"" << n.name << "\"";
        break;
      case NodeKind::kind:
        os << "shape=ellipse, label=\"" << n.name << "\"";
        break;
      case NodeKind::property:
        os << "shape=plaintext, label=\""
           << (n.sign == Sign::negative ? "~" : "") << n.name << "#"
           << n.occurrence << "\"";
        break;
    }
    os << "];\n";
  }
  for (const auto& link : links_) {
    os << "  " << node(link.from).stable_name() << " -> "
       << node(link.to).stable_name() << " [";
    switch (link.type) {
      case LinkType::object_kind: os << "style=solid"; break;
      case LinkType::subkind_kind: os << "style=bold"; break;
      case LinkType::has_property:
        os << "style=dashed, arrowhead=none, constraint=false";
        break;
    }
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

Hierarchy Hierarchy::restore(std::vector<Node> nodes, std::vector<Link> links,
                             std::vector<Link> dormant,
                             std::map<std::string, unsigned> counters,
                             std::uint32_t next_node_id) {
  Hierarchy h;
  for (auto& n : nodes) {
    if (n.kind == NodeKind::object) h.objects_.emplace(n.name, n.id);
    if (n.kind == NodeKind::kind) h.kinds_.emplace(n.name, n.id);
    NodeId id = n.id;
    h.nodes_.emplace(id, std::move(n));
  }
  h.links_ = std::move(links);
  h.dormant_ = std::move(dormant);
  h.counters_ = std::move(counters);
  h.next_id_ = next_node_id;
  return h;
}

}  // namespace drs
