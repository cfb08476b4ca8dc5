#pragma once

// Multiple-inheritance hierarchy: object, kind and property nodes joined by
// object-kind, subkind-kind and has-property links. The object/kind part is
// kept acyclic and free of redundant (shortcut) links.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drs/lang.hpp"

namespace drs {

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

enum class NodeKind : std::uint8_t { object, kind, property };
enum class Sign : std::uint8_t { positive, negative };
enum class LinkType : std::uint8_t { object_kind, subkind_kind, has_property };

const char* to_string(NodeKind kind) noexcept;
const char* to_string(Sign sign) noexcept;
const char* to_string(LinkType type) noexcept;

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::kind;
  // Constant for object nodes, predicate name otherwise.
  std::string name;
  unsigned occurrence = 0;  // property nodes only
  Sign sign = Sign::positive;  // property nodes only
  TimeStamp created_at = 0;

  // obj_<constant>, kind_<name> or prop_<name>_<occ>
  std::string stable_name() const;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Link {
  NodeId from;
  NodeId to;
  LinkType type = LinkType::subkind_kind;
  // Time stamp of the belief-set entry whose formula the link represents.
  TimeStamp created_at = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

using Address = std::vector<unsigned>;

struct NodeDescriptor {
  NodeKind kind = NodeKind::kind;
  std::string name;
  Sign sign = Sign::positive;

  static NodeDescriptor object(std::string constant) {
    return {NodeKind::object, std::move(constant), Sign::positive};
  }
  static NodeDescriptor kind_node(std::string predicate) {
    return {NodeKind::kind, std::move(predicate), Sign::positive};
  }
  static NodeDescriptor property(std::string predicate, Sign sign) {
    return {NodeKind::property, std::move(predicate), sign};
  }
};

enum class Specificity : std::uint8_t { yes, no, incomparable };

struct RedundancyAnalysis {
  enum class Kind : std::uint8_t {
    none,
    new_link_redundant,
    existing_links_redundant
  };
  Kind kind = Kind::none;
  std::vector<Link> redundant_links;
};

struct ApplicableProperty {
  NodeId node;
  Sign sign = Sign::positive;
  friend bool operator==(const ApplicableProperty&,
                         const ApplicableProperty&) = default;
};

class Hierarchy {
 public:
  // Object and kind descriptors are idempotent. Property descriptors always
  // create a fresh node carrying the next occurrence index for that name.
  NodeId ensure_node(const NodeDescriptor& spec, TimeStamp created_at);

  // Throws Error(node_conflict) if the descriptor's name is already used by
  // a node of the other predicate sort.
  void check_descriptor(const NodeDescriptor& spec) const;

  unsigned next_occurrence(const std::string& property) const;

  std::optional<NodeId> find_object(std::string_view constant) const;
  std::optional<NodeId> find_kind(std::string_view predicate) const;
  bool contains(NodeId id) const { return nodes_.contains(id); }
  const Node& node(NodeId id) const;

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  // Links displaced by a more specific link; candidates for reinstatement.
  const std::vector<Link>& dormant_links() const { return dormant_; }
  const std::map<std::string, unsigned>& occurrence_counters() const {
    return counters_;
  }
  std::uint32_t next_node_id() const { return next_id_; }

  // Object/kind structure. Parents and children are ordered by link time.
  std::vector<NodeId> parents(NodeId id) const;
  std::vector<NodeId> children(NodeId id) const;
  std::vector<NodeId> ancestors(NodeId id) const;
  std::vector<NodeId> descendants(NodeId id) const;
  bool is_strict_ancestor(NodeId ancestor, NodeId id) const;
  std::vector<NodeId> roots() const;
  std::vector<NodeId> objects() const;

  std::optional<Link> incoming_property_link(NodeId property) const;
  std::vector<Link> property_links(NodeId kind) const;
  std::optional<Link> link_created_at(TimeStamp t) const;

  bool would_loop(NodeId from, NodeId to) const;
  RedundancyAnalysis redundancy_analysis(NodeId from, NodeId to) const;

  // Adds a link, displacing links made redundant by it. Returns the
  // displaced links. Throws Error(loop) or Error(redundant).
  std::vector<Link> add_link(NodeId from, NodeId to, LinkType type,
                             TimeStamp created_at);

  // Drops every active or dormant link created at `t`. A property node whose
  // link goes is dropped too. Returns the active links removed.
  std::vector<Link> remove_links_created_at(TimeStamp t);

  // Re-adds dormant links whose source entry is still believed and which are
  // no longer redundant. Dormant links with retracted sources are dropped.
  std::vector<Link> reinstate_dormant(
      const std::function<bool(TimeStamp)>& source_believed);

  std::map<NodeId, std::vector<Address>> compute_addresses() const;

  // Property nodes are compared through the kind node they hang off.
  Specificity more_specific(NodeId a, NodeId b) const;

  std::vector<ApplicableProperty> applicable_properties(NodeId object) const;

  std::string to_dot() const;

  static Hierarchy restore(std::vector<Node> nodes, std::vector<Link> links,
                           std::vector<Link> dormant,
                           std::map<std::string, unsigned> counters,
                           std::uint32_t next_node_id);

  friend bool operator==(const Hierarchy&, const Hierarchy&) = default;

 private:
  NodeId ranked_node(NodeId id) const;
  void erase_node(NodeId id);

  std::map<NodeId, Node> nodes_;
  std::vector<Link> links_;
  std::vector<Link> dormant_;
  std::map<std::string, unsigned> counters_;
  std::uint32_t next_id_ = 1;
  std::map<std::string, NodeId, std::less<>> objects_;
  std::map<std::string, NodeId, std::less<>> kinds_;
};

}  // namespace drs
