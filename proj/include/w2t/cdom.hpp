#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "w2t/dom.hpp"

namespace w2t {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

// A node of the collapsed DOM. Chains of single-child elements are merged
// into one node; tag_chain lists the merged tags outermost first.
struct CdomNode {
  std::vector<std::string> tag_chain;
  std::string class_path;  // "body>div.main>p" from the root down to this node
  std::vector<NodeId> children;
  NodeId parent = kNoNode;
  int depth = 0;
  std::string text;  // leaves only
  bool in_link = false;        // some element on the path from the root is an <a>
  bool has_form_element = false;  // the chain or a descendant is a form control
  std::size_t source_offset = 0;
  std::size_t source_length = 0;

  bool is_leaf() const { return !text.empty(); }
  bool has_tag(std::string_view tag) const;
};

// Collapsed DOM stored as an arena. Node 0 is the root (the <body> chain);
// nodes are numbered in pre-order so leaves appear in document order.
class CdomTree {
 public:
  CdomTree() = default;

  const CdomNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<CdomNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return 0; }
  std::size_t markup_length() const { return markup_length_; }

  // Leaves in document order.
  std::vector<NodeId> leaves() const;

  // Lowest common ancestor. Throws std::invalid_argument for ids outside
  // this tree.
  NodeId common_ancestor(NodeId a, NodeId b) const;

  // Hops from a and from b to their lowest common ancestor, summed.
  int tree_distance(NodeId a, NodeId b) const;

  // All tags on the path strictly below `ancestor` down to and including
  // `node`'s own chain.
  std::vector<std::string_view> tags_between(NodeId ancestor, NodeId node) const;

 private:
  friend CdomTree collapse(const DomTree& tree);
  void check(NodeId id) const;

  std::vector<CdomNode> nodes_;
  std::size_t markup_length_ = 0;
};

// Builds the collapsed DOM from a preprocessed tree, starting at <body>.
CdomTree collapse(const DomTree& tree);

// Expands each merged chain back into nested elements. collapse(expand(t))
// reproduces t's structure.
DomTree expand(const CdomTree& tree);

}  // namespace w2t
