#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "w2t/cdom.hpp"

namespace w2t {
namespace {

bool is_form_tag(std::string_view tag) {
  return tag == "form" || tag == "select" || tag == "option" || tag == "textarea" ||
         tag == "button" || tag == "fieldset" || tag == "label";
}

std::string class_segment(const DomNode& element) {
  std::string segment = element.tag;
  std::vector<std::string> classes = element.classes();
  std::sort(classes.begin(), classes.end());
  for (const std::string& c : classes) {
    segment.push_back('.');
    for (char ch : c) segment.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return segment;
}

}  // namespace

bool CdomNode::has_tag(std::string_view tag) const {
  return std::find(tag_chain.begin(), tag_chain.end(), tag) != tag_chain.end();
}

class CdomBuilder {
 public:
  explicit CdomBuilder(std::vector<CdomNode>& nodes) : nodes_(nodes) {}

  NodeId build(const DomNode& start, NodeId parent, int depth, const std::string& parent_path,
               bool parent_in_link) {
    const NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
    {
      CdomNode& node = nodes_.back();
      node.parent = parent;
      node.depth = depth;
      node.source_offset = start.source_offset;
      node.source_length = start.source_length;
    }

    std::vector<std::string> chain;
    std::string path = parent_path;
    bool in_link = parent_in_link;
    bool form = false;
    const DomNode* cur = &start;
    const std::string* leaf_text = nullptr;

    if (cur->is_text()) {
      chain.emplace_back("#text");
      leaf_text = &cur->text;
    } else {
      while (true) {
        chain.push_back(cur->tag);
        if (!path.empty()) path.push_back('>');
        path += class_segment(*cur);
        in_link = in_link || cur->tag == "a";
        form = form || is_form_tag(cur->tag);
        if (cur->children.size() != 1) break;
        const DomNode& only = cur->children.front();
        if (only.is_text()) {
          leaf_text = &only.text;
          break;
        }
        cur = &only;
      }
    }

    {
      CdomNode& node = nodes_[static_cast<std::size_t>(id)];
      node.tag_chain = std::move(chain);
      node.class_path = path;
      node.in_link = in_link;
      if (leaf_text != nullptr) node.text = *leaf_text;
    }

    if (leaf_text == nullptr) {
      std::vector<NodeId> children;
      children.reserve(cur->children.size());
      for (const DomNode& child : cur->children) {
        const NodeId child_id = build(child, id, depth + 1, path, in_link);
        children.push_back(child_id);
        form = form || nodes_[static_cast<std::size_t>(child_id)].has_form_element;
      }
      nodes_[static_cast<std::size_t>(id)].children = std::move(children);
    }
    nodes_[static_cast<std::size_t>(id)].has_form_element = form;
    return id;
  }

 private:
  std::vector<CdomNode>& nodes_;
};

CdomTree collapse(const DomTree& tree) {
  CdomTree out;
  out.markup_length_ = tree.markup_length;
  const DomNode* body = tree.body();
  DomNode empty_body = DomNode::element("body", tree.markup_length);
  if (body == nullptr) body = &empty_body;
  CdomBuilder builder(out.nodes_);
  builder.build(*body, kNoNode, 0, "", false);
  return out;
}

std::vector<NodeId> CdomTree::leaves() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

void CdomTree::check(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw std::invalid_argument("node does not belong to this tree");
  }
}

NodeId CdomTree::common_ancestor(NodeId a, NodeId b) const {
  check(a);
  check(b);
  while (nodes_[a].depth > nodes_[b].depth) a = nodes_[a].parent;
  while (nodes_[b].depth > nodes_[a].depth) b = nodes_[b].parent;
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

int CdomTree::tree_distance(NodeId a, NodeId b) const {
  const NodeId lca = common_ancestor(a, b);
  return nodes_[a].depth + nodes_[b].depth - 2 * nodes_[lca].depth;
}

std::vector<std::string_view> CdomTree::tags_between(NodeId ancestor, NodeId node) const {
  check(ancestor);
  check(node);
  std::vector<std::string_view> tags;
  for (NodeId cur = node; cur != ancestor && cur != kNoNode; cur = nodes_[cur].parent) {
    for (const std::string& tag : nodes_[cur].tag_chain) tags.push_back(tag);
  }
  return tags;
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = path.find('>', start);
    out.push_back(path.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

DomNode expand_node(const CdomTree& tree, NodeId id) {
  const CdomNode& node = tree.node(id);
  DomNode inner;
  if (node.is_leaf()) {
    inner = DomNode::text_node(node.text, node.source_offset, node.source_length);
  }
  std::vector<DomNode> children;
  for (NodeId child : node.children) children.push_back(expand_node(tree, child));

  const std::vector<std::string> segments = split_path(node.class_path);
  const bool bare_text = node.tag_chain.size() == 1 && node.tag_chain.front() == "#text";
  if (bare_text) return inner;

  DomNode result;
  bool have_result = false;
  for (std::size_t k = node.tag_chain.size(); k-- > 0;) {
    DomNode el = DomNode::element(node.tag_chain[k], node.source_offset);
    el.source_length = node.source_length;
    const std::size_t seg_index = segments.size() - (node.tag_chain.size() - k);
    const std::string& segment = segments[seg_index];
    const std::size_t dot = segment.find('.');
    if (dot != std::string::npos) {
      std::string cls = segment.substr(dot + 1);
      std::replace(cls.begin(), cls.end(), '.', ' ');
      el.attributes.emplace_back("class", cls);
    }
    if (!have_result) {
      if (node.is_leaf()) {
        el.children.push_back(std::move(inner));
      } else {
        el.children = std::move(children);
      }
    } else {
      el.children.push_back(std::move(result));
    }
    result = std::move(el);
    have_result = true;
  }
  return result;
}

}  // namespace

DomTree expand(const CdomTree& tree) {
  DomTree out;
  out.markup_length = tree.markup_length();
  out.root = DomNode::element("html", 0);
  out.root.source_length = tree.markup_length();
  if (tree.size() > 0) {
    DomNode body = expand_node(tree, tree.root());
    if (body.is_element() && body.tag == "body") {
      out.root.children.push_back(std::move(body));
    } else {
      DomNode wrapper = DomNode::element("body", 0);
      wrapper.children.push_back(std::move(body));
      out.root.children.push_back(std::move(wrapper));
    }
  }
  return out;
}

}  // namespace w2t
