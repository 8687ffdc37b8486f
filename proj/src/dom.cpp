#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "w2t/dom.hpp"
#include "w2t/utf8.hpp"

namespace w2t {

std::string_view DomNode::attribute(std::string_view name) const {
  for (const auto& [key, value] : attributes) {
    if (key == name) return value;
  }
  return {};
}

std::vector<std::string> DomNode::classes() const {
  std::vector<std::string> out;
  const std::string_view value = attribute("class");
  std::size_t pos = 0;
  while (pos < value.size()) {
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < value.size() && !std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos > start) out.emplace_back(value.substr(start, pos - start));
  }
  return out;
}

DomNode DomNode::element(std::string tag, std::size_t offset) {
  DomNode node;
  node.kind = NodeKind::kElement;
  node.tag = std::move(tag);
  node.source_offset = offset;
  return node;
}

DomNode DomNode::text_node(std::string text, std::size_t offset, std::size_t length) {
  DomNode node;
  node.kind = NodeKind::kText;
  node.text = std::move(text);
  node.source_offset = offset;
  node.source_length = length;
  return node;
}

const DomNode* DomTree::body() const {
  for (const DomNode& child : root.children) {
    if (child.is_element() && child.tag == "body") return &child;
  }
  return nullptr;
}

DomNode* DomTree::body() {
  return const_cast<DomNode*>(static_cast<const DomTree*>(this)->body());
}

bool is_non_content_tag(std::string_view tag) {
  static constexpr std::array<std::string_view, 20> kTags = {
      "head",  "script", "style", "noscript", "template", "svg",   "br",
      "hr",    "iframe", "img",   "input",    "checkbox", "embed", "object",
      "video", "audio",  "source", "track",   "meta",     "link"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

bool is_space_codepoint(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0x180E: case 0x200B: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_blank(std::string_view text) {
  for (std::size_t pos = 0; pos < text.size();) {
    if (!is_space_codepoint(utf8::next(text, pos))) return false;
  }
  return true;
}

namespace {

// Returns false if the node should be dropped from its parent.
bool prune(DomNode& node, bool keep_when_empty) {
  if (node.is_text()) return !is_blank(node.text);
  if (is_non_content_tag(node.tag)) return false;
  auto& kids = node.children;
  kids.erase(std::remove_if(kids.begin(), kids.end(),
                            [](DomNode& child) {
                              const bool structural = child.is_element() && child.tag == "body";
                              return !prune(child, structural);
                            }),
             kids.end());
  return keep_when_empty || !kids.empty();
}

void append_text(const DomNode& node, std::string& out) {
  if (node.is_text()) {
    out += node.text;
    return;
  }
  for (const DomNode& child : node.children) append_text(child, out);
}

}  // namespace

DomTree preprocess(DomTree tree) {
  prune(tree.root, true);
  return tree;
}

std::string collect_text(const DomNode& node) {
  std::string out;
  append_text(node, out);
  return out;
}

}  // namespace w2t
