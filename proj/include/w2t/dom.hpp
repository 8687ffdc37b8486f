#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace w2t {

// Thrown when the input cannot be treated as text at all.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { kElement, kText };

// A node of the parsed document. Elements own their children by value.
// Offsets are byte positions in the raw markup the tree was parsed from.
struct DomNode {
  NodeKind kind = NodeKind::kElement;
  std::string tag;  // lowercase; empty for text nodes
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // decoded UTF-8; text nodes only
  std::vector<DomNode> children;
  std::size_t source_offset = 0;
  std::size_t source_length = 0;

  bool is_text() const { return kind == NodeKind::kText; }
  bool is_element() const { return kind == NodeKind::kElement; }

  // Returns the attribute value or an empty view.
  std::string_view attribute(std::string_view name) const;

  // Whitespace-separated tokens of the class attribute.
  std::vector<std::string> classes() const;

  static DomNode element(std::string tag, std::size_t offset = 0);
  static DomNode text_node(std::string text, std::size_t offset = 0, std::size_t length = 0);
};

// A parsed document: the root is always an <html> element whose children
// are <head> (possibly removed later) and <body>.
struct DomTree {
  DomNode root;
  std::size_t markup_length = 0;

  // The <body> element. Always present in trees built by parse_html.
  const DomNode* body() const;
  DomNode* body();
};

// Lenient HTML parser. Malformed markup never fails; it yields a
// best-effort tree. Entities are decoded and comments, doctypes and CDATA
// sections are dropped.
DomTree parse_html(std::string_view markup);

// Tags that never contribute extractable text.
bool is_non_content_tag(std::string_view tag);

// Removes whitespace-only text, non-content elements and elements left
// without children, until nothing changes. <html> and <body> are kept.
DomTree preprocess(DomTree tree);

// Unicode whitespace or NBSP.
bool is_space_codepoint(char32_t c);
bool is_blank(std::string_view utf8);

// Concatenation of all text nodes in document order.
std::string collect_text(const DomNode& node);

}  // namespace w2t
