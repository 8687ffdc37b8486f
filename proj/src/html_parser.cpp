// Lenient HTML tokenizer and tree builder.
//
// The builder implements the subset of HTML5 tree construction that matters
// for text segmentation: implied end tags for p/li/dt/dd/tr/td/option,
// void elements, raw-text elements and head/body separation. Anything it
// does not understand is dropped or kept as text, never rejected.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "w2t/dom.hpp"
#include "w2t/utf8.hpp"

namespace w2t {
namespace {

constexpr std::size_t kMaxDepth = 512;

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_html_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool contains(std::initializer_list<std::string_view> set, std::string_view tag) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

bool is_void(std::string_view tag) {
  return contains({"area", "base", "br", "col", "embed", "hr", "img", "input", "keygen", "link",
                   "meta", "param", "source", "track", "wbr", "basefont", "bgsound", "frame",
                   "command"},
                  tag);
}

bool is_raw_text(std::string_view tag) {
  return contains({"script", "style", "xmp", "iframe", "noembed", "noframes", "plaintext"}, tag);
}

bool is_rcdata(std::string_view tag) { return tag == "title" || tag == "textarea"; }

bool is_head_content(std::string_view tag) {
  return contains({"title", "meta", "link", "style", "script", "base", "basefont", "bgsound"},
                  tag);
}

// Start tags that close an open <p>.
bool closes_paragraph(std::string_view tag) {
  return contains({"address", "article", "aside", "blockquote", "center", "details", "dialog",
                   "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer", "form",
                   "h1", "h2", "h3", "h4", "h5", "h6", "header", "hgroup", "hr", "li",
                   "main", "menu", "nav", "ol", "p", "pre", "section", "summary", "table",
                   "ul", "dd", "dt", "listing"},
                  tag);
}

bool is_scope_boundary(std::string_view tag) {
  return contains({"html", "body", "table", "td", "th", "caption", "marquee", "object",
                   "applet", "button", "template"},
                  tag);
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},
      {"apos", U'\''},    {"nbsp", 0xA0},     {"copy", 0xA9},     {"reg", 0xAE},
      {"trade", 0x2122},  {"mdash", 0x2014},  {"ndash", 0x2013},  {"hellip", 0x2026},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
      {"sbquo", 0x201A},  {"bdquo", 0x201E},  {"laquo", 0xAB},    {"raquo", 0xBB},
      {"middot", 0xB7},   {"bull", 0x2022},   {"euro", 0x20AC},   {"pound", 0xA3},
      {"yen", 0xA5},      {"cent", 0xA2},     {"sect", 0xA7},     {"deg", 0xB0},
      {"plusmn", 0xB1},   {"times", 0xD7},    {"divide", 0xF7},   {"para", 0xB6},
      {"frac12", 0xBD},   {"frac14", 0xBC},   {"frac34", 0xBE},   {"iexcl", 0xA1},
      {"iquest", 0xBF},   {"acute", 0xB4},    {"uml", 0xA8},      {"shy", 0xAD},
      {"ensp", 0x2002},   {"emsp", 0x2003},   {"thinsp", 0x2009}, {"zwnj", 0x200C},
      {"zwj", 0x200D},    {"larr", 0x2190},   {"rarr", 0x2192},   {"uarr", 0x2191},
      {"darr", 0x2193},   {"dagger", 0x2020}, {"Dagger", 0x2021}, {"permil", 0x2030},
      {"prime", 0x2032},  {"Prime", 0x2033},  {"lsaquo", 0x2039}, {"rsaquo", 0x203A},
      {"Agrave", 0xC0},   {"Aacute", 0xC1},   {"Acirc", 0xC2},    {"Atilde", 0xC3},
      {"Auml", 0xC4},     {"Aring", 0xC5},    {"AElig", 0xC6},    {"Ccedil", 0xC7},
      {"Egrave", 0xC8},   {"Eacute", 0xC9},   {"Ecirc", 0xCA},    {"Euml", 0xCB},
      {"Igrave", 0xCC},   {"Iacute", 0xCD},   {"Icirc", 0xCE},    {"Iuml", 0xCF},
      {"Ntilde", 0xD1},   {"Ograve", 0xD2},   {"Oacute", 0xD3},   {"Ocirc", 0xD4},
      {"Otilde", 0xD5},   {"Ouml", 0xD6},     {"Oslash", 0xD8},   {"Ugrave", 0xD9},
      {"Uacute", 0xDA},   {"Ucirc", 0xDB},    {"Uuml", 0xDC},     {"Yacute", 0xDD},
      {"szlig", 0xDF},    {"agrave", 0xE0},   {"aacute", 0xE1},   {"acirc", 0xE2},
      {"atilde", 0xE3},   {"auml", 0xE4},     {"aring", 0xE5},    {"aelig", 0xE6},
      {"ccedil", 0xE7},   {"egrave", 0xE8},   {"eacute", 0xE9},   {"ecirc", 0xEA},
      {"euml", 0xEB},     {"igrave", 0xEC},   {"iacute", 0xED},   {"icirc", 0xEE},
      {"iuml", 0xEF},     {"ntilde", 0xF1},   {"ograve", 0xF2},   {"oacute", 0xF3},
      {"ocirc", 0xF4},    {"otilde", 0xF5},   {"ouml", 0xF6},     {"oslash", 0xF8},
      {"ugrave", 0xF9},   {"uacute", 0xFA},   {"ucirc", 0xFB},    {"uuml", 0xFC},
      {"yacute", 0xFD},   {"yuml", 0xFF},
  };
  return table;
}

// Entities that browsers accept without a trailing semicolon.
bool legacy_entity(std::string_view name) {
  return contains({"amp", "lt", "gt", "quot", "nbsp", "copy", "reg"}, name);
}

// Decodes character references and sanitizes UTF-8.
std::string decode_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t pos = 0;
  while (pos < raw.size()) {
    if (raw[pos] != '&') {
      utf8::append(out, utf8::next(raw, pos));
      continue;
    }
    std::size_t p = pos + 1;
    if (p < raw.size() && raw[p] == '#') {
      ++p;
      int base = 10;
      if (p < raw.size() && (raw[p] == 'x' || raw[p] == 'X')) {
        base = 16;
        ++p;
      }
      std::size_t digits_end = p;
      while (digits_end < raw.size() &&
             (base == 16 ? std::isxdigit(static_cast<unsigned char>(raw[digits_end]))
                         : std::isdigit(static_cast<unsigned char>(raw[digits_end])))) {
        ++digits_end;
      }
      if (digits_end > p && digits_end - p <= 8) {
        unsigned long value = 0;
        std::from_chars(raw.data() + p, raw.data() + digits_end, value, base);
        char32_t cp = static_cast<char32_t>(value);
        if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = utf8::kReplacement;
        utf8::append(out, cp);
        pos = digits_end;
        if (pos < raw.size() && raw[pos] == ';') ++pos;
        continue;
      }
    } else {
      std::size_t name_end = p;
      while (name_end < raw.size() && name_end - p < 10 &&
             std::isalnum(static_cast<unsigned char>(raw[name_end]))) {
        ++name_end;
      }
      const std::string_view name = raw.substr(p, name_end - p);
      const auto& table = named_entities();
      if (auto it = table.find(name); it != table.end()) {
        const bool terminated = name_end < raw.size() && raw[name_end] == ';';
        if (terminated || legacy_entity(name)) {
          utf8::append(out, it->second);
          pos = terminated ? name_end + 1 : name_end;
          continue;
        }
      }
    }
    out.push_back('&');
    ++pos;
  }
  return out;
}

struct Token {
  enum Type { kStart, kEnd, kText } type;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  bool self_closing = false;
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view input) : in_(input) {}

  // Returns false at end of input.
  bool next(Token& tok) {
    while (pos_ < in_.size()) {
      if (!raw_end_tag_.empty()) return raw_text(tok);
      if (in_[pos_] == '<') {
        if (markup(tok)) return true;
        continue;
      }
      return text(tok);
    }
    return false;
  }

 private:
  bool text(Token& tok) {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < in_.size()) {
      p = in_.find('<', p);
      if (p == std::string_view::npos) {
        p = in_.size();
        break;
      }
      if (starts_markup(p)) break;
      ++p;
    }
    pos_ = p;
    tok = Token{Token::kText, {}, {}, decode_text(in_.substr(start, p - start)), false, start, p};
    return true;
  }

  bool starts_markup(std::size_t p) const {
    if (p + 1 >= in_.size()) return false;
    const char c = in_[p + 1];
    if (is_ascii_alpha(c) || c == '!' || c == '?') return true;
    return c == '/' && p + 2 < in_.size() && is_ascii_alpha(in_[p + 2]);
  }

  // Content of <script>, <style>, <title> ... up to the matching end tag.
  bool raw_text(Token& tok) {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    std::size_t stop = in_.size();
    while ((p = in_.find("</", p)) != std::string_view::npos) {
      const std::size_t name_end = p + 2 + raw_end_tag_.size();
      if (name_end <= in_.size() && lower(in_.substr(p + 2, raw_end_tag_.size())) == raw_end_tag_ &&
          (name_end == in_.size() || !std::isalnum(static_cast<unsigned char>(in_[name_end])))) {
        stop = p;
        break;
      }
      p += 2;
    }
    const bool decode = rcdata_;
    raw_end_tag_.clear();
    rcdata_ = false;
    pos_ = stop;
    if (stop == start) return next(tok);
    const std::string_view body = in_.substr(start, stop - start);
    tok = Token{Token::kText, {}, {}, decode ? decode_text(body) : utf8::sanitize(body), false,
                start, stop};
    return true;
  }

  // Handles '<' at pos_. Returns true if a token was produced.
  bool markup(Token& tok) {
    const std::size_t start = pos_;
    if (in_.compare(pos_, 4, "<!--") == 0) {
      const std::size_t close = in_.find("-->", pos_ + 4);
      pos_ = close == std::string_view::npos ? in_.size() : close + 3;
      return false;
    }
    if (in_.compare(pos_, 9, "<![CDATA[") == 0) {
      const std::size_t close = in_.find("]]>", pos_ + 9);
      pos_ = close == std::string_view::npos ? in_.size() : close + 3;
      return false;
    }
    if (pos_ + 1 < in_.size() && (in_[pos_ + 1] == '!' || in_[pos_ + 1] == '?')) {
      const std::size_t close = in_.find('>', pos_);
      pos_ = close == std::string_view::npos ? in_.size() : close + 1;
      return false;
    }
    if (!starts_markup(pos_)) return text(tok);

    const bool is_end = in_[pos_ + 1] == '/';
    std::size_t p = pos_ + (is_end ? 2 : 1);
    const std::size_t name_start = p;
    while (p < in_.size() && !is_html_space(in_[p]) && in_[p] != '/' && in_[p] != '>') ++p;
    tok = Token{};
    tok.type = is_end ? Token::kEnd : Token::kStart;
    tok.name = lower(in_.substr(name_start, p - name_start));
    tok.begin = start;

    // Attributes.
    while (p < in_.size() && in_[p] != '>') {
      if (is_html_space(in_[p])) {
        ++p;
        continue;
      }
      if (in_[p] == '/') {
        if (p + 1 < in_.size() && in_[p + 1] == '>') tok.self_closing = true;
        ++p;
        continue;
      }
      const std::size_t attr_start = p;
      while (p < in_.size() && !is_html_space(in_[p]) && in_[p] != '=' && in_[p] != '>' &&
             !(in_[p] == '/' && p + 1 < in_.size() && in_[p + 1] == '>')) {
        ++p;
      }
      std::string attr_name = lower(in_.substr(attr_start, p - attr_start));
      while (p < in_.size() && is_html_space(in_[p])) ++p;
      std::string value;
      if (p < in_.size() && in_[p] == '=') {
        ++p;
        while (p < in_.size() && is_html_space(in_[p])) ++p;
        if (p < in_.size() && (in_[p] == '"' || in_[p] == '\'')) {
          const char quote = in_[p++];
          const std::size_t close = in_.find(quote, p);
          const std::size_t value_end = close == std::string_view::npos ? in_.size() : close;
          value = decode_text(in_.substr(p, value_end - p));
          p = close == std::string_view::npos ? in_.size() : close + 1;
        } else {
          const std::size_t value_start = p;
          while (p < in_.size() && !is_html_space(in_[p]) && in_[p] != '>') ++p;
          value = decode_text(in_.substr(value_start, p - value_start));
        }
      }
      if (!attr_name.empty() && !is_end) tok.attributes.emplace_back(std::move(attr_name), std::move(value));
    }
    pos_ = p < in_.size() ? p + 1 : in_.size();
    tok.end = pos_;

    if (tok.type == Token::kStart && !tok.self_closing) {
      if (is_raw_text(tok.name)) {
        raw_end_tag_ = tok.name;
      } else if (is_rcdata(tok.name)) {
        raw_end_tag_ = tok.name;
        rcdata_ = true;
      }
    }
    return true;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::string raw_end_tag_;
  bool rcdata_ = false;
};

class TreeBuilder {
 public:
  explicit TreeBuilder(std::size_t markup_length) {
    tree_.markup_length = markup_length;
    tree_.root = DomNode::element("html", 0);
    tree_.root.source_length = markup_length;
    tree_.root.children.push_back(DomNode::element("head", 0));
    tree_.root.children.push_back(DomNode::element("body", markup_length));
  }

  void feed(Token& tok) {
    switch (tok.type) {
      case Token::kText:
        on_text(tok);
        break;
      case Token::kStart:
        on_start(tok);
        break;
      case Token::kEnd:
        on_end(tok);
        break;
    }
  }

  DomTree finish() {
    const std::size_t end = tree_.markup_length;
    while (!stack_.empty()) close_top(end);
    DomNode* body = tree_.body();
    if (body_started_) {
      body->source_length = end - body->source_offset;
    } else {
      body->source_offset = end;
      body->source_length = 0;
    }
    DomNode& head = tree_.root.children.front();
    head.source_length = head_end_ > head.source_offset ? head_end_ - head.source_offset : 0;
    return std::move(tree_);
  }

 private:
  DomNode& head() { return tree_.root.children.front(); }

  void enter_body(std::size_t offset) {
    if (body_started_) return;
    body_started_ = true;
    head_end_ = std::max(head_end_, offset);
    if (!explicit_body_) tree_.body()->source_offset = offset;
  }

  DomNode& current() { return stack_.empty() ? *tree_.body() : *stack_.back(); }

  void on_text(const Token& tok) {
    if (!body_started_) {
      if (in_head_raw_ != nullptr) {
        in_head_raw_->children.push_back(DomNode::text_node(tok.text, tok.begin, tok.end - tok.begin));
        return;
      }
      if (is_blank(tok.text)) return;
      enter_body(tok.begin);
    }
    current().children.push_back(DomNode::text_node(tok.text, tok.begin, tok.end - tok.begin));
  }

  void on_start(Token& tok) {
    const std::string& name = tok.name;
    if (name == "html") {
      merge_attributes(tree_.root, tok);
      return;
    }
    if (name == "head") {
      if (!body_started_) head().source_offset = tok.begin;
      return;
    }
    if (name == "body") {
      DomNode* body = tree_.body();
      if (!body_started_) {
        explicit_body_ = true;
        body->source_offset = tok.begin;
        enter_body(tok.begin);
      }
      merge_attributes(*body, tok);
      return;
    }
    if (!body_started_ && is_head_content(name)) {
      in_head_raw_ = nullptr;
      DomNode el = DomNode::element(name, tok.begin);
      el.attributes = std::move(tok.attributes);
      el.source_length = tok.end - tok.begin;
      head().children.push_back(std::move(el));
      head_end_ = tok.end;
      if (!is_void(name) && !tok.self_closing) in_head_raw_ = &head().children.back();
      return;
    }
    in_head_raw_ = nullptr;
    enter_body(tok.begin);

    apply_implied_end_tags(name, tok.begin);

    DomNode el = DomNode::element(name, tok.begin);
    el.attributes = std::move(tok.attributes);
    if (is_void(name) || tok.self_closing || stack_.size() >= kMaxDepth) {
      el.source_length = tok.end - tok.begin;
      current().children.push_back(std::move(el));
      return;
    }
    current().children.push_back(std::move(el));
    stack_.push_back(&current().children.back());
  }

  void on_end(const Token& tok) {
    const std::string& name = tok.name;
    if (in_head_raw_ != nullptr && in_head_raw_->tag == name) {
      in_head_raw_->source_length = tok.end - in_head_raw_->source_offset;
      head_end_ = tok.end;
      in_head_raw_ = nullptr;
      return;
    }
    if (name == "html" || name == "body" || name == "head") {
      if (name == "head") head_end_ = std::max(head_end_, tok.end);
      return;
    }
    if (!body_started_) return;
    const bool table_part = name == "td" || name == "th" || name == "tr" || name == "tbody" ||
                            name == "thead" || name == "tfoot";
    for (std::size_t i = stack_.size(); i-- > 0;) {
      const std::string& tag = stack_[i]->tag;
      if (tag == name) {
        while (stack_.size() > i + 1) close_top(tok.begin);
        close_top(tok.end);
        return;
      }
      if (table_part ? tag == "table" : is_scope_boundary(tag)) return;
    }
  }

  void apply_implied_end_tags(std::string_view name, std::size_t at) {
    if (closes_paragraph(name)) close_in_scope("p", at, {});
    if (name == "li") close_in_scope("li", at, {"ul", "ol"});
    if (name == "dt" || name == "dd") {
      close_in_scope("dt", at, {"dl"});
      close_in_scope("dd", at, {"dl"});
    }
    if (name == "option") close_if_top("option", at);
    if (name == "tr") {
      close_in_scope("td", at, {"tr", "tbody", "thead", "tfoot"});
      close_in_scope("th", at, {"tr", "tbody", "thead", "tfoot"});
      close_in_scope("tr", at, {"tbody", "thead", "tfoot"});
    }
    if (name == "td" || name == "th") {
      close_in_scope("td", at, {"tr"});
      close_in_scope("th", at, {"tr"});
    }
    if (name == "tbody" || name == "thead" || name == "tfoot") {
      close_in_scope("tr", at, {});
      close_in_scope("tbody", at, {});
      close_in_scope("thead", at, {});
      close_in_scope("tfoot", at, {});
    }
    if (name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6' && !stack_.empty()) {
      const std::string& top = stack_.back()->tag;
      if (top.size() == 2 && top[0] == 'h' && top[1] >= '1' && top[1] <= '6') close_top(at);
    }
    if (name == "a") close_in_scope("a", at, {});
  }

  // Pops through the nearest open `tag` unless a scope boundary or one of
  // `extra_boundaries` is reached first.
  void close_in_scope(std::string_view tag, std::size_t at,
                      std::initializer_list<std::string_view> extra_boundaries) {
    for (std::size_t i = stack_.size(); i-- > 0;) {
      const std::string& t = stack_[i]->tag;
      if (t == tag) {
        while (stack_.size() > i) close_top(at);
        return;
      }
      if (is_scope_boundary(t) || contains(extra_boundaries, t)) return;
    }
  }

  void close_if_top(std::string_view tag, std::size_t at) {
    if (!stack_.empty() && stack_.back()->tag == tag) close_top(at);
  }

  void close_top(std::size_t end) {
    DomNode* node = stack_.back();
    node->source_length = end > node->source_offset ? end - node->source_offset : 0;
    stack_.pop_back();
  }

  static void merge_attributes(DomNode& node, Token& tok) {
    for (auto& attr : tok.attributes) {
      const bool present = std::any_of(node.attributes.begin(), node.attributes.end(),
                                       [&](const auto& a) { return a.first == attr.first; });
      if (!present) node.attributes.push_back(std::move(attr));
    }
  }

  DomTree tree_;
  std::vector<DomNode*> stack_;
  DomNode* in_head_raw_ = nullptr;
  bool body_started_ = false;
  bool explicit_body_ = false;
  std::size_t head_end_ = 0;
};

}  // namespace

DomTree parse_html(std::string_view markup) {
  if (!markup.empty()) {
    const auto nuls = static_cast<std::size_t>(std::count(markup.begin(), markup.end(), '\0'));
    if (nuls * 10 > markup.size()) throw ParseError("input looks like binary data, not text");
  }
  Tokenizer tokenizer(markup);
  TreeBuilder builder(markup.size());
  Token tok;
  while (tokenizer.next(tok)) builder.feed(tok);
  return builder.finish();
}

}  // namespace w2t
