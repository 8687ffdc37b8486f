#include <gtest/gtest.h>

#include <string>

#include "w2t/dom.hpp"

using namespace w2t;

namespace {

// Compact structural dump: tag(children) and "text" for text nodes.
std::string dump(const DomNode& n) {
  if (n.is_text()) return "\"" + n.text + "\"";
  std::string out = n.tag;
  if (!n.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      out += dump(n.children[i]);
    }
    out += ')';
  }
  return out;
}

std::string body_of(std::string_view html, bool clean = false) {
  DomTree tree = parse_html(html);
  if (clean) tree = preprocess(std::move(tree));
  return dump(*tree.body());
}

}  // namespace

TEST(Parse, MinimalDocument) { EXPECT_EQ(body_of("<p>Hi</p>"), "body(p(\"Hi\"))"); }

TEST(Parse, AlwaysHasHtmlHeadBody) {
  const DomTree tree = parse_html("");
  EXPECT_EQ(tree.root.tag, "html");
  ASSERT_NE(tree.body(), nullptr);
  EXPECT_TRUE(tree.body()->children.empty());
}

TEST(Parse, ListOfLinks) {
  EXPECT_EQ(body_of("<ul><li><a href=\"#\">Item 1</a></li><li><a href=\"#\">Item 2</a></li></ul>"),
            "body(ul(li(a(\"Item 1\")),li(a(\"Item 2\"))))");
}

// An HTML5 parser closes an open <p> when another <p> starts, giving
// body(p("a"),p("b")).
TEST(Parse, UnclosedParagraphsBecomeSiblings) {
  EXPECT_EQ(body_of("<p>a<p>b"), "body(p(\"a\"),p(\"b\"))");
}

TEST(Parse, ImpliedEndTags) {
  EXPECT_EQ(body_of("<ul><li>a<li>b</ul>"), "body(ul(li(\"a\"),li(\"b\")))");
  EXPECT_EQ(body_of("<table><tr><td>1<td>2<tr><td>3</table>"),
            "body(table(tr(td(\"1\"),td(\"2\")),tr(td(\"3\"))))");
  EXPECT_EQ(body_of("<p>x<div>y</div>"), "body(p(\"x\"),div(\"y\"))");
  EXPECT_EQ(body_of("<dl><dt>a<dd>b<dt>c</dl>"), "body(dl(dt(\"a\"),dd(\"b\"),dt(\"c\")))");
}

TEST(Parse, StrayEndTagsAreIgnored) {
  EXPECT_EQ(body_of("</span><p>a</b></p></div>"), "body(p(\"a\"))");
}

TEST(Parse, EndTagClosesIntermediateElements) {
  EXPECT_EQ(body_of("<div><span><b>x</div>y"), "body(div(span(b(\"x\"))),\"y\")");
}

TEST(Parse, VoidElementsHaveNoChildren) {
  EXPECT_EQ(body_of("<p>a<br>b<img src=x>c</p>"), "body(p(\"a\",br,\"b\",img,\"c\"))");
}

TEST(Parse, CommentsDoctypeAndCdataDropped) {
  EXPECT_EQ(body_of("<!DOCTYPE html><!-- c --><p>a<!-- <p>no</p> -->b<![CDATA[z]]></p>"),
            "body(p(\"a\",\"b\"))");
}

TEST(Parse, RawTextElementsKeepMarkupAsText) {
  const DomTree tree = parse_html("<body><script>if (a < b) { x = '</p>'; }</script><p>t</p>");
  const DomNode& script = tree.body()->children.at(0);
  EXPECT_EQ(script.tag, "script");
  ASSERT_EQ(script.children.size(), 1u);
  EXPECT_EQ(script.children[0].text, "if (a < b) { x = '</p>'; }");
}

TEST(Parse, EntitiesDecoded) {
  EXPECT_EQ(body_of("<p>a &amp; b &lt;c&gt; &#169; &#x41; &copy &nbsp;x &bogus;</p>"),
            "body(p(\"a & b <c> \xc2\xa9 A \xc2\xa9 \xc2\xa0x &bogus;\"))");
}

TEST(Parse, AttributesAndClasses) {
  const DomTree tree = parse_html("<div CLASS=\"b  a\" id=main data-x='1'>t</div>");
  const DomNode& div = tree.body()->children.at(0);
  EXPECT_EQ(div.tag, "div");
  EXPECT_EQ(div.attribute("id"), "main");
  EXPECT_EQ(div.attribute("data-x"), "1");
  EXPECT_EQ(div.attribute("missing"), "");
  EXPECT_EQ(div.classes(), (std::vector<std::string>{"b", "a"}));
}

TEST(Parse, HeadContentGoesToHead) {
  const DomTree tree = parse_html("<title>t</title><meta charset=utf-8><p>x</p>");
  ASSERT_GE(tree.root.children.size(), 2u);
  EXPECT_EQ(tree.root.children[0].tag, "head");
  EXPECT_EQ(dump(*tree.body()), "body(p(\"x\"))");
}

TEST(Parse, SourceOffsetsPointIntoMarkup) {
  const std::string html = "<body><div>abc<b>de</b></div></body>";
  const DomTree tree = parse_html(html);
  const DomNode& div = tree.body()->children.at(0);
  EXPECT_EQ(html.substr(div.source_offset, div.source_length), "<div>abc<b>de</b></div>");
  const DomNode& text = div.children.at(0);
  EXPECT_EQ(html.substr(text.source_offset, text.source_length), "abc");
  EXPECT_EQ(tree.markup_length, html.size());
}

TEST(Parse, InvalidUtf8IsReplaced) {
  const DomTree tree = parse_html("<p>a\xff" "b</p>");
  EXPECT_EQ(tree.body()->children.at(0).children.at(0).text, "a\xef\xbf\xbd" "b");
}

TEST(Parse, BinaryInputIsAParseError) {
  std::string binary(100, '\0');
  binary[0] = 'x';
  EXPECT_THROW(parse_html(binary), ParseError);
  std::string mostly_text(100, 'a');
  mostly_text[5] = '\0';
  EXPECT_NO_THROW(parse_html(mostly_text));
}

TEST(Parse, DeepNestingDoesNotOverflow) {
  std::string html;
  for (int i = 0; i < 5000; ++i) html += "<div>";
  html += "x";
  EXPECT_NO_THROW(parse_html(html));
}

TEST(Preprocess, WhitespaceOnlyBodyIsEmpty) { EXPECT_EQ(body_of("<div> \n </div>", true), "body"); }

TEST(Preprocess, HeadRemoved) {
  const DomTree tree =
      preprocess(parse_html("<head><title>t</title></head><body><p>x</p></body>"));
  for (const DomNode& child : tree.root.children) EXPECT_NE(child.tag, "head");
  EXPECT_EQ(dump(*tree.body()), "body(p(\"x\"))");
}

TEST(Preprocess, CascadingRemovalOfEmptyElements) {
  EXPECT_EQ(body_of("<div><div><img/></div></div>", true), "body");
}

TEST(Preprocess, NonContentTagsRemovedWithTheirText) {
  EXPECT_EQ(body_of("<p>a<script>s</script><noscript>n</noscript><style>x</style>"
                    "<svg><text>t</text></svg><br>b</p>",
                    true),
            "body(p(\"a\",\"b\"))");
}

TEST(Preprocess, NonContentTagSet) {
  for (const char* tag : {"head", "script", "style", "noscript", "template", "svg", "br", "hr",
                          "iframe", "img", "input", "checkbox", "embed", "object", "video", "audio",
                          "source", "track", "meta", "link"}) {
    EXPECT_TRUE(is_non_content_tag(tag)) << tag;
  }
  for (const char* tag : {"p", "div", "a", "span", "body", "form", "textarea"}) {
    EXPECT_FALSE(is_non_content_tag(tag)) << tag;
  }
}

TEST(Preprocess, NbspOnlyTextIsBlank) {
  EXPECT_TRUE(is_blank("\xc2\xa0 \t\n"));
  EXPECT_TRUE(is_blank(""));
  EXPECT_FALSE(is_blank(" x "));
  EXPECT_EQ(body_of("<p>&nbsp;</p><p>y</p>", true), "body(p(\"y\"))");
}

TEST(Preprocess, IsAFixpoint) {
  const DomTree once = preprocess(parse_html("<div><p> </p><span><img></span>t</div><ul><li></li></ul>"));
  const DomTree twice = preprocess(once);
  EXPECT_EQ(dump(*once.body()), dump(*twice.body()));
  EXPECT_EQ(dump(*once.body()), "body(div(\"t\"))");
}

TEST(Text, CollectText) {
  const DomTree tree = parse_html("<div>a<b>b</b><i>c<u>d</u></i></div>");
  EXPECT_EQ(collect_text(*tree.body()), "abcd");
}
