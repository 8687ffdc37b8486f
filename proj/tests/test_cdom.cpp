#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "helpers.hpp"
#include "w2t/blocks.hpp"
#include "w2t/cdom.hpp"
#include "w2t/dom.hpp"
#include "w2t/random.hpp"

using namespace w2t;

namespace {

const char* kListPage =
    "<div>Its a<ul><li><a href=\"#\">Item 1</a></li><li><a href=\"#\">Item 2</a></li></ul></div>";

CdomTree cdom_of(std::string_view html) { return collapse(preprocess(parse_html(html))); }

// Random nested markup with text, inline and block elements.
std::string random_markup(Rng& rng, int budget) {
  static const char* kTags[] = {"div", "span", "p", "b", "section", "em", "ul", "li", "a"};
  std::string out;
  std::function<void(int, int&)> grow = [&](int depth, int& remaining) {
    const std::size_t children = 1 + rng.index(4);
    for (std::size_t c = 0; c < children && remaining > 0; ++c) {
      --remaining;
      if (depth > 6 || rng.bernoulli(0.35)) {
        out += "t" + std::to_string(rng.index(1000)) + " ";
        continue;
      }
      const char* tag = kTags[rng.index(std::size(kTags))];
      out += std::string("<") + tag + ">";
      grow(depth + 1, remaining);
      out += std::string("</") + tag + ">";
    }
  };
  int remaining = budget;
  while (remaining > 0) grow(0, remaining);
  return out;
}

// Non-blank text nodes after preprocessing, in document order.
void text_nodes(const DomNode& n, std::vector<std::string>& out) {
  if (n.is_text()) {
    out.push_back(n.text);
    return;
  }
  for (const DomNode& c : n.children) text_nodes(c, out);
}

std::vector<NodeId> path_to_root(const CdomTree& t, NodeId n) {
  std::vector<NodeId> path;
  for (; n != kNoNode; n = t.node(n).parent) path.push_back(n);
  return path;
}

// Oracle: first node of a's root path that is also on b's.
NodeId naive_lca(const CdomTree& t, NodeId a, NodeId b) {
  const auto pa = path_to_root(t, a);
  const auto pb = path_to_root(t, b);
  for (NodeId x : pa) {
    if (std::find(pb.begin(), pb.end(), x) != pb.end()) return x;
  }
  return kNoNode;
}

std::string shape(const CdomTree& t, NodeId n) {
  const CdomNode& node = t.node(n);
  std::string out;
  for (const auto& tag : node.tag_chain) out += tag + "/";
  if (node.is_leaf()) out += "\"" + node.text + "\"";
  out += "(";
  for (NodeId c : node.children) out += shape(t, c) + ",";
  return out + ")";
}

}  // namespace

TEST(Collapse, ListChainsBecomeSingleLeaves) {
  const CdomTree t = cdom_of(kListPage);
  const auto leaves = t.leaves();
  ASSERT_EQ(leaves.size(), 3u);
  EXPECT_EQ(t.node(leaves[0]).text, "Its a");
  EXPECT_EQ(t.node(leaves[0]).tag_chain, (std::vector<std::string>{"#text"}));
  EXPECT_EQ(t.node(leaves[1]).tag_chain, (std::vector<std::string>{"li", "a"}));
  EXPECT_EQ(t.node(leaves[2]).tag_chain, (std::vector<std::string>{"li", "a"}));
  EXPECT_EQ(t.node(leaves[1]).parent, t.node(leaves[2]).parent);
  // body has one child (div), so the root chain is body/div.
  EXPECT_EQ(t.node(t.root()).tag_chain, (std::vector<std::string>{"body", "div"}));
  EXPECT_TRUE(t.node(leaves[1]).in_link);
  EXPECT_FALSE(t.node(leaves[0]).in_link);
}

TEST(Collapse, SingleBodyTextIsOneLeaf) {
  const CdomTree t = cdom_of("<body>hello</body>");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.node(0).tag_chain, (std::vector<std::string>{"body"}));
  EXPECT_EQ(t.node(0).text, "hello");
  EXPECT_EQ(t.leaves(), (std::vector<NodeId>{0}));
}

TEST(Collapse, EmptyDocumentHasNoLeaves) {
  const CdomTree t = cdom_of("<div> </div>");
  EXPECT_TRUE(t.leaves().empty());
}

TEST(Collapse, ClassPathFormat) {
  const CdomTree t = cdom_of("<div class=\"z a\"><a class=link><B>x</B></a><i>y</i></div>");
  const auto leaves = t.leaves();
  ASSERT_EQ(leaves.size(), 2u);
  EXPECT_EQ(t.node(leaves[0]).class_path, "body>div.a.z>a.link>b");
  EXPECT_EQ(t.node(leaves[1]).class_path, "body>div.a.z>i");
}

TEST(Collapse, FormElementsPropagateUp) {
  const CdomTree t = cdom_of("<div><form><label>Name</label><textarea>x</textarea></form><p>y</p></div>");
  EXPECT_TRUE(t.node(t.root()).has_form_element);
  const auto leaves = t.leaves();
  EXPECT_FALSE(t.node(leaves.back()).has_form_element);
}

TEST(Collapse, RandomTreesHaveNoSingleChildInternalNodes) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string html = random_markup(rng, 200);
    const DomTree dom = preprocess(parse_html(html));
    const CdomTree t = collapse(dom);
    for (const CdomNode& n : t.nodes()) {
      EXPECT_NE(n.children.size(), 1u) << html;
      EXPECT_TRUE(n.is_leaf() == n.children.empty() || (&n == &t.node(0) && n.children.empty()));
    }
    std::vector<std::string> expected;
    text_nodes(*dom.body(), expected);
    std::vector<std::string> got;
    for (NodeId id : t.leaves()) got.push_back(t.node(id).text);
    EXPECT_EQ(got, expected) << html;

    // Pre-order numbering: parents before children, depth consistent.
    for (std::size_t i = 1; i < t.size(); ++i) {
      const CdomNode& n = t.node(static_cast<NodeId>(i));
      ASSERT_LT(n.parent, static_cast<NodeId>(i));
      EXPECT_EQ(n.depth, t.node(n.parent).depth + 1);
    }
  }
}

TEST(Collapse, ExpandRoundTrip) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const CdomTree t = cdom_of(random_markup(rng, 120));
    const CdomTree again = collapse(expand(t));
    EXPECT_EQ(shape(again, again.root()), shape(t, t.root()));
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_EQ(again.node(static_cast<NodeId>(i)).class_path, t.node(static_cast<NodeId>(i)).class_path);
    }
  }
}

TEST(TreeDistance, Siblings) {
  const CdomTree t = cdom_of(kListPage);
  const auto leaves = t.leaves();
  EXPECT_EQ(t.tree_distance(leaves[1], leaves[2]), 2);
  EXPECT_EQ(t.common_ancestor(leaves[1], leaves[2]), t.node(leaves[1]).parent);
}

TEST(TreeDistance, Cousins) {
  const CdomTree t = cdom_of("<div><p>a<b>x</b></p><p>c<b>y</b></p></div>");
  const auto leaves = t.leaves();
  ASSERT_EQ(leaves.size(), 4u);
  EXPECT_EQ(t.tree_distance(leaves[0], leaves[3]), 4);
  EXPECT_EQ(t.tree_distance(leaves[3], leaves[0]), 4);
}

TEST(TreeDistance, IdentityAndRoot) {
  const CdomTree t = cdom_of(kListPage);
  for (NodeId id = 0; id < static_cast<NodeId>(t.size()); ++id) {
    EXPECT_EQ(t.tree_distance(id, id), 0);
    EXPECT_EQ(t.common_ancestor(id, t.root()), t.root());
  }
}

TEST(TreeDistance, ForeignNodesRejected) {
  const CdomTree t = cdom_of(kListPage);
  EXPECT_THROW(t.tree_distance(0, 99), std::invalid_argument);
  EXPECT_THROW(t.common_ancestor(-1, 0), std::invalid_argument);
}

TEST(TreeDistance, MatchesNaiveOracleOnRandomTrees) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const CdomTree t = cdom_of(random_markup(rng, 150));
    const auto n = static_cast<NodeId>(t.size());
    for (int q = 0; q < 50; ++q) {
      const auto a = static_cast<NodeId>(rng.index(static_cast<std::uint64_t>(n)));
      const auto b = static_cast<NodeId>(rng.index(static_cast<std::uint64_t>(n)));
      const NodeId lca = naive_lca(t, a, b);
      ASSERT_EQ(t.common_ancestor(a, b), lca);
      const int expected = t.node(a).depth + t.node(b).depth - 2 * t.node(lca).depth;
      EXPECT_EQ(t.tree_distance(a, b), expected);
      EXPECT_EQ(t.tree_distance(b, a), expected);
    }
  }
}

TEST(Segment, ListPageBlocks) {
  const Page page = analyze_page(kListPage);
  EXPECT_EQ(w2t::testing::block_texts(page),
            (std::vector<std::string>{"Its a", "Item 1", "Item 2"}));
  for (std::size_t i = 0; i < page.blocks.size(); ++i) EXPECT_EQ(page.blocks[i].index, i);
  const TextBlock& item = page.blocks[1];
  EXPECT_EQ(item.parent, page.tree.node(item.leaf).parent);
  EXPECT_EQ(item.root, page.tree.root());
}

TEST(Segment, EmptyPage) { EXPECT_TRUE(analyze_page("<html><body> </body></html>").blocks.empty()); }

TEST(Segment, TextIsWhitespaceNormalized) {
  const Page page = analyze_page("<p>  a \n\t b&nbsp;c </p>");
  ASSERT_EQ(page.blocks.size(), 1u);
  EXPECT_EQ(page.blocks[0].text, "a b c");
}

TEST(Segment, SourceOffsetsCoverTheLeafMarkup) {
  const std::string html = "<body><div><p class=x>Hello <b>world</b></p><a href=#>link</a></div></body>";
  const Page page = analyze_page(html);
  ASSERT_EQ(page.blocks.size(), 3u);
  EXPECT_EQ(html.substr(page.blocks[0].source_offset, page.blocks[0].source_length), "Hello ");
  EXPECT_EQ(html.substr(page.blocks[1].source_offset, page.blocks[1].source_length), "<b>world</b>");
  EXPECT_EQ(html.substr(page.blocks[2].source_offset, page.blocks[2].source_length),
            "<a href=#>link</a>");
}

TEST(Segment, MissingGrandparentAtShallowDepth) {
  const Page page = analyze_page("<p>one</p><p>two</p>");
  ASSERT_EQ(page.blocks.size(), 2u);
  EXPECT_EQ(page.blocks[0].parent, page.tree.root());
  EXPECT_EQ(page.blocks[0].grandparent, kNoNode);
}
