#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "w2t/blocks.hpp"
#include "w2t/dom.hpp"
#include "w2t/text_stats.hpp"
#include "w2t/utf8.hpp"

namespace w2t {
namespace {

constexpr std::size_t kTextFeatureCount = 17;
using TextFeatures = std::array<double, kTextFeatureCount>;

constexpr double kLogWordsLo = 0.0, kLogWordsHi = 3.5;
constexpr double kWordLenLo = 3.0, kWordLenHi = 15.0;
constexpr double kLogCharsLo = 2.5, kLogCharsHi = 5.5;
constexpr double kLogPunctLo = -4.0, kLogPunctHi = -2.5;
constexpr double kLogSentLo = 2.0, kLogSentHi = 5.0;

double clip(double x, double lo, double hi) { return std::clamp(x, lo, hi); }

// log(x) clipped to [lo, hi]; log(0) maps to lo.
double clipped_log(double x, double lo, double hi) {
  if (x <= 0.0) return lo;
  return clip(std::log(x), lo, hi);
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Features b6..b22 of a piece of text.
TextFeatures text_features(const TextStats& s) {
  const double capital = ratio(s.capitalized_words, s.words);
  const double avg_word = s.words == 0 ? 0.0 : ratio(s.word_chars, s.words);
  const double avg_sentence = ratio(s.words, s.sentences);
  return {
      clip(avg_word, kWordLenLo, kWordLenHi),
      s.stopwords > 0 ? 1.0 : 0.0,
      ratio(s.stopwords, s.words),
      clipped_log(static_cast<double>(s.chars), kLogCharsLo, kLogCharsHi),
      clipped_log(ratio(s.punctuation, s.chars), kLogPunctLo, kLogPunctHi),
      s.digits > 0 ? 1.0 : 0.0,
      ratio(s.digits, s.chars),
      clipped_log(avg_sentence, kLogSentLo, kLogSentHi),
      s.ends_with_punctuation ? 1.0 : 0.0,
      s.ends_with_question_mark ? 1.0 : 0.0,
      s.has_copyright ? 1.0 : 0.0,
      s.has_email ? 1.0 : 0.0,
      s.has_url ? 1.0 : 0.0,
      s.has_year ? 1.0 : 0.0,
      capital,
      capital * capital,
      capital * capital * capital,
  };
}

void append_text_specs(std::vector<FeatureSpec>& out, const std::string& prefix) {
  out.push_back({prefix + "avg_word_length", false, true, kWordLenLo, kWordLenHi});
  out.push_back({prefix + "has_stopword", true});
  out.push_back({prefix + "stopword_ratio", false});
  out.push_back({prefix + "log_n_characters", false, true, kLogCharsLo, kLogCharsHi});
  out.push_back({prefix + "log_punctuation_ratio", false, true, kLogPunctLo, kLogPunctHi});
  out.push_back({prefix + "has_numeric", true});
  out.push_back({prefix + "numeric_ratio", false});
  out.push_back({prefix + "log_avg_sentence_length", false, true, kLogSentLo, kLogSentHi});
  out.push_back({prefix + "ends_with_punctuation", true});
  out.push_back({prefix + "ends_with_question_mark", true});
  out.push_back({prefix + "contains_copyright", true});
  out.push_back({prefix + "contains_email", true});
  out.push_back({prefix + "contains_url", true});
  out.push_back({prefix + "contains_year", true});
  out.push_back({prefix + "ratio_words_with_capital", false});
  out.push_back({prefix + "ratio_words_with_capital_2", false});
  out.push_back({prefix + "ratio_words_with_capital_3", false});
}

void append_node_specs(std::vector<FeatureSpec>& out, const std::string& prefix) {
  out.push_back({prefix + "body_percentage", false});
  out.push_back({prefix + "link_density", false});
  append_text_specs(out, prefix);
  out.push_back({prefix + "contains_form_element", true});
}

std::vector<FeatureSpec> build_block_layout() {
  std::vector<FeatureSpec> out;
  out.push_back({"has_duplicate", true});
  out.push_back({"has_10_duplicates", true});
  out.push_back({"r_same_class_path", false});
  out.push_back({"has_word", true});
  out.push_back({"log_n_words", false, true, kLogWordsLo, kLogWordsHi});
  append_text_specs(out, "");
  out.push_back({"contains_punctuation", true});
  out.push_back({"n_punctuation", false});
  out.push_back({"has_multiple_sentences", true});
  out.push_back({"relative_position", false});
  out.push_back({"relative_position_2", false});

  out.push_back({"has_parent", true});
  append_node_specs(out, "p_");
  for (std::string_view tag : parent_tag_vocabulary()) {
    out.push_back({"p_tag_" + std::string(tag), true});
  }

  out.push_back({"has_grandparent", true});
  append_node_specs(out, "gp_");
  append_node_specs(out, "root_");
  for (std::string_view tag : block_tag_vocabulary()) {
    out.push_back({"tag_" + std::string(tag), true});
  }
  if (out.size() != kBlockFeatureCount) throw std::logic_error("block feature layout size");
  return out;
}

std::vector<FeatureSpec> build_edge_layout() {
  std::vector<FeatureSpec> out;
  out.push_back({"tree_distance_2", true});
  out.push_back({"tree_distance_3", true});
  out.push_back({"tree_distance_4", true});
  out.push_back({"tree_distance_gt4", true});
  out.push_back({"line_break", true});
  append_node_specs(out, "ca_");
  if (out.size() != kEdgeFeatureCount) throw std::logic_error("edge feature layout size");
  return out;
}

// Offsets of the sections inside the block vector.
constexpr std::size_t kParentSection = 27;
constexpr std::size_t kParentTags = kParentSection + 1 + kNodeFeatureCount;
constexpr std::size_t kGrandparentSection = kParentTags + 20;
constexpr std::size_t kRootSection = kGrandparentSection + 1 + kNodeFeatureCount;
constexpr std::size_t kTagSection = kRootSection + kNodeFeatureCount;
static_assert(kTagSection + 19 == kBlockFeatureCount);

std::size_t subtree_end(const CdomTree& tree, NodeId id) {
  const auto& nodes = tree.nodes();
  const int depth = nodes[static_cast<std::size_t>(id)].depth;
  std::size_t end = static_cast<std::size_t>(id) + 1;
  while (end < nodes.size() && nodes[end].depth > depth) ++end;
  return end;
}

}  // namespace

const std::array<std::string_view, 20>& parent_tag_vocabulary() {
  static constexpr std::array<std::string_view, 20> kTags = {
      "td", "div", "p", "tr", "table", "body", "ul", "span", "li", "blockquote",
      "b", "small", "a", "ol", "i", "form", "dl", "strong", "pre", "h1"};
  return kTags;
}

const std::array<std::string_view, 19>& block_tag_vocabulary() {
  static constexpr std::array<std::string_view, 19> kTags = {
      "a", "p", "td", "b", "li", "span", "i", "tr", "div", "strong",
      "em", "h3", "h2", "table", "h4", "small", "sup", "h1", "blockquote"};
  return kTags;
}

const std::vector<FeatureSpec>& block_feature_layout() {
  static const std::vector<FeatureSpec> layout = build_block_layout();
  return layout;
}

const std::vector<FeatureSpec>& edge_feature_layout() {
  static const std::vector<FeatureSpec> layout = build_edge_layout();
  return layout;
}

std::uint64_t feature_layout_hash() {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto* layout : {&block_feature_layout(), &edge_feature_layout()}) {
    for (const FeatureSpec& f : *layout) {
      mix(f.name);
      mix(f.binary ? "|b" : "|r");
      if (f.clipped) mix("|" + std::to_string(f.lo) + ":" + std::to_string(f.hi));
      mix(";");
    }
    mix("#");
  }
  return h;
}

bool is_block_level_tag(std::string_view tag) {
  static constexpr std::array<std::string_view, 22> kTags = {
      "p",  "div", "ul", "ol", "li", "table", "tr", "td", "h1", "h2", "h3", "h4",
      "h5", "h6",  "blockquote", "pre", "dl", "form", "section", "article", "header",
      "footer"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

std::vector<TextBlock> segment(const CdomTree& tree) {
  std::vector<TextBlock> blocks;
  if (tree.size() == 0) return blocks;
  for (NodeId leaf : tree.leaves()) {
    const CdomNode& node = tree.node(leaf);
    TextBlock block;
    block.index = blocks.size();
    block.text = normalize_whitespace(node.text);
    block.leaf = leaf;
    block.parent = node.parent;
    block.grandparent = node.parent == kNoNode ? kNoNode : tree.node(node.parent).parent;
    block.root = tree.root();
    block.source_offset = node.source_offset;
    block.source_length = node.source_length;
    blocks.push_back(std::move(block));
  }
  return blocks;
}

Page analyze_page(std::string_view markup) {
  Page page;
  page.tree = collapse(preprocess(parse_html(markup)));
  page.blocks = segment(page.tree);
  return page;
}

NodeFeatures compute_node_features(const CdomTree& tree, NodeId id) {
  const CdomNode& node = tree.node(id);
  std::string text;
  std::size_t link_chars = 0;
  std::size_t total_chars = 0;
  const std::size_t end = subtree_end(tree, id);
  for (std::size_t k = static_cast<std::size_t>(id); k < end; ++k) {
    const CdomNode& n = tree.nodes()[k];
    if (!n.is_leaf()) continue;
    const std::string leaf_text = normalize_whitespace(n.text);
    const std::size_t chars = utf8::length(leaf_text);
    total_chars += chars;
    if (n.in_link) link_chars += chars;
    if (!text.empty()) text.push_back(' ');
    text += leaf_text;
  }
  const TextFeatures tf = text_features(compute_text_stats(text));
  NodeFeatures out{};
  out[0] = ratio(node.source_length, tree.markup_length());
  out[1] = ratio(link_chars, total_chars);
  std::copy(tf.begin(), tf.end(), out.begin() + 2);
  out[19] = node.has_form_element ? 1.0 : 0.0;
  return out;
}

PageStats::PageStats(const CdomTree& tree, const std::vector<TextBlock>& blocks) : tree_(&tree) {
  std::unordered_map<std::string_view, std::size_t> text_counts;
  std::unordered_map<std::string_view, std::size_t> path_counts;
  for (const TextBlock& b : blocks) {
    ++text_counts[b.text];
    ++path_counts[tree.node(b.leaf).class_path];
  }
  duplicates_.reserve(blocks.size());
  class_path_ratio_.reserve(blocks.size());
  auto remember = [&](NodeId id) {
    if (id != kNoNode && !node_features_.contains(id)) {
      node_features_.emplace(id, compute_node_features(tree, id));
    }
  };
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const TextBlock& b = blocks[i];
    duplicates_.push_back(text_counts[b.text] - 1);
    class_path_ratio_.push_back(ratio(path_counts[tree.node(b.leaf).class_path], blocks.size()));
    remember(b.parent);
    remember(b.grandparent);
    remember(b.root);
    if (i + 1 < blocks.size()) remember(tree.common_ancestor(b.leaf, blocks[i + 1].leaf));
  }
}

const NodeFeatures& PageStats::node_features(NodeId id) const {
  auto it = node_features_.find(id);
  if (it == node_features_.end()) {
    throw std::invalid_argument("node features were not precomputed for this node");
  }
  return it->second;
}

BlockFeatures extract_block_features(const TextBlock& block, const CdomTree& tree,
                                     const PageStats& stats) {
  BlockFeatures f{};
  const TextStats s = compute_text_stats(block.text);
  const TextFeatures tf = text_features(s);
  const std::size_t dups = stats.duplicates(block.index);

  f[0] = dups >= 1 ? 1.0 : 0.0;
  f[1] = dups >= 10 ? 1.0 : 0.0;
  f[2] = stats.class_path_ratio(block.index);
  f[3] = s.words > 0 ? 1.0 : 0.0;
  f[4] = clipped_log(static_cast<double>(s.words), kLogWordsLo, kLogWordsHi);
  std::copy(tf.begin(), tf.end(), f.begin() + 5);
  f[22] = s.punctuation > 0 ? 1.0 : 0.0;
  f[23] = static_cast<double>(s.punctuation);
  f[24] = s.sentences > 1 ? 1.0 : 0.0;
  f[25] = ratio(block.source_offset, tree.markup_length());
  f[26] = f[25] * f[25];

  if (block.parent != kNoNode) {
    f[kParentSection] = 1.0;
    const NodeFeatures& nf = stats.node_features(block.parent);
    std::copy(nf.begin(), nf.end(), f.begin() + kParentSection + 1);
    const CdomNode& parent = tree.node(block.parent);
    const auto& vocab = parent_tag_vocabulary();
    for (std::size_t t = 0; t < vocab.size(); ++t) {
      f[kParentTags + t] = parent.has_tag(vocab[t]) ? 1.0 : 0.0;
    }
  }
  if (block.grandparent != kNoNode) {
    f[kGrandparentSection] = 1.0;
    const NodeFeatures& nf = stats.node_features(block.grandparent);
    std::copy(nf.begin(), nf.end(), f.begin() + kGrandparentSection + 1);
  }
  {
    const NodeFeatures& nf = stats.node_features(block.root);
    std::copy(nf.begin(), nf.end(), f.begin() + kRootSection);
  }
  const CdomNode& leaf = tree.node(block.leaf);
  const auto& vocab = block_tag_vocabulary();
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    f[kTagSection + t] = leaf.has_tag(vocab[t]) ? 1.0 : 0.0;
  }
  return f;
}

namespace {

EdgeFeatures edge_features(const TextBlock& a, const TextBlock& b, const CdomTree& tree,
                           const NodeFeatures& ancestor) {
  EdgeFeatures f{};
  const int distance = tree.tree_distance(a.leaf, b.leaf);
  if (distance <= 2) {
    f[0] = 1.0;
  } else if (distance == 3) {
    f[1] = 1.0;
  } else if (distance == 4) {
    f[2] = 1.0;
  } else {
    f[3] = 1.0;
  }
  const NodeId lca = tree.common_ancestor(a.leaf, b.leaf);
  bool line_break = false;
  for (NodeId leaf : {a.leaf, b.leaf}) {
    for (std::string_view tag : tree.tags_between(lca, leaf)) {
      line_break = line_break || is_block_level_tag(tag);
    }
  }
  f[4] = line_break ? 1.0 : 0.0;
  std::copy(ancestor.begin(), ancestor.end(), f.begin() + 5);
  return f;
}

void check_adjacent(const TextBlock& a, const TextBlock& b) {
  if (b.index != a.index + 1) throw std::invalid_argument("edge features need adjacent blocks");
}

}  // namespace

EdgeFeatures extract_edge_features(const TextBlock& a, const TextBlock& b, const CdomTree& tree) {
  check_adjacent(a, b);
  return edge_features(a, b, tree,
                       compute_node_features(tree, tree.common_ancestor(a.leaf, b.leaf)));
}

EdgeFeatures extract_edge_features(const TextBlock& a, const TextBlock& b, const CdomTree& tree,
                                   const PageStats& stats) {
  check_adjacent(a, b);
  return edge_features(a, b, tree, stats.node_features(tree.common_ancestor(a.leaf, b.leaf)));
}

PageFeatures compute_page_features(const Page& page) {
  const std::size_t n = page.blocks.size();
  PageFeatures out;
  out.blocks.resize(n, kBlockFeatureCount);
  out.edges.resize(n > 0 ? n - 1 : 0, kEdgeFeatureCount);
  if (n == 0) return out;
  const PageStats stats(page.tree, page.blocks);
  for (std::size_t i = 0; i < n; ++i) {
    const BlockFeatures f = extract_block_features(page.blocks[i], page.tree, stats);
    std::copy(f.begin(), f.end(), out.blocks.row(i).begin());
    if (i + 1 < n) {
      const EdgeFeatures e =
          extract_edge_features(page.blocks[i], page.blocks[i + 1], page.tree, stats);
      std::copy(e.begin(), e.end(), out.edges.row(i).begin());
    }
  }
  return out;
}

}  // namespace w2t
