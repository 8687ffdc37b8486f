#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "w2t/cdom.hpp"
#include "w2t/matrix.hpp"

namespace w2t {

inline constexpr std::size_t kBlockFeatureCount = 128;
inline constexpr std::size_t kEdgeFeatureCount = 25;
inline constexpr std::size_t kNodeFeatureCount = 20;

// One labelable unit: a CDOM leaf with its ancestry.
struct TextBlock {
  std::size_t index = 0;
  std::string text;  // whitespace-normalized
  NodeId leaf = kNoNode;
  NodeId parent = kNoNode;
  NodeId grandparent = kNoNode;
  NodeId root = kNoNode;
  std::size_t source_offset = 0;
  std::size_t source_length = 0;
};

// A page after parsing, preprocessing, collapsing and segmentation.
struct Page {
  CdomTree tree;
  std::vector<TextBlock> blocks;
};

// One block per CDOM leaf, in document order.
std::vector<TextBlock> segment(const CdomTree& tree);

// parse_html -> preprocess -> collapse -> segment.
Page analyze_page(std::string_view markup);

// Describes one feature dimension of the canonical layout.
struct FeatureSpec {
  std::string name;
  bool binary = false;
  bool clipped = false;
  double lo = 0.0;
  double hi = 0.0;
};

const std::vector<FeatureSpec>& block_feature_layout();
const std::vector<FeatureSpec>& edge_feature_layout();

// FNV-1a over the canonical layout tables. Stored in model files.
std::uint64_t feature_layout_hash();

// Tag vocabularies of the parent-tag and own-tag indicator features.
const std::array<std::string_view, 20>& parent_tag_vocabulary();
const std::array<std::string_view, 19>& block_tag_vocabulary();

using BlockFeatures = std::array<double, kBlockFeatureCount>;
using EdgeFeatures = std::array<double, kEdgeFeatureCount>;
using NodeFeatures = std::array<double, kNodeFeatureCount>;

// Page-level tables shared by all blocks of a page: duplicate counts,
// class-path frequencies and node-level features of every ancestor that a
// block or edge refers to.
class PageStats {
 public:
  PageStats(const CdomTree& tree, const std::vector<TextBlock>& blocks);

  std::size_t duplicates(std::size_t block) const { return duplicates_[block]; }
  double class_path_ratio(std::size_t block) const { return class_path_ratio_[block]; }
  const NodeFeatures& node_features(NodeId id) const;

 private:
  const CdomTree* tree_;
  std::vector<std::size_t> duplicates_;
  std::vector<double> class_path_ratio_;
  std::unordered_map<NodeId, NodeFeatures> node_features_;
};

// The 20 ancestor features: source share, link density, the text
// statistics block and the form-element flag.
NodeFeatures compute_node_features(const CdomTree& tree, NodeId id);

BlockFeatures extract_block_features(const TextBlock& block, const CdomTree& tree,
                                     const PageStats& stats);

// Throws std::invalid_argument unless b directly follows a.
EdgeFeatures extract_edge_features(const TextBlock& a, const TextBlock& b, const CdomTree& tree);
EdgeFeatures extract_edge_features(const TextBlock& a, const TextBlock& b, const CdomTree& tree,
                                   const PageStats& stats);

// Raw (unscaled) features of a whole page: n x 128 and (n-1) x 25.
struct PageFeatures {
  Matrix blocks;
  Matrix edges;
};

PageFeatures compute_page_features(const Page& page);

// Tags that produce a line break between leaves in an unstyled page.
bool is_block_level_tag(std::string_view tag);

}  // namespace w2t
