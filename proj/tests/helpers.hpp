#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "w2t/blocks.hpp"
#include "w2t/matrix.hpp"
#include "w2t/random.hpp"

namespace w2t::testing {

inline std::size_t feature_index(const std::vector<FeatureSpec>& layout, std::string_view name) {
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].name == name) return i;
  }
  throw std::out_of_range("no feature named " + std::string(name));
}

inline std::size_t block_feature(std::string_view name) {
  return feature_index(block_feature_layout(), name);
}

inline std::size_t edge_feature(std::string_view name) {
  return feature_index(edge_feature_layout(), name);
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

inline std::vector<std::string> block_texts(const Page& page) {
  std::vector<std::string> out;
  for (const TextBlock& b : page.blocks) out.push_back(b.text);
  return out;
}

}  // namespace w2t::testing
