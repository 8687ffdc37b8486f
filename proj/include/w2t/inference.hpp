#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "w2t/blocks.hpp"
#include "w2t/matrix.hpp"

namespace w2t {

// Label 1 is main content, 0 is boilerplate.
using Labeling = std::vector<int>;

// unary[i] = (p_i(0), p_i(1)); pairwise[i] is indexed by 2*l_i + l_{i+1}.
struct PotentialSequence {
  std::vector<std::array<double, 2>> unary;
  std::vector<std::array<double, 4>> pairwise;

  std::size_t size() const { return unary.size(); }

  // From network outputs (n x 2 and (n-1) x 4).
  static PotentialSequence from_probabilities(const Matrix& unary, const Matrix& pairwise);
};

struct InferenceConfig {
  double lambda = 0.1;  // weight of the pairwise term, >= 0
};

// sum_i log p_i(l_i) + lambda * sum_i log p_{i,i+1}(l_i, l_{i+1}).
// Throws std::invalid_argument on shape mismatches or a negative lambda.
double sequence_log_prob(const PotentialSequence& potentials, const Labeling& labels,
                         const InferenceConfig& cfg = {});

// Maximizes sequence_log_prob. Exact score ties go to label 1.
// Throws std::invalid_argument for an empty sequence.
Labeling viterbi(const PotentialSequence& potentials, const InferenceConfig& cfg = {});

// Texts of blocks labeled 1, in order, one per line.
std::string extract_text(const std::vector<TextBlock>& blocks, const Labeling& labels);

}  // namespace w2t
