#include <cmath>
#include <stdexcept>

#include "w2t/inference.hpp"

namespace w2t {
namespace {

void check(const PotentialSequence& p, const InferenceConfig& cfg) {
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!p.unary.empty() && p.pairwise.size() + 1 != p.unary.size()) {
    throw std::invalid_argument("pairwise potentials must have one entry per edge");
  }
}

}  // namespace

PotentialSequence PotentialSequence::from_probabilities(const Matrix& unary, const Matrix& pairwise) {
  if ((unary.rows() > 0 && unary.cols() != 2) || (pairwise.rows() > 0 && pairwise.cols() != 4)) {
    throw std::invalid_argument("potential tables have the wrong width");
  }
  if (unary.rows() > 0 && pairwise.rows() + 1 != unary.rows()) {
    throw std::invalid_argument("pairwise table must have one row per adjacent block pair");
  }
  PotentialSequence p;
  for (std::size_t i = 0; i < unary.rows(); ++i) p.unary.push_back({unary(i, 0), unary(i, 1)});
  for (std::size_t i = 0; i < pairwise.rows(); ++i) {
    p.pairwise.push_back({pairwise(i, 0), pairwise(i, 1), pairwise(i, 2), pairwise(i, 3)});
  }
  return p;
}

double sequence_log_prob(const PotentialSequence& potentials, const Labeling& labels,
                         const InferenceConfig& cfg) {
  check(potentials, cfg);
  if (labels.size() != potentials.size()) throw std::invalid_argument("labeling length mismatch");
  double unary = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    unary += std::log(potentials.unary[i][static_cast<std::size_t>(labels[i])]);
  }
  double pairwise = 0.0;
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
    pairwise += std::log(potentials.pairwise[i][static_cast<std::size_t>(2 * labels[i] + labels[i + 1])]);
  }
  return unary + cfg.lambda * pairwise;
}

Labeling viterbi(const PotentialSequence& potentials, const InferenceConfig& cfg) {
  check(potentials, cfg);
  const std::size_t n = potentials.size();
  if (n == 0) throw std::invalid_argument("cannot decode an empty sequence");

  // best[i][s]: best score of a prefix ending in state s at block i.
  std::vector<std::array<double, 2>> best(n);
  std::vector<std::array<int, 2>> from(n, {0, 0});
  for (int s = 0; s < 2; ++s) best[0][s] = std::log(potentials.unary[0][s]);
  for (std::size_t i = 1; i < n; ++i) {
    for (int s = 0; s < 2; ++s) {
      const double via0 = best[i - 1][0] + cfg.lambda * std::log(potentials.pairwise[i - 1][0 * 2 + s]);
      const double via1 = best[i - 1][1] + cfg.lambda * std::log(potentials.pairwise[i - 1][1 * 2 + s]);
      const int prev = via1 >= via0 ? 1 : 0;
      from[i][s] = prev;
      best[i][s] = (prev == 1 ? via1 : via0) + std::log(potentials.unary[i][s]);
    }
  }
  Labeling labels(n);
  labels[n - 1] = best[n - 1][1] >= best[n - 1][0] ? 1 : 0;
  for (std::size_t i = n - 1; i > 0; --i) labels[i - 1] = from[i][labels[i]];
  return labels;
}

std::string extract_text(const std::vector<TextBlock>& blocks, const Labeling& labels) {
  if (blocks.size() != labels.size()) throw std::invalid_argument("labeling length mismatch");
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (labels[i] != 1) continue;
    if (!out.empty()) out.push_back('\n');
    out += blocks[i].text;
  }
  return out;
}

}  // namespace w2t
