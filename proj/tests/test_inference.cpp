#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "w2t/blocks.hpp"
#include "w2t/inference.hpp"
#include "w2t/random.hpp"

using namespace w2t;

namespace {

PotentialSequence random_potentials(std::size_t n, Rng& rng) {
  PotentialSequence p;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(0.001, 0.999);
    p.unary.push_back({1.0 - a, a});
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::array<double, 4> q{};
    double s = 0.0;
    for (double& v : q) s += (v = rng.uniform(0.001, 1.0));
    for (double& v : q) v /= s;
    p.pairwise.push_back(q);
  }
  return p;
}

// Exhaustive search over all 2^n labelings; ties resolved towards more 1s
// at the earliest differing position, matching the tie rule.
Labeling brute_force(const PotentialSequence& p, double lambda, double* best_score) {
  const std::size_t n = p.size();
  Labeling best;
  double best_s = -INFINITY;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Labeling l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = (mask >> i) & 1u;
    const double s = sequence_log_prob(p, l, {lambda});
    if (s > best_s) {
      best_s = s;
      best = l;
    }
  }
  *best_score = best_s;
  return best;
}

// Direct evaluation of the objective, without the library.
double objective(const PotentialSequence& p, const Labeling& l, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) s += std::log(p.unary[i][static_cast<std::size_t>(l[i])]);
  for (std::size_t i = 0; i + 1 < l.size(); ++i) {
    s += lambda * std::log(p.pairwise[i][static_cast<std::size_t>(2 * l[i] + l[i + 1])]);
  }
  return s;
}

}  // namespace

TEST(SequenceLogProb, MatchesDirectEvaluation) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(12);
    const PotentialSequence p = random_potentials(n, rng);
    Labeling l(n);
    for (int& v : l) v = static_cast<int>(rng.index(2));
    const double lambda = rng.uniform(0.0, 2.0);
    EXPECT_NEAR(sequence_log_prob(p, l, {lambda}), objective(p, l, lambda), 1e-12);
  }
}

TEST(SequenceLogProb, Errors) {
  Rng rng(2);
  const PotentialSequence p = random_potentials(3, rng);
  EXPECT_THROW(sequence_log_prob(p, Labeling{0, 1}), std::invalid_argument);
  EXPECT_THROW(sequence_log_prob(p, Labeling{0, 1, 1}, {-0.5}), std::invalid_argument);
  PotentialSequence bad = p;
  bad.pairwise.pop_back();
  EXPECT_THROW(sequence_log_prob(bad, Labeling{0, 1, 1}), std::invalid_argument);
}

TEST(Viterbi, MatchesBruteForce) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.index(12);
    const PotentialSequence p = random_potentials(n, rng);
    const double lambda = trial % 4 == 0 ? 0.1 : rng.uniform(0.0, 3.0);
    double best = 0.0;
    brute_force(p, lambda, &best);
    const Labeling got = viterbi(p, {lambda});
    ASSERT_EQ(got.size(), n);
    // Score equality is the robust check; labelings equal unless near-ties.
    EXPECT_NEAR(sequence_log_prob(p, got, {lambda}), best, 1e-9) << "trial " << trial;
  }
}

TEST(Viterbi, SingleBlockIsUnaryArgmax) {
  PotentialSequence p;
  p.unary = {{0.3, 0.7}};
  EXPECT_EQ(viterbi(p), Labeling{1});
  p.unary = {{0.8, 0.2}};
  EXPECT_EQ(viterbi(p), Labeling{0});
}

TEST(Viterbi, ZeroLambdaIsIndependentArgmax) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const PotentialSequence p = random_potentials(1 + rng.index(30), rng);
    Labeling expected;
    for (const auto& u : p.unary) expected.push_back(u[1] >= u[0] ? 1 : 0);
    EXPECT_EQ(viterbi(p, {0.0}), expected);
  }
}

TEST(Viterbi, TiesGoToContent) {
  PotentialSequence p;
  p.unary = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  p.pairwise = {{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}};
  EXPECT_EQ(viterbi(p), (Labeling{1, 1, 1}));
  EXPECT_EQ(viterbi(p, {0.0}), (Labeling{1, 1, 1}));
}

TEST(Viterbi, StrongPairwiseSmoothsAnIsolatedBlock) {
  PotentialSequence p;
  p.unary = {{0.1, 0.9}, {0.6, 0.4}, {0.1, 0.9}};
  const std::array<double, 4> sticky = {0.45, 0.05, 0.05, 0.45};
  p.pairwise = {sticky, sticky};
  EXPECT_EQ(viterbi(p, {0.0}), (Labeling{1, 0, 1}));
  EXPECT_EQ(viterbi(p, {1.0}), (Labeling{1, 1, 1}));
}

TEST(Viterbi, ReversalSymmetry) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(20);
    const PotentialSequence p = random_potentials(n, rng);
    PotentialSequence r;
    r.unary.assign(p.unary.rbegin(), p.unary.rend());
    for (auto it = p.pairwise.rbegin(); it != p.pairwise.rend(); ++it) {
      // Reversing swaps the roles of (l_i, l_{i+1}): index 1 <-> 2.
      r.pairwise.push_back({(*it)[0], (*it)[2], (*it)[1], (*it)[3]});
    }
    const Labeling forward = viterbi(p);
    Labeling backward = viterbi(r);
    std::reverse(backward.begin(), backward.end());
    EXPECT_NEAR(sequence_log_prob(p, forward), sequence_log_prob(p, backward), 1e-9);
  }
}

// Scaling all potentials of a position by a constant shifts every labeling's
// score equally, so the argmax is unchanged.
TEST(Viterbi, InvariantToPerPositionScaling) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const PotentialSequence p = random_potentials(2 + rng.index(15), rng);
    PotentialSequence s = p;
    for (auto& u : s.unary)
      for (double& v : u) v *= 0.37;
    for (auto& q : s.pairwise)
      for (double& v : q) v *= 0.5;
    const Labeling a = viterbi(p), b = viterbi(s);
    EXPECT_NEAR(sequence_log_prob(p, a), sequence_log_prob(p, b), 1e-9);
  }
}

TEST(Viterbi, LongSequencesStayFinite) {
  Rng rng(7);
  const PotentialSequence p = random_potentials(20000, rng);
  const Labeling l = viterbi(p);
  EXPECT_EQ(l.size(), 20000u);
  EXPECT_TRUE(std::isfinite(sequence_log_prob(p, l)));
}

TEST(Viterbi, Errors) {
  EXPECT_THROW(viterbi(PotentialSequence{}), std::invalid_argument);
  Rng rng(8);
  EXPECT_THROW(viterbi(random_potentials(3, rng), {-1.0}), std::invalid_argument);
}

TEST(Potentials, FromProbabilities) {
  Matrix u(2, 2), q(1, 4);
  u(0, 0) = 0.2;
  u(0, 1) = 0.8;
  u(1, 0) = 0.6;
  u(1, 1) = 0.4;
  for (std::size_t c = 0; c < 4; ++c) q(0, c) = 0.1 * static_cast<double>(c + 1);
  const PotentialSequence p = PotentialSequence::from_probabilities(u, q);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.unary[0][1], 0.8);
  EXPECT_EQ(p.pairwise[0][3], q(0, 3));
  EXPECT_THROW(PotentialSequence::from_probabilities(u, Matrix(2, 4)), std::invalid_argument);
}

TEST(ExtractText, KeepsContentBlocksInOrder) {
  const Page page = analyze_page(
      "<div>Its a<ul><li><a href=\"#\">Item 1</a></li><li><a href=\"#\">Item 2</a></li></ul></div>");
  EXPECT_EQ(extract_text(page.blocks, Labeling{1, 1, 0}), "Its a\nItem 1");
  EXPECT_EQ(extract_text(page.blocks, Labeling{0, 0, 0}), "");
  EXPECT_THROW(extract_text(page.blocks, Labeling{1}), std::invalid_argument);
}
