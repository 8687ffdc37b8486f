#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "w2t/corpus.hpp"
#include "w2t/model.hpp"
#include "w2t/random.hpp"

namespace w2t {

// A non-finite loss or parameter during training.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Excerpt {
  std::size_t page = 0;
  std::size_t start = 0;
};

// batch excerpts of `window` consecutive blocks: a page drawn uniformly
// among pages with at least `window` blocks, then a uniform start.
// Throws std::invalid_argument if no page is long enough.
std::vector<Excerpt> sample_batch(const std::vector<CorpusPage>& pages, std::size_t batch,
                                  std::size_t window, Rng& rng);

enum class NetworkKind { kUnary, kPairwise };

struct ProgressRecord {
  NetworkKind network;
  std::size_t step = 0;
  double train_loss = 0.0;       // mean per excerpt, last batch
  double validation_loss = 0.0;  // mean per block (unary) or edge (pairwise)
  bool improved = false;
};

struct TrainConfig {
  std::size_t iterations = 5000;
  std::size_t batch_size = 128;
  std::size_t window = 9;
  std::size_t validate_every = 100;
  double learning_rate = 1e-3;
  double dropout = 0.2;
  double weight_decay = 1e-4;
  double lambda = 0.1;
  std::uint64_t seed = 1;
  Exec exec = Exec::kParallel;
  std::function<void(const ProgressRecord&)> on_progress;
};

// Fits both scalers on the training split, then trains the unary and the
// pairwise network with Adam, keeping for each the parameters with the
// lowest validation loss (the last ones when there is no validation data).
// The result is rounded to float32 storage precision.
// Identical corpus, config and seed give a bit-identical model, for any
// number of threads.
Model train(const Corpus& corpus, const TrainConfig& config);

// Mean cross-entropy per block / per edge of a network over pages.
double validation_loss(const Network& net, const FeatureScaler& scaler,
                       const std::vector<CorpusPage>& pages, NetworkKind kind,
                       Exec exec = Exec::kParallel);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Counts over blocks, content (label 1) is the positive class.
struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(const std::vector<int>& gold, const std::vector<int>& predicted);
  std::size_t total() const { return tp + fp + tn + fn; }
  // A metric whose denominator is zero is reported as 0.
  Metrics metrics() const;
};

// Viterbi-decodes every page and pools the block counts.
Confusion evaluate(const Model& model, const std::vector<CorpusPage>& pages,
                   double lambda, Exec exec = Exec::kParallel);

}  // namespace w2t
