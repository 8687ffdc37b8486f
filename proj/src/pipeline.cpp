#include <cmath>
#include <limits>

#include "w2t/pipeline.hpp"

namespace w2t {
namespace {

// Batch gradients are summed in this many fixed chunks so the result does
// not depend on how OpenMP schedules them.
constexpr std::size_t kChunks = 8;

struct ScaledPage {
  Matrix input;
  std::vector<int> targets;
};

std::vector<ScaledPage> scale_pages(const std::vector<CorpusPage>& pages, const FeatureScaler& scaler,
                                    NetworkKind kind) {
  std::vector<ScaledPage> out(pages.size());
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const CorpusPage& page = pages[p];
    if (kind == NetworkKind::kUnary) {
      out[p].input = scaler.transform(page.blocks);
      out[p].targets = page.labels;
    } else {
      out[p].input = scaler.transform(page.edges);
      out[p].targets = pair_targets(page.labels);
    }
  }
  return out;
}

double mean_loss(const Network& net, const std::vector<ScaledPage>& pages, Exec exec) {
  const auto count = static_cast<std::ptrdiff_t>(pages.size());
  std::vector<double> losses(pages.size(), 0.0);
  std::size_t positions = 0;
  for (const ScaledPage& p : pages) positions += p.targets.size();
  if (positions == 0) return 0.0;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::kParallel)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const ScaledPage& p = pages[static_cast<std::size_t>(k)];
    if (p.targets.empty()) continue;
    const ForwardTrace trace = forward_trace(net, p.input, nullptr, Exec::kSerial);
    losses[static_cast<std::size_t>(k)] = cross_entropy_from_logits(trace.logits, p.targets);
  }
  double total = 0.0;
  for (double l : losses) total += l;
  return total / static_cast<double>(positions);
}

void add_into(Gradients& into, const Gradients& from) {
  for (std::size_t l = 0; l < kLayers; ++l) {
    for (std::size_t k = 0; k < into[l].size(); ++k) into[l][k] += from[l][k];
  }
}

Network train_network(NetworkKind kind, const std::vector<CorpusPage>& train_pages,
                      const std::vector<ScaledPage>& train, const std::vector<ScaledPage>& validation,
                      const TrainConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  Network net = kind == NetworkKind::kUnary ? Network::unary() : Network::pairwise();
  initialize(net, rng);
  TrainState state(net);
  state.learning_rate = cfg.learning_rate;
  state.dropout = cfg.dropout;
  state.weight_decay = cfg.weight_decay;

  // Pairwise excerpts cover the window - 1 edges between the window's blocks.
  const std::size_t length = kind == NetworkKind::kUnary ? cfg.window : cfg.window - 1;
  const double scale = 1.0 / static_cast<double>(cfg.batch_size);

  Network best = state.params;
  double best_loss = std::numeric_limits<double>::infinity();

  for (std::size_t step = 1; step <= cfg.iterations; ++step) {
    const std::vector<Excerpt> batch = sample_batch(train_pages, cfg.batch_size, cfg.window, rng);
    std::vector<DropoutMasks> masks;
    masks.reserve(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      masks.push_back(sample_dropout_masks(state.params, length, state.dropout, rng));
    }

    std::vector<Gradients> chunk_grads(kChunks, zero_gradients(state.params));
    std::vector<double> chunk_loss(kChunks, 0.0);
#pragma omp parallel for schedule(static) if (cfg.exec == Exec::kParallel)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kChunks); ++c) {
      const auto cu = static_cast<std::size_t>(c);
      const std::size_t lo = batch.size() * cu / kChunks;
      const std::size_t hi = batch.size() * (cu + 1) / kChunks;
      for (std::size_t b = lo; b < hi; ++b) {
        const ScaledPage& page = train[batch[b].page];
        const Matrix input = page.input.slice_rows(batch[b].start, length);
        const std::span<const int> targets(page.targets.data() + batch[b].start, length);
        chunk_loss[cu] += loss_and_gradient(state.params, input, targets, &masks[b], chunk_grads[cu],
                                            scale, Exec::kSerial);
      }
    }
    Gradients grads = zero_gradients(state.params);
    double loss = 0.0;
    for (std::size_t c = 0; c < kChunks; ++c) {
      add_into(grads, chunk_grads[c]);
      loss += chunk_loss[c];
    }
    loss *= scale;
    if (!std::isfinite(loss)) {
      throw TrainingError("non-finite training loss at step " + std::to_string(step));
    }
    adam_step(state, grads);
    if (!state.params.all_finite()) {
      throw TrainingError("non-finite parameters after step " + std::to_string(step));
    }

    const bool check = step % cfg.validate_every == 0 || step == cfg.iterations;
    if (!check) continue;
    ProgressRecord record{kind, step, loss, 0.0, false};
    if (validation.empty()) {
      best = state.params;
      record.improved = true;
    } else {
      record.validation_loss = mean_loss(state.params, validation, cfg.exec);
      if (!std::isfinite(record.validation_loss)) {
        throw TrainingError("non-finite validation loss at step " + std::to_string(step));
      }
      if (record.validation_loss < best_loss) {
        best_loss = record.validation_loss;
        best = state.params;
        record.improved = true;
      }
    }
    if (cfg.on_progress) cfg.on_progress(record);
  }
  if (cfg.iterations == 0) best = state.params;
  return best;
}

}  // namespace

std::vector<Excerpt> sample_batch(const std::vector<CorpusPage>& pages, std::size_t batch,
                                  std::size_t window, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    if (pages[p].labels.size() >= window) eligible.push_back(p);
  }
  if (eligible.empty() || window == 0) {
    throw std::invalid_argument("no training page has at least " + std::to_string(window) + " blocks");
  }
  std::vector<Excerpt> out(batch);
  for (Excerpt& e : out) {
    e.page = eligible[rng.index(eligible.size())];
    e.start = rng.index(pages[e.page].labels.size() - window + 1);
  }
  return out;
}

double validation_loss(const Network& net, const FeatureScaler& scaler,
                       const std::vector<CorpusPage>& pages, NetworkKind kind, Exec exec) {
  return mean_loss(net, scale_pages(pages, scaler, kind), exec);
}

Model train(const Corpus& corpus, const TrainConfig& cfg) {
  if (cfg.window < 2) throw std::invalid_argument("window must cover at least two blocks");
  if (cfg.batch_size == 0 || cfg.validate_every == 0) {
    throw std::invalid_argument("batch size and validation interval must be positive");
  }
  if (corpus.train.empty()) throw std::invalid_argument("training split is empty");

  Model model;
  model.lambda = cfg.lambda;
  std::vector<const Matrix*> blocks, edges;
  for (const CorpusPage& p : corpus.train) {
    blocks.push_back(&p.blocks);
    if (p.edges.rows() > 0) edges.push_back(&p.edges);
  }
  model.block_scaler.fit(blocks);
  model.edge_scaler.fit(edges);

  // Separate, seed-derived streams so each network's run is reproducible
  // on its own.
  const std::uint64_t unary_seed = cfg.seed * 2 + 1;
  const std::uint64_t pairwise_seed = cfg.seed * 2 + 2;

  model.params.unary = train_network(
      NetworkKind::kUnary, corpus.train, scale_pages(corpus.train, model.block_scaler, NetworkKind::kUnary),
      scale_pages(corpus.validation, model.block_scaler, NetworkKind::kUnary), cfg, unary_seed);
  model.params.pairwise = train_network(
      NetworkKind::kPairwise, corpus.train,
      scale_pages(corpus.train, model.edge_scaler, NetworkKind::kPairwise),
      scale_pages(corpus.validation, model.edge_scaler, NetworkKind::kPairwise), cfg, pairwise_seed);
  model.round_to_storage();
  return model;
}

void Confusion::add(const std::vector<int>& gold, const std::vector<int>& predicted) {
  if (gold.size() != predicted.size()) throw std::invalid_argument("label count mismatch");
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i] == 1) {
      ++(gold[i] == 1 ? tp : fp);
    } else {
      ++(gold[i] == 1 ? fn : tn);
    }
  }
}

Metrics Confusion::metrics() const {
  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
  Metrics m;
  m.accuracy = ratio(static_cast<double>(tp + tn), static_cast<double>(total()));
  m.precision = ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
  m.recall = ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

Confusion evaluate(const Model& model, const std::vector<CorpusPage>& pages, double lambda,
                   Exec exec) {
  const auto count = static_cast<std::ptrdiff_t>(pages.size());
  std::vector<Labeling> predicted(pages.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::kParallel)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const CorpusPage& page = pages[static_cast<std::size_t>(k)];
    if (page.labels.empty()) continue;
    const PotentialSequence potentials =
        predict_potentials(model, page.blocks, page.edges, Exec::kSerial);
    predicted[static_cast<std::size_t>(k)] = viterbi(potentials, InferenceConfig{lambda});
  }
  Confusion confusion;
  for (std::size_t k = 0; k < pages.size(); ++k) confusion.add(pages[k].labels, predicted[k]);
  return confusion;
}

}  // namespace w2t
