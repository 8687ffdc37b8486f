#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "w2t/conv.hpp"
#include "w2t/matrix.hpp"
#include "w2t/random.hpp"

namespace w2t {

inline constexpr std::size_t kLayers = 5;
inline constexpr std::size_t kUnaryParameters = 17960;
inline constexpr std::size_t kPairwiseParameters = 12870;

// Five bias-free convolutions: k=1, k=1, k=3, k=3, k=3 with ReLU between
// layers and a softmax over the last layer's channels.
struct Network {
  std::array<ConvKernel, kLayers> layers;

  // 128 -> 50 -> 50 -> 50 -> 10 -> 2
  static Network unary();
  // 25 -> 50 -> 50 -> 50 -> 10 -> 4
  static Network pairwise();

  std::size_t inputs() const { return layers.front().in; }
  std::size_t outputs() const { return layers.back().out; }
  std::size_t parameter_count() const;
  bool all_finite() const;

  bool operator==(const Network&) const = default;
};

// Unary and pairwise networks.
struct CnnParams {
  Network unary = Network::unary();
  Network pairwise = Network::pairwise();

  bool operator==(const CnnParams&) const = default;
};

// He-style uniform initialization scaled by fan-in.
void initialize(Network& net, Rng& rng);

// Inverted-dropout scale factors (0 or 1/(1-rate)) for the four hidden
// activations of a sequence of the given length.
using DropoutMasks = std::array<Matrix, kLayers - 1>;
DropoutMasks sample_dropout_masks(const Network& net, std::size_t length, double rate, Rng& rng);

// Activations recorded by a forward pass for backpropagation.
struct ForwardTrace {
  std::array<Matrix, kLayers> inputs;  // input of each layer (post ReLU/dropout)
  Matrix logits;
  Matrix probs;
  const DropoutMasks* masks = nullptr;
};

// Eval-mode forward pass: per-position softmax probabilities.
// Throws std::invalid_argument for an empty sequence or wrong width.
Matrix forward(const Network& net, const Matrix& input, Exec exec = Exec::kParallel);

// Forward pass that keeps the activations. masks == nullptr disables dropout.
ForwardTrace forward_trace(const Network& net, const Matrix& input, const DropoutMasks* masks,
                           Exec exec = Exec::kParallel);

using Gradients = std::array<std::vector<double>, kLayers>;
Gradients zero_gradients(const Network& net);

// Adds the gradient of the loss w.r.t. all kernels, given dL/dlogits.
void backward(const Network& net, const ForwardTrace& trace, const Matrix& dlogits,
              Gradients& grads, Exec exec = Exec::kParallel);

// Row-wise softmax with max subtraction.
Matrix softmax(const Matrix& logits);

// -sum_i log p_i(target_i), computed stably from logits.
double cross_entropy_from_logits(const Matrix& logits, std::span<const int> targets);

// dL/dlogits of the cross-entropy above, multiplied by scale.
Matrix cross_entropy_gradient(const Matrix& probs, std::span<const int> targets, double scale = 1.0);

// Pairwise class of an edge: 2 * label_i + label_{i+1}.
std::vector<int> pair_targets(std::span<const int> labels);

// -sum log p_i(l_i). Throws std::invalid_argument on a length mismatch.
double unary_loss(const Matrix& unary_probs, std::span<const int> labels);
// -sum log p_{i,i+1}(l_i, l_{i+1}) over the n-1 edges of n labels.
double pairwise_loss(const Matrix& pairwise_probs, std::span<const int> labels);

// Cross-entropy of one sequence plus its gradient (accumulated into grads,
// multiplied by scale). Returns the unscaled loss.
double loss_and_gradient(const Network& net, const Matrix& input, std::span<const int> targets,
                         const DropoutMasks* masks, Gradients& grads, double scale = 1.0,
                         Exec exec = Exec::kParallel);

// Optimizer state for one network.
struct TrainState {
  Network params;
  Gradients first_moment;
  Gradients second_moment;
  std::size_t step = 0;
  double learning_rate = 1e-3;
  double dropout = 0.2;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  explicit TrainState(Network net);
};

// One Adam update with bias correction. The L2 term weight_decay * theta is
// added to the loss gradient before the moment updates.
void adam_step(TrainState& state, const Gradients& grads);

}  // namespace w2t
