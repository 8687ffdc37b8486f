#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "w2t/cnn.hpp"

namespace w2t {
namespace {

constexpr std::array<std::size_t, kLayers> kWidths = {1, 1, 3, 3, 3};

Network make_network(std::size_t inputs, std::size_t outputs, std::size_t expected) {
  const std::array<std::size_t, kLayers + 1> channels = {inputs, 50, 50, 50, 10, outputs};
  Network net;
  for (std::size_t l = 0; l < kLayers; ++l) {
    net.layers[l] = ConvKernel(channels[l], channels[l + 1], kWidths[l]);
  }
  if (net.parameter_count() != expected) {
    throw std::logic_error("network parameter count does not match its architecture");
  }
  return net;
}

}  // namespace

Network Network::unary() { return make_network(128, 2, kUnaryParameters); }
Network Network::pairwise() { return make_network(25, 4, kPairwiseParameters); }

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const ConvKernel& k : layers) n += k.size();
  return n;
}

bool Network::all_finite() const {
  for (const ConvKernel& k : layers) {
    for (double w : k.weights) {
      if (!std::isfinite(w)) return false;
    }
  }
  return true;
}

void initialize(Network& net, Rng& rng) {
  for (ConvKernel& k : net.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(k.in * k.width));
    for (double& w : k.weights) w = rng.uniform(-limit, limit);
  }
}

DropoutMasks sample_dropout_masks(const Network& net, std::size_t length, double rate, Rng& rng) {
  DropoutMasks masks;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t l = 0; l + 1 < kLayers; ++l) {
    masks[l] = Matrix(length, net.layers[l].out);
    for (double& m : masks[l].values()) m = rng.bernoulli(rate) ? 0.0 : keep_scale;
  }
  return masks;
}

Matrix softmax(const Matrix& logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto z = logits.row(r);
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    auto p = probs.row(r);
    for (std::size_t c = 0; c < z.size(); ++c) {
      p[c] = std::exp(z[c] - mx);
      sum += p[c];
    }
    for (double& v : p) v /= sum;
  }
  return probs;
}

ForwardTrace forward_trace(const Network& net, const Matrix& input, const DropoutMasks* masks,
                           Exec exec) {
  if (input.rows() == 0) throw std::invalid_argument("forward pass over an empty sequence");
  if (input.cols() != net.inputs()) throw std::invalid_argument("input width does not match network");
  ForwardTrace trace;
  trace.masks = masks;
  trace.inputs[0] = input;
  for (std::size_t l = 0; l + 1 < kLayers; ++l) {
    Matrix& h = trace.inputs[l + 1];
    conv::forward(trace.inputs[l], net.layers[l], h, exec);
    auto& values = h.values();
    if (masks != nullptr) {
      const auto& m = (*masks)[l].values();
      if (m.size() != values.size()) throw std::invalid_argument("dropout mask shape mismatch");
      for (std::size_t k = 0; k < values.size(); ++k) values[k] = values[k] > 0.0 ? values[k] * m[k] : 0.0;
    } else {
      for (double& v : values) v = v > 0.0 ? v : 0.0;
    }
  }
  conv::forward(trace.inputs[kLayers - 1], net.layers[kLayers - 1], trace.logits, exec);
  trace.probs = softmax(trace.logits);
  return trace;
}

Matrix forward(const Network& net, const Matrix& input, Exec exec) {
  return forward_trace(net, input, nullptr, exec).probs;
}

Gradients zero_gradients(const Network& net) {
  Gradients g;
  for (std::size_t l = 0; l < kLayers; ++l) g[l].assign(net.layers[l].size(), 0.0);
  return g;
}

void backward(const Network& net, const ForwardTrace& trace, const Matrix& dlogits,
              Gradients& grads, Exec exec) {
  Matrix delta = dlogits;
  Matrix dx;
  for (std::size_t l = kLayers; l-- > 0;) {
    conv::backward_weights(trace.inputs[l], delta, net.layers[l], grads[l], exec);
    if (l == 0) break;
    conv::backward_input(delta, net.layers[l], dx, exec);
    const auto& act = trace.inputs[l].values();
    auto& d = dx.values();
    if (trace.masks != nullptr) {
      const auto& m = (*trace.masks)[l - 1].values();
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = act[k] > 0.0 ? d[k] * m[k] : 0.0;
    } else {
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = act[k] > 0.0 ? d[k] : 0.0;
    }
    std::swap(delta, dx);
  }
}

double cross_entropy_from_logits(const Matrix& logits, std::span<const int> targets) {
  if (targets.size() != logits.rows()) throw std::invalid_argument("label count does not match sequence");
  double loss = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto z = logits.row(r);
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - mx);
    loss += mx + std::log(sum) - z[static_cast<std::size_t>(targets[r])];
  }
  return loss;
}

Matrix cross_entropy_gradient(const Matrix& probs, std::span<const int> targets, double scale) {
  if (targets.size() != probs.rows()) throw std::invalid_argument("label count does not match sequence");
  Matrix grad(probs.rows(), probs.cols());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    for (std::size_t c = 0; c < probs.cols(); ++c) {
      const double onehot = static_cast<int>(c) == targets[r] ? 1.0 : 0.0;
      grad(r, c) = (probs(r, c) - onehot) * scale;
    }
  }
  return grad;
}

std::vector<int> pair_targets(std::span<const int> labels) {
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) out.push_back(2 * labels[i] + labels[i + 1]);
  return out;
}

double unary_loss(const Matrix& unary_probs, std::span<const int> labels) {
  if (labels.size() != unary_probs.rows()) throw std::invalid_argument("label count does not match blocks");
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    loss -= std::log(unary_probs(i, static_cast<std::size_t>(labels[i])));
  }
  return loss;
}

double pairwise_loss(const Matrix& pairwise_probs, std::span<const int> labels) {
  if (labels.size() != pairwise_probs.rows() + 1) {
    throw std::invalid_argument("label count does not match edges");
  }
  const std::vector<int> targets = pair_targets(labels);
  double loss = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    loss -= std::log(pairwise_probs(i, static_cast<std::size_t>(targets[i])));
  }
  return loss;
}

double loss_and_gradient(const Network& net, const Matrix& input, std::span<const int> targets,
                         const DropoutMasks* masks, Gradients& grads, double scale, Exec exec) {
  const ForwardTrace trace = forward_trace(net, input, masks, exec);
  const double loss = cross_entropy_from_logits(trace.logits, targets);
  backward(net, trace, cross_entropy_gradient(trace.probs, targets, scale), grads, exec);
  return loss;
}

TrainState::TrainState(Network net)
    : params(std::move(net)), first_moment(zero_gradients(params)), second_moment(zero_gradients(params)) {}

void adam_step(TrainState& state, const Gradients& grads) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t l = 0; l < kLayers; ++l) {
    auto& w = state.params.layers[l].weights;
    auto& m = state.first_moment[l];
    auto& v = state.second_moment[l];
    const auto& g = grads[l];
    if (g.size() != w.size()) throw std::invalid_argument("gradient shape mismatch");
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double gk = g[k] + state.weight_decay * w[k];
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * gk;
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * gk * gk;
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      w[k] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace w2t
