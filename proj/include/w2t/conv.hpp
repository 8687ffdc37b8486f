#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "w2t/matrix.hpp"

namespace w2t {

// Bias-free 1-D convolution kernel, stride 1, zero "same" padding.
// weights are laid out [tap][in][out].
struct ConvKernel {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t width = 1;
  std::vector<double> weights;

  ConvKernel() = default;
  ConvKernel(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_width)
      : in(in_channels), out(out_channels), width(kernel_width),
        weights(in_channels * out_channels * kernel_width, 0.0) {}

  std::size_t size() const { return weights.size(); }
  std::size_t pad() const { return (width - 1) / 2; }
  double& at(std::size_t tap, std::size_t i, std::size_t o) { return weights[(tap * in + i) * out + o]; }
  double at(std::size_t tap, std::size_t i, std::size_t o) const {
    return weights[(tap * in + i) * out + o];
  }

  bool operator==(const ConvKernel&) const = default;
};

enum class Exec { kSerial, kParallel };

namespace conv {

// y = x * kernel. Throws std::invalid_argument on a channel mismatch or an
// empty sequence.
void forward(const Matrix& x, const ConvKernel& kernel, Matrix& y, Exec exec = Exec::kParallel);

// dw += dL/dw for y = x * kernel. dw has kernel.size() entries.
void backward_weights(const Matrix& x, const Matrix& dy, const ConvKernel& kernel,
                      std::span<double> dw, Exec exec = Exec::kParallel);

// dx = dL/dx for y = x * kernel.
void backward_input(const Matrix& dy, const ConvKernel& kernel, Matrix& dx,
                    Exec exec = Exec::kParallel);

}  // namespace conv

// Straightforward loops kept as the reference the optimized kernels are
// tested and benchmarked against.
namespace reference {

Matrix conv1d_forward(const Matrix& x, const ConvKernel& kernel);
std::vector<double> conv1d_backward_weights(const Matrix& x, const Matrix& dy,
                                            const ConvKernel& kernel);
Matrix conv1d_backward_input(const Matrix& dy, const ConvKernel& kernel);

}  // namespace reference

}  // namespace w2t
