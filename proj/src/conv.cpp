#include <stdexcept>

#include "w2t/conv.hpp"

namespace w2t {
namespace {

// Below this many positions the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelMinRows = 64;

void check_input(const Matrix& x, const ConvKernel& kernel) {
  if (x.rows() == 0) throw std::invalid_argument("convolution over an empty sequence");
  if (x.cols() != kernel.in) throw std::invalid_argument("convolution channel mismatch");
}

// Rows are independent: each output row is written by exactly one thread,
// so results do not depend on the thread count.
void forward_rows(const Matrix& x, const ConvKernel& k, Matrix& y, bool parallel) {
  const auto rows = static_cast<std::ptrdiff_t>(x.rows());
  const auto length = x.rows();
  const std::size_t pad = k.pad();
  const std::size_t in = k.in;
  const std::size_t out = k.out;
  const double* w = k.weights.data();
#pragma omp parallel for schedule(static) if (parallel && x.rows() >= kParallelMinRows)
  for (std::ptrdiff_t t = 0; t < rows; ++t) {
    double* yr = y.data() + static_cast<std::size_t>(t) * out;
    for (std::size_t o = 0; o < out; ++o) yr[o] = 0.0;
    for (std::size_t tap = 0; tap < k.width; ++tap) {
      const std::ptrdiff_t s = t + static_cast<std::ptrdiff_t>(tap) - static_cast<std::ptrdiff_t>(pad);
      if (s < 0 || s >= static_cast<std::ptrdiff_t>(length)) continue;
      const double* xr = x.data() + static_cast<std::size_t>(s) * in;
      const double* wt = w + tap * in * out;
      for (std::size_t i = 0; i < in; ++i) {
        const double xv = xr[i];
        if (xv == 0.0) continue;
        const double* wi = wt + i * out;
        for (std::size_t o = 0; o < out; ++o) yr[o] += xv * wi[o];
      }
    }
  }
}

// Parallel over (tap, in) rows of dw; each row sums over t in order.
void weight_rows(const Matrix& x, const Matrix& dy, const ConvKernel& k, double* dw, bool parallel) {
  const std::size_t length = x.rows();
  const std::size_t pad = k.pad();
  const std::size_t in = k.in;
  const std::size_t out = k.out;
  const auto pairs = static_cast<std::ptrdiff_t>(k.width * in);
#pragma omp parallel for schedule(static) if (parallel && length * k.width * in >= 4096)
  for (std::ptrdiff_t p = 0; p < pairs; ++p) {
    const std::size_t tap = static_cast<std::size_t>(p) / in;
    const std::size_t i = static_cast<std::size_t>(p) % in;
    double* dwr = dw + static_cast<std::size_t>(p) * out;
    for (std::size_t t = 0; t < length; ++t) {
      const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t + tap) - static_cast<std::ptrdiff_t>(pad);
      if (s < 0 || s >= static_cast<std::ptrdiff_t>(length)) continue;
      const double xv = x(static_cast<std::size_t>(s), i);
      if (xv == 0.0) continue;
      const double* dyr = dy.data() + t * out;
      for (std::size_t o = 0; o < out; ++o) dwr[o] += xv * dyr[o];
    }
  }
}

// dx[s] = sum over taps of W[tap] . dy[s - tap + pad]; one thread per row s.
void input_rows(const Matrix& dy, const ConvKernel& k, Matrix& dx, bool parallel) {
  const std::size_t length = dy.rows();
  const std::size_t pad = k.pad();
  const std::size_t in = k.in;
  const std::size_t out = k.out;
  const auto rows = static_cast<std::ptrdiff_t>(length);
#pragma omp parallel for schedule(static) if (parallel && length >= kParallelMinRows)
  for (std::ptrdiff_t s = 0; s < rows; ++s) {
    double* dxr = dx.data() + static_cast<std::size_t>(s) * in;
    for (std::size_t i = 0; i < in; ++i) dxr[i] = 0.0;
    for (std::size_t tap = 0; tap < k.width; ++tap) {
      const std::ptrdiff_t t = s - static_cast<std::ptrdiff_t>(tap) + static_cast<std::ptrdiff_t>(pad);
      if (t < 0 || t >= rows) continue;
      const double* dyr = dy.data() + static_cast<std::size_t>(t) * out;
      const double* wt = k.weights.data() + tap * in * out;
      for (std::size_t i = 0; i < in; ++i) {
        const double* wi = wt + i * out;
        double acc = 0.0;
        for (std::size_t o = 0; o < out; ++o) acc += wi[o] * dyr[o];
        dxr[i] += acc;
      }
    }
  }
}

}  // namespace

namespace conv {

void forward(const Matrix& x, const ConvKernel& kernel, Matrix& y, Exec exec) {
  check_input(x, kernel);
  if (y.rows() != x.rows() || y.cols() != kernel.out) y.resize(x.rows(), kernel.out);
  forward_rows(x, kernel, y, exec == Exec::kParallel);
}

void backward_weights(const Matrix& x, const Matrix& dy, const ConvKernel& kernel,
                      std::span<double> dw, Exec exec) {
  check_input(x, kernel);
  if (dy.rows() != x.rows() || dy.cols() != kernel.out || dw.size() != kernel.size()) {
    throw std::invalid_argument("convolution gradient shape mismatch");
  }
  weight_rows(x, dy, kernel, dw.data(), exec == Exec::kParallel);
}

void backward_input(const Matrix& dy, const ConvKernel& kernel, Matrix& dx, Exec exec) {
  if (dy.rows() == 0 || dy.cols() != kernel.out) {
    throw std::invalid_argument("convolution gradient shape mismatch");
  }
  if (dx.rows() != dy.rows() || dx.cols() != kernel.in) dx.resize(dy.rows(), kernel.in);
  input_rows(dy, kernel, dx, exec == Exec::kParallel);
}

}  // namespace conv

namespace reference {

Matrix conv1d_forward(const Matrix& x, const ConvKernel& kernel) {
  check_input(x, kernel);
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
  const auto pad = static_cast<std::ptrdiff_t>(kernel.pad());
  Matrix y(x.rows(), kernel.out);
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    for (std::size_t o = 0; o < kernel.out; ++o) {
      double acc = 0.0;
      for (std::size_t tap = 0; tap < kernel.width; ++tap) {
        const std::ptrdiff_t s = t + static_cast<std::ptrdiff_t>(tap) - pad;
        if (s < 0 || s >= n) continue;
        for (std::size_t i = 0; i < kernel.in; ++i) {
          acc += x(static_cast<std::size_t>(s), i) * kernel.at(tap, i, o);
        }
      }
      y(static_cast<std::size_t>(t), o) = acc;
    }
  }
  return y;
}

std::vector<double> conv1d_backward_weights(const Matrix& x, const Matrix& dy,
                                            const ConvKernel& kernel) {
  check_input(x, kernel);
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
  const auto pad = static_cast<std::ptrdiff_t>(kernel.pad());
  std::vector<double> dw(kernel.size(), 0.0);
  for (std::size_t tap = 0; tap < kernel.width; ++tap) {
    for (std::size_t i = 0; i < kernel.in; ++i) {
      for (std::size_t o = 0; o < kernel.out; ++o) {
        double acc = 0.0;
        for (std::ptrdiff_t t = 0; t < n; ++t) {
          const std::ptrdiff_t s = t + static_cast<std::ptrdiff_t>(tap) - pad;
          if (s < 0 || s >= n) continue;
          acc += x(static_cast<std::size_t>(s), i) * dy(static_cast<std::size_t>(t), o);
        }
        dw[(tap * kernel.in + i) * kernel.out + o] = acc;
      }
    }
  }
  return dw;
}

Matrix conv1d_backward_input(const Matrix& dy, const ConvKernel& kernel) {
  const auto n = static_cast<std::ptrdiff_t>(dy.rows());
  const auto pad = static_cast<std::ptrdiff_t>(kernel.pad());
  Matrix dx(dy.rows(), kernel.in);
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    for (std::size_t tap = 0; tap < kernel.width; ++tap) {
      const std::ptrdiff_t s = t + static_cast<std::ptrdiff_t>(tap) - pad;
      if (s < 0 || s >= n) continue;
      for (std::size_t i = 0; i < kernel.in; ++i) {
        for (std::size_t o = 0; o < kernel.out; ++o) {
          dx(static_cast<std::size_t>(s), i) += kernel.at(tap, i, o) * dy(static_cast<std::size_t>(t), o);
        }
      }
    }
  }
  return dx;
}

}  // namespace reference
}  // namespace w2t
