// Reference loops vs. the OpenMP kernels, plus the end-to-end stages.
#include <benchmark/benchmark.h>

#include "w2t/blocks.hpp"
#include "w2t/cnn.hpp"
#include "w2t/conv.hpp"
#include "w2t/model.hpp"
#include "w2t/random.hpp"
#include "w2t/synthetic.hpp"

using namespace w2t;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

ConvKernel random_kernel(std::size_t in, std::size_t out, std::size_t width, Rng& rng) {
  ConvKernel k(in, out, width);
  for (double& w : k.weights) w = rng.uniform(-0.5, 0.5);
  return k;
}

void BM_ConvForwardReference(benchmark::State& state) {
  Rng rng(1);
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(rows, 50, rng);
  const ConvKernel k = random_kernel(50, 50, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(reference::conv1d_forward(x, k));
}

void BM_ConvForward(benchmark::State& state, Exec exec) {
  Rng rng(1);
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(rows, 50, rng);
  const ConvKernel k = random_kernel(50, 50, 3, rng);
  Matrix y;
  for (auto _ : state) {
    conv::forward(x, k, y, exec);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_ConvBackwardReference(benchmark::State& state) {
  Rng rng(2);
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(rows, 50, rng);
  const Matrix dy = random_matrix(rows, 50, rng);
  const ConvKernel k = random_kernel(50, 50, 3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::conv1d_backward_weights(x, dy, k));
    benchmark::DoNotOptimize(reference::conv1d_backward_input(dy, k));
  }
}

void BM_ConvBackward(benchmark::State& state, Exec exec) {
  Rng rng(2);
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(rows, 50, rng);
  const Matrix dy = random_matrix(rows, 50, rng);
  const ConvKernel k = random_kernel(50, 50, 3, rng);
  std::vector<double> dw(k.size());
  Matrix dx;
  for (auto _ : state) {
    conv::backward_weights(x, dy, k, dw, exec);
    conv::backward_input(dy, k, dx, exec);
    benchmark::DoNotOptimize(dw.data());
    benchmark::DoNotOptimize(dx.data());
  }
}

void BM_UnaryForward(benchmark::State& state, Exec exec) {
  Rng rng(3);
  Network net = Network::unary();
  initialize(net, rng);
  const Matrix x = random_matrix(static_cast<std::size_t>(state.range(0)), 128, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, x, exec));
}

void BM_PageFeatures(benchmark::State& state) {
  Rng rng(4);
  const std::string html = generate_large_page(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const Page page = analyze_page(html);
    benchmark::DoNotOptimize(compute_page_features(page));
  }
}

void BM_Extract(benchmark::State& state) {
  Rng rng(5);
  Model model;
  initialize(model.params.unary, rng);
  initialize(model.params.pairwise, rng);
  const std::string html = generate_large_page(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract(model, html));
}

}  // namespace

BENCHMARK(BM_ConvForwardReference)->Arg(9)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_ConvForward, serial, Exec::kSerial)->Arg(9)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_ConvForward, parallel, Exec::kParallel)->Arg(9)->Arg(200)->Arg(2000);
BENCHMARK(BM_ConvBackwardReference)->Arg(9)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_ConvBackward, serial, Exec::kSerial)->Arg(9)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_ConvBackward, parallel, Exec::kParallel)->Arg(9)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_UnaryForward, serial, Exec::kSerial)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_UnaryForward, parallel, Exec::kParallel)->Arg(200)->Arg(2000);
BENCHMARK(BM_PageFeatures)->Arg(10)->Arg(60);
BENCHMARK(BM_Extract)->Arg(10)->Arg(60);

BENCHMARK_MAIN();
