#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "w2t/scaler.hpp"

namespace w2t {

namespace {
constexpr double kMinSpread = 1e-12;
}

FeatureScaler::FeatureScaler(const std::vector<FeatureSpec>& layout) {
  for (const FeatureSpec& f : layout) {
    binary_.push_back(f.binary);
    clipped_.push_back(f.clipped);
    lo_.push_back(f.lo);
    hi_.push_back(f.hi);
  }
  mean_.assign(layout.size(), 0.0);
  std_.assign(layout.size(), 1.0);
}

double FeatureScaler::clip(std::size_t d, double x) const {
  return clipped_[d] ? std::clamp(x, lo_[d], hi_[d]) : x;
}

void FeatureScaler::fit(const std::vector<const Matrix*>& samples) {
  const std::size_t dims = binary_.size();
  std::size_t count = 0;
  std::vector<double> sum(dims, 0.0);
  for (const Matrix* m : samples) {
    if (m->rows() > 0 && m->cols() != dims) throw std::invalid_argument("feature width mismatch");
    for (std::size_t r = 0; r < m->rows(); ++r) {
      for (std::size_t d = 0; d < dims; ++d) sum[d] += clip(d, (*m)(r, d));
    }
    count += m->rows();
  }
  if (count == 0) throw std::invalid_argument("cannot fit a scaler on an empty corpus");

  std::vector<double> mean(dims);
  for (std::size_t d = 0; d < dims; ++d) mean[d] = sum[d] / static_cast<double>(count);
  // Second pass for a numerically stable variance.
  std::vector<double> sq(dims, 0.0);
  for (const Matrix* m : samples) {
    for (std::size_t r = 0; r < m->rows(); ++r) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double dev = clip(d, (*m)(r, d)) - mean[d];
        sq[d] += dev * dev;
      }
    }
  }
  for (std::size_t d = 0; d < dims; ++d) {
    if (binary_[d]) {
      mean_[d] = 0.0;
      std_[d] = 1.0;
      continue;
    }
    const double sd = std::sqrt(sq[d] / static_cast<double>(count));
    mean_[d] = mean[d];
    std_[d] = sd > kMinSpread ? sd : 1.0;
  }
}

void FeatureScaler::apply(Matrix& features) const {
  if (features.rows() > 0 && features.cols() != binary_.size()) {
    throw std::invalid_argument("feature width mismatch");
  }
  for (std::size_t r = 0; r < features.rows(); ++r) {
    auto row = features.row(r);
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (binary_[d]) continue;
      row[d] = (clip(d, row[d]) - mean_[d]) / std_[d];
    }
  }
}

Matrix FeatureScaler::transform(const Matrix& features) const {
  Matrix out = features;
  apply(out);
  return out;
}

void FeatureScaler::set_statistics(std::vector<double> mean, std::vector<double> stddev) {
  if (mean.size() != binary_.size() || stddev.size() != binary_.size()) {
    throw std::invalid_argument("scaler statistics do not match the feature layout");
  }
  for (double s : stddev) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("scaler std must be positive");
  }
  mean_ = std::move(mean);
  std_ = std::move(stddev);
}

}  // namespace w2t
