#pragma once

#include <cstddef>
#include <vector>

#include "w2t/blocks.hpp"
#include "w2t/matrix.hpp"

namespace w2t {

// Per-dimension clip + z-score normalization. Binary dimensions pass
// through unchanged.
class FeatureScaler {
 public:
  FeatureScaler() = default;
  explicit FeatureScaler(const std::vector<FeatureSpec>& layout);

  // Fits mean and population standard deviation over the rows of all
  // matrices (after clipping). Dimensions with zero spread get std = 1.
  // Throws std::invalid_argument when there are no rows.
  void fit(const std::vector<const Matrix*>& samples);

  void apply(Matrix& features) const;
  Matrix transform(const Matrix& features) const;

  std::size_t dims() const { return mean_.size(); }
  bool is_binary(std::size_t d) const { return binary_[d]; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return std_; }

  // Used when loading a model; sizes must match the layout.
  void set_statistics(std::vector<double> mean, std::vector<double> stddev);

  bool operator==(const FeatureScaler&) const = default;

 private:
  double clip(std::size_t d, double x) const;

  std::vector<bool> binary_;
  std::vector<bool> clipped_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> mean_;
  std::vector<double> std_;
};

}  // namespace w2t
