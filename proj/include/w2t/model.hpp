#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "w2t/blocks.hpp"
#include "w2t/cnn.hpp"
#include "w2t/inference.hpp"
#include "w2t/scaler.hpp"

namespace w2t {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Missing, truncated, corrupt or incompatible model file.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything needed to run extraction: both scalers, both networks and the
// pairwise weight.
struct Model {
  FeatureScaler block_scaler{block_feature_layout()};
  FeatureScaler edge_scaler{edge_feature_layout()};
  CnnParams params;
  double lambda = 0.1;

  // Rounds every stored number to float32 so that a saved model loads back
  // identical to the one in memory.
  void round_to_storage();

  bool operator==(const Model&) const = default;
};

// Little-endian binary: "W2T1", u32 version, u64 feature layout hash,
// f32 lambda, two scalers (u32 dims, f32 mean[dims], f32 std[dims]), then
// both networks as 5 x (u32 in, u32 out, u32 width, f32 weights[]).
void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::filesystem::path& path);
// Throws ModelError on any format problem, including a feature layout that
// differs from the one compiled into this binary.
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

// Network outputs for one page's raw (unscaled) features.
PotentialSequence predict_potentials(const Model& model, const Matrix& raw_blocks,
                                     const Matrix& raw_edges, Exec exec = Exec::kParallel);

struct Extraction {
  std::vector<TextBlock> blocks;
  PotentialSequence potentials;
  Labeling labels;
  std::string text;
};

// Full pipeline on one HTML document. lambda overrides the model's value.
// A page without text blocks yields an empty extraction.
Extraction extract(const Model& model, std::string_view html,
                   std::optional<double> lambda = std::nullopt, Exec exec = Exec::kParallel);

}  // namespace w2t
