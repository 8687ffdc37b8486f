#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "w2t/model.hpp"

namespace w2t {
namespace {

constexpr char kMagic[4] = {'W', '2', 'T', '1'};

double to_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) { bytes(v, 4); }
  void u64(std::uint64_t v) { bytes(v, 8); }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

 private:
  void bytes(std::uint64_t v, int n) {
    char buf[8];
    for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(buf, n);
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
  std::uint64_t u64() { return bytes(8); }
  double f32() {
    const float f = std::bit_cast<float>(u32());
    if (!std::isfinite(f)) throw ModelError("model contains a non-finite value");
    return static_cast<double>(f);
  }
  void raw(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw ModelError("model file is truncated");
  }

 private:
  std::uint64_t bytes(int n) {
    unsigned char buf[8];
    raw(reinterpret_cast<char*>(buf), static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }
  std::istream& in_;
};

void write_scaler(Writer& w, const FeatureScaler& s) {
  w.u32(static_cast<std::uint32_t>(s.dims()));
  for (double m : s.mean()) w.f32(m);
  for (double d : s.stddev()) w.f32(d);
}

void read_scaler(Reader& r, FeatureScaler& s) {
  const std::uint32_t dims = r.u32();
  if (dims != s.dims()) throw ModelError("scaler has " + std::to_string(dims) + " dimensions");
  std::vector<double> mean(dims), stddev(dims);
  for (double& m : mean) m = r.f32();
  for (double& d : stddev) d = r.f32();
  try {
    s.set_statistics(std::move(mean), std::move(stddev));
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("invalid scaler: ") + e.what());
  }
}

void write_network(Writer& w, const Network& net) {
  for (const ConvKernel& k : net.layers) {
    w.u32(static_cast<std::uint32_t>(k.in));
    w.u32(static_cast<std::uint32_t>(k.out));
    w.u32(static_cast<std::uint32_t>(k.width));
    for (double x : k.weights) w.f32(x);
  }
}

void read_network(Reader& r, Network& net) {
  for (ConvKernel& k : net.layers) {
    const std::uint32_t in = r.u32(), out = r.u32(), width = r.u32();
    if (in != k.in || out != k.out || width != k.width) {
      throw ModelError("network layer shape does not match the architecture");
    }
    for (double& x : k.weights) x = r.f32();
  }
}

}  // namespace

void Model::round_to_storage() {
  lambda = to_f32(lambda);
  for (FeatureScaler* s : {&block_scaler, &edge_scaler}) {
    std::vector<double> mean = s->mean(), stddev = s->stddev();
    for (double& m : mean) m = to_f32(m);
    for (double& d : stddev) d = to_f32(d);
    s->set_statistics(std::move(mean), std::move(stddev));
  }
  for (Network* net : {&params.unary, &params.pairwise}) {
    for (ConvKernel& k : net->layers) {
      for (double& x : k.weights) x = to_f32(x);
    }
  }
}

void save_model(const Model& model, std::ostream& out) {
  out.write(kMagic, 4);
  Writer w(out);
  w.u32(kModelFormatVersion);
  w.u64(feature_layout_hash());
  w.f32(model.lambda);
  write_scaler(w, model.block_scaler);
  write_scaler(w, model.edge_scaler);
  write_network(w, model.params.unary);
  write_network(w, model.params.pairwise);
  if (!out) throw ModelError("failed to write model");
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot open " + path.string() + " for writing");
  save_model(model, out);
}

Model load_model(std::istream& in) {
  Reader r(in);
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw ModelError("not a model file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw ModelError("unsupported model format version " + std::to_string(version));
  }
  if (r.u64() != feature_layout_hash()) {
    throw ModelError("model was trained with a different feature layout");
  }
  Model model;
  model.lambda = r.f32();
  if (model.lambda < 0.0) throw ModelError("model has a negative lambda");
  read_scaler(r, model.block_scaler);
  read_scaler(r, model.edge_scaler);
  read_network(r, model.params.unary);
  read_network(r, model.params.pairwise);
  if (in.peek() != std::char_traits<char>::eof()) throw ModelError("trailing bytes after model");
  return model;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model " + path.string());
  return load_model(in);
}

PotentialSequence predict_potentials(const Model& model, const Matrix& raw_blocks,
                                     const Matrix& raw_edges, Exec exec) {
  if (raw_blocks.rows() == 0) return {};
  const Matrix unary = forward(model.params.unary, model.block_scaler.transform(raw_blocks), exec);
  Matrix pairwise(0, 4);
  if (raw_edges.rows() > 0) {
    pairwise = forward(model.params.pairwise, model.edge_scaler.transform(raw_edges), exec);
  }
  return PotentialSequence::from_probabilities(unary, pairwise);
}

Extraction extract(const Model& model, std::string_view html, std::optional<double> lambda,
                   Exec exec) {
  Page page = analyze_page(html);
  Extraction out;
  if (page.blocks.empty()) return out;
  const PageFeatures features = compute_page_features(page);
  out.potentials = predict_potentials(model, features.blocks, features.edges, exec);
  out.labels = viterbi(out.potentials, InferenceConfig{lambda.value_or(model.lambda)});
  out.text = extract_text(page.blocks, out.labels);
  out.blocks = std::move(page.blocks);
  return out;
}

}  // namespace w2t
