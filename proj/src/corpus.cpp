#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "w2t/blocks.hpp"
#include "w2t/corpus.hpp"

namespace w2t {

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation" || name == "val" || name == "dev") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw std::invalid_argument("unknown split '" + std::string(name) + "'");
}

const std::vector<CorpusPage>& Corpus::split(Split s) const {
  switch (s) {
    case Split::kTrain:
      return train;
    case Split::kValidation:
      return validation;
    default:
      return test;
  }
}

std::vector<CorpusPage>& Corpus::split(Split s) {
  return const_cast<std::vector<CorpusPage>&>(static_cast<const Corpus*>(this)->split(s));
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string split, id, extra;
    if (!(fields >> split)) continue;
    if (!(fields >> id) || (fields >> extra)) {
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": expected '<split> <id>'");
    }
    entries.push_back({parse_split(split), id});
  }
  return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path));
}

std::string format_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const ManifestEntry& e : entries) {
    out += split_name(e.split);
    out += ' ';
    out += e.id;
    out += '\n';
  }
  return out;
}

std::vector<int> parse_labels(std::string_view text) {
  std::vector<int> labels;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "0" || first == "1") {
      labels.push_back(first == "1" ? 1 : 0);
    } else {
      throw std::invalid_argument("label lines must start with 0 or 1, got '" + first + "'");
    }
  }
  return labels;
}

std::string format_labels(const std::vector<int>& labels, const std::vector<double>& ratios) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double r = i < ratios.size() ? ratios[i] : static_cast<double>(labels[i]);
    std::snprintf(buf, sizeof buf, "%d %.4f\n", labels[i], r);
    out += buf;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CorpusPage make_corpus_page(std::string id, std::string_view html, std::vector<int> labels) {
  const Page page = analyze_page(html);
  if (labels.size() != page.blocks.size()) {
    throw CorpusError(id + ": " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(page.blocks.size()) + " blocks",
                      {id});
  }
  PageFeatures features = compute_page_features(page);
  return CorpusPage{std::move(id), std::move(features.blocks), std::move(features.edges),
                    std::move(labels)};
}

Corpus load_corpus(const std::filesystem::path& dir, const std::vector<ManifestEntry>& manifest,
                   Exec exec) {
  const auto count = static_cast<std::ptrdiff_t>(manifest.size());
  std::vector<CorpusPage> pages(manifest.size());
  std::vector<std::string> errors(manifest.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::kParallel)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const ManifestEntry& entry = manifest[static_cast<std::size_t>(k)];
    try {
      const std::string html = read_file(dir / (entry.id + ".html"));
      std::vector<int> labels = parse_labels(read_file(dir / (entry.id + ".labels")));
      pages[static_cast<std::size_t>(k)] = make_corpus_page(entry.id, html, std::move(labels));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }

  std::vector<std::string> bad;
  std::string message;
  for (std::size_t k = 0; k < manifest.size(); ++k) {
    if (errors[k].empty()) continue;
    bad.push_back(manifest[k].id);
    message += "\n  " + manifest[k].id + ": " + errors[k];
  }
  if (!bad.empty()) throw CorpusError("malformed corpus:" + message, bad);

  Corpus corpus;
  for (std::size_t k = 0; k < manifest.size(); ++k) {
    corpus.split(manifest[k].split).push_back(std::move(pages[k]));
  }
  return corpus;
}

}  // namespace w2t
