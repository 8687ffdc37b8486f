#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "w2t/corpus.hpp"
#include "w2t/random.hpp"

namespace w2t {

// A generated page whose block labels are known by construction:
// navigation, sidebars, breadcrumbs, share links and footers are
// boilerplate, the article title and paragraphs are content.
struct SyntheticPage {
  std::string id;
  std::string html;
  std::vector<int> labels;  // one per block, in document order
  std::string clean_text;   // content block texts, one per line
};

struct SyntheticOptions {
  std::size_t min_paragraphs = 2;
  std::size_t max_paragraphs = 9;
};

SyntheticPage generate_page(const std::string& id, Rng& rng, const SyntheticOptions& options = {});

struct SyntheticCorpus {
  std::vector<SyntheticPage> pages;
  std::vector<ManifestEntry> manifest;
};

SyntheticCorpus generate_corpus(std::size_t train, std::size_t validation, std::size_t test,
                                std::uint64_t seed);

// Writes <id>.html, <id>.txt, <id>.labels and manifest.txt into dir.
void write_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

// The in-memory equivalent of writing and loading the corpus.
Corpus featurize(const SyntheticCorpus& corpus, Exec exec = Exec::kParallel);

// A long page (several hundred blocks) used for throughput checks.
std::string generate_large_page(Rng& rng, std::size_t paragraphs);

}  // namespace w2t
