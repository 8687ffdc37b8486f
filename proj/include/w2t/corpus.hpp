#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "w2t/conv.hpp"
#include "w2t/matrix.hpp"

namespace w2t {

enum class Split { kTrain, kValidation, kTest };

std::string_view split_name(Split split);
// Accepts train, validation/val/dev and test.
Split parse_split(std::string_view name);

// Raw features and gold labels of one page.
struct CorpusPage {
  std::string id;
  Matrix blocks;  // n x 128, unscaled
  Matrix edges;   // (n-1) x 25, unscaled
  std::vector<int> labels;
};

struct Corpus {
  std::vector<CorpusPage> train;
  std::vector<CorpusPage> validation;
  std::vector<CorpusPage> test;

  const std::vector<CorpusPage>& split(Split s) const;
  std::vector<CorpusPage>& split(Split s);
};

// Thrown for unreadable or inconsistent corpus files. ids lists the pages
// at fault.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& what, std::vector<std::string> ids)
      : std::runtime_error(what), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

struct ManifestEntry {
  Split split;
  std::string id;
};

// One "<split> <id>" pair per line; blank lines and '#' comments ignored.
std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
std::string format_manifest(const std::vector<ManifestEntry>& entries);

// Label files hold one "<0|1> <ratio>" line per block; only the first
// column is required when reading.
std::vector<int> parse_labels(std::string_view text);
std::string format_labels(const std::vector<int>& labels, const std::vector<double>& ratios);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Features plus labels for one page. Throws CorpusError if the label count
// does not match the page's block count.
CorpusPage make_corpus_page(std::string id, std::string_view html, std::vector<int> labels);

// Loads <dir>/<id>.html and <dir>/<id>.labels for every manifest entry.
// Pages are featurized in parallel; the result does not depend on the
// thread count. Throws CorpusError listing every offending id.
Corpus load_corpus(const std::filesystem::path& dir, const std::vector<ManifestEntry>& manifest,
                   Exec exec = Exec::kParallel);

}  // namespace w2t
