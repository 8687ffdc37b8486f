#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "w2t/blocks.hpp"

namespace w2t {

inline constexpr std::size_t kAnchorWindow = 10;

// Removes all whitespace; case is preserved.
std::string normalize_for_matching(std::string_view text);

struct Anchor {
  std::size_t clean = 0;  // start in the normalized clean text
  std::size_t page = 0;   // start in the normalized page text
  std::size_t length = 0;
};

// Character-level alignment of a normalized clean text onto a normalized
// page text. clean_to_page[i] is the page position clean character i is
// matched to, or -1.
struct CharacterAlignment {
  std::vector<std::ptrdiff_t> clean_to_page;
  std::vector<Anchor> anchors;
  std::size_t dp_segments = 0;
  std::size_t banded_segments = 0;
};

struct AlignerOptions {
  std::size_t window = kAnchorWindow;
  std::size_t full_dp_max_length = 20000;
  std::size_t full_dp_max_cells = 50'000'000;
  std::size_t band = 2000;
};

// Unique-window anchoring followed by Levenshtein alignment of the gaps.
CharacterAlignment align_characters(std::u32string_view page, std::u32string_view clean,
                                    const AlignerOptions& options = {});

struct AlignmentResult {
  std::vector<int> labels;
  std::vector<double> ratios;  // matched characters / block characters
  std::size_t anchors = 0;
  std::size_t dp_segments = 0;
};

// True iff at least two thirds of the block's characters are matched.
bool meets_content_threshold(std::size_t matched, std::size_t total);

// Recovers per-block labels from a page's blocks and its cleaned text.
AlignmentResult align(const std::vector<TextBlock>& blocks, std::string_view clean_text,
                      const AlignerOptions& options = {});

// Drops a leading "URL:" line and CleanEval paragraph markers (<p>, <h>,
// <l>) from a gold cleaned-text file.
std::string strip_cleaneval_markup(std::string_view clean_file);

}  // namespace w2t
