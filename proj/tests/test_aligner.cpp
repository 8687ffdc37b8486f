#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "w2t/aligner.hpp"
#include "w2t/random.hpp"
#include "w2t/utf8.hpp"

using namespace w2t;

namespace {

const char* kWords[] = {"river", "stone", "the", "of", "market", "Council", "and", "winter", "road",
                        "a", "report", "said", "bridge", "north", "with", "new", "plan", "water",
                        "year", "city", "is", "light", "morning", "was", "for", "local", "trade"};

std::string random_sentence(Rng& rng, std::size_t words) {
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += kWords[rng.index(std::size(kWords))];
    if (rng.bernoulli(0.2)) s += std::to_string(rng.index(100));
  }
  return s;
}

std::size_t occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++count;
  return count;
}

// Blocks of at least 10 non-space characters whose normalized text occurs
// exactly once in the normalized page, the preconditions of exact recovery.
std::vector<std::string> distinct_blocks(Rng& rng, std::size_t n, std::size_t max_words) {
  for (;;) {
    std::vector<std::string> texts;
    while (texts.size() < n) {
      std::string s = random_sentence(rng, 1 + rng.index(max_words));
      if (normalize_for_matching(s).size() >= 10) texts.push_back(s);
    }
    std::string page;
    for (const auto& t : texts) page += normalize_for_matching(t);
    const bool unique = std::all_of(texts.begin(), texts.end(), [&](const std::string& t) {
      return occurrences(page, normalize_for_matching(t)) == 1;
    });
    if (unique) return texts;
  }
}

std::vector<TextBlock> make_blocks(const std::vector<std::string>& texts) {
  std::vector<TextBlock> blocks(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    blocks[i].index = i;
    blocks[i].text = texts[i];
  }
  return blocks;
}

std::string clean_of(const std::vector<std::string>& texts, const std::vector<int>& labels) {
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (labels[i] == 1) out += texts[i] + "\n\n";
  }
  return out;
}

std::u32string u32(std::string_view s) { return utf8::decode(normalize_for_matching(s)); }

}  // namespace

TEST(Normalize, RemovesAllWhitespace) {
  EXPECT_EQ(normalize_for_matching("  a b\n\tC  "), "abC");
  EXPECT_EQ(normalize_for_matching("x\xc2\xa0y"), "xy");
  EXPECT_EQ(normalize_for_matching(""), "");
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const std::string s = random_sentence(rng, 10);
    EXPECT_EQ(normalize_for_matching(normalize_for_matching(s)), normalize_for_matching(s));
  }
}

TEST(Threshold, TwoThirds) {
  EXPECT_TRUE(meets_content_threshold(2, 3));
  EXPECT_TRUE(meets_content_threshold(3, 3));
  EXPECT_FALSE(meets_content_threshold(1, 2));
  EXPECT_TRUE(meets_content_threshold(20, 30));
  EXPECT_FALSE(meets_content_threshold(19, 30));
  EXPECT_FALSE(meets_content_threshold(0, 0));
}

TEST(Align, RecoversLabelsFromAnExactSubset) {
  Rng rng(2);
  for (int page = 0; page < 100; ++page) {
    const std::size_t n = 20 + rng.index(41);
    const std::vector<std::string> texts = distinct_blocks(rng, n, 15);
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
    const AlignmentResult r = align(make_blocks(texts), clean_of(texts, labels));
    EXPECT_EQ(r.labels, labels) << "page " << page;
  }
}

TEST(Align, SmallSubset) {
  Rng rng(3);
  std::vector<std::string> texts;
  for (int i = 0; i < 8; ++i) texts.push_back(random_sentence(rng, 6));
  const std::vector<int> expected = {0, 0, 1, 0, 0, 1, 0, 0};
  const AlignmentResult r = align(make_blocks(texts), clean_of(texts, expected));
  EXPECT_EQ(r.labels, expected);
  EXPECT_DOUBLE_EQ(r.ratios[2], 1.0);
  EXPECT_GE(r.anchors, 1u);
}

TEST(Align, EmptyCleanTextMeansNoContent) {
  const AlignmentResult r = align(make_blocks({"one two", "three"}), "  \n");
  EXPECT_EQ(r.labels, (std::vector<int>{0, 0}));
  EXPECT_TRUE(align({}, "text").labels.empty());
}

TEST(Align, HeavilyEditedBlockIsNotContent) {
  Rng rng(4);
  std::vector<std::string> texts;
  for (int i = 0; i < 5; ++i) texts.push_back(random_sentence(rng, 12));
  // Replace 40% of block 2's characters in the clean text.
  std::string edited = texts[2];
  std::vector<std::size_t> letters;
  for (std::size_t i = 0; i < edited.size(); ++i) {
    if (edited[i] != ' ') letters.push_back(i);
  }
  const std::size_t replace = (letters.size() * 2 + 4) / 5;
  for (std::size_t k = 0; k < replace; ++k) edited[letters[k * letters.size() / replace]] = '#';
  const std::string clean = texts[0] + "\n" + texts[1] + "\n" + edited + "\n" + texts[4];
  const AlignmentResult r = align(make_blocks(texts), clean);
  EXPECT_EQ(r.labels, (std::vector<int>{1, 1, 0, 0, 1}));
  EXPECT_LE(r.ratios[2], 0.61);
}

TEST(Align, LightlyEditedBlockIsContent) {
  Rng rng(5);
  std::vector<std::string> texts;
  for (int i = 0; i < 5; ++i) texts.push_back(random_sentence(rng, 12));
  std::string edited = texts[2];
  for (std::size_t i = 0; i < edited.size(); i += 7) edited[i] = '#';
  const std::string clean = texts[1] + "\n" + edited + "\n" + texts[3];
  const AlignmentResult r = align(make_blocks(texts), clean);
  EXPECT_EQ(r.labels, (std::vector<int>{0, 1, 1, 1, 0}));
}

// Editing every 8th character leaves no 10-character anchor, so the whole
// text is one near-diagonal gap that the band easily contains.
TEST(Align, BandedPathMatchesFullDpNearTheDiagonal) {
  Rng rng(6);
  AlignerOptions small;
  small.full_dp_max_length = 40;
  small.band = 16;
  for (int page = 0; page < 20; ++page) {
    const std::vector<std::string> texts = distinct_blocks(rng, 30, 12);
    std::string clean;
    for (const auto& t : texts) clean += t + "\n";
    std::size_t visible = 0;
    for (char& c : clean) {
      if (c != ' ' && c != '\n' && ++visible % 8 == 0) c = '#';
    }
    const auto blocks = make_blocks(texts);
    const AlignmentResult full = align(blocks, clean);
    const AlignmentResult banded = align(blocks, clean, small);
    EXPECT_EQ(banded.anchors, 0u);
    EXPECT_EQ(banded.labels, std::vector<int>(30, 1));
    EXPECT_EQ(banded.labels, full.labels);
    EXPECT_EQ(banded.ratios, full.ratios);
    EXPECT_EQ(align_characters(u32([&] {
                                 std::string p;
                                 for (const auto& t : texts) p += t;
                                 return p;
                               }()),
                               u32(clean), small)
                  .banded_segments,
              1u);
  }
}

TEST(AlignCharacters, BandedSegmentsAreCounted) {
  // No shared 10-character windows, so everything is one gap.
  const std::u32string page = U"abcabcabcabcabcabcabcabcabcabcabcabcabcabcabcabcabcabc";
  const std::u32string clean = U"abcabcabcabcabcabcabcabcabcabcabcab";
  AlignerOptions small;
  small.full_dp_max_length = 20;
  small.band = 8;
  const CharacterAlignment banded = align_characters(page, clean, small);
  EXPECT_EQ(banded.banded_segments, 1u);
  const CharacterAlignment full = align_characters(page, clean);
  EXPECT_EQ(full.banded_segments, 0u);
  EXPECT_EQ(full.dp_segments, 1u);
  for (const auto& a : {banded, full}) {
    std::size_t matched = 0;
    for (auto p : a.clean_to_page) matched += p >= 0;
    EXPECT_EQ(matched, clean.size());
  }
}

TEST(AlignCharacters, MappingIsMonotoneAndMatchesEqualCharacters) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::string page_text, clean_text;
    for (int i = 0; i < 20; ++i) {
      const std::string s = random_sentence(rng, 1 + rng.index(8));
      page_text += s + " ";
      if (rng.bernoulli(0.6)) clean_text += (rng.bernoulli(0.2) ? "x" + s : s) + " ";
    }
    const std::u32string page = u32(page_text), clean = u32(clean_text);
    const CharacterAlignment a = align_characters(page, clean);
    ASSERT_EQ(a.clean_to_page.size(), clean.size());
    std::ptrdiff_t last = -1;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const std::ptrdiff_t p = a.clean_to_page[i];
      if (p < 0) continue;
      EXPECT_GT(p, last);
      EXPECT_EQ(page[static_cast<std::size_t>(p)], clean[i]);
      last = p;
    }
    std::size_t prev_clean = 0, prev_page = 0;
    for (const Anchor& anchor : a.anchors) {
      EXPECT_GE(anchor.length, kAnchorWindow);
      EXPECT_GE(anchor.clean, prev_clean);
      EXPECT_GE(anchor.page, prev_page);
      EXPECT_EQ(page.substr(anchor.page, anchor.length), clean.substr(anchor.clean, anchor.length));
      prev_clean = anchor.clean + anchor.length;
      prev_page = anchor.page + anchor.length;
    }
  }
}

TEST(AlignCharacters, RepeatedWindowsAreNotAnchors) {
  const std::u32string page = U"0123456789xx0123456789";
  const std::u32string clean = U"0123456789";
  const CharacterAlignment a = align_characters(page, clean);
  EXPECT_TRUE(a.anchors.empty());
}

TEST(CleanEval, StripsUrlLineAndMarkers) {
  EXPECT_EQ(normalize_for_matching(strip_cleaneval_markup("URL: http://x.org/a\n<h>Title\n<p>Body text.\n<l>item\n")),
            "TitleBodytext.item");
  EXPECT_EQ(strip_cleaneval_markup("<p>a <b> c"), " a <b> c");
  EXPECT_EQ(strip_cleaneval_markup(""), "");
}

// "morning" can be matched at the end of the first block's run or at the
// start of the third block at equal edit cost; the block-aware choice wins.
TEST(Align, EqualCostGapsLandOnBlockEdges) {
  const std::vector<std::string> texts = {"the trade said road31", "morning53 Council was market",
                                          "morning a bridge with"};
  const AlignmentResult r = align(make_blocks(texts), texts[0] + "\n" + texts[2]);
  EXPECT_EQ(r.labels, (std::vector<int>{1, 0, 1}));
  EXPECT_DOUBLE_EQ(r.ratios[2], 1.0);
  EXPECT_DOUBLE_EQ(r.ratios[1], 0.0);
}

TEST(Align, Deterministic) {
  Rng rng(9);
  const auto texts = distinct_blocks(rng, 40, 10);
  std::string clean;
  for (std::size_t i = 0; i < texts.size(); i += 3) clean += texts[i] + " ";
  const AlignmentResult a = align(make_blocks(texts), clean), b = align(make_blocks(texts), clean);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.ratios, b.ratios);
}
