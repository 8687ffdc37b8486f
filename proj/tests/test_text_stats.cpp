#include <gtest/gtest.h>

#include <regex>

#include "w2t/random.hpp"
#include "w2t/text_stats.hpp"

using namespace w2t;

TEST(Whitespace, Normalize) {
  EXPECT_EQ(normalize_whitespace("  a \n\t b\xc2\xa0\xc2\xa0" "c  "), "a b c");
  EXPECT_EQ(normalize_whitespace(""), "");
  EXPECT_EQ(normalize_whitespace(" \n "), "");
}

TEST(Stopwords, ListIsFixedAndCaseInsensitive) {
  EXPECT_GE(stopword_count(), 140u);
  EXPECT_LE(stopword_count(), 160u);
  for (const char* w : {"the", "The", "AND", "of", "which", "was"}) EXPECT_TRUE(is_stopword(w)) << w;
  for (const char* w : {"river", "Copyright", "", "x1"}) EXPECT_FALSE(is_stopword(w)) << w;
}

TEST(Punctuation, Set) {
  for (char32_t c : {U',', U'.', U'?', U';', U':', U'!'}) EXPECT_TRUE(is_punctuation(c));
  for (char32_t c : {U'-', U'\'', U'(', U'a', U' '}) EXPECT_FALSE(is_punctuation(c));
}

TEST(Patterns, EmailAndUrl) {
  EXPECT_TRUE(contains_email("write to example@mail.com today"));
  EXPECT_TRUE(contains_email("a.b-c@x.y.org"));
  EXPECT_FALSE(contains_email("user@localhost"));
  EXPECT_FALSE(contains_email("@mail.com"));
  EXPECT_FALSE(contains_email("no at sign"));
  EXPECT_TRUE(contains_url("see http://x.io"));
  EXPECT_TRUE(contains_url("https://example.org/path"));
  EXPECT_TRUE(contains_url("visit www.example.com"));
  EXPECT_FALSE(contains_url("ftp://x.io"));
  EXPECT_FALSE(contains_url("awww.x"));
}

TEST(Stats, HelloWorld) {
  const TextStats s = compute_text_stats("Hello world.");
  EXPECT_EQ(s.chars, 12u);
  EXPECT_EQ(s.words, 2u);
  EXPECT_EQ(s.word_chars, 10u);
  EXPECT_EQ(s.stopwords, 0u);
  EXPECT_EQ(s.capitalized_words, 1u);
  EXPECT_EQ(s.punctuation, 1u);
  EXPECT_EQ(s.sentences, 1u);
  EXPECT_TRUE(s.ends_with_punctuation);
  EXPECT_FALSE(s.ends_with_question_mark);
}

TEST(Stats, FlagsOnMixedString) {
  const TextStats s = compute_text_stats("Copyright \xc2\xa9 2016 example@mail.com http://x.io");
  EXPECT_TRUE(s.has_copyright);
  EXPECT_TRUE(s.has_email);
  EXPECT_TRUE(s.has_url);
  EXPECT_TRUE(s.has_year);
  EXPECT_EQ(s.digits, 4u);
}

TEST(Stats, Years) {
  EXPECT_TRUE(compute_text_stats("in 1999").has_year);
  EXPECT_TRUE(compute_text_stats("2016").has_year);
  EXPECT_FALSE(compute_text_stats("in 3999").has_year);
  EXPECT_FALSE(compute_text_stats("in 0999").has_year);
  EXPECT_FALSE(compute_text_stats("12016").has_year);
  EXPECT_FALSE(compute_text_stats("20a6").has_year);
}

TEST(Stats, Sentences) {
  EXPECT_EQ(compute_text_stats("One. Two! Three? Four").sentences, 4u);
  EXPECT_EQ(compute_text_stats("3.14 is pi").sentences, 1u);
  EXPECT_EQ(compute_text_stats("").sentences, 0u);
  EXPECT_TRUE(compute_text_stats("Why?").ends_with_question_mark);
}

// Oracle: the same counts from regular expressions, on ASCII text.
TEST(Stats, MatchesRegexOracleOnRandomAscii) {
  const std::string alphabet = "abcXYZ019 .,;:!?-'the and of";
  Rng rng(3);
  const std::regex word("[A-Za-z0-9]+");
  const std::regex sentence_end("[.!?]\\s");
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const std::size_t len = rng.index(60);
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng.index(alphabet.size())];

    std::size_t words = 0, word_chars = 0, capitals = 0, stop = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), word); it != std::sregex_iterator(); ++it) {
      const std::string w = it->str();
      ++words;
      word_chars += w.size();
      if (w[0] >= 'A' && w[0] <= 'Z') ++capitals;
      if (is_stopword(w)) ++stop;
    }
    std::size_t punct = 0, digits = 0;
    for (char c : text) {
      if (std::string_view(",.?;:!").find(c) != std::string_view::npos) ++punct;
      if (c >= '0' && c <= '9') ++digits;
    }
    // Sentences: pieces between terminator+whitespace splits that contain a word.
    std::size_t sentences = 0;
    for (auto it = std::sregex_token_iterator(text.begin(), text.end(), sentence_end, -1);
         it != std::sregex_token_iterator(); ++it) {
      const std::string piece = it->str();
      if (std::regex_search(piece, word)) ++sentences;
    }

    const TextStats s = compute_text_stats(text);
    ASSERT_EQ(s.chars, text.size()) << text;
    EXPECT_EQ(s.words, words) << text;
    EXPECT_EQ(s.word_chars, word_chars) << text;
    EXPECT_EQ(s.capitalized_words, capitals) << text;
    EXPECT_EQ(s.stopwords, stop) << text;
    EXPECT_EQ(s.punctuation, punct) << text;
    EXPECT_EQ(s.digits, digits) << text;
    EXPECT_EQ(s.sentences, sentences) << "[" << text << "]";
  }
}
