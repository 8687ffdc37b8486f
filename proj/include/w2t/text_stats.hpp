#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace w2t {

// Collapses whitespace runs (including NBSP) to single spaces and trims.
std::string normalize_whitespace(std::string_view text);

// Case-insensitive membership in the fixed English stopword list.
bool is_stopword(std::string_view word);
std::size_t stopword_count();

bool is_punctuation(char32_t c);  // one of , . ? ; : !
bool contains_email(std::string_view text);
bool contains_url(std::string_view text);

// Raw counts over a piece of text. Words are maximal alphanumeric runs;
// sentences end at . ! or ? followed by whitespace or the end of text.
struct TextStats {
  std::size_t chars = 0;  // code points
  std::size_t words = 0;
  std::size_t word_chars = 0;
  std::size_t stopwords = 0;
  std::size_t capitalized_words = 0;
  std::size_t punctuation = 0;
  std::size_t digits = 0;
  std::size_t sentences = 0;
  bool ends_with_punctuation = false;
  bool ends_with_question_mark = false;
  bool has_copyright = false;
  bool has_email = false;
  bool has_url = false;
  bool has_year = false;
};

TextStats compute_text_stats(std::string_view text);

}  // namespace w2t
