#include <cctype>
#include <string>
#include <string_view>

#include "w2t/dom.hpp"
#include "w2t/text_stats.hpp"
#include "w2t/utf8.hpp"

namespace w2t {
namespace {

bool is_symbol_codepoint(char32_t c) {
  return (c >= 0x80 && c <= 0xBF) || c == 0xD7 || c == 0xF7 || (c >= 0x2000 && c <= 0x2BFF) ||
         (c >= 0x3000 && c <= 0x303F) || (c >= 0xFE30 && c <= 0xFE4F) || c == 0xFFFD ||
         (c >= 0x1F000 && c <= 0x1FAFF);
}

bool is_word_codepoint(char32_t c) {
  if (c < 0x80) return std::isalnum(static_cast<int>(c)) != 0;
  return !is_symbol_codepoint(c) && !is_space_codepoint(c);
}

bool is_upper_codepoint(char32_t c) {
  if (c < 0x80) return c >= U'A' && c <= U'Z';
  return (c >= 0xC0 && c <= 0xDE && c != 0xD7) || (c >= 0x391 && c <= 0x3A9) ||
         (c >= 0x410 && c <= 0x42F);
}

bool is_email_local(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '%' ||
         c == '+' || c == '-';
}

bool is_domain_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
}

bool iequals_at(std::string_view text, std::size_t pos, std::string_view needle) {
  if (pos + needle.size() > text.size()) return false;
  for (std::size_t k = 0; k < needle.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(text[pos + k])) != needle[k]) return false;
  }
  return true;
}

}  // namespace

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t c = utf8::next(text, pos);
    if (is_space_codepoint(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    utf8::append(out, c);
  }
  return out;
}

bool is_punctuation(char32_t c) {
  return c == U',' || c == U'.' || c == U'?' || c == U';' || c == U':' || c == U'!';
}

// local@domain.tld with a TLD of at least two letters.
bool contains_email(std::string_view text) {
  for (std::size_t at = text.find('@'); at != std::string_view::npos; at = text.find('@', at + 1)) {
    if (at == 0 || !is_email_local(text[at - 1])) continue;
    std::size_t end = at + 1;
    while (end < text.size() && is_domain_char(text[end])) ++end;
    std::string_view domain = text.substr(at + 1, end - at - 1);
    while (!domain.empty() && (domain.back() == '.' || domain.back() == '-')) domain.remove_suffix(1);
    const std::size_t dot = domain.rfind('.');
    if (dot == std::string_view::npos || dot == 0) continue;
    const std::string_view tld = domain.substr(dot + 1);
    bool letters = tld.size() >= 2;
    for (char c : tld) letters = letters && std::isalpha(static_cast<unsigned char>(c));
    if (letters) return true;
  }
  return false;
}

// http(s):// schemes or a leading "www." on a token.
bool contains_url(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (iequals_at(text, i, "http://") || iequals_at(text, i, "https://")) return true;
    if (iequals_at(text, i, "www.") && i + 4 < text.size() &&
        std::isalnum(static_cast<unsigned char>(text[i + 4])) &&
        (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1])))) {
      return true;
    }
  }
  return false;
}

TextStats compute_text_stats(std::string_view text) {
  TextStats stats;
  std::string word;
  std::size_t word_len = 0;
  bool word_capitalized = false;
  bool sentence_has_word = false;
  char32_t last = 0;
  char32_t pending_terminator = 0;

  auto finish_word = [&] {
    if (word_len == 0) return;
    ++stats.words;
    stats.word_chars += word_len;
    if (word_capitalized) ++stats.capitalized_words;
    if (is_stopword(word)) ++stats.stopwords;
    if (word.size() == 4 && word_len == 4 && (word[0] == '1' || word[0] == '2')) {
      bool digits = true;
      for (char c : word) digits = digits && std::isdigit(static_cast<unsigned char>(c));
      stats.has_year = stats.has_year || digits;
    }
    sentence_has_word = true;
    word.clear();
    word_len = 0;
  };
  auto finish_sentence = [&] {
    if (sentence_has_word) ++stats.sentences;
    sentence_has_word = false;
  };

  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t start = pos;
    const char32_t c = utf8::next(text, pos);
    ++stats.chars;
    if (pending_terminator != 0) {
      if (is_space_codepoint(c)) finish_sentence();
      pending_terminator = 0;
    }
    if (is_word_codepoint(c)) {
      if (word_len == 0) word_capitalized = is_upper_codepoint(c);
      word.append(text.substr(start, pos - start));
      ++word_len;
    } else {
      finish_word();
    }
    if (c < 0x80 && std::isdigit(static_cast<int>(c))) ++stats.digits;
    if (is_punctuation(c)) ++stats.punctuation;
    if (c == U'.' || c == U'!' || c == U'?') pending_terminator = c;
    if (c == 0xA9) stats.has_copyright = true;
    if (!is_space_codepoint(c)) last = c;
  }
  finish_word();
  finish_sentence();

  stats.ends_with_punctuation = is_punctuation(last);
  stats.ends_with_question_mark = last == U'?';
  stats.has_email = contains_email(text);
  stats.has_url = contains_url(text);
  return stats;
}

}  // namespace w2t
