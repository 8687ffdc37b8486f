#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "w2t/text_stats.hpp"

namespace w2t {
namespace {

// English stopwords, Snowball style. Kept sorted for binary search.
constexpr std::array<std::string_view, 153> kStopwords = {
    "a", "about", "above", "across", "after", "again", "against", "all",
    "along", "also", "although", "am", "among", "an", "and", "any",
    "are", "around", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "cannot",
    "could", "did", "do", "does", "doing", "don", "down", "during",
    "each", "few", "for", "from", "further", "had", "has", "have",
    "having", "he", "her", "here", "hers", "herself", "him", "himself",
    "his", "how", "however", "i", "if", "in", "into", "is",
    "it", "its", "itself", "just", "may", "me", "might", "more",
    "most", "must", "my", "myself", "no", "nor", "not", "now",
    "of", "off", "on", "once", "only", "or", "other", "ought",
    "our", "ours", "ourselves", "out", "over", "own", "per", "s",
    "same", "shall", "she", "should", "since", "so", "some", "such",
    "t", "than", "that", "the", "their", "theirs", "them", "themselves",
    "then", "there", "these", "they", "this", "those", "though", "through",
    "to", "too", "under", "unless", "until", "up", "upon", "us",
    "very", "via", "was", "we", "were", "what", "when", "where",
    "whether", "which", "while", "who", "whom", "why", "will", "with",
    "within", "without", "would", "yet", "you", "your", "yours", "yourself",
    "yourselves",
};

}  // namespace

bool is_stopword(std::string_view word) {
  std::string key(word);
  for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return std::binary_search(kStopwords.begin(), kStopwords.end(), std::string_view(key));
}

std::size_t stopword_count() { return kStopwords.size(); }

}  // namespace w2t
