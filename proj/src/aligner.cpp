#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "w2t/aligner.hpp"
#include "w2t/dom.hpp"
#include "w2t/utf8.hpp"

namespace w2t {
namespace {

std::u32string strip_spaces(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t c = utf8::next(text, pos);
    if (!is_space_codepoint(c)) out.push_back(c);
  }
  return out;
}

struct WindowInfo {
  std::size_t count = 0;
  std::size_t first = 0;
};

std::unordered_map<std::u32string_view, WindowInfo> index_windows(std::u32string_view text,
                                                                  std::size_t window) {
  std::unordered_map<std::u32string_view, WindowInfo> out;
  if (text.size() < window) return out;
  out.reserve(text.size());
  for (std::size_t i = 0; i + window <= text.size(); ++i) {
    WindowInfo& info = out[text.substr(i, window)];
    if (info.count++ == 0) info.first = i;
  }
  return out;
}

enum Move : std::uint8_t { kMatch, kSkipPage, kSubstitute, kSkipClean };

// Levenshtein alignment of clean[cs, ce) onto page[ps, pe), restricted to a
// band around the scaled diagonal when half_band > 0.
void align_gap(std::u32string_view page, std::u32string_view clean, std::size_t cs, std::size_t ce,
               std::size_t ps, std::size_t pe, std::size_t half_band,
               std::vector<std::ptrdiff_t>& clean_to_page) {
  const std::size_t m = ce - cs;
  const std::size_t n = pe - ps;
  if (m == 0 || n == 0) return;

  std::vector<std::size_t> lo(m + 1), hi(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    if (half_band == 0) {
      lo[i] = 0;
      hi[i] = n;
    } else {
      const auto center = static_cast<std::size_t>(static_cast<double>(i) * static_cast<double>(n) /
                                                   static_cast<double>(m) + 0.5);
      lo[i] = center > half_band ? center - half_band : 0;
      hi[i] = std::min(n, center + half_band);
    }
  }
  lo[0] = 0;
  hi[m] = n;

  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;
  std::vector<std::vector<std::uint8_t>> moves(m + 1);
  std::vector<std::uint32_t> prev, cur;
  auto cost_at = [&](const std::vector<std::uint32_t>& row, std::size_t i, std::size_t j) {
    return (j < lo[i] || j > hi[i]) ? kInf : row[j - lo[i]];
  };

  prev.assign(hi[0] - lo[0] + 1, 0);
  moves[0].assign(prev.size(), kSkipPage);
  for (std::size_t j = lo[0]; j <= hi[0]; ++j) prev[j - lo[0]] = static_cast<std::uint32_t>(j);

  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t width = hi[i] - lo[i] + 1;
    cur.assign(width, kInf);
    moves[i].assign(width, kSkipClean);
    const char32_t c = clean[cs + i - 1];
    for (std::size_t j = lo[i]; j <= hi[i]; ++j) {
      std::uint32_t best = kInf;
      std::uint8_t move = kSkipClean;
      if (j > 0) {
        const std::uint32_t diag = cost_at(prev, i - 1, j - 1);
        if (diag < kInf && c == page[ps + j - 1]) {
          best = diag;
          move = kMatch;
        }
        if (j > lo[i]) {
          const std::uint32_t left = cur[j - 1 - lo[i]] + 1;
          if (left < best) {
            best = left;
            move = kSkipPage;
          }
        }
        if (diag < kInf && diag + 1 < best) {
          best = diag + 1;
          move = kSubstitute;
        }
      }
      const std::uint32_t up = cost_at(prev, i - 1, j);
      if (up < kInf && up + 1 < best) {
        best = up + 1;
        move = kSkipClean;
      }
      cur[j - lo[i]] = best;
      moves[i][j - lo[i]] = move;
    }
    std::swap(prev, cur);
  }

  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const std::uint8_t move = i == 0 ? std::uint8_t{kSkipPage} : moves[i][j - lo[i]];
    switch (move) {
      case kMatch:
        clean_to_page[cs + i - 1] = static_cast<std::ptrdiff_t>(ps + j - 1);
        --i;
        --j;
        break;
      case kSubstitute:
        --i;
        --j;
        break;
      case kSkipPage:
        --j;
        break;
      default:
        --i;
        break;
    }
  }
}

// Equal-cost alignments differ in where a run of skipped page characters
// sits whenever the characters at its two ends agree ("road31|morning..|
// morningabridge"). Slide each such gap, up to kMaxGapShift characters,
// to where the most blocks reach the threshold, preferring block edges.
constexpr std::size_t kMaxGapShift = 64;

void shift_page_gaps(std::u32string_view page, const std::vector<std::size_t>& owner,
                     std::vector<std::size_t>& matched, const std::vector<std::size_t>& lengths,
                     std::vector<std::ptrdiff_t>& clean_to_page) {
  auto& c2p = clean_to_page;
  auto at = [&](std::size_t i) { return static_cast<std::size_t>(c2p[i]); };
  auto edge = [&](std::size_t pos) { return pos == 0 || pos >= page.size() || owner[pos - 1] != owner[pos]; };

  for (std::size_t i = 0; i + 1 < c2p.size(); ++i) {
    if (c2p[i] < 0 || c2p[i + 1] < 0) continue;
    const std::size_t g0 = at(i) + 1, g1 = at(i + 1);
    if (g0 == g1) continue;

    std::size_t left = 0, right = 0;
    while (left < kMaxGapShift && left < i + 1 && c2p[i - left] >= 0 && at(i - left) == g0 - left - 1 &&
           page[g0 - left - 1] == page[g1 - left - 1]) {
      ++left;
    }
    while (right < kMaxGapShift && i + right + 1 < c2p.size() && c2p[i + right + 1] >= 0 &&
           at(i + right + 1) == g1 + right && page[g0 + right] == page[g1 + right]) {
      ++right;
    }
    if (left == 0 && right == 0) continue;

    std::vector<std::size_t> touched;
    for (std::size_t p = g0 - left; p < g0 + right; ++p) touched.push_back(owner[p]);
    for (std::size_t p = g1 - left; p < g1 + right; ++p) touched.push_back(owner[p]);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    // Moving the gap by s shifts |s| characters between its two ends.
    auto score = [&](std::ptrdiff_t s) {
      std::vector<std::size_t> counts;
      for (std::size_t b : touched) counts.push_back(matched[b]);
      auto adjust = [&](std::size_t pos, int delta) {
        const auto k = static_cast<std::size_t>(std::lower_bound(touched.begin(), touched.end(), owner[pos]) - touched.begin());
        counts[k] = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(counts[k]) + delta);
      };
      for (std::ptrdiff_t j = 1; j <= -s; ++j) {
        adjust(g0 - static_cast<std::size_t>(j), -1);
        adjust(g1 - static_cast<std::size_t>(j), +1);
      }
      for (std::ptrdiff_t j = 0; j < s; ++j) {
        adjust(g1 + static_cast<std::size_t>(j), -1);
        adjust(g0 + static_cast<std::size_t>(j), +1);
      }
      std::size_t content = 0;
      for (std::size_t k = 0; k < touched.size(); ++k) content += meets_content_threshold(counts[k], lengths[touched[k]]);
      const auto a = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(g0) + s);
      const auto b = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(g1) + s);
      return std::pair<std::size_t, int>{content, int{edge(a)} + int{edge(b)}};
    };

    std::ptrdiff_t best = 0;
    auto best_score = score(0);
    for (auto s = -static_cast<std::ptrdiff_t>(left); s <= static_cast<std::ptrdiff_t>(right); ++s) {
      if (s == 0) continue;
      const auto sc = score(s);
      if (sc > best_score) {
        best_score = sc;
        best = s;
      }
    }
    for (std::ptrdiff_t j = 1; j <= -best; ++j) {
      const std::size_t c = i + 1 - static_cast<std::size_t>(j);
      --matched[owner[at(c)]];
      c2p[c] = static_cast<std::ptrdiff_t>(g1) - j;
      ++matched[owner[at(c)]];
    }
    for (std::ptrdiff_t j = 0; j < best; ++j) {
      const std::size_t c = i + 1 + static_cast<std::size_t>(j);
      --matched[owner[at(c)]];
      c2p[c] = static_cast<std::ptrdiff_t>(g0) + j;
      ++matched[owner[at(c)]];
    }
    if (best > 0) i += static_cast<std::size_t>(best);
  }
}

}  // namespace

std::string normalize_for_matching(std::string_view text) { return utf8::encode(strip_spaces(text)); }

CharacterAlignment align_characters(std::u32string_view page, std::u32string_view clean,
                                    const AlignerOptions& options) {
  CharacterAlignment out;
  out.clean_to_page.assign(clean.size(), -1);
  if (clean.empty() || page.empty()) return out;

  const std::size_t w = options.window;
  const auto page_windows = index_windows(page, w);
  const auto clean_windows = index_windows(clean, w);

  auto run_gap = [&](std::size_t cs, std::size_t ce, std::size_t ps, std::size_t pe) {
    if (ce <= cs || pe <= ps) return;
    const std::size_t m = ce - cs, n = pe - ps;
    ++out.dp_segments;
    const bool full = std::max(m, n) <= options.full_dp_max_length &&
                      static_cast<double>(m) * static_cast<double>(n) <=
                          static_cast<double>(options.full_dp_max_cells);
    std::size_t band = 0;
    if (!full) {
      ++out.banded_segments;
      band = std::max(options.band, (n + m - 1) / m + 1);
    }
    align_gap(page, clean, cs, ce, ps, pe, band, out.clean_to_page);
  };

  // Each accepted anchor splits both texts; everything left of it is
  // finished, so the recursion on the right half becomes a loop.
  std::size_t cs = 0, ps = 0;
  std::size_t s = 0;
  while (s + w <= clean.size()) {
    const std::u32string_view window = clean.substr(s, w);
    const auto in_clean = clean_windows.find(window);
    const auto in_page = page_windows.find(window);
    const bool unique = in_clean != clean_windows.end() && in_clean->second.count == 1 &&
                        in_page != page_windows.end() && in_page->second.count == 1 &&
                        in_page->second.first >= ps;
    if (!unique) {
      ++s;
      continue;
    }
    std::size_t q = in_page->second.first;
    std::size_t a = s, b = q;
    while (a > cs && b > ps && clean[a - 1] == page[b - 1]) {
      --a;
      --b;
    }
    std::size_t e = s + w, f = q + w;
    while (e < clean.size() && f < page.size() && clean[e] == page[f]) {
      ++e;
      ++f;
    }
    run_gap(cs, a, ps, b);
    out.anchors.push_back({a, b, e - a});
    for (std::size_t k = 0; k < e - a; ++k) out.clean_to_page[a + k] = static_cast<std::ptrdiff_t>(b + k);
    cs = s = e;
    ps = f;
  }
  run_gap(cs, clean.size(), ps, page.size());
  return out;
}

bool meets_content_threshold(std::size_t matched, std::size_t total) {
  return total > 0 && 3 * matched >= 2 * total;
}

AlignmentResult align(const std::vector<TextBlock>& blocks, std::string_view clean_text,
                      const AlignerOptions& options) {
  AlignmentResult result;
  result.labels.assign(blocks.size(), 0);
  result.ratios.assign(blocks.size(), 0.0);

  std::u32string page;
  std::vector<std::size_t> owner;
  std::vector<std::size_t> lengths(blocks.size(), 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::u32string text = strip_spaces(blocks[i].text);
    lengths[i] = text.size();
    page += text;
    owner.insert(owner.end(), text.size(), i);
  }
  const std::u32string clean = strip_spaces(clean_text);
  CharacterAlignment alignment = align_characters(page, clean, options);
  result.anchors = alignment.anchors.size();
  result.dp_segments = alignment.dp_segments;

  std::vector<std::size_t> matched(blocks.size(), 0);
  for (std::ptrdiff_t p : alignment.clean_to_page) {
    if (p >= 0) ++matched[owner[static_cast<std::size_t>(p)]];
  }
  shift_page_gaps(page, owner, matched, lengths, alignment.clean_to_page);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    result.ratios[i] = lengths[i] == 0 ? 0.0 : static_cast<double>(matched[i]) / static_cast<double>(lengths[i]);
    result.labels[i] = meets_content_threshold(matched[i], lengths[i]) ? 1 : 0;
  }
  return result;
}

std::string strip_cleaneval_markup(std::string_view clean_file) {
  std::string_view body = clean_file;
  {
    std::size_t start = 0;
    while (start < body.size() && std::isspace(static_cast<unsigned char>(body[start]))) ++start;
    if (body.substr(start, 4) == "URL:") {
      const std::size_t eol = body.find('\n', start);
      body = eol == std::string_view::npos ? std::string_view{} : body.substr(eol + 1);
    }
  }
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos < body.size()) {
    if (body[pos] == '<' && pos + 2 < body.size() && body[pos + 2] == '>' &&
        (body[pos + 1] == 'p' || body[pos + 1] == 'h' || body[pos + 1] == 'l' ||
         body[pos + 1] == 'P' || body[pos + 1] == 'H' || body[pos + 1] == 'L')) {
      out.push_back(' ');
      pos += 3;
      continue;
    }
    out.push_back(body[pos++]);
  }
  return out;
}

}  // namespace w2t
