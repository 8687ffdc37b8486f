#include <array>
#include <cstdio>
#include <string_view>

#include "w2t/synthetic.hpp"

namespace w2t {
namespace {

constexpr std::array<std::string_view, 120> kContentWords = {
    "river",     "market",    "council",   "research",  "village",   "engine",    "garden",
    "history",   "winter",    "library",   "language",  "station",   "harbor",    "season",
    "doctor",    "museum",    "festival",  "bridge",    "forest",    "student",   "teacher",
    "budget",    "election",  "weather",   "summer",    "science",   "program",   "network",
    "company",   "product",   "children",  "family",   "region",    "project",   "building",
    "water",     "energy",    "island",    "mountain",  "railway",   "ancient",   "modern",
    "local",     "national",  "public",    "private",   "several",   "important", "recent",
    "early",     "careful",   "quiet",     "bright",    "heavy",     "narrow",    "famous",
    "written",   "studied",   "built",     "opened",    "reported",  "described", "measured",
    "followed",  "visited",   "changed",   "improved",  "collected", "published", "planned",
    "painting",  "theatre",   "journey",   "harvest",   "factory",   "hospital",  "courtyard",
    "canal",     "valley",    "coast",     "century",   "decade",    "morning",   "evening",
    "letters",   "records",   "members",   "workers",   "farmers",   "visitors",  "scholars",
    "question",  "answer",    "problem",   "solution",  "method",    "result",    "evidence",
    "growth",    "decline",   "policy",    "treaty",    "trade",     "transport", "climate",
    "soil",      "stone",     "timber",    "copper",    "grain",     "cattle",    "music",
    "poetry",    "drawing",   "silence",   "distance",  "pattern",   "surface",   "window",
    "kitchen"};

constexpr std::array<std::string_view, 40> kFunctionWords = {
    "the",  "of",    "and",   "a",     "to",   "in",    "was",  "it",   "for",  "on",
    "with", "as",    "by",    "at",    "from", "that",  "this", "which", "were", "had",
    "their", "they", "but",   "not",   "have", "been",  "into", "after", "over", "its",
    "when", "there", "about", "other", "more", "most",  "some", "these", "also", "than"};

constexpr std::array<std::string_view, 24> kNavWords = {
    "Home",   "News",    "Sport",   "Business", "Contact", "About",  "Login",    "Register",
    "Blog",   "Events",  "Archive", "Search",   "Help",    "Shop",   "Careers",  "Press",
    "Travel", "Culture", "Science", "Health",   "Opinion", "Video",  "Weather",  "Jobs"};

constexpr std::array<std::string_view, 8> kCompanies = {
    "Acme Media", "Northwind", "Globex", "Initech", "Umbrella Press", "Daily Ledger", "Hooli",
    "Vandelay"};

constexpr std::array<std::string_view, 6> kLayoutClasses = {"main", "content", "article", "post",
                                                            "story", "entry"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& words, Rng& rng) {
  return words[rng.index(N)];
}

std::string capitalize(std::string_view w) {
  std::string s(w);
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string title_words(Rng& rng, std::size_t lo, std::size_t hi) {
  const std::size_t n = lo + rng.index(hi - lo + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += capitalize(pick(kContentWords, rng));
  }
  return out;
}

// Roughly 40-50% function words, as in running English text.
std::string sentence(Rng& rng) {
  const std::size_t n = 8 + rng.index(14);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view w = rng.bernoulli(0.45) ? pick(kFunctionWords, rng) : pick(kContentWords, rng);
    if (i) out += ' ';
    out += i == 0 ? capitalize(w) : std::string(w);
    if (i + 1 < n && i > 2 && rng.bernoulli(0.08)) out += ',';
  }
  if (rng.bernoulli(0.1)) out += " in " + std::to_string(1850 + rng.index(170));
  out += rng.bernoulli(0.08) ? '?' : '.';
  return out;
}

class PageWriter {
 public:
  void open(std::string_view tag, std::string_view attrs = {}) {
    html_ += '<';
    html_ += tag;
    if (!attrs.empty()) {
      html_ += ' ';
      html_ += attrs;
    }
    html_ += '>';
  }
  void close(std::string_view tag) {
    html_ += "</";
    html_ += tag;
    html_ += '>';
  }
  void raw(std::string_view s) { html_ += s; }

  // A text node that becomes exactly one block.
  void text(std::string_view s, int label) {
    for (char c : s) {
      switch (c) {
        case '&':
          html_ += "&amp;";
          break;
        case '<':
          html_ += "&lt;";
          break;
        case '>':
          html_ += "&gt;";
          break;
        default:
          html_ += c;
      }
    }
    labels_.push_back(label);
    if (label == 1) {
      if (!clean_.empty()) clean_ += '\n';
      clean_ += s;
    }
  }
  void element(std::string_view tag, std::string_view attrs, std::string_view s, int label) {
    open(tag, attrs);
    text(s, label);
    close(tag);
  }

  std::string html_;
  std::vector<int> labels_;
  std::string clean_;
};

void nav_list(PageWriter& w, Rng& rng, std::string_view cls) {
  w.open("ul", "class=\"" + std::string(cls) + "\"");
  const std::size_t n = 4 + rng.index(6);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string_view word = pick(kNavWords, rng);
    w.open("li");
    w.element("a", "href=\"/" + std::string(word) + "\"", word, 0);
    w.close("li");
  }
  w.close("ul");
}

void breadcrumbs(PageWriter& w, Rng& rng) {
  w.open("div", "class=\"crumbs\"");
  w.element("a", "href=\"/\"", "Home", 0);
  w.text("\xc2\xbb", 0);
  w.element("a", "href=\"/section\"", pick(kNavWords, rng), 0);
  w.text("\xc2\xbb", 0);
  w.element("span", "", title_words(rng, 1, 3), 0);
  w.close("div");
}

void sidebar(PageWriter& w, Rng& rng) {
  w.open("div", "class=\"sidebar\"");
  w.element("h3", "", rng.bernoulli(0.5) ? "Related stories" : "Most read", 0);
  w.open("ul");
  const std::size_t n = 3 + rng.index(5);
  for (std::size_t i = 0; i < n; ++i) {
    w.open("li");
    w.element("a", "href=\"/story\"", title_words(rng, 3, 6), 0);
    w.close("li");
  }
  w.close("ul");
  if (rng.bernoulli(0.4)) w.element("p", "class=\"ad\"", "Advertisement", 0);
  w.close("div");
}

void share_links(PageWriter& w, Rng& rng) {
  w.open("div", "class=\"share\"");
  w.element("a", "href=\"#fb\"", "Share on Facebook", 0);
  w.element("a", "href=\"#tw\"", "Tweet", 0);
  if (rng.bernoulli(0.5)) w.element("a", "href=\"#mail\"", "Email this page", 0);
  w.close("div");
}

void footer(PageWriter& w, Rng& rng) {
  w.open("div", "class=\"footer\"");
  const std::string company(pick(kCompanies, rng));
  w.element("p", "", "\xc2\xa9 " + std::to_string(2000 + rng.index(17)) + " " + company +
                         ". All rights reserved.", 0);
  const std::size_t n = 2 + rng.index(3);
  static constexpr std::array<std::string_view, 5> kLinks = {"Privacy", "Terms of use", "Contact us",
                                                             "Sitemap", "Cookies"};
  for (std::size_t i = 0; i < n; ++i) {
    if (i) w.text("|", 0);
    w.element("a", "href=\"/legal\"", kLinks[i], 0);
  }
  if (rng.bernoulli(0.3)) w.element("p", "", "Contact: info@" + std::string("example.com"), 0);
  w.close("div");
}

void paragraph(PageWriter& w, Rng& rng) {
  w.open("p");
  const std::size_t n = 3 + rng.index(6);
  std::string pending;
  for (std::size_t s = 0; s < n; ++s) {
    if (!pending.empty()) pending += ' ';
    pending += sentence(rng);
    // An occasional inline link or emphasis splits the paragraph into
    // several blocks, all of which are content.
    if (s + 1 < n && rng.bernoulli(0.12)) {
      w.text(pending, 1);
      pending.clear();
      const bool link = rng.bernoulli(0.6);
      w.element(link ? "a" : "em", link ? "href=\"/ref\"" : "", title_words(rng, 2, 4), 1);
    }
  }
  if (!pending.empty()) w.text(pending, 1);
  w.close("p");
}

void article(PageWriter& w, Rng& rng, const SyntheticOptions& options) {
  w.open("div", "class=\"" + std::string(pick(kLayoutClasses, rng)) + "\"");
  w.element("h1", "", title_words(rng, 3, 7), 1);
  if (rng.bernoulli(0.5)) {
    w.element("p", "class=\"byline\"", "By " + title_words(rng, 2, 2), 0);
  }
  const std::size_t span = options.max_paragraphs - options.min_paragraphs + 1;
  const std::size_t n = options.min_paragraphs + rng.index(span);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.bernoulli(0.15)) w.element("h2", "", title_words(rng, 2, 5), 1);
    paragraph(w, rng);
  }
  if (rng.bernoulli(0.6)) share_links(w, rng);
  w.close("div");
}

}  // namespace

SyntheticPage generate_page(const std::string& id, Rng& rng, const SyntheticOptions& options) {
  if (options.min_paragraphs == 0 || options.max_paragraphs < options.min_paragraphs) {
    throw std::invalid_argument("invalid paragraph range");
  }
  PageWriter w;
  w.raw("<!DOCTYPE html>\n<html><head><title>");
  w.raw(title_words(rng, 2, 4));
  w.raw("</title><style>body{margin:0}</style></head>\n<body>");
  w.open("div", "id=\"header\"");
  w.element("div", "class=\"logo\"", std::string(pick(kCompanies, rng)), 0);
  nav_list(w, rng, "nav");
  w.close("div");
  if (rng.bernoulli(0.6)) breadcrumbs(w, rng);
  const bool sidebar_first = rng.bernoulli(0.3);
  if (sidebar_first) sidebar(w, rng);
  article(w, rng, options);
  if (!sidebar_first && rng.bernoulli(0.8)) sidebar(w, rng);
  if (rng.bernoulli(0.3)) nav_list(w, rng, "tags");
  footer(w, rng);
  w.raw("<script>var tracked = true;</script></body></html>\n");
  return SyntheticPage{id, std::move(w.html_), std::move(w.labels_), std::move(w.clean_)};
}

SyntheticCorpus generate_corpus(std::size_t train, std::size_t validation, std::size_t test,
                                std::uint64_t seed) {
  SyntheticCorpus corpus;
  Rng rng(seed);
  const std::array<std::pair<Split, std::size_t>, 3> splits = {
      {{Split::kTrain, train}, {Split::kValidation, validation}, {Split::kTest, test}}};
  std::size_t counter = 0;
  for (const auto& [split, count] : splits) {
    for (std::size_t i = 0; i < count; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "page%04zu", counter++);
      corpus.pages.push_back(generate_page(id, rng));
      corpus.manifest.push_back({split, id});
    }
  }
  return corpus;
}

void write_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const SyntheticPage& page : corpus.pages) {
    write_file(dir / (page.id + ".html"), page.html);
    write_file(dir / (page.id + ".txt"), page.clean_text + "\n");
    write_file(dir / (page.id + ".labels"), format_labels(page.labels, {}));
  }
  write_file(dir / "manifest.txt", format_manifest(corpus.manifest));
}

Corpus featurize(const SyntheticCorpus& corpus, Exec exec) {
  const auto count = static_cast<std::ptrdiff_t>(corpus.pages.size());
  std::vector<CorpusPage> pages(corpus.pages.size());
  std::vector<std::string> errors(corpus.pages.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::kParallel)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const SyntheticPage& p = corpus.pages[static_cast<std::size_t>(k)];
    try {
      pages[static_cast<std::size_t>(k)] = make_corpus_page(p.id, p.html, p.labels);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k].empty()) throw CorpusError(errors[k], {corpus.pages[k].id});
  }
  Corpus out;
  for (std::size_t k = 0; k < pages.size(); ++k) {
    out.split(corpus.manifest[k].split).push_back(std::move(pages[k]));
  }
  return out;
}

std::string generate_large_page(Rng& rng, std::size_t paragraphs) {
  SyntheticOptions options;
  options.min_paragraphs = paragraphs;
  options.max_paragraphs = paragraphs;
  return generate_page("large", rng, options).html;
}

}  // namespace w2t
