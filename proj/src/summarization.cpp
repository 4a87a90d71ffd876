#include "blab/summarization/summarization.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "blab/util/unicode.hpp"

namespace blab::summarization {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool is_upper_start(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') ||
         (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) ||
         (cp >= U'0' && cp <= U'9') || cp == 0xAB || cp == U'"';
}

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r';
}

}  // namespace

SplitRules load_rules(const std::string& stopwords_text,
                      const std::string& abbreviations_text) {
  SplitRules rules;
  std::istringstream stop(stopwords_text);
  std::string line;
  while (std::getline(stop, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    rules.stopwords.insert(fold_text(line));
  }
  if (!abbreviations_text.empty()) {
    rules.abbreviations.clear();
    std::istringstream abbr(abbreviations_text);
    while (std::getline(abbr, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      rules.abbreviations.insert(line);
    }
  }
  return rules;
}

std::vector<std::string> split_sentences(const std::string& text,
                                         const SplitRules& rules) {
  std::vector<char32_t> cps = to_codepoints(text);
  std::vector<std::string> sentences;
  std::vector<char32_t> current;

  auto flush = [&] {
    std::string s = trim(from_codepoints(current));
    if (!s.empty()) sentences.push_back(std::move(s));
    current.clear();
  };

  auto trailing_token = [&]() -> std::string {
    size_t end = current.size();
    size_t begin = end;
    while (begin > 0 && !is_space_cp(current[begin - 1])) --begin;
    std::vector<char32_t> tok(current.begin() + begin, current.begin() + end);
    return from_codepoints(tok);
  };

  for (size_t i = 0; i < cps.size(); ++i) {
    current.push_back(cps[i]);
    char32_t cp = cps[i];
    bool terminal = cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x2026;
    if (!terminal) continue;
    if (cp == U'.' && rules.abbreviations.contains(trailing_token())) continue;
    // Sentence ends here only before whitespace + an uppercase start, or at
    // the end of the text.
    size_t j = i + 1;
    if (j == cps.size()) {
      flush();
      continue;
    }
    if (!is_space_cp(cps[j])) continue;
    while (j < cps.size() && is_space_cp(cps[j])) ++j;
    if (j == cps.size() || is_upper_start(cps[j])) flush();
  }
  flush();
  return sentences;
}

namespace {

std::vector<std::string> content_words(const std::string& sentence,
                                       const std::set<std::string>& stopwords) {
  std::string folded = fold_text(sentence);
  std::vector<std::string> words;
  std::string current;
  size_t pos = 0;
  auto flush = [&] {
    if (!current.empty() && !stopwords.contains(current))
      words.push_back(current);
    current.clear();
  };
  while (pos < folded.size()) {
    char32_t cp = decode_utf8(folded, pos);
    if (is_word_cp(cp))
      encode_utf8(cp, current);
    else
      flush();
  }
  flush();
  return words;
}

}  // namespace

Summary summarize_extractive(const warehouse::NewsRecord& article,
                             size_t max_sentences, const SplitRules& rules) {
  std::vector<std::string> sentences = split_sentences(article.body, rules);
  if (sentences.empty()) throw EmptyBody();

  // Term frequency normalized over the article's content words.
  std::map<std::string, double> tf;
  size_t total_tokens = 0;
  std::vector<std::vector<std::string>> tokens_per_sentence;
  for (const std::string& s : sentences) {
    tokens_per_sentence.push_back(content_words(s, rules.stopwords));
    for (const std::string& w : tokens_per_sentence.back()) {
      tf[w] += 1.0;
      ++total_tokens;
    }
  }
  if (total_tokens > 0)
    for (auto& [word, count] : tf) count /= static_cast<double>(total_tokens);

  std::vector<size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(sentences.size(), 0.0);
  for (size_t i = 0; i < sentences.size(); ++i)
    for (const std::string& w : tokens_per_sentence[i]) score[i] += tf[w];
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;  // earlier position wins ties
  });

  size_t keep = std::min(max_sentences, sentences.size());
  std::vector<size_t> chosen(order.begin(), order.begin() + keep);
  std::sort(chosen.begin(), chosen.end());

  Summary out;
  out.source_url = article.url;
  for (size_t i : chosen) out.sentences.push_back(sentences[i]);
  out.compression_ratio =
      static_cast<double>(keep) / static_cast<double>(sentences.size());
  return out;
}

namespace {

class ExtractiveSummarizer : public Summarizer {
 public:
  explicit ExtractiveSummarizer(SplitRules rules) : rules_(std::move(rules)) {}
  Summary summarize(const warehouse::NewsRecord& article,
                    size_t max_sentences) override {
    return summarize_extractive(article, max_sentences, rules_);
  }

 private:
  SplitRules rules_;
};

class FaithfulSummarizer : public Summarizer {
 public:
  explicit FaithfulSummarizer(std::unique_ptr<Summarizer> inner)
      : inner_(std::move(inner)) {}
  Summary summarize(const warehouse::NewsRecord& article,
                    size_t max_sentences) override {
    Summary s = inner_->summarize(article, max_sentences);
    size_t cursor = 0;
    for (const std::string& sentence : s.sentences) {
      // Order-preserving verbatim check: each sentence must appear in the
      // body after the previous one.
      size_t at = article.body.find(sentence, cursor);
      if (at == std::string::npos) {
        if (article.body.find(sentence) != std::string::npos)
          throw SummaryInvariantViolation(
              "summary sentences are out of source order");
        throw SummaryInvariantViolation(
            "summary sentence is not verbatim in the source: " + sentence);
      }
      cursor = at + sentence.size();
    }
    if (!(s.compression_ratio > 0.0 && s.compression_ratio <= 1.0))
      throw SummaryInvariantViolation("compression ratio outside (0, 1]");
    return s;
  }

 private:
  std::unique_ptr<Summarizer> inner_;
};

}  // namespace

std::unique_ptr<Summarizer> make_extractive_summarizer(SplitRules rules) {
  return std::make_unique<ExtractiveSummarizer>(std::move(rules));
}

std::unique_ptr<Summarizer> enforce_faithfulness(
    std::unique_ptr<Summarizer> binding) {
  return std::make_unique<FaithfulSummarizer>(std::move(binding));
}

Summary summarize_with_fallback(Summarizer& preferred, Summarizer& fallback,
                                const warehouse::NewsRecord& article,
                                size_t max_sentences) {
  try {
    return preferred.summarize(article, max_sentences);
  } catch (const BindingUnavailable&) {
    return fallback.summarize(article, max_sentences);
  }
}

std::string numbering_suffix(size_t index, size_t total) {
  if (total <= 1) return "";
  return " (" + std::to_string(index) + "/" + std::to_string(total) + ")";
}

namespace {

size_t digits(size_t n) { return std::to_string(n).size(); }

std::vector<std::string> words_of(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

// One packing pass assuming the part-count digit class `total_digits`
// (0 = no numbering). Pieces are sentences; oversized sentences dissolve
// into words.
std::vector<std::string> pack(const std::vector<std::string>& sentences,
                              size_t limit, size_t total_digits) {
  auto budget = [&](size_t part_index) -> size_t {
    size_t suffix =
        total_digits == 0 ? 0 : 4 + digits(part_index) + total_digits;
    if (suffix >= limit) return 0;
    return limit - suffix;
  };

  std::vector<std::string> parts;
  std::string current;
  size_t current_len = 0;

  auto close = [&] {
    if (current.empty()) return;
    parts.push_back(std::move(current));
    current.clear();
    current_len = 0;
  };
  auto append_piece = [&](const std::string& piece, size_t piece_len) {
    if (current.empty()) {
      current = piece;
      current_len = piece_len;
    } else {
      current += " ";
      current += piece;
      current_len += 1 + piece_len;
    }
  };
  // Fits either the open part or a fresh one (closing the open part).
  auto place = [&](const std::string& piece) -> bool {
    size_t len = count_codepoints(piece);
    size_t idx = parts.size() + 1;
    if (!current.empty() && current_len + 1 + len <= budget(idx)) {
      append_piece(piece, len);
      return true;
    }
    size_t fresh = current.empty() ? idx : idx + 1;
    if (len <= budget(fresh)) {
      close();
      append_piece(piece, len);
      return true;
    }
    return false;
  };

  for (const std::string& sentence : sentences) {
    if (place(sentence)) continue;
    for (const std::string& word : words_of(sentence))
      if (!place(word)) throw UnsplittableToken(word);
  }
  close();
  return parts;
}

}  // namespace

TweetThread split_thread(const std::string& text, size_t limit,
                         const SplitRules& rules) {
  std::vector<std::string> sentences = split_sentences(text, rules);
  if (sentences.empty()) throw EmptyBody();

  TweetThread thread;
  std::string whole = sentences[0];
  for (size_t i = 1; i < sentences.size(); ++i) whole += " " + sentences[i];
  if (count_codepoints(whole) <= limit) {
    thread.parts.push_back({whole, 1, 1});
    return thread;
  }

  // The numbering suffix depends on the final part count; iterate the digit
  // class until it is consistent with the packing it produces.
  size_t total_digits = 1;
  std::vector<std::string> parts;
  for (;;) {
    parts = pack(sentences, limit, total_digits);
    if (digits(parts.size()) == total_digits) break;
    total_digits = digits(parts.size());
  }

  size_t total = parts.size();
  for (size_t i = 0; i < parts.size(); ++i)
    thread.parts.push_back(
        {parts[i] + numbering_suffix(i + 1, total), i + 1, total});
  return thread;
}

TweetThread assemble_thread(const std::vector<std::string>& texts,
                            size_t limit) {
  TweetThread thread;
  size_t total = texts.size();
  for (size_t i = 0; i < texts.size(); ++i) {
    std::string text = texts[i] + numbering_suffix(i + 1, total);
    if (count_codepoints(text) > limit)
      throw std::logic_error(
          "thread part exceeds the limit once numbered; the planner reserve "
          "must cover numbering");
    thread.parts.push_back({std::move(text), i + 1, total});
  }
  return thread;
}

}  // namespace blab::summarization
