#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blab/warehouse/record.hpp"

namespace blab::summarization {

class EmptyBody : public std::runtime_error {
 public:
  EmptyBody() : std::runtime_error("article body has no sentences") {}
};

class UnsplittableToken : public std::runtime_error {
 public:
  explicit UnsplittableToken(const std::string& word)
      : std::runtime_error("word longer than the limit: " + word) {}
};

class BindingUnavailable : public std::runtime_error {
 public:
  explicit BindingUnavailable(const std::string& what)
      : std::runtime_error(what) {}
};

class SummaryInvariantViolation : public std::runtime_error {
 public:
  explicit SummaryInvariantViolation(const std::string& what)
      : std::runtime_error(what) {}
};

struct SplitRules {
  // Tokens that end with '.' but never end a sentence.
  std::set<std::string> abbreviations = {"Sr.", "Sra.", "Dr.", "Dra.", "Prof.",
                                         "Profa.", "Eng.", "etc."};
  std::set<std::string> stopwords;  // folded pt-BR stopwords
};

SplitRules load_rules(const std::string& stopwords_text,
                      const std::string& abbreviations_text);

// Sentences in source order, each trimmed and carrying its terminal
// punctuation. Splits after . ! ? … followed by whitespace and an uppercase
// start (or end of text), except after known abbreviations.
std::vector<std::string> split_sentences(const std::string& text,
                                         const SplitRules& rules);

struct Summary {
  std::string source_url;
  std::vector<std::string> sentences;  // verbatim, source order
  double compression_ratio = 1.0;      // selected / total sentences
};

// Deterministic extractive summary: sentences score by the sum of the
// article-normalized frequencies of their content words; ties favor earlier
// sentences; output keeps source order.
Summary summarize_extractive(const warehouse::NewsRecord& article,
                             size_t max_sentences, const SplitRules& rules);

// Pluggable summarizer port. The default binding is the extractive method;
// any other binding passes through a faithfulness check that rejects
// sentences not present verbatim in the source.
class Summarizer {
 public:
  virtual ~Summarizer() = default;
  virtual Summary summarize(const warehouse::NewsRecord& article,
                            size_t max_sentences) = 0;
};

std::unique_ptr<Summarizer> make_extractive_summarizer(SplitRules rules);

// Wraps a binding with invariant enforcement (verbatim sentences, source
// order, ratio in (0,1]). Throws SummaryInvariantViolation on bad output.
std::unique_ptr<Summarizer> enforce_faithfulness(
    std::unique_ptr<Summarizer> binding);

// Calls `preferred`, falling back to `fallback` when the preferred binding
// reports BindingUnavailable.
Summary summarize_with_fallback(Summarizer& preferred, Summarizer& fallback,
                                const warehouse::NewsRecord& article,
                                size_t max_sentences);

struct TweetPart {
  std::string text;  // includes the numbering suffix when total > 1
  size_t index = 1;  // 1-based
  size_t total = 1;
};

struct TweetThread {
  std::vector<TweetPart> parts;
};

// Numbering suffix " (i/n)"; empty when n == 1.
std::string numbering_suffix(size_t index, size_t total);

// Splits text into numbered parts, each within `limit` code points including
// its numbering suffix. Prefers sentence boundaries, falls back to word
// boundaries, never cuts inside a word.
TweetThread split_thread(const std::string& text, size_t limit = 280,
                         const SplitRules& rules = {});

// Builds a numbered thread from already-sized texts (the discourse planner's
// output). Throws UnsplittableToken-style overflow only if a part with its
// suffix would exceed the limit, which the planner's reserve prevents.
TweetThread assemble_thread(const std::vector<std::string>& texts,
                            size_t limit = 280);

}  // namespace blab::summarization
