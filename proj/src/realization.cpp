#include "blab/realization/realization.hpp"

#include <fstream>
#include <sstream>

#include "blab/util/unicode.hpp"

namespace blab::realization {

const char* window_name(Window w) {
  switch (w) {
    case Window::Morning: return "morning";
    case Window::Afternoon: return "afternoon";
    case Window::Evening: return "evening";
  }
  return "?";
}

std::optional<Window> window_from_name(const std::string& name) {
  if (name == "morning") return Window::Morning;
  if (name == "afternoon") return Window::Afternoon;
  if (name == "evening") return Window::Evening;
  return std::nullopt;
}

Window window_of(UtcTime t) {
  int s = local_seconds_of_day(t);
  if (s >= 5 * 3600 && s < 12 * 3600) return Window::Morning;
  if (s >= 12 * 3600 && s < 18 * 3600) return Window::Afternoon;
  return Window::Evening;
}

size_t greeting_reserve(const PolishConfig& config) {
  size_t best = 0;
  for (const auto& [window, greetings] : config.greeting_by_window)
    for (const std::string& g : greetings)
      best = std::max(best, count_codepoints(g));
  return best == 0 ? 0 : best + 1;  // joining space
}

namespace {

bool is_terminal_punct(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x2026;  // …
}

bool is_letter(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
         (cp >= 0xC0 && cp <= 0x17F && cp != 0xD7 && cp != 0xF7);
}

}  // namespace

std::string tidy(const std::string& text) {
  std::vector<char32_t> cps = to_codepoints(text);

  // Collapse whitespace runs; trim the ends.
  std::vector<char32_t> collapsed;
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r') {
      if (!collapsed.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      collapsed.push_back(U' ');
      pending_space = false;
    }
    collapsed.push_back(cp);
  }
  if (collapsed.empty()) return "";

  if (!is_terminal_punct(collapsed.back()) && collapsed.back() != U':')
    collapsed.push_back(U'.');

  // Capitalize the first letter of each sentence. A terminal mark only ends
  // a sentence when followed by a space, so dots inside URLs or numbers
  // never trigger capitalization.
  bool at_sentence_start = true;
  for (size_t i = 0; i < collapsed.size(); ++i) {
    char32_t cp = collapsed[i];
    if (at_sentence_start && is_letter(cp)) {
      collapsed[i] = upper_cp(cp);
      at_sentence_start = false;
    } else if (is_terminal_punct(cp) &&
               (i + 1 >= collapsed.size() || collapsed[i + 1] == U' ')) {
      at_sentence_start = true;
    } else if (cp != U' ' && cp != U'"' && cp != 0xAB && cp != 0xBB) {
      at_sentence_start = false;
    }
  }
  return from_codepoints(collapsed);
}

std::vector<std::string> polish(const std::vector<PolishSegment>& segments,
                                Window window, const PolishConfig& config,
                                RandomStream& rng) {
  if (segments.empty()) return {};
  RandomStream greeting_rng = rng.split("greeting");

  std::vector<std::string> out;
  out.reserve(segments.size());
  for (size_t i = 0; i < segments.size(); ++i) {
    std::string text = tidy(segments[i].text);
    if (i == 0) {
      auto it = config.greeting_by_window.find(window);
      if (it != config.greeting_by_window.end() && !it->second.empty()) {
        const std::string& greeting =
            it->second[greeting_rng.next_below(it->second.size())];
        text = text.empty() ? greeting : greeting + " " + text;
      }
    }
    if (config.enable_emoji) {
      auto it = config.emoji_map.find(segments[i].dominant);
      if (it != config.emoji_map.end()) {
        std::string with_emoji = text + " " + it->second;
        if (count_codepoints(with_emoji) <= 280) text = std::move(with_emoji);
      }
    }
    if (count_codepoints(text) > 280)
      throw OverBudget("polished segment is " +
                       std::to_string(count_codepoints(text)) +
                       " code points; upstream estimate must bound this");
    out.push_back(std::move(text));
  }
  return out;
}

Blocklist load_blocklist(const std::string& source) {
  Blocklist list;
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    list.terms.insert(fold_text(line.substr(a, b - a + 1)));
  }
  return list;
}

Blocklist load_blocklist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open blocklist file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_blocklist(buf.str());
}

std::optional<Violation> validate(const std::string& text,
                                  const Blocklist& blocklist) {
  if (blocklist.terms.empty()) return std::nullopt;

  // Fold the text code point by code point, remembering each folded code
  // point's original index so violation positions refer to the input.
  std::vector<char32_t> folded;
  std::vector<size_t> origin;
  {
    size_t pos = 0, index = 0;
    while (pos < text.size()) {
      char32_t cp = decode_utf8(text, pos);
      char32_t f;
      if (fold_cp(cp, f)) {
        folded.push_back(f);
        origin.push_back(index);
      }
      ++index;
    }
  }

  std::vector<std::vector<char32_t>> terms;
  for (const std::string& t : blocklist.terms) terms.push_back(to_codepoints(t));

  auto is_word_at = [&](size_t i) {
    return i < folded.size() && is_word_cp(folded[i]);
  };

  for (size_t start = 0; start < folded.size(); ++start) {
    if (!is_word_at(start)) continue;
    if (start > 0 && is_word_at(start - 1)) continue;  // mid-word
    for (const auto& term : terms) {
      if (term.empty() || start + term.size() > folded.size()) continue;
      bool match = true;
      for (size_t k = 0; k < term.size(); ++k) {
        if (folded[start + k] != term[k]) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      if (is_word_at(start + term.size())) continue;  // longer word
      std::string term_text;
      for (char32_t cp : term) encode_utf8(cp, term_text);
      return Violation{term_text, origin[start]};
    }
  }
  return std::nullopt;
}

}  // namespace blab::realization
