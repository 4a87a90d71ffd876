#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blab/selection/intent.hpp"
#include "blab/util/rng.hpp"

namespace blab::realization {

enum class Window { Morning, Afternoon, Evening };

const char* window_name(Window w);
std::optional<Window> window_from_name(const std::string& name);

// America/Sao_Paulo boundaries: Morning 05:00–12:00, Afternoon 12:00–18:00,
// Evening 18:00–05:00.
Window window_of(UtcTime t);

class OverBudget : public std::runtime_error {
 public:
  explicit OverBudget(const std::string& what) : std::runtime_error(what) {}
};

struct PolishConfig {
  std::map<Window, std::vector<std::string>> greeting_by_window;
  std::map<selection::Predicate, std::string> emoji_map;
  bool enable_emoji = true;
};

// Longest greeting plus its joining space; the discourse planner reserves
// this much on segment one.
size_t greeting_reserve(const PolishConfig& config);

struct PolishSegment {
  std::string text;
  selection::Predicate dominant = selection::Predicate::CuriousFact;
};

// Final surface pass: one greeting on the first segment, at most one emoji
// per segment (keyed on its dominant predicate), sentence capitalization,
// terminal punctuation, whitespace collapsed. Every output is ≤ 280 code
// points or OverBudget is thrown (emoji is dropped first).
std::vector<std::string> polish(const std::vector<PolishSegment>& segments,
                                Window window, const PolishConfig& config,
                                RandomStream& rng);

// Cleanup sub-steps only (no greeting, no emoji); idempotent.
std::string tidy(const std::string& text);

struct Blocklist {
  std::set<std::string> terms;  // folded (lowercase, no diacritics)
};

// One term per line, # comments. Terms are folded on load.
Blocklist load_blocklist(const std::string& source);
Blocklist load_blocklist_file(const std::string& path);

struct Violation {
  std::string term;
  size_t position;  // code-point index into the original text
};

// Whole-word match under case and diacritic folding. Returns the first
// violation in text order, or nullopt when the text passes.
std::optional<Violation> validate(const std::string& text,
                                  const Blocklist& blocklist);

}  // namespace blab::realization
