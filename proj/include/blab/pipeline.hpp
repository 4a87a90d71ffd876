#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blab/lexicalization/grammar.hpp"
#include "blab/realization/realization.hpp"
#include "blab/reg/registry.hpp"
#include "blab/selection/select.hpp"
#include "blab/structuring/structuring.hpp"
#include "blab/summarization/summarization.hpp"

namespace blab::pipeline {

// Everything the generation stages need, loaded once at startup.
struct Artifacts {
  lexicalization::Grammar grammar;
  reg::EntityRegistry entities;
  structuring::OrderingCatalog catalog;
  realization::PolishConfig polish;
  realization::Blocklist blocklist;
  summarization::SplitRules rules;
  std::vector<std::string> curious_facts;
};

struct ReportResult {
  summarization::TweetThread thread;  // empty when nothing was reportable
  std::vector<selection::IntentMessage> messages;
  std::optional<realization::Violation> violation;  // safety gate rejection

  bool has_content() const { return !thread.parts.empty(); }
};

// Daily seeds vary by date and place but stay reproducible after the fact.
std::uint64_t derive_seed(CivilDate date, const std::string& place);

// The safety gate every outgoing thread passes: first blocklist violation
// across the parts, or nullopt when the thread may be published.
std::optional<realization::Violation> gate_thread(
    const summarization::TweetThread& thread,
    const realization::Blocklist& blocklist);

// order → plan → fill → resolve → polish → validate. Messages that cannot
// fit a segment even alone are dropped by ascending salience. A blocklist
// hit withholds the whole thread and reports the violation instead.
ReportResult realize_report(const std::vector<selection::IntentMessage>& messages,
                            const Artifacts& artifacts,
                            realization::Window window, std::uint64_t seed);

// The full six-step pipeline over the store for one place and local day.
ReportResult generate_report(const warehouse::ObservationStore& store,
                             const Artifacts& artifacts,
                             const std::string& place, CivilDate date,
                             realization::Window window, std::uint64_t seed);

// Urgent path: a single-quake alert thread.
ReportResult generate_alert(const warehouse::Observation& quake,
                            const Artifacts& artifacts,
                            realization::Window window, std::uint64_t seed);

// Evening news path: newest article in the window → extractive summary →
// thread split, then the same validation gate.
ReportResult generate_news(const warehouse::ObservationStore& store,
                           const Artifacts& artifacts, TimeWindow window,
                           size_t max_sentences = 3);

// Evening curious-fact path; the fact rotates by local date.
ReportResult generate_fact(const Artifacts& artifacts, CivilDate date,
                           realization::Window window, std::uint64_t seed);

}  // namespace blab::pipeline
