#include "blab/pipeline.hpp"

#include <algorithm>

#include "blab/util/unicode.hpp"

namespace blab::pipeline {

using selection::IntentMessage;
using selection::Predicate;

std::optional<realization::Violation> gate_thread(
    const summarization::TweetThread& thread,
    const realization::Blocklist& blocklist) {
  for (const auto& part : thread.parts)
    if (auto violation = realization::validate(part.text, blocklist))
      return violation;
  return std::nullopt;
}

std::uint64_t derive_seed(CivilDate date, const std::string& place) {
  std::string key = format_date(date) + "|" + place;
  std::uint64_t h = 1469598103934665603ull;
  for (char c : key) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

Predicate dominant_predicate(const structuring::Segment& segment) {
  const IntentMessage* best = &segment.messages.front();
  for (const IntentMessage& m : segment.messages)
    if (m.salience > best->salience) best = &m;
  return best->predicate;
}

// plan() refuses messages that cannot fit an empty segment; the fallback
// drops the least salient message and retries.
structuring::DiscoursePlan plan_with_drops(std::vector<IntentMessage>& ordered,
                                           const Artifacts& artifacts,
                                           size_t first_extra) {
  for (;;) {
    try {
      return structuring::plan(ordered, artifacts.grammar, artifacts.entities,
                               structuring::kTweetBudget,
                               structuring::kReservedOverhead, first_extra);
    } catch (const structuring::MessageTooLarge&) {
      if (ordered.empty()) throw;
      auto victim = std::min_element(
          ordered.begin(), ordered.end(),
          [](const IntentMessage& a, const IntentMessage& b) {
            return a.salience < b.salience;
          });
      ordered.erase(victim);
      if (ordered.empty()) return {};
    }
  }
}

ReportResult gate_and_assemble(const std::vector<std::string>& tweets,
                               std::vector<IntentMessage> messages,
                               const Artifacts& artifacts) {
  ReportResult result;
  result.messages = std::move(messages);
  summarization::TweetThread thread = summarization::assemble_thread(tweets);
  if (auto violation = gate_thread(thread, artifacts.blocklist)) {
    result.violation = violation;
    return result;  // withhold the whole thread
  }
  result.thread = std::move(thread);
  return result;
}

}  // namespace

ReportResult realize_report(const std::vector<IntentMessage>& messages,
                            const Artifacts& artifacts,
                            realization::Window window, std::uint64_t seed) {
  ReportResult empty_result;
  if (messages.empty()) return empty_result;

  std::vector<IntentMessage> ordered =
      structuring::order(messages, artifacts.catalog);
  structuring::DiscoursePlan plan = plan_with_drops(
      ordered, artifacts, realization::greeting_reserve(artifacts.polish));
  if (plan.segments.empty()) return empty_result;

  RandomStream rng(seed);
  RandomStream template_rng = rng.split("templates");
  RandomStream reg_rng = rng.split("reg");
  reg::MentionHistory history;

  std::vector<realization::PolishSegment> segments;
  for (const structuring::Segment& segment : plan.segments) {
    std::string text;
    for (const IntentMessage& message : segment.messages) {
      const auto& tmpl = lexicalization::choose_template(
          artifacts.grammar, message.predicate, template_rng);
      std::string sentence =
          lexicalization::fill(tmpl, message, artifacts.grammar);
      if (!text.empty()) text += " ";
      text += sentence;
    }
    // Referring expressions resolve per segment so pronouns can never point
    // across a tweet boundary.
    text = reg::resolve(text, artifacts.entities, history, reg_rng);
    segments.push_back({std::move(text), dominant_predicate(segment)});
  }

  std::vector<std::string> tweets =
      realization::polish(segments, window, artifacts.polish, rng);
  return gate_and_assemble(tweets, std::move(ordered), artifacts);
}

ReportResult generate_report(const warehouse::ObservationStore& store,
                             const Artifacts& artifacts,
                             const std::string& place, CivilDate date,
                             realization::Window window, std::uint64_t seed) {
  TimeWindow day = local_day_window(date);
  std::vector<IntentMessage> messages = selection::select(day, place, store);
  return realize_report(messages, artifacts, window, seed);
}

ReportResult generate_alert(const warehouse::Observation& quake,
                            const Artifacts& artifacts,
                            realization::Window window, std::uint64_t seed) {
  const auto& rec = std::get<warehouse::EarthquakeRecord>(quake.payload);
  IntentMessage m;
  m.predicate = Predicate::EarthquakeReport;
  m.salience = selection::default_salience(m.predicate);
  m.report_date = local_date(rec.occurred_at);
  m.attributes.set("magnitude", selection::Quantity{rec.magnitude, ""});
  m.attributes.set("epicenter_desc",
                   "em alto-mar (lat " + rec.epicenter.lat.to_trimmed_pt() +
                       ", lon " + rec.epicenter.lon.to_trimmed_pt() + ")");
  m.attributes.set("institute", selection::EntityRef{rec.institute});
  m.attributes.set("occurred_at", local_date(rec.occurred_at));
  return realize_report({m}, artifacts, window, seed);
}

ReportResult generate_news(const warehouse::ObservationStore& store,
                           const Artifacts& artifacts, TimeWindow window,
                           size_t max_sentences) {
  ReportResult result;
  auto articles = store.query(warehouse::Kind::News, window);
  if (articles.empty()) return result;
  const auto& article =
      std::get<warehouse::NewsRecord>(articles.back().payload);

  auto summarizer = summarization::enforce_faithfulness(
      summarization::make_extractive_summarizer(artifacts.rules));
  summarization::Summary summary =
      summarizer->summarize(article, max_sentences);

  // Title, extracted sentences, then the source link. The sentences carry
  // their own punctuation; the URL stays bare so it survives as a link.
  std::string text = realization::tidy(article.title);
  for (const std::string& sentence : summary.sentences) text += " " + sentence;
  text += " Fonte: " + article.url;

  summarization::TweetThread thread =
      summarization::split_thread(text, 280, artifacts.rules);
  if (auto violation = gate_thread(thread, artifacts.blocklist)) {
    result.violation = violation;
    return result;
  }
  result.thread = std::move(thread);
  return result;
}

ReportResult generate_fact(const Artifacts& artifacts, CivilDate date,
                           realization::Window window, std::uint64_t seed) {
  ReportResult result;
  if (artifacts.curious_facts.empty()) return result;
  size_t index = static_cast<size_t>(derive_seed(date, "curious_fact") %
                                     artifacts.curious_facts.size());
  IntentMessage m;
  m.predicate = Predicate::CuriousFact;
  m.salience = selection::default_salience(m.predicate);
  m.report_date = date;
  m.attributes.set("fact", artifacts.curious_facts[index]);
  return realize_report({m}, artifacts, window, seed);
}

}  // namespace blab::pipeline
