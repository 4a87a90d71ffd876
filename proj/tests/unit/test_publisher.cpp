#include <doctest.h>

#include "blab/publisher/loop.hpp"
#include "blab/publisher/publisher.hpp"
#include "helpers.hpp"

using namespace blab;
using namespace blab::publisher;

namespace {

// Client that can fail on chosen parts with chosen error kinds.
struct StubClient : PublishClient {
  struct Call {
    std::string text;
    std::optional<std::string> reply_to;
  };
  std::vector<Call> calls;
  // send index (1-based) → error to raise. Counts attempts, not parts.
  std::map<size_t, ClientError> failures;

  std::string send(const std::string& text,
                   const std::optional<std::string>& reply_to) override {
    size_t attempt = calls.size() + 1;
    calls.push_back({text, reply_to});
    if (auto it = failures.find(attempt); it != failures.end())
      throw it->second;
    return "id-" + std::to_string(attempt);
  }
};

summarization::TweetThread three_parts() {
  return summarization::assemble_thread({"um", "dois", "três"});
}

PublishRecord queued(summarization::TweetThread thread,
                     ContentKind kind = ContentKind::WeatherReport) {
  PublishRecord record;
  record.thread = std::move(thread);
  record.content_kind = kind;
  record.window = PublishWindow::Morning;
  record.local_date = {2022, 5, 22};
  record.decided_at = *parse_iso("2022-05-22T08:00:00Z");
  return record;
}

UtcTime fixed_now() { return *parse_iso("2022-05-22T08:00:00Z"); }

}  // namespace

TEST_CASE("schedule: immediate now, windowed to the next start") {
  auto policy = default_policy();
  // Urgent content goes out at 03:12 sharp.
  UtcTime night = *parse_iso("2022-05-22T03:12:00-03:00");
  CHECK(schedule(ContentKind::EarthquakeAlert, night, policy) == night);

  // Weather at 04:00 waits for the 05:00 morning window.
  UtcTime early = *parse_iso("2022-05-22T04:00:00-03:00");
  CHECK(schedule(ContentKind::WeatherReport, early, policy) ==
        *parse_iso("2022-05-22T05:00:00-03:00"));

  // Already inside the evening window: dispatch now.
  UtcTime evening = *parse_iso("2022-05-22T19:00:00-03:00");
  CHECK(schedule(ContentKind::NewsSummary, evening, policy) == evening);

  // After the morning window closes, weather waits for tomorrow.
  UtcTime noon = *parse_iso("2022-05-22T13:00:00-03:00");
  CHECK(schedule(ContentKind::WeatherReport, noon, policy) ==
        *parse_iso("2022-05-23T05:00:00-03:00"));
}

TEST_CASE("dispatch chains replies in order") {
  auto dir = testutil::temp_dir("journal");
  Journal journal(dir / "publish.journal");
  StubClient client;
  auto record = dispatch(queued(three_parts()), client, journal, fixed_now);
  CHECK(record.status == PublishStatus::Sent);
  REQUIRE(client.calls.size() == 3);
  CHECK(!client.calls[0].reply_to.has_value());
  CHECK(client.calls[1].reply_to == std::string("id-1"));
  CHECK(client.calls[2].reply_to == std::string("id-2"));
  CHECK(record.dispatched_at == fixed_now());
}

TEST_CASE("partial failure records the failing index and sent parts") {
  auto dir = testutil::temp_dir("journal");
  Journal journal(dir / "publish.journal");
  StubClient client;
  client.failures.emplace(
      2, ClientError{ClientError::Kind::Rejected, "nope"});
  auto record = dispatch(queued(three_parts()), client, journal, fixed_now);
  CHECK(record.status == PublishStatus::Failed);
  REQUIRE(record.failure_detail.has_value());
  CHECK(record.failure_detail->find("part 2") != std::string::npos);
  CHECK(record.failure_detail->find("parts sent: 1") != std::string::npos);
  CHECK(client.calls.size() == 2);
}

TEST_CASE("network errors retry with the frozen delays, auth does not") {
  auto dir = testutil::temp_dir("journal");
  Journal journal(dir / "publish.journal");
  StubClient flaky;
  flaky.failures.emplace(1, ClientError{ClientError::Kind::Network, "down"});
  flaky.failures.emplace(2, ClientError{ClientError::Kind::RateLimit, "429"});
  std::vector<int> naps;
  auto sleeper = [&](int s) { naps.push_back(s); };
  auto record = dispatch(queued(three_parts()), flaky, journal, fixed_now,
                         sleeper);
  CHECK(record.status == PublishStatus::Sent);
  CHECK(naps == std::vector<int>{30, 120});
  CHECK(flaky.calls.size() == 5);  // 2 failed attempts + 3 parts

  StubClient dead;
  dead.failures.emplace(1, ClientError{ClientError::Kind::Network, "down"});
  dead.failures.emplace(2, ClientError{ClientError::Kind::Network, "down"});
  dead.failures.emplace(3, ClientError{ClientError::Kind::Network, "down"});
  naps.clear();
  Journal journal2(dir / "p2.journal");
  auto failed =
      dispatch(queued(three_parts()), dead, journal2, fixed_now, sleeper);
  CHECK(failed.status == PublishStatus::Failed);
  CHECK(naps == std::vector<int>{30, 120});  // two retries, then give up

  StubClient locked;
  locked.failures.emplace(1, ClientError{ClientError::Kind::Auth, "401"});
  naps.clear();
  Journal journal3(dir / "p3.journal");
  auto rejected =
      dispatch(queued(three_parts()), locked, journal3, fixed_now, sleeper);
  CHECK(rejected.status == PublishStatus::Failed);
  CHECK(naps.empty());
  CHECK(locked.calls.size() == 1);
}

TEST_CASE("daily cap suppresses without touching the client") {
  auto dir = testutil::temp_dir("journal");
  Journal journal(dir / "publish.journal");
  StubClient client;
  RetryPolicy retry;
  for (int i = 0; i < 2; ++i) {
    auto record = queued(three_parts());
    record.content_kind =
        i == 0 ? ContentKind::WeatherReport : ContentKind::NewsSummary;
    dispatch(std::move(record), client, journal, fixed_now, {}, retry, 2);
  }
  CHECK(journal.sent_count_on({2022, 5, 22}) == 2);
  size_t calls_before = client.calls.size();
  auto capped = queued(three_parts(), ContentKind::CuriousFact);
  auto result =
      dispatch(std::move(capped), client, journal, fixed_now, {}, retry, 2);
  CHECK(result.status == PublishStatus::Suppressed);
  CHECK(client.calls.size() == calls_before);
}

TEST_CASE("journal rebuilds its idempotency index from disk") {
  auto dir = testutil::temp_dir("journal");
  auto path = dir / "publish.journal";
  {
    Journal journal(path);
    CHECK(!journal.already_decided(ContentKind::WeatherReport,
                                   PublishWindow::Morning, {2022, 5, 22}));
    StubClient client;
    dispatch(queued(three_parts()), client, journal, fixed_now);
    CHECK(journal.already_decided(ContentKind::WeatherReport,
                                  PublishWindow::Morning, {2022, 5, 22}));
  }
  Journal reopened(path);
  CHECK(reopened.already_decided(ContentKind::WeatherReport,
                                 PublishWindow::Morning, {2022, 5, 22}));
  CHECK(reopened.sent_count_on({2022, 5, 22}) == 1);
  CHECK(!reopened.already_decided(ContentKind::WeatherReport,
                                  PublishWindow::Morning, {2022, 5, 23}));
}

// ---- the service loop -------------------------------------------------------

namespace {

pipeline::Artifacts test_artifacts() {
  auto dir = testutil::source_dir();
  pipeline::Artifacts artifacts{
      lexicalization::load_grammar_file((dir / "grammar/blab.grammar").string()),
      reg::load_entities_file((dir / "grammar/entities.reg").string()),
      structuring::load_catalog_file(
          (dir / "grammar/orderings.catalog").string()),
      {},
      realization::load_blocklist_file(
          (dir / "config/blocklist.txt").string()),
      summarization::load_rules(
          testutil::slurp(dir / "config/stopwords_pt.txt"),
          testutil::slurp(dir / "config/abbreviations.txt")),
      {"O mar cobre mais de dois terços do planeta."}};
  artifacts.polish.greeting_by_window[realization::Window::Morning] = {
      "Bom dia!"};
  artifacts.polish.greeting_by_window[realization::Window::Afternoon] = {
      "Boa tarde!"};
  artifacts.polish.greeting_by_window[realization::Window::Evening] = {
      "Boa noite!"};
  return artifacts;
}

struct LoopHarness {
  warehouse::MemoryStore store{[] { return testutil::far_future_clock(); }};
  pipeline::Artifacts artifacts = test_artifacts();
  std::vector<ingestion::SourceConfig> sources;
  ingestion::MapFetcher fetcher;
  StubClient client;
  std::filesystem::path dir = testutil::temp_dir("loop");
  Journal journal{dir / "publish.journal"};

  LoopContext context() {
    return LoopContext{store,   artifacts, sources,
                       fetcher, default_policy(), client,
                       journal, "Santos",  [](int) {},
                       {}};
  }
};

}  // namespace

TEST_CASE("simulated morning dispatches one weather report") {
  LoopHarness h;
  h.artifacts.curious_facts.clear();  // keep evening kinds quiet
  h.sources = ingestion::load_sources(
      "source w kind=weather endpoint=mem:w interval=60 parser=weather_csv "
      "enabled=true\n"
      "source t kind=tide endpoint=mem:t interval=60 parser=tide_csv "
      "enabled=true\n");
  h.fetcher.set("mem:w", "Santos;2022-05-22T04:40:00-03:00;partly cloudy;25\n");
  h.fetcher.set("mem:t",
                "Santos;2022-04-22T10:00:00-03:00;2.10;1\n"
                "Santos;2022-05-22T04:30:00-03:00;1.80;0\n");
  ScriptedTicks ticks(
      "tick 2022-05-22T04:30:00-03:00\n"
      "tick 2022-05-22T05:00:00-03:00\n"
      "tick 2022-05-22T09:00:00-03:00\n",
      h.sources);
  auto ctx = h.context();
  run_loop(ticks, ctx);
  // One weather thread, sent at the window start, not re-sent at 09:00.
  REQUIRE(h.client.calls.size() == 1);
  CHECK(h.client.calls[0].text.find("Santos") != std::string::npos);
  CHECK(h.journal.already_decided(ContentKind::WeatherReport,
                                  PublishWindow::Morning, {2022, 5, 22}));
  CHECK(h.journal.sent_count_on({2022, 5, 22}) == 1);
}

TEST_CASE("urgent quake dispatches the same tick it arrives") {
  LoopHarness h;
  h.sources = ingestion::load_sources(
      "source q kind=earthquake endpoint=mem:q interval=15 parser=quake_kv "
      "enabled=true\n");
  h.fetcher.set("mem:q", "");
  ScriptedTicks ticks(
      "tick 2022-05-22T14:00:00-03:00\n"
      "set-endpoint q mem:q2\n"
      "tick 2022-05-22T14:45:00-03:00\n"
      "tick 2022-05-22T15:00:00-03:00\n",
      h.sources);
  h.fetcher.set("mem:q2",
                "institute: usp_seismology\n"
                "magnitude: 4.5\n"
                "epicenter: -24.10, -46.30\n"
                "depth_km: 10\n"
                "occurred_at: 2022-05-22T17:40:00Z\n");
  auto ctx = h.context();
  run_loop(ticks, ctx);
  REQUIRE(h.client.calls.size() == 1);
  CHECK(h.client.calls[0].text.find("4,5") != std::string::npos);
  CHECK(h.journal.already_decided(ContentKind::EarthquakeAlert,
                                  PublishWindow::Immediate, {2022, 5, 22}));
}

TEST_CASE("a day with no data journals empty selections and sends nothing") {
  LoopHarness h;
  h.sources = ingestion::load_sources(
      "source w kind=weather endpoint=mem:w interval=60 parser=weather_csv "
      "enabled=true\n");
  h.fetcher.set("mem:w", "");
  h.artifacts.curious_facts.clear();
  ScriptedTicks ticks(
      "tick 2022-05-22T05:00:00-03:00\n"
      "tick 2022-05-22T12:30:00-03:00\n"
      "tick 2022-05-22T19:00:00-03:00\n",
      h.sources);
  auto ctx = h.context();
  run_loop(ticks, ctx);
  CHECK(h.client.calls.empty());
  CHECK(h.journal.sent_count_on({2022, 5, 22}) == 0);
  // Suppressed entries exist for each scheduled kind whose window opened.
  std::string journal_text = testutil::slurp(h.dir / "publish.journal");
  CHECK(journal_text.find("\"status\":\"suppressed\"") != std::string::npos);
  CHECK(journal_text.find("empty selection") != std::string::npos);
  CHECK(journal_text.find("weather_report") != std::string::npos);
  CHECK(journal_text.find("news_summary") != std::string::npos);
}

TEST_CASE("blocklisted output is suppressed before the client sees it") {
  LoopHarness h;
  h.sources = ingestion::load_sources(
      "source w kind=weather endpoint=mem:w interval=60 parser=weather_csv "
      "enabled=true\n");
  h.fetcher.set("mem:w", "");
  h.artifacts.curious_facts = {"Este maldito texto não pode sair."};
  ScriptedTicks ticks("tick 2022-05-22T19:00:00-03:00\n", h.sources);
  auto ctx = h.context();
  run_loop(ticks, ctx);
  CHECK(h.client.calls.empty());
  std::string journal_text = testutil::slurp(h.dir / "publish.journal");
  CHECK(journal_text.find("validation violation") != std::string::npos);
  CHECK(journal_text.find("maldito") != std::string::npos);
}

TEST_CASE("replaying the same day never double posts") {
  LoopHarness h;
  h.sources = ingestion::load_sources(
      "source w kind=weather endpoint=mem:w interval=60 parser=weather_csv "
      "enabled=true\n"
      "source t kind=tide endpoint=mem:t interval=60 parser=tide_csv "
      "enabled=true\n");
  h.fetcher.set("mem:w", "Santos;2022-05-22T04:40:00-03:00;clear;24\n");
  h.fetcher.set("mem:t",
                "Santos;2022-04-22T10:00:00-03:00;2.10;1\n"
                "Santos;2022-05-22T04:30:00-03:00;1.60;0\n");
  const std::string script =
      "tick 2022-05-22T05:00:00-03:00\ntick 2022-05-22T08:00:00-03:00\n";
  {
    ScriptedTicks ticks(script, h.sources);
    auto ctx = h.context();
    run_loop(ticks, ctx);
  }
  size_t sent_once = h.client.calls.size();
  CHECK(sent_once == 1);
  {
    // Same store, same journal, fresh replay of the same clock.
    ScriptedTicks ticks(script, h.sources);
    auto ctx = h.context();
    run_loop(ticks, ctx);
  }
  CHECK(h.client.calls.size() == sent_once);
}
