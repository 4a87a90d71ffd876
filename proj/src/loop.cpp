#include "blab/publisher/loop.hpp"

#include <chrono>
#include <map>
#include <sstream>
#include <thread>

namespace blab::publisher {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

UtcTime system_now() {
  return UtcTime{std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count()};
}

}  // namespace

ScriptedTicks::ScriptedTicks(const std::string& script,
                             std::vector<ingestion::SourceConfig>& sources)
    : sources_(&sources) {
  std::istringstream in(script);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "tick") {
      std::string stamp;
      fields >> stamp;
      auto t = parse_iso(stamp);
      if (!t)
        throw std::runtime_error("clock script line " +
                                 std::to_string(lineno) +
                                 ": bad timestamp: " + stamp);
      Directive d;
      d.tick = *t;
      directives_.push_back(std::move(d));
    } else if (head == "set-endpoint") {
      Directive d;
      fields >> d.source_id >> d.endpoint;
      if (d.source_id.empty() || d.endpoint.empty())
        throw std::runtime_error("clock script line " +
                                 std::to_string(lineno) +
                                 ": expected set-endpoint <source> <url>");
      directives_.push_back(std::move(d));
    } else {
      throw std::runtime_error("clock script line " + std::to_string(lineno) +
                               ": unknown directive: " + head);
    }
  }
}

std::optional<UtcTime> ScriptedTicks::next() {
  while (cursor_ < directives_.size()) {
    const Directive& d = directives_[cursor_++];
    if (d.tick) return d.tick;
    for (auto& cfg : *sources_)
      if (cfg.source_id == d.source_id) cfg.endpoint = d.endpoint;
  }
  return std::nullopt;
}

std::optional<UtcTime> WallClockTicks::next() {
  if (!first_)
    std::this_thread::sleep_for(std::chrono::seconds(interval_seconds_));
  first_ = false;
  return system_now();
}

namespace {

PublishRecord make_record(summarization::TweetThread thread, ContentKind kind,
                          PublishWindow window, UtcTime now) {
  PublishRecord record;
  record.thread = std::move(thread);
  record.content_kind = kind;
  record.window = window;
  record.local_date = local_date(now);
  record.decided_at = now;
  record.status = PublishStatus::Queued;
  return record;
}

void journal_suppressed(Journal& journal, ContentKind kind,
                        PublishWindow window, UtcTime now,
                        const std::string& reason) {
  PublishRecord record = make_record({}, kind, window, now);
  record.status = PublishStatus::Suppressed;
  record.failure_detail = reason;
  journal.append(record);
}

void handle_result(const pipeline::ReportResult& result, ContentKind kind,
                   PublishWindow window, UtcTime now, LoopContext& ctx) {
  auto now_fn = [now] { return now; };
  if (result.violation) {
    journal_suppressed(ctx.journal, kind, window, now,
                       "validation violation: " + result.violation->term);
    return;
  }
  if (!result.has_content()) {
    journal_suppressed(ctx.journal, kind, window, now, "empty selection");
    return;
  }
  PublishRecord record = make_record(result.thread, kind, window, now);
  record = dispatch(record, ctx.client, ctx.journal, now_fn, ctx.sleep,
                    RetryPolicy{}, ctx.policy.max_posts_per_day);
  if (ctx.log)
    ctx.log(std::string(content_kind_name(kind)) + " -> " +
            publish_status_name(record.status));
}

void run_tick(UtcTime now, LoopContext& ctx,
              std::map<std::string, UtcTime>& last_fetch) {
  auto clock = [now] { return now; };
  // Honor each source's fetch interval: a source is due when it has never
  // been fetched or its interval has elapsed.
  std::vector<ingestion::SourceConfig> due;
  for (const auto& cfg : ctx.sources) {
    auto it = last_fetch.find(cfg.source_id);
    if (it != last_fetch.end() &&
        now.seconds - it->second.seconds <
            static_cast<std::int64_t>(cfg.fetch_interval_minutes) * 60)
      continue;
    due.push_back(cfg);
    last_fetch[cfg.source_id] = now;
  }
  ingestion::CycleResult cycle =
      ingestion::run_cycle(due, ctx.fetcher, ctx.store, clock);

  // Urgent path: quakes dispatch the same tick the data arrives.
  for (const warehouse::Observation& quake :
       ingestion::detect_urgent(cycle.inserted)) {
    if (ctx.journal.already_decided(ContentKind::EarthquakeAlert,
                                    PublishWindow::Immediate,
                                    local_date(now)))
      continue;
    std::uint64_t seed =
        pipeline::derive_seed(local_date(now), "earthquake_alert");
    pipeline::ReportResult result = pipeline::generate_alert(
        quake, ctx.artifacts, realization::window_of(now), seed);
    handle_result(result, ContentKind::EarthquakeAlert,
                  PublishWindow::Immediate, now, ctx);
  }

  // Window-scheduled kinds, at most once per kind, window and local day.
  for (const auto& [kind, window] : ctx.policy.rules) {
    if (window == PublishWindow::Immediate) continue;
    if (!inside_publish_window(window, now)) continue;
    if (ctx.journal.already_decided(kind, window, local_date(now))) continue;

    CivilDate date = local_date(now);
    pipeline::ReportResult result;
    switch (kind) {
      case ContentKind::WeatherReport:
        result = pipeline::generate_report(
            ctx.store, ctx.artifacts, ctx.place, date,
            realization::window_of(now), pipeline::derive_seed(date, ctx.place));
        break;
      case ContentKind::NewsSummary:
        result = pipeline::generate_news(ctx.store, ctx.artifacts,
                                         local_day_window(date),
                                         ctx.news_max_sentences);
        break;
      case ContentKind::CuriousFact:
        result = pipeline::generate_fact(ctx.artifacts, date,
                                         realization::window_of(now),
                                         pipeline::derive_seed(date, "fact"));
        break;
      case ContentKind::EarthquakeAlert:
        continue;  // immediate only
    }
    handle_result(result, kind, window, now, ctx);
  }
}

}  // namespace

void run_loop(TickSource& ticks, LoopContext& ctx) {
  std::map<std::string, UtcTime> last_fetch;
  while (auto now = ticks.next()) {
    try {
      run_tick(*now, ctx, last_fetch);
    } catch (const std::exception& e) {
      // A tick must never kill the service. Per-item failures were already
      // journaled by the dispatch path; whole-tick failures just get logged.
      if (ctx.log) ctx.log(std::string("tick failed: ") + e.what());
    }
  }
}

}  // namespace blab::publisher
