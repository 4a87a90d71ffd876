#include "blab/publisher/publisher.hpp"

#include <fstream>

#include <json.hpp>

namespace blab::publisher {

using nlohmann::json;

const char* content_kind_name(ContentKind k) {
  switch (k) {
    case ContentKind::WeatherReport: return "weather_report";
    case ContentKind::NewsSummary: return "news_summary";
    case ContentKind::CuriousFact: return "curious_fact";
    case ContentKind::EarthquakeAlert: return "earthquake_alert";
  }
  return "?";
}

const char* publish_window_name(PublishWindow w) {
  switch (w) {
    case PublishWindow::Morning: return "morning";
    case PublishWindow::Evening: return "evening";
    case PublishWindow::Immediate: return "immediate";
  }
  return "?";
}

const char* publish_status_name(PublishStatus s) {
  switch (s) {
    case PublishStatus::Queued: return "queued";
    case PublishStatus::Sent: return "sent";
    case PublishStatus::Failed: return "failed";
    case PublishStatus::Suppressed: return "suppressed";
  }
  return "?";
}

SchedulePolicy default_policy() {
  SchedulePolicy p;
  p.rules[ContentKind::EarthquakeAlert] = PublishWindow::Immediate;
  p.rules[ContentKind::WeatherReport] = PublishWindow::Morning;
  p.rules[ContentKind::NewsSummary] = PublishWindow::Evening;
  p.rules[ContentKind::CuriousFact] = PublishWindow::Evening;
  return p;
}

namespace {

// Window start hours in America/Sao_Paulo.
constexpr int kMorningStartHour = 5;
constexpr int kMorningEndHour = 12;
constexpr int kEveningStartHour = 18;

UtcTime next_local_hour(UtcTime now, int hour) {
  CivilDate today = local_date(now);
  UtcTime candidate = make_utc(today.year, today.month, today.day, hour, 0, 0,
                               kSaoPauloOffsetSeconds);
  if (candidate >= now) return candidate;
  return UtcTime{candidate.seconds + 86400};
}

}  // namespace

bool inside_publish_window(PublishWindow w, UtcTime t) {
  int s = local_seconds_of_day(t);
  switch (w) {
    case PublishWindow::Morning:
      return s >= kMorningStartHour * 3600 && s < kMorningEndHour * 3600;
    case PublishWindow::Evening:
      return s >= kEveningStartHour * 3600 || s < kMorningStartHour * 3600;
    case PublishWindow::Immediate:
      return true;
  }
  return false;
}

UtcTime schedule(ContentKind kind, UtcTime now, const SchedulePolicy& policy) {
  auto it = policy.rules.find(kind);
  PublishWindow window =
      it == policy.rules.end() ? PublishWindow::Immediate : it->second;
  if (window == PublishWindow::Immediate) return now;
  if (inside_publish_window(window, now)) return now;
  int hour = window == PublishWindow::Morning ? kMorningStartHour
                                              : kEveningStartHour;
  return next_local_hour(now, hour);
}

std::string DryRunClient::send(const std::string& text,
                               const std::optional<std::string>& reply_to) {
  calls_.push_back({text, reply_to});
  return "dry-" + std::to_string(calls_.size());
}

Journal::Journal(const std::filesystem::path& path) : path_(path) {
  if (path_.has_parent_path())
    std::filesystem::create_directories(path_.parent_path());
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;
    std::string key = j.value("content_kind", "") + "|" +
                      j.value("window", "") + "|" + j.value("local_date", "");
    decided_.insert(key);
    if (j.value("status", "") == "sent")
      ++sent_per_day_[j.value("local_date", "")];
  }
}

namespace {

std::string idempotency_key(ContentKind kind, PublishWindow window,
                            CivilDate date) {
  return std::string(content_kind_name(kind)) + "|" +
         publish_window_name(window) + "|" + format_date(date);
}

}  // namespace

bool Journal::already_decided(ContentKind kind, PublishWindow window,
                              CivilDate date) const {
  return decided_.contains(idempotency_key(kind, window, date));
}

size_t Journal::sent_count_on(CivilDate date) const {
  auto it = sent_per_day_.find(format_date(date));
  return it == sent_per_day_.end() ? 0 : it->second;
}

void Journal::append(const PublishRecord& record) {
  json j;
  j["content_kind"] = content_kind_name(record.content_kind);
  j["window"] = publish_window_name(record.window);
  j["local_date"] = format_date(record.local_date);
  j["decided_at"] = format_iso_utc(record.decided_at);
  if (record.dispatched_at)
    j["dispatched_at"] = format_iso_utc(*record.dispatched_at);
  j["status"] = publish_status_name(record.status);
  if (record.failure_detail) j["failure_detail"] = *record.failure_detail;
  json parts = json::array();
  for (const auto& part : record.thread.parts) parts.push_back(part.text);
  j["parts"] = parts;

  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to journal: " +
                                     path_.string());
  out << j.dump() << "\n";
  out.flush();

  decided_.insert(
      idempotency_key(record.content_kind, record.window, record.local_date));
  if (record.status == PublishStatus::Sent)
    ++sent_per_day_[format_date(record.local_date)];
}

PublishRecord dispatch(PublishRecord record, PublishClient& client,
                       Journal& journal, std::function<UtcTime()> now,
                       std::function<void(int)> sleep,
                       const RetryPolicy& retry, size_t daily_cap) {
  if (record.status != PublishStatus::Queued)
    throw std::logic_error("dispatch needs a queued record");
  if (!sleep) sleep = [](int) {};

  if (journal.sent_count_on(record.local_date) >= daily_cap) {
    record.status = PublishStatus::Suppressed;
    record.failure_detail = "daily cap reached";
    journal.append(record);
    return record;
  }

  std::optional<std::string> reply_to;
  for (size_t i = 0; i < record.thread.parts.size(); ++i) {
    const auto& part = record.thread.parts[i];
    int attempt = 0;
    for (;;) {
      try {
        reply_to = client.send(part.text, reply_to);
        break;
      } catch (const ClientError& e) {
        bool retryable = e.kind == ClientError::Kind::Network ||
                         e.kind == ClientError::Kind::RateLimit;
        if (retryable && attempt < retry.max_retries) {
          int delay = attempt < static_cast<int>(retry.delays_seconds.size())
                          ? retry.delays_seconds[attempt]
                          : retry.delays_seconds.back();
          sleep(delay);
          ++attempt;
          continue;
        }
        record.status = PublishStatus::Failed;
        record.dispatched_at = now();
        record.failure_detail = "part " + std::to_string(i + 1) + " failed (" +
                                e.what() + "); parts sent: " +
                                std::to_string(i);
        journal.append(record);
        return record;
      }
    }
  }
  record.status = PublishStatus::Sent;
  record.dispatched_at = now();
  journal.append(record);
  return record;
}

}  // namespace blab::publisher
