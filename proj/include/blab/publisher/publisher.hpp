#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blab/realization/realization.hpp"
#include "blab/summarization/summarization.hpp"
#include "blab/util/time.hpp"

namespace blab::publisher {

using realization::Window;
using summarization::TweetThread;

enum class ContentKind { WeatherReport, NewsSummary, CuriousFact,
                         EarthquakeAlert };

const char* content_kind_name(ContentKind k);

enum class PublishWindow { Morning, Evening, Immediate };

const char* publish_window_name(PublishWindow w);

struct SchedulePolicy {
  std::map<ContentKind, PublishWindow> rules;  // one rule per kind
  size_t max_posts_per_day = 12;
};

// Earthquake alerts always dispatch immediately; weather in the morning,
// news and curious facts in the evening.
SchedulePolicy default_policy();

// Immediate → now. Windowed → now when already inside the window, otherwise
// the next window start (America/Sao_Paulo).
UtcTime schedule(ContentKind kind, UtcTime now, const SchedulePolicy& policy);

bool inside_publish_window(PublishWindow w, UtcTime t);

enum class PublishStatus { Queued, Sent, Failed, Suppressed };

const char* publish_status_name(PublishStatus s);

struct PublishRecord {
  TweetThread thread;
  ContentKind content_kind = ContentKind::WeatherReport;
  PublishWindow window = PublishWindow::Immediate;
  CivilDate local_date;           // idempotency component
  UtcTime decided_at;
  std::optional<UtcTime> dispatched_at;
  PublishStatus status = PublishStatus::Queued;
  std::optional<std::string> failure_detail;
};

struct ClientError : std::runtime_error {
  enum class Kind { Auth, RateLimit, Network, Rejected };
  ClientError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind(kind) {}
  Kind kind;
};

// Publishing client abstraction. `reply_to` carries the id returned for the
// previous part so threads chain correctly.
class PublishClient {
 public:
  virtual ~PublishClient() = default;
  virtual std::string send(const std::string& text,
                           const std::optional<std::string>& reply_to) = 0;
};

// Records would-be posts without any network traffic.
class DryRunClient : public PublishClient {
 public:
  std::string send(const std::string& text,
                   const std::optional<std::string>& reply_to) override;

  struct Call {
    std::string text;
    std::optional<std::string> reply_to;
  };
  const std::vector<Call>& calls() const { return calls_; }

 private:
  std::vector<Call> calls_;
};

// Live micro-blogging client; token from BLAB_TWITTER_TOKEN only.
std::unique_ptr<PublishClient> make_http_client(const std::string& base_url);

// Append-only NDJSON journal mirroring PublishRecord; also the idempotency
// index keyed on (content_kind, window, local date).
class Journal {
 public:
  explicit Journal(const std::filesystem::path& path);

  bool already_decided(ContentKind kind, PublishWindow window,
                       CivilDate date) const;
  size_t sent_count_on(CivilDate date) const;
  void append(const PublishRecord& record);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::set<std::string> decided_;
  std::map<std::string, size_t> sent_per_day_;
};

struct RetryPolicy {
  int max_retries = 2;
  std::vector<int> delays_seconds = {30, 120};
};

// Sends the thread parts in order with reply chaining. Retries Network and
// RateLimit failures per policy (never Auth/Rejected); enforces the daily
// cap via Suppressed. `sleep` is injectable so tests never wait.
PublishRecord dispatch(PublishRecord record, PublishClient& client,
                       Journal& journal, std::function<UtcTime()> now,
                       std::function<void(int)> sleep = {},
                       const RetryPolicy& retry = {}, size_t daily_cap = 12);

}  // namespace blab::publisher
