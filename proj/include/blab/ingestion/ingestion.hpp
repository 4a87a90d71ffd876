#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blab/warehouse/store.hpp"

namespace blab::ingestion {

struct SourceConfig {
  std::string source_id;
  warehouse::Kind kind = warehouse::Kind::Weather;
  std::string endpoint;
  int fetch_interval_minutes = 60;  // ≥ 1
  std::string parser_id;
  bool enabled = true;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

// Source config file: one source per line,
//   source <id> kind=<kind> endpoint=<url> interval=<minutes>
//       parser=<parser_id> enabled=<true|false>
// BLAB_SOURCE_<ID>_ENDPOINT environment variables override endpoints.
std::vector<SourceConfig> load_sources(const std::string& text);
std::vector<SourceConfig> load_sources_file(const std::string& path,
                                            bool apply_env_overrides = true);
void apply_endpoint_overrides(std::vector<SourceConfig>& configs);

class FetchError : public std::runtime_error {
 public:
  explicit FetchError(const std::string& what) : std::runtime_error(what) {}
};

// Transport abstraction; tests inject in-memory maps, production composes
// file:// and http(s):// by scheme.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual std::string fetch(const std::string& url) = 0;  // throws FetchError
};

class MapFetcher : public Fetcher {
 public:
  void set(const std::string& url, std::string body) {
    bodies_[url] = std::move(body);
  }
  void fail(const std::string& url, const std::string& reason) {
    failures_[url] = reason;
  }
  std::string fetch(const std::string& url) override;

 private:
  std::map<std::string, std::string> bodies_;
  std::map<std::string, std::string> failures_;
};

// file:<relative or absolute path> resolved against `base_dir`;
// http(s):// via the network.
std::unique_ptr<Fetcher> make_default_fetcher(const std::string& base_dir);

enum class ParseErrorKind { Empty, Unrecoverable };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind(kind) {}
  ParseErrorKind kind;
};

class UnknownParser : public std::runtime_error {
 public:
  explicit UnknownParser(const std::string& id)
      : std::runtime_error("unknown parser: " + id) {}
};

struct ParseResult {
  std::vector<warehouse::Observation> records;
  size_t skipped = 0;  // malformed entries dropped, never partially emitted
};

// Pure function of its inputs. Registered parsers:
//   weather_csv  city;iso_timestamp;condition;temperature[;wind_kmh]
//   tide_csv     station;iso_timestamp;height_meters;is_peak
//   vessel_csv   vessel_id;vessel_type;lat;lon;iso_timestamp
//   quake_kv     blank-line separated key:value blocks
//   news_text    url:/source:/published: headers, blank line, title line,
//                body; articles separated by === lines
ParseResult parse_source(const std::string& parser_id, const std::string& raw,
                         const std::string& source_id, UtcTime ingested_at);

bool parser_registered(const std::string& parser_id);

enum class FetchStatus { Ok, NetworkError, ParseError, Empty };

const char* fetch_status_name(FetchStatus s);

struct FetchOutcome {
  std::string source_id;
  UtcTime fetched_at;
  FetchStatus status = FetchStatus::Ok;
  size_t inserted = 0;
  size_t duplicates = 0;
  std::optional<std::string> error_detail;
};

struct CycleResult {
  std::vector<FetchOutcome> outcomes;  // one per enabled source, config order
  std::vector<warehouse::Observation> inserted;  // newly stored this cycle
};

// Runs every enabled source; a failing source never affects the others.
CycleResult run_cycle(const std::vector<SourceConfig>& configs,
                      Fetcher& fetcher, warehouse::ObservationStore& store,
                      std::function<UtcTime()> clock = {});

// The subset that must bypass scheduling: earthquakes at or above the
// urgency threshold.
std::vector<warehouse::Observation> detect_urgent(
    const std::vector<warehouse::Observation>& new_records);

}  // namespace blab::ingestion
