#include "blab/warehouse/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <json.hpp>

namespace blab::warehouse {

namespace {

UtcTime system_now() {
  return UtcTime{std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count()};
}

struct QueryOrder {
  bool operator()(const Observation& a, const Observation& b) const {
    UtcTime ta = event_time(a), tb = event_time(b);
    if (ta != tb) return ta < tb;
    if (a.source_id != b.source_id) return a.source_id < b.source_id;
    return dedup_key(a) < dedup_key(b);
  }
};

}  // namespace

MemoryStore::MemoryStore(std::function<UtcTime()> clock)
    : clock_(clock ? std::move(clock) : system_now) {}

PutResult MemoryStore::put(const Observation& obs) {
  validate(obs);
  std::unique_lock lock(mutex_);
  if (obs.ingested_at > clock_())
    throw InvalidRecord("ingested_at is in the future");
  std::string key = std::string(kind_name(obs.kind)) + "|" + dedup_key(obs);
  if (keys_.contains(key)) return PutResult::Duplicate;
  records_[obs.kind].push_back(obs);
  keys_.insert(key);
  on_insert(obs);
  return PutResult::Inserted;
}

std::vector<Observation> MemoryStore::query(
    Kind kind, TimeWindow window,
    const std::optional<std::string>& place) const {
  if (window.start > window.end)
    throw StoreError("query window start is after its end");
  std::shared_lock lock(mutex_);
  std::vector<Observation> out;
  auto it = records_.find(kind);
  if (it == records_.end()) return out;
  for (const Observation& obs : it->second) {
    if (!window.contains(event_time(obs))) continue;
    if (place && place_of(obs) != *place) continue;
    out.push_back(obs);
  }
  std::sort(out.begin(), out.end(), QueryOrder{});
  return out;
}

size_t MemoryStore::count() const {
  std::shared_lock lock(mutex_);
  size_t n = 0;
  for (const auto& [kind, recs] : records_) n += recs.size();
  return n;
}

FileStore::FileStore(const std::filesystem::path& dir,
                     std::function<UtcTime()> clock)
    : MemoryStore(std::move(clock)), dir_(dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir_);
  fs::path manifest = dir_ / "manifest";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("schema_version") ||
        j["schema_version"].get<int>() != kSchemaVersion)
      throw StoreError("unsupported store schema in " + manifest.string());
  } else {
    std::ofstream out(manifest);
    out << nlohmann::json{{"schema_version", kSchemaVersion}}.dump() << "\n";
  }
  for (Kind kind : {Kind::Weather, Kind::Tide, Kind::Vessel, Kind::Earthquake,
                    Kind::News}) {
    fs::path file = dir_ / (std::string(kind_name(kind)) + ".ndjsonl");
    if (!fs::exists(file)) continue;
    std::ifstream in(file);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      Observation obs;
      try {
        obs = from_json_line(line);
      } catch (const InvalidRecord& e) {
        throw StoreError(file.string() + ":" + std::to_string(lineno) + ": " +
                         e.what());
      }
      std::string key = std::string(kind_name(obs.kind)) + "|" + dedup_key(obs);
      if (keys_.contains(key)) continue;
      records_[obs.kind].push_back(obs);
      keys_.insert(key);
    }
  }
}

void FileStore::on_insert(const Observation& obs) {
  std::filesystem::path file =
      dir_ / (std::string(kind_name(obs.kind)) + ".ndjsonl");
  std::ofstream out(file, std::ios::app);
  if (!out) throw StoreError("cannot append to " + file.string());
  out << to_json_line(obs) << "\n";
  out.flush();
}

std::optional<std::int64_t> days_since_last_tide_peak(
    const ObservationStore& store, const std::string& station, UtcTime as_of) {
  auto tides = store.query(
      Kind::Tide, TimeWindow{UtcTime{INT64_MIN / 4}, as_of}, station);
  std::optional<UtcTime> latest_peak;
  for (const Observation& obs : tides) {
    const auto& tide = std::get<TideRecord>(obs.payload);
    if (!tide.is_peak) continue;
    if (tide.observed_at >= as_of) continue;  // strictly before
    if (!latest_peak || tide.observed_at > *latest_peak)
      latest_peak = tide.observed_at;
  }
  if (!latest_peak) return std::nullopt;
  return whole_days_between(*latest_peak, as_of);
}

}  // namespace blab::warehouse
