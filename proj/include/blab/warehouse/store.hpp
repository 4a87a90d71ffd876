#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "blab/warehouse/record.hpp"

namespace blab::warehouse {

enum class PutResult { Inserted, Duplicate };

class StoreError : public std::runtime_error {
 public:
  explicit StoreError(const std::string& what) : std::runtime_error(what) {}
};

// Pluggable observation store. Writes are serialized by the implementation
// (single-writer contract); records are immutable once inserted.
class ObservationStore {
 public:
  virtual ~ObservationStore() = default;

  // Rejects invariant violations with InvalidRecord; never stores partially.
  virtual PutResult put(const Observation& obs) = 0;

  // All records of `kind` with event time inside `window` (closed interval),
  // optionally restricted to a city/station. Sorted ascending by
  // (event time, source_id, dedup key).
  virtual std::vector<Observation> query(
      Kind kind, TimeWindow window,
      const std::optional<std::string>& place = std::nullopt) const = 0;

  virtual size_t count() const = 0;
};

// In-memory store; also the core the file-backed store builds on.
class MemoryStore : public ObservationStore {
 public:
  // The clock guards the "ingested_at never in the future" invariant;
  // defaults to the system clock.
  explicit MemoryStore(std::function<UtcTime()> clock = {});

  PutResult put(const Observation& obs) override;
  std::vector<Observation> query(
      Kind kind, TimeWindow window,
      const std::optional<std::string>& place = std::nullopt) const override;
  size_t count() const override;

 protected:
  // Called with the lock held after a new key is admitted.
  virtual void on_insert(const Observation&) {}

  std::function<UtcTime()> clock_;
  mutable std::shared_mutex mutex_;
  std::map<Kind, std::vector<Observation>> records_;
  std::set<std::string> keys_;  // "<kind>|<dedup key>"
};

// Directory layout: one `<kind>.ndjsonl` file per kind plus a `manifest`
// recording the schema version. The key index is rebuilt from the files on
// open; appends are flushed per record.
class FileStore : public MemoryStore {
 public:
  explicit FileStore(const std::filesystem::path& dir,
                     std::function<UtcTime()> clock = {});

  static constexpr int kSchemaVersion = 1;

 protected:
  void on_insert(const Observation& obs) override;

 private:
  std::filesystem::path dir_;
};

// Floor of whole days between `as_of` and the most recent peak-flagged tide
// at `station` strictly before `as_of`; nullopt when no such peak exists.
std::optional<std::int64_t> days_since_last_tide_peak(
    const ObservationStore& store, const std::string& station, UtcTime as_of);

}  // namespace blab::warehouse
