#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blab/ingestion/ingestion.hpp"
#include "blab/pipeline.hpp"
#include "blab/publisher/publisher.hpp"

namespace blab::publisher {

// Supplies loop instants. The simulated source replays a script and ends;
// the wall-clock source ticks forever.
class TickSource {
 public:
  virtual ~TickSource() = default;
  virtual std::optional<UtcTime> next() = 0;
};

// Clock script, one directive per line (# comments):
//   tick 2022-05-22T05:00:00-03:00
//   set-endpoint quakes_usp file:fixtures/sim/quake_m45.txt
// Endpoint changes apply before the following tick, so a scripted day can
// stage data arriving mid-afternoon.
class ScriptedTicks : public TickSource {
 public:
  // Mutates `sources` in place when the script stages endpoint changes.
  ScriptedTicks(const std::string& script,
                std::vector<ingestion::SourceConfig>& sources);

  std::optional<UtcTime> next() override;

 private:
  struct Directive {
    std::optional<UtcTime> tick;
    std::string source_id, endpoint;  // set-endpoint payload
  };
  std::vector<Directive> directives_;
  size_t cursor_ = 0;
  std::vector<ingestion::SourceConfig>* sources_;
};

class WallClockTicks : public TickSource {
 public:
  explicit WallClockTicks(int interval_seconds)
      : interval_seconds_(interval_seconds) {}
  std::optional<UtcTime> next() override;

 private:
  int interval_seconds_;
  bool first_ = true;
};

struct LoopContext {
  warehouse::ObservationStore& store;
  const pipeline::Artifacts& artifacts;
  std::vector<ingestion::SourceConfig>& sources;
  ingestion::Fetcher& fetcher;
  SchedulePolicy policy;
  PublishClient& client;
  Journal& journal;
  std::string place;
  std::function<void(int)> sleep;                  // injected for tests
  std::function<void(const std::string&)> log;     // optional stderr notes
  size_t news_max_sentences = 3;
};

// Service loop: each tick runs one ingestion cycle, dispatches urgent
// quakes immediately, and at window starts generates and dispatches the
// scheduled content kinds. Per-item failures are journaled, never fatal.
// Returns when the tick source ends (simulation); never with a wall clock.
void run_loop(TickSource& ticks, LoopContext& ctx);

}  // namespace blab::publisher
