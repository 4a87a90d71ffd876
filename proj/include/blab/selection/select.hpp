#pragma once

#include <string>
#include <vector>

#include "blab/selection/intent.hpp"
#include "blab/warehouse/store.hpp"

namespace blab::selection {

// Magnitude at and above which an earthquake is urgent (bypasses scheduling
// and flips the Cause attribution).
inline constexpr double kUrgentMagnitude = 4.0;

// Fishing-condition thresholds on the latest tide height, in meters.
inline constexpr double kGoodTideMeters = 1.5;
inline constexpr double kFairTideMeters = 0.8;

// Weather-alert thresholds.
inline constexpr double kAlertWindKmh = 60.0;
inline constexpr double kAlertTideMeters = 2.2;

// Audit record: which stored record a numeric attribute came from.
struct TraceEntry {
  size_t message_index;
  std::string attribute;
  std::string dedup_key;
};

struct SelectionResult {
  std::vector<IntentMessage> messages;
  std::vector<TraceEntry> trace;
};

// Rule-based content selection over a store snapshot. Deterministic; every
// attribute is traceable to a stored record or a rule constant.
//
// The tide-cause attribution is a domain heuristic: the swing is blamed on
// an urgent quake when one occurred within 48 hours of the report moment,
// and on the moon calendar otherwise.
SelectionResult select_with_trace(TimeWindow window, const std::string& place,
                                  const warehouse::ObservationStore& store);

std::vector<IntentMessage> select(TimeWindow window, const std::string& place,
                                  const warehouse::ObservationStore& store);

}  // namespace blab::selection
