#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "blab/util/decimal.hpp"
#include "blab/util/time.hpp"

namespace blab::warehouse {

enum class Kind { Weather, Tide, Vessel, Earthquake, News };

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& name);

enum class WeatherCondition { Clear, PartlyCloudy, Cloudy, Rain, Storm };

// Canonical (storage/notation) token, e.g. "partly cloudy".
const char* condition_name(WeatherCondition c);
std::optional<WeatherCondition> condition_from_name(const std::string& name);

struct GeoPoint {
  Decimal lat;
  Decimal lon;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct WeatherRecord {
  std::string city;
  UtcTime observed_at;
  WeatherCondition condition = WeatherCondition::Clear;
  Decimal temperature_celsius;
  std::optional<Decimal> wind_speed_kmh;

  friend bool operator==(const WeatherRecord&, const WeatherRecord&) = default;
};

struct TideRecord {
  std::string station;
  UtcTime observed_at;
  Decimal height_meters;
  bool is_peak = false;

  friend bool operator==(const TideRecord&, const TideRecord&) = default;
};

struct EarthquakeRecord {
  Decimal magnitude;
  GeoPoint epicenter;
  Decimal depth_km;
  UtcTime occurred_at;
  std::string institute;  // entity id, resolved later by the REG step

  friend bool operator==(const EarthquakeRecord&,
                         const EarthquakeRecord&) = default;
};

struct VesselRecord {
  std::string vessel_id;
  std::string vessel_type;
  GeoPoint position;
  UtcTime observed_at;

  friend bool operator==(const VesselRecord&, const VesselRecord&) = default;
};

struct NewsRecord {
  std::string url;
  std::string title;
  std::string body;
  UtcTime published_at;
  std::string source_name;

  friend bool operator==(const NewsRecord&, const NewsRecord&) = default;
};

using Payload = std::variant<WeatherRecord, TideRecord, VesselRecord,
                             EarthquakeRecord, NewsRecord>;

struct Observation {
  Kind kind = Kind::Weather;
  Payload payload;
  UtcTime ingested_at;
  std::string source_id;

  friend bool operator==(const Observation&, const Observation&) = default;
};

class InvalidRecord : public std::runtime_error {
 public:
  explicit InvalidRecord(const std::string& what)
      : std::runtime_error(what) {}
};

// Throws InvalidRecord on any type-invariant violation (payload/kind
// mismatch, out-of-range values, empty required strings).
void validate(const Observation& obs);

// The event timestamp the store sorts and filters by (observed_at,
// occurred_at or published_at depending on the payload).
UtcTime event_time(const Observation& obs);

// City/station/area string used for place filtering; empty when the kind has
// no place notion (earthquake, news).
std::string place_of(const Observation& obs);

// Natural key used for deduplication; stable across processes.
std::string dedup_key(const Observation& obs);

// One NDJSON line (keys sorted, no trailing newline) and its inverse.
std::string to_json_line(const Observation& obs);
Observation from_json_line(const std::string& line);  // throws InvalidRecord

}  // namespace blab::warehouse
