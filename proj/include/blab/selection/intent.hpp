#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "blab/util/decimal.hpp"
#include "blab/util/time.hpp"

namespace blab::selection {

enum class Predicate {
  CurrentWeatherAndTemperature,
  WeatherAlert,
  FishingCondition,
  Cause,
  DaysSinceLastPeak,
  EarthquakeReport,
  VesselDigest,
  CuriousFact,
  NewsSummaryRef,
};

inline constexpr Predicate kAllPredicates[] = {
    Predicate::CurrentWeatherAndTemperature,
    Predicate::WeatherAlert,
    Predicate::FishingCondition,
    Predicate::Cause,
    Predicate::DaysSinceLastPeak,
    Predicate::EarthquakeReport,
    Predicate::VesselDigest,
    Predicate::CuriousFact,
    Predicate::NewsSummaryRef,
};

// Canonical identifier, e.g. "CURRENT_WEATHER_AND_TEMPERATURE". Grammar and
// catalog files use this form; the intent notation renders underscores as
// spaces.
std::string predicate_name(Predicate p);
std::optional<Predicate> predicate_from_name(const std::string& name);

// Measured value plus its unit ("" for bare counts). Units are rendered by
// the notation and by templates, never stored inside the number.
struct Quantity {
  Decimal value;
  std::string unit;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct EntityRef {
  std::string id;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

using AttrValue = std::variant<std::string, Quantity, bool, EntityRef,
                               CivilDate>;

// Insertion-ordered attribute list; order is part of the message identity
// because the notation renders it.
class AttrMap {
 public:
  void set(std::string name, AttrValue value);
  const AttrValue* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name); }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  size_t size() const { return items_.size(); }

  friend bool operator==(const AttrMap&, const AttrMap&) = default;

 private:
  std::vector<std::pair<std::string, AttrValue>> items_;
};

struct IntentMessage {
  Predicate predicate = Predicate::CurrentWeatherAndTemperature;
  AttrMap attributes;
  double salience = 0.3;  // in [0, 1]
  CivilDate report_date;

  friend bool operator==(const IntentMessage&, const IntentMessage&) = default;
};

// Attributes every message of a predicate must carry.
const std::vector<std::string>& required_attributes(Predicate p);

// Default salience per predicate, used downstream for budget pressure.
double default_salience(Predicate p);

// Nullopt when valid; otherwise the first violated requirement.
std::optional<std::string> check_message(const IntentMessage& msg);

}  // namespace blab::selection
