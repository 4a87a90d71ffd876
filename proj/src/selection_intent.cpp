#include "blab/selection/intent.hpp"

namespace blab::selection {

std::string predicate_name(Predicate p) {
  switch (p) {
    case Predicate::CurrentWeatherAndTemperature:
      return "CURRENT_WEATHER_AND_TEMPERATURE";
    case Predicate::WeatherAlert: return "WEATHER_ALERT";
    case Predicate::FishingCondition: return "FISHING_CONDITION";
    case Predicate::Cause: return "CAUSE";
    case Predicate::DaysSinceLastPeak: return "DAYS_SINCE_LAST_PEAK";
    case Predicate::EarthquakeReport: return "EARTHQUAKE_REPORT";
    case Predicate::VesselDigest: return "VESSEL_DIGEST";
    case Predicate::CuriousFact: return "CURIOUS_FACT";
    case Predicate::NewsSummaryRef: return "NEWS_SUMMARY_REF";
  }
  return "?";
}

std::optional<Predicate> predicate_from_name(const std::string& name) {
  for (Predicate p : kAllPredicates)
    if (predicate_name(p) == name) return p;
  return std::nullopt;
}

void AttrMap::set(std::string name, AttrValue value) {
  for (auto& [k, v] : items_) {
    if (k == name) {
      v = std::move(value);
      return;
    }
  }
  items_.emplace_back(std::move(name), std::move(value));
}

const AttrValue* AttrMap::find(const std::string& name) const {
  for (const auto& [k, v] : items_)
    if (k == name) return &v;
  return nullptr;
}

const std::vector<std::string>& required_attributes(Predicate p) {
  static const std::vector<std::string> cwt = {"weather", "temperature",
                                               "city", "timestamp"};
  static const std::vector<std::string> alert = {"alert_kind", "city"};
  static const std::vector<std::string> fishing = {
      "condition", "event", "height", "days_since_last_peak"};
  static const std::vector<std::string> cause = {"earthquake",
                                                 "moon_calendar"};
  static const std::vector<std::string> days = {"days"};
  static const std::vector<std::string> quake = {
      "magnitude", "epicenter_desc", "institute", "occurred_at"};
  static const std::vector<std::string> vessel = {"count", "area"};
  static const std::vector<std::string> fact = {"fact"};
  static const std::vector<std::string> news = {"title", "url"};
  switch (p) {
    case Predicate::CurrentWeatherAndTemperature: return cwt;
    case Predicate::WeatherAlert: return alert;
    case Predicate::FishingCondition: return fishing;
    case Predicate::Cause: return cause;
    case Predicate::DaysSinceLastPeak: return days;
    case Predicate::EarthquakeReport: return quake;
    case Predicate::VesselDigest: return vessel;
    case Predicate::CuriousFact: return fact;
    case Predicate::NewsSummaryRef: return news;
  }
  return fact;
}

double default_salience(Predicate p) {
  switch (p) {
    case Predicate::EarthquakeReport: return 1.0;
    case Predicate::WeatherAlert: return 0.9;
    case Predicate::FishingCondition: return 0.6;
    case Predicate::CurrentWeatherAndTemperature: return 0.5;
    default: return 0.3;
  }
}

std::optional<std::string> check_message(const IntentMessage& msg) {
  if (msg.salience < 0.0 || msg.salience > 1.0)
    return "salience outside [0, 1]";
  for (const std::string& attr : required_attributes(msg.predicate))
    if (!msg.attributes.contains(attr))
      return predicate_name(msg.predicate) + " is missing attribute '" +
             attr + "'";
  return std::nullopt;
}

}  // namespace blab::selection
