#include "blab/selection/select.hpp"

#include <algorithm>

namespace blab::selection {

using warehouse::Kind;
using warehouse::Observation;

namespace {

Decimal dec(double v) {
  return Decimal::from_cents(static_cast<std::int64_t>(v * 100 + 0.5));
}

IntentMessage base_message(Predicate p, CivilDate report_date) {
  IntentMessage m;
  m.predicate = p;
  m.salience = default_salience(p);
  m.report_date = report_date;
  return m;
}

std::string pt_coord(const Decimal& d) { return d.to_trimmed_pt(); }

}  // namespace

SelectionResult select_with_trace(TimeWindow window, const std::string& place,
                                  const warehouse::ObservationStore& store) {
  SelectionResult result;
  const CivilDate report_date = local_date(window.start);

  auto trace = [&](const std::string& attr, const Observation& obs) {
    result.trace.push_back(
        {result.messages.size(), attr, warehouse::dedup_key(obs)});
  };

  auto weather = store.query(Kind::Weather, window, place);
  auto tides = store.query(Kind::Tide, window, place);
  auto quakes = store.query(Kind::Earthquake, window);
  auto vessels = store.query(Kind::Vessel, window);

  std::vector<const Observation*> urgent_quakes;
  for (const Observation& obs : quakes) {
    const auto& q = std::get<warehouse::EarthquakeRecord>(obs.payload);
    if (q.magnitude >= dec(kUrgentMagnitude)) urgent_quakes.push_back(&obs);
  }

  // Current weather: the latest observation in the window wins.
  const Observation* latest_weather =
      weather.empty() ? nullptr : &weather.back();
  if (latest_weather) {
    const auto& w =
        std::get<warehouse::WeatherRecord>(latest_weather->payload);
    IntentMessage m =
        base_message(Predicate::CurrentWeatherAndTemperature, report_date);
    m.attributes.set("weather",
                     std::string(warehouse::condition_name(w.condition)));
    trace("temperature", *latest_weather);
    m.attributes.set("temperature", Quantity{w.temperature_celsius, "celsius"});
    m.attributes.set("city", w.city);
    m.attributes.set("timestamp", local_date(w.observed_at));
    result.messages.push_back(std::move(m));
  }

  const Observation* latest_tide = tides.empty() ? nullptr : &tides.back();

  // Weather alert: storm, heavy swell or strong wind, in that priority.
  std::string alert_kind;
  if (latest_weather) {
    const auto& w =
        std::get<warehouse::WeatherRecord>(latest_weather->payload);
    if (w.condition == warehouse::WeatherCondition::Storm)
      alert_kind = "tempestade";
    else if (w.wind_speed_kmh && *w.wind_speed_kmh >= dec(kAlertWindKmh))
      alert_kind = "vento";
  }
  if (alert_kind.empty() && latest_tide) {
    const auto& t = std::get<warehouse::TideRecord>(latest_tide->payload);
    if (t.height_meters >= dec(kAlertTideMeters)) alert_kind = "ressaca";
  }
  auto days_since_peak =
      warehouse::days_since_last_tide_peak(store, place, window.end);
  if (!alert_kind.empty()) {
    IntentMessage m = base_message(Predicate::WeatherAlert, report_date);
    m.attributes.set("alert_kind", alert_kind);
    m.attributes.set("city", place);
    result.messages.push_back(std::move(m));
    if (days_since_peak) {
      IntentMessage d =
          base_message(Predicate::DaysSinceLastPeak, report_date);
      d.attributes.set("days",
                       Quantity{Decimal::from_int(*days_since_peak), ""});
      result.messages.push_back(std::move(d));
    }
  }

  // Fishing condition plus tide-cause attribution. Needs both a tide reading
  // in the window and a known previous peak.
  if (latest_tide && days_since_peak) {
    const auto& t = std::get<warehouse::TideRecord>(latest_tide->payload);
    const double h = t.height_meters.to_double();
    std::string condition, event;
    if (h >= kGoodTideMeters) {
      condition = "good";
      event = "sea level is high";
    } else if (h >= kFairTideMeters) {
      condition = "fair";
      event = "sea level is moderate";
    } else {
      condition = "poor";
      event = "sea level is low";
    }
    IntentMessage m = base_message(Predicate::FishingCondition, report_date);
    m.attributes.set("condition", condition);
    m.attributes.set("event", event);
    trace("height", *latest_tide);
    m.attributes.set("height", Quantity{t.height_meters, "m"});
    m.attributes.set("days_since_last_peak",
                     Quantity{Decimal::from_int(*days_since_peak), ""});
    result.messages.push_back(std::move(m));

    // The tide swing is attributed to a recent urgent quake when one exists,
    // otherwise to the moon calendar.
    bool quake_cause = false;
    for (const Observation* obs : urgent_quakes) {
      const auto& q = std::get<warehouse::EarthquakeRecord>(obs->payload);
      if (window.end.seconds - q.occurred_at.seconds <= 48 * 3600)
        quake_cause = true;
    }
    IntentMessage cause = base_message(Predicate::Cause, report_date);
    cause.attributes.set("earthquake", quake_cause);
    cause.attributes.set("moon_calendar", !quake_cause);
    result.messages.push_back(std::move(cause));
  }

  for (const Observation* obs : urgent_quakes) {
    const auto& q = std::get<warehouse::EarthquakeRecord>(obs->payload);
    IntentMessage m = base_message(Predicate::EarthquakeReport, report_date);
    trace("magnitude", *obs);
    m.attributes.set("magnitude", Quantity{q.magnitude, ""});
    m.attributes.set("epicenter_desc",
                     "em alto-mar (lat " + pt_coord(q.epicenter.lat) +
                         ", lon " + pt_coord(q.epicenter.lon) + ")");
    m.attributes.set("institute", EntityRef{q.institute});
    m.attributes.set("occurred_at", local_date(q.occurred_at));
    result.messages.push_back(std::move(m));
  }

  if (!vessels.empty()) {
    std::vector<std::string> ids;
    for (const Observation& obs : vessels)
      ids.push_back(
          std::get<warehouse::VesselRecord>(obs.payload).vessel_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    IntentMessage m = base_message(Predicate::VesselDigest, report_date);
    m.attributes.set(
        "count", Quantity{Decimal::from_int(
                     static_cast<std::int64_t>(ids.size())), ""});
    m.attributes.set("area", "na Amazônia Azul");
    result.messages.push_back(std::move(m));
  }

  return result;
}

std::vector<IntentMessage> select(TimeWindow window, const std::string& place,
                                  const warehouse::ObservationStore& store) {
  return select_with_trace(window, place, store).messages;
}

}  // namespace blab::selection
