#include "blab/warehouse/record.hpp"

#include <json.hpp>

namespace blab::warehouse {

using nlohmann::json;

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Weather: return "weather";
    case Kind::Tide: return "tide";
    case Kind::Vessel: return "vessel";
    case Kind::Earthquake: return "earthquake";
    case Kind::News: return "news";
  }
  return "?";
}

std::optional<Kind> kind_from_name(const std::string& name) {
  if (name == "weather") return Kind::Weather;
  if (name == "tide") return Kind::Tide;
  if (name == "vessel") return Kind::Vessel;
  if (name == "earthquake") return Kind::Earthquake;
  if (name == "news") return Kind::News;
  return std::nullopt;
}

const char* condition_name(WeatherCondition c) {
  switch (c) {
    case WeatherCondition::Clear: return "clear";
    case WeatherCondition::PartlyCloudy: return "partly cloudy";
    case WeatherCondition::Cloudy: return "cloudy";
    case WeatherCondition::Rain: return "rain";
    case WeatherCondition::Storm: return "storm";
  }
  return "?";
}

std::optional<WeatherCondition> condition_from_name(const std::string& name) {
  if (name == "clear") return WeatherCondition::Clear;
  if (name == "partly cloudy" || name == "partly_cloudy")
    return WeatherCondition::PartlyCloudy;
  if (name == "cloudy") return WeatherCondition::Cloudy;
  if (name == "rain") return WeatherCondition::Rain;
  if (name == "storm") return WeatherCondition::Storm;
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidRecord(what);
}

void validate_geo(const GeoPoint& p, const std::string& ctx) {
  require(p.lat >= Decimal::from_int(-90) && p.lat <= Decimal::from_int(90),
          ctx + ": latitude out of range");
  require(p.lon >= Decimal::from_int(-180) && p.lon <= Decimal::from_int(180),
          ctx + ": longitude out of range");
}

Kind payload_kind(const Payload& p) {
  switch (p.index()) {
    case 0: return Kind::Weather;
    case 1: return Kind::Tide;
    case 2: return Kind::Vessel;
    case 3: return Kind::Earthquake;
    default: return Kind::News;
  }
}

}  // namespace

void validate(const Observation& obs) {
  require(payload_kind(obs.payload) == obs.kind,
          "payload variant does not match kind");
  require(!obs.source_id.empty(), "source_id is empty");
  if (const auto* w = std::get_if<WeatherRecord>(&obs.payload)) {
    require(!w->city.empty(), "weather: city is empty");
    require(w->temperature_celsius >= Decimal::from_int(-20) &&
                w->temperature_celsius <= Decimal::from_int(60),
            "weather: temperature out of range");
    if (w->wind_speed_kmh)
      require(*w->wind_speed_kmh >= Decimal::from_int(0),
              "weather: negative wind speed");
  } else if (const auto* t = std::get_if<TideRecord>(&obs.payload)) {
    require(!t->station.empty(), "tide: station is empty");
    require(t->height_meters >= Decimal::from_int(-5) &&
                t->height_meters <= Decimal::from_int(15),
            "tide: height out of range");
  } else if (const auto* e = std::get_if<EarthquakeRecord>(&obs.payload)) {
    require(e->magnitude >= Decimal::from_int(0) &&
                e->magnitude <= Decimal::from_int(10),
            "earthquake: magnitude out of range");
    require(e->depth_km >= Decimal::from_int(0),
            "earthquake: negative depth");
    require(!e->institute.empty(), "earthquake: institute is empty");
    validate_geo(e->epicenter, "earthquake");
  } else if (const auto* v = std::get_if<VesselRecord>(&obs.payload)) {
    require(!v->vessel_id.empty(), "vessel: vessel_id is empty");
    validate_geo(v->position, "vessel");
  } else if (const auto* n = std::get_if<NewsRecord>(&obs.payload)) {
    require(!n->url.empty(), "news: url is empty");
    require(!n->body.empty(), "news: body is empty");
  }
}

UtcTime event_time(const Observation& obs) {
  return std::visit(
      [](const auto& p) -> UtcTime {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EarthquakeRecord>)
          return p.occurred_at;
        else if constexpr (std::is_same_v<T, NewsRecord>)
          return p.published_at;
        else
          return p.observed_at;
      },
      obs.payload);
}

std::string place_of(const Observation& obs) {
  if (const auto* w = std::get_if<WeatherRecord>(&obs.payload)) return w->city;
  if (const auto* t = std::get_if<TideRecord>(&obs.payload)) return t->station;
  return {};
}

namespace {

// Epicenters are rounded to 0.01 degrees for keying, so near-identical fixes
// from different feeds collapse into one record.
std::string geo_key(const GeoPoint& p) {
  return p.lat.to_fixed2() + "," + p.lon.to_fixed2();
}

}  // namespace

std::string dedup_key(const Observation& obs) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeatherRecord>)
          return p.city + "|" + format_iso_utc(p.observed_at);
        else if constexpr (std::is_same_v<T, TideRecord>)
          return p.station + "|" + format_iso_utc(p.observed_at);
        else if constexpr (std::is_same_v<T, EarthquakeRecord>)
          return p.institute + "|" + format_iso_utc(p.occurred_at) + "|" +
                 geo_key(p.epicenter);
        else if constexpr (std::is_same_v<T, VesselRecord>)
          return p.vessel_id + "|" + format_iso_utc(p.observed_at);
        else
          return p.url;
      },
      obs.payload);
}

std::string to_json_line(const Observation& obs) {
  json j;
  j["kind"] = kind_name(obs.kind);
  j["source_id"] = obs.source_id;
  j["ingested_at"] = format_iso_utc(obs.ingested_at);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeatherRecord>) {
          j["city"] = p.city;
          j["observed_at"] = format_iso_utc(p.observed_at);
          j["condition"] = condition_name(p.condition);
          j["temperature_celsius"] = p.temperature_celsius.to_fixed2();
          if (p.wind_speed_kmh)
            j["wind_speed_kmh"] = p.wind_speed_kmh->to_fixed2();
        } else if constexpr (std::is_same_v<T, TideRecord>) {
          j["station"] = p.station;
          j["observed_at"] = format_iso_utc(p.observed_at);
          j["height_meters"] = p.height_meters.to_fixed2();
          j["is_peak"] = p.is_peak;
        } else if constexpr (std::is_same_v<T, EarthquakeRecord>) {
          j["magnitude"] = p.magnitude.to_fixed2();
          j["lat"] = p.epicenter.lat.to_fixed2();
          j["lon"] = p.epicenter.lon.to_fixed2();
          j["depth_km"] = p.depth_km.to_fixed2();
          j["occurred_at"] = format_iso_utc(p.occurred_at);
          j["institute"] = p.institute;
        } else if constexpr (std::is_same_v<T, VesselRecord>) {
          j["vessel_id"] = p.vessel_id;
          j["vessel_type"] = p.vessel_type;
          j["lat"] = p.position.lat.to_fixed2();
          j["lon"] = p.position.lon.to_fixed2();
          j["observed_at"] = format_iso_utc(p.observed_at);
        } else {
          j["url"] = p.url;
          j["title"] = p.title;
          j["body"] = p.body;
          j["published_at"] = format_iso_utc(p.published_at);
          j["source_name"] = p.source_name;
        }
      },
      obs.payload);
  return j.dump();  // nlohmann objects keep keys sorted
}

namespace {

std::string want_str(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw InvalidRecord(std::string("missing field: ") + key);
  return j[key].get<std::string>();
}

UtcTime want_time(const json& j, const char* key) {
  auto t = parse_iso(want_str(j, key));
  if (!t) throw InvalidRecord(std::string("bad timestamp in field: ") + key);
  return *t;
}

Decimal want_dec(const json& j, const char* key) {
  auto d = Decimal::parse(want_str(j, key));
  if (!d) throw InvalidRecord(std::string("bad decimal in field: ") + key);
  return *d;
}

}  // namespace

Observation from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw InvalidRecord("malformed record line");
  Observation obs;
  auto kind = kind_from_name(want_str(j, "kind"));
  if (!kind) throw InvalidRecord("unknown kind");
  obs.kind = *kind;
  obs.source_id = want_str(j, "source_id");
  obs.ingested_at = want_time(j, "ingested_at");
  switch (*kind) {
    case Kind::Weather: {
      WeatherRecord w;
      w.city = want_str(j, "city");
      w.observed_at = want_time(j, "observed_at");
      auto c = condition_from_name(want_str(j, "condition"));
      if (!c) throw InvalidRecord("unknown weather condition");
      w.condition = *c;
      w.temperature_celsius = want_dec(j, "temperature_celsius");
      if (j.contains("wind_speed_kmh")) w.wind_speed_kmh = want_dec(j, "wind_speed_kmh");
      obs.payload = w;
      break;
    }
    case Kind::Tide: {
      TideRecord t;
      t.station = want_str(j, "station");
      t.observed_at = want_time(j, "observed_at");
      t.height_meters = want_dec(j, "height_meters");
      if (!j.contains("is_peak") || !j["is_peak"].is_boolean())
        throw InvalidRecord("missing field: is_peak");
      t.is_peak = j["is_peak"].get<bool>();
      obs.payload = t;
      break;
    }
    case Kind::Earthquake: {
      EarthquakeRecord e;
      e.magnitude = want_dec(j, "magnitude");
      e.epicenter = GeoPoint{want_dec(j, "lat"), want_dec(j, "lon")};
      e.depth_km = want_dec(j, "depth_km");
      e.occurred_at = want_time(j, "occurred_at");
      e.institute = want_str(j, "institute");
      obs.payload = e;
      break;
    }
    case Kind::Vessel: {
      VesselRecord v;
      v.vessel_id = want_str(j, "vessel_id");
      v.vessel_type = want_str(j, "vessel_type");
      v.position = GeoPoint{want_dec(j, "lat"), want_dec(j, "lon")};
      v.observed_at = want_time(j, "observed_at");
      obs.payload = v;
      break;
    }
    case Kind::News: {
      NewsRecord n;
      n.url = want_str(j, "url");
      n.title = want_str(j, "title");
      n.body = want_str(j, "body");
      n.published_at = want_time(j, "published_at");
      n.source_name = want_str(j, "source_name");
      obs.payload = n;
      break;
    }
  }
  validate(obs);
  return obs;
}

}  // namespace blab::warehouse
