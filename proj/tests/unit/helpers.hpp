#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "blab/lexicalization/grammar.hpp"
#include "blab/reg/registry.hpp"
#include "blab/selection/intent.hpp"
#include "blab/warehouse/store.hpp"

namespace testutil {

inline std::filesystem::path source_dir() {
  return std::filesystem::path(BLAB_SOURCE_DIR);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Unique fresh directory under the build tree.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("blab_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline blab::UtcTime far_future_clock() { return blab::UtcTime{1ll << 40}; }

// Store whose clock never rejects fixture timestamps.
inline blab::warehouse::MemoryStore make_store() {
  return blab::warehouse::MemoryStore([] { return far_future_clock(); });
}

inline blab::warehouse::Observation weather_obs(
    const std::string& city, const std::string& iso,
    blab::warehouse::WeatherCondition cond, double temp,
    const std::string& source = "w1") {
  blab::warehouse::WeatherRecord rec;
  rec.city = city;
  rec.observed_at = *blab::parse_iso(iso);
  rec.condition = cond;
  rec.temperature_celsius =
      blab::Decimal::from_cents(static_cast<std::int64_t>(temp * 100 + 0.5));
  blab::warehouse::Observation obs;
  obs.kind = blab::warehouse::Kind::Weather;
  obs.payload = rec;
  obs.ingested_at = *blab::parse_iso(iso);
  obs.source_id = source;
  return obs;
}

inline blab::warehouse::Observation tide_obs(const std::string& station,
                                             const std::string& iso,
                                             double height, bool peak,
                                             const std::string& source = "t1") {
  blab::warehouse::TideRecord rec;
  rec.station = station;
  rec.observed_at = *blab::parse_iso(iso);
  rec.height_meters =
      blab::Decimal::from_cents(static_cast<std::int64_t>(height * 100 + 0.5));
  rec.is_peak = peak;
  blab::warehouse::Observation obs;
  obs.kind = blab::warehouse::Kind::Tide;
  obs.payload = rec;
  obs.ingested_at = *blab::parse_iso(iso);
  obs.source_id = source;
  return obs;
}

inline blab::warehouse::Observation quake_obs(double magnitude,
                                              const std::string& iso,
                                              const std::string& institute =
                                                  "usp_seismology",
                                              double lat = -24.1,
                                              double lon = -46.3) {
  blab::warehouse::EarthquakeRecord rec;
  rec.magnitude =
      blab::Decimal::from_cents(static_cast<std::int64_t>(magnitude * 100 + 0.5));
  rec.epicenter = {
      blab::Decimal::from_cents(static_cast<std::int64_t>(lat * 100 - 0.5)),
      blab::Decimal::from_cents(static_cast<std::int64_t>(lon * 100 - 0.5))};
  rec.depth_km = blab::Decimal::from_int(10);
  rec.occurred_at = *blab::parse_iso(iso);
  rec.institute = institute;
  blab::warehouse::Observation obs;
  obs.kind = blab::warehouse::Kind::Earthquake;
  obs.payload = rec;
  obs.ingested_at = *blab::parse_iso(iso);
  obs.source_id = "q1";
  return obs;
}

// The paper-style English registry used by REG tests.
inline blab::reg::EntityRegistry english_registry() {
  return blab::reg::load_entities(
      "entity institute gender=masc number=sing\n"
      "full: The Seismological Center at the University of São Paulo (USP)\n"
      "expr: The Seismological Center at USP\n"
      "expr: the Institute\n"
      "expr: sismoUSP\n"
      "expr: it [pronoun]\n");
}

// Minimal grammar covering every predicate with one no-slot template, so
// fixtures can splice in the templates a test cares about.
inline std::string minimal_grammar_text() {
  std::string out;
  for (auto p : blab::selection::kAllPredicates) {
    out += "template " + blab::selection::predicate_name(p) + " weight=1\n";
    out += "  texto fixo.\n";
  }
  return out;
}

inline blab::selection::IntentMessage message(
    blab::selection::Predicate p,
    std::initializer_list<std::pair<std::string, blab::selection::AttrValue>>
        attrs,
    double salience = -1) {
  blab::selection::IntentMessage m;
  m.predicate = p;
  m.salience =
      salience < 0 ? blab::selection::default_salience(p) : salience;
  m.report_date = {2022, 5, 22};
  for (const auto& [k, v] : attrs) m.attributes.set(k, v);
  return m;
}

inline blab::selection::AttrValue qty(double v, const std::string& unit) {
  return blab::selection::Quantity{
      blab::Decimal::from_cents(static_cast<std::int64_t>(v * 100 + 0.5)),
      unit};
}

}  // namespace testutil
