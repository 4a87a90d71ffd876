#include <doctest.h>

#include <algorithm>

#include "blab/warehouse/store.hpp"
#include "helpers.hpp"

using namespace blab;
using namespace blab::warehouse;
using testutil::make_store;
using testutil::quake_obs;
using testutil::tide_obs;
using testutil::weather_obs;

TEST_CASE("put inserts once and reports duplicates") {
  auto store = make_store();
  auto santos = weather_obs("Santos", "2022-05-22T12:00:00-03:00",
                            WeatherCondition::PartlyCloudy, 25.0);
  CHECK(store.put(santos) == PutResult::Inserted);
  CHECK(store.put(santos) == PutResult::Duplicate);
  CHECK(store.count() == 1);

  // Same dedup key through a different source id is still a duplicate.
  auto mirrored = santos;
  mirrored.source_id = "other";
  CHECK(store.put(mirrored) == PutResult::Duplicate);
  CHECK(store.count() == 1);
}

TEST_CASE("one hundred distinct tide records all land") {
  auto store = make_store();
  int inserted = 0;
  for (int i = 0; i < 100; ++i) {
    char iso[40];
    std::snprintf(iso, sizeof iso, "2022-05-%02dT%02d:00:00Z", 1 + i % 28,
                  i % 24);
    std::string stamp = iso;
    if (store.put(tide_obs("S" + std::to_string(i / 28), stamp, 1.0, false)) ==
        PutResult::Inserted)
      ++inserted;
  }
  CHECK(inserted == 100);
  CHECK(store.count() == 100);
}

TEST_CASE("invalid records are rejected whole") {
  auto store = make_store();
  auto bad = weather_obs("Santos", "2022-05-22T12:00:00Z",
                         WeatherCondition::Clear, 99.0);  // out of range
  CHECK_THROWS_AS(store.put(bad), InvalidRecord);
  CHECK(store.count() == 0);

  auto mismatched = bad;
  mismatched.kind = Kind::Tide;  // payload stays weather
  CHECK_THROWS_AS(store.put(mismatched), InvalidRecord);

  // ingested_at must not be in the store's future.
  warehouse::MemoryStore strict([] { return *parse_iso("2022-01-01T00:00Z"); });
  auto late = weather_obs("Santos", "2022-05-22T12:00:00Z",
                          WeatherCondition::Clear, 20.0);
  CHECK_THROWS_AS(strict.put(late), InvalidRecord);
}

TEST_CASE("query filters by window and place and sorts") {
  auto store = make_store();
  CHECK(store.query(Kind::Weather,
                    {*parse_iso("2022-01-01T00:00Z"),
                     *parse_iso("2023-01-01T00:00Z")})
            .empty());

  // Insert shuffled; expect nondecreasing event times out.
  std::vector<std::string> stamps = {
      "2022-05-22T18:00:00Z", "2022-05-22T09:00:00Z", "2022-05-22T13:00:00Z",
      "2022-05-22T22:00:00Z", "2022-05-22T01:00:00Z", "2022-05-22T11:00:00Z",
      "2022-05-22T05:00:00Z", "2022-05-22T20:00:00Z", "2022-05-22T03:00:00Z",
      "2022-05-22T15:00:00Z"};
  for (size_t i = 0; i < stamps.size(); ++i)
    store.put(weather_obs(i % 2 ? "Santos" : "Rio", stamps[i],
                          WeatherCondition::Clear, 20.0 + i));
  auto all = store.query(Kind::Weather, {*parse_iso("2022-05-22T00:00Z"),
                                         *parse_iso("2022-05-23T00:00Z")});
  REQUIRE(all.size() == stamps.size());
  for (size_t i = 1; i < all.size(); ++i)
    CHECK(event_time(all[i - 1]) <= event_time(all[i]));

  auto santos = store.query(Kind::Weather,
                            {*parse_iso("2022-05-22T00:00Z"),
                             *parse_iso("2022-05-23T00:00Z")},
                            std::string("Santos"));
  CHECK(santos.size() == 5);
  for (const auto& obs : santos) CHECK(place_of(obs) == "Santos");

  CHECK_THROWS_AS(store.query(Kind::Weather, {*parse_iso("2022-05-23T00:00Z"),
                                              *parse_iso("2022-05-22T00:00Z")}),
                  StoreError);
}

TEST_CASE("query equals brute force filter on a random instance") {
  auto store = make_store();
  RandomStream rng(1234);
  std::vector<Observation> all;
  const char* places[] = {"Santos", "Rio", "Natal"};
  for (int i = 0; i < 400; ++i) {
    int day = 1 + static_cast<int>(rng.next_below(27));
    int hour = static_cast<int>(rng.next_below(24));
    char iso[40];
    std::snprintf(iso, sizeof iso, "2022-05-%02dT%02d:00:00Z", day, hour);
    Observation obs =
        rng.next_below(2) == 0
            ? weather_obs(places[rng.next_below(3)], iso,
                          WeatherCondition::Clear,
                          10.0 + static_cast<double>(rng.next_below(20)),
                          "s" + std::to_string(rng.next_below(3)))
            : tide_obs(places[rng.next_below(3)], iso,
                       0.5 + static_cast<double>(rng.next_below(20)) / 10.0,
                       rng.next_below(4) == 0,
                       "s" + std::to_string(rng.next_below(3)));
    if (store.put(obs) == PutResult::Inserted) all.push_back(obs);
  }

  TimeWindow window{*parse_iso("2022-05-10T00:00Z"),
                    *parse_iso("2022-05-20T23:00Z")};
  for (Kind kind : {Kind::Weather, Kind::Tide}) {
    for (auto place : {std::optional<std::string>{}, std::optional<std::string>{"Santos"}}) {
      // Independent oracle: linear filter plus explicit sort.
      std::vector<Observation> expect;
      for (const auto& obs : all)
        if (obs.kind == kind && window.contains(event_time(obs)) &&
            (!place || place_of(obs) == *place))
          expect.push_back(obs);
      std::sort(expect.begin(), expect.end(),
                [](const Observation& a, const Observation& b) {
                  if (event_time(a) != event_time(b))
                    return event_time(a) < event_time(b);
                  if (a.source_id != b.source_id)
                    return a.source_id < b.source_id;
                  return dedup_key(a) < dedup_key(b);
                });
      auto got = store.query(kind, window, place);
      REQUIRE(got.size() == expect.size());
      for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expect[i]);
    }
  }
}

TEST_CASE("days since last tide peak") {
  auto store = make_store();
  UtcTime as_of = *parse_iso("2022-05-22T12:02:00-03:00");
  CHECK(!days_since_last_tide_peak(store, "Santos", as_of));

  // Peak 30 days and 2 hours before as_of.
  store.put(tide_obs("Santos", "2022-04-22T10:02:00-03:00", 2.0, true));
  auto days = days_since_last_tide_peak(store, "Santos", as_of);
  REQUIRE(days.has_value());
  CHECK(*days == 30);

  // A later peak takes over; oracle scans all stored peaks.
  store.put(tide_obs("Santos", "2022-05-12T01:00:00-03:00", 2.2, true));
  store.put(tide_obs("Santos", "2022-05-21T07:00:00-03:00", 1.9, false));
  auto tides = store.query(Kind::Tide, {UtcTime{0}, as_of});
  std::optional<UtcTime> latest;
  for (const auto& obs : tides) {
    const auto& t = std::get<TideRecord>(obs.payload);
    if (t.is_peak && t.observed_at < as_of &&
        (!latest || t.observed_at > *latest))
      latest = t.observed_at;
  }
  REQUIRE(latest.has_value());
  CHECK(*days_since_last_tide_peak(store, "Santos", as_of) ==
        whole_days_between(*latest, as_of));
  CHECK(*days_since_last_tide_peak(store, "Santos", as_of) == 10);

  // A peak at another station does not count.
  CHECK(!days_since_last_tide_peak(store, "Rio", as_of));
}

TEST_CASE("file store persists and rebuilds its index") {
  auto dir = testutil::temp_dir("store");
  auto clock = [] { return testutil::far_future_clock(); };
  {
    FileStore store(dir, clock);
    store.put(weather_obs("Santos", "2022-05-22T12:00:00-03:00",
                          WeatherCondition::PartlyCloudy, 25.0));
    store.put(tide_obs("Santos", "2022-05-22T11:30:00-03:00", 1.8, false));
    CHECK(store.count() == 2);
  }
  CHECK(std::filesystem::exists(dir / "weather.ndjsonl"));
  CHECK(std::filesystem::exists(dir / "manifest"));
  CHECK(testutil::slurp(dir / "manifest").find("\"schema_version\":1") !=
        std::string::npos);

  {
    FileStore reopened(dir, clock);
    CHECK(reopened.count() == 2);
    // Index rebuilt: the same record is still a duplicate.
    CHECK(reopened.put(weather_obs("Santos", "2022-05-22T12:00:00-03:00",
                                   WeatherCondition::PartlyCloudy, 25.0)) ==
          PutResult::Duplicate);
  }

  // Stored lines are byte-stable: keys sorted, decimals two digits.
  std::string line = testutil::slurp(dir / "weather.ndjsonl");
  CHECK(line.find("\"temperature_celsius\":\"25.00\"") != std::string::npos);
  Observation parsed = from_json_line(line.substr(0, line.find('\n')));
  CHECK(to_json_line(parsed) + "\n" == line);
}

TEST_CASE("json line round trip for every kind") {
  std::vector<Observation> samples = {
      weather_obs("Santos", "2022-05-22T12:00:00-03:00",
                  WeatherCondition::Storm, -3.25),
      tide_obs("Ilha Fiscal", "2022-05-22T02:00:00Z", 0.4, true),
      quake_obs(4.5, "2022-05-22T17:40:00Z"),
  };
  warehouse::VesselRecord vessel{"563025390", "cargo",
                                 {Decimal::parse("-24.10").value(),
                                  Decimal::parse("-46.30").value()},
                                 *parse_iso("2022-05-22T10:00:00Z")};
  samples.push_back({Kind::Vessel, vessel, *parse_iso("2022-05-22T10:05:00Z"),
                     "ais"});
  warehouse::NewsRecord news{"https://example.org/a", "Título",
                             "Corpo da notícia.",
                             *parse_iso("2022-05-22T09:00:00Z"), "Agência"};
  samples.push_back({Kind::News, news, *parse_iso("2022-05-22T09:05:00Z"),
                     "rss"});
  for (const auto& obs : samples) {
    CAPTURE(kind_name(obs.kind));
    Observation back = from_json_line(to_json_line(obs));
    CHECK(back == obs);
  }
  CHECK_THROWS_AS(from_json_line("{not json"), InvalidRecord);
  CHECK_THROWS_AS(from_json_line("{\"kind\":\"weather\"}"), InvalidRecord);
}
