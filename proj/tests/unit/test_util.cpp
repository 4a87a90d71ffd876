#include <doctest.h>

#include "blab/util/decimal.hpp"
#include "blab/util/rng.hpp"
#include "blab/util/time.hpp"
#include "blab/util/unicode.hpp"

using namespace blab;

TEST_CASE("iso parsing round trips through utc") {
  auto t = parse_iso("2022-05-22T12:00:00-03:00");
  REQUIRE(t.has_value());
  CHECK(format_iso_utc(*t) == "2022-05-22T15:00:00Z");
  CHECK(parse_iso("2022-05-22T15:00Z")->seconds == t->seconds);
  CHECK(parse_iso("2022-05-22T15:00:00")->seconds == t->seconds);
  CHECK(!parse_iso("2022-13-01"));
  CHECK(!parse_iso("22/05/2022"));
  CHECK(!parse_iso("2022-05-22T25:00Z"));
}

TEST_CASE("sao paulo local dates and windows") {
  // 2022-05-23 01:30 UTC is still 2022-05-22 in Sao Paulo.
  UtcTime t = *parse_iso("2022-05-23T01:30:00Z");
  CHECK(local_date(t) == CivilDate{2022, 5, 22});
  CHECK(local_seconds_of_day(t) == 22 * 3600 + 1800);
  TimeWindow day = local_day_window({2022, 5, 22});
  CHECK(format_iso_utc(day.start) == "2022-05-22T03:00:00Z");
  CHECK(format_iso_utc(day.end) == "2022-05-23T02:59:59Z");
  CHECK(day.contains(t));
}

TEST_CASE("whole day arithmetic floors") {
  UtcTime peak = *parse_iso("2022-04-22T10:00:00-03:00");
  UtcTime later = *parse_iso("2022-05-22T12:00:00-03:00");
  CHECK(whole_days_between(peak, later) == 30);
  CHECK(whole_days_between(peak, UtcTime{peak.seconds + 2 * 3600}) == 0);
}

TEST_CASE("decimal parses and renders fixed point") {
  CHECK(Decimal::parse("25")->cents() == 2500);
  CHECK(Decimal::parse("1.8")->cents() == 180);
  CHECK(Decimal::parse("-3.25")->cents() == -325);
  CHECK(Decimal::parse("1,8")->cents() == 180);
  CHECK(!Decimal::parse("1.234"));
  CHECK(!Decimal::parse(""));
  CHECK(!Decimal::parse("abc"));
  Decimal d = *Decimal::parse("25");
  CHECK(d.to_fixed2() == "25.00");
  CHECK(d.to_trimmed() == "25");
  CHECK(Decimal::parse("1.80")->to_trimmed() == "1.8");
  CHECK(Decimal::parse("1.80")->to_trimmed_pt() == "1,8");
  CHECK(Decimal::parse("-0.05")->to_fixed2() == "-0.05");
}

TEST_CASE("code point counting is byte independent") {
  CHECK(count_codepoints("abc") == 3);
  CHECK(count_codepoints("25ºC") == 4);
  CHECK(count_codepoints("maré") == 4);
  CHECK(count_codepoints("🌊") == 1);
  CHECK(count_codepoints("Em Santos faz 25ºC.") == 19);
}

TEST_CASE("folding lowers case and strips diacritics") {
  CHECK(fold_text("Maré ALTA") == "mare alta");
  CHECK(fold_text("ÁGUA à noite") == "agua a noite");
  CHECK(fold_text("ção") == "cao");
  // Combining marks fold away entirely (NFD input).
  std::string nfd = "e\xCC\x81";  // e + U+0301
  CHECK(fold_text(nfd) == "e");
}

TEST_CASE("random streams are deterministic and splittable") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream base(7);
  RandomStream s1 = base.split("templates");
  RandomStream s2 = base.split("reg");
  CHECK(s1.next_u64() != s2.next_u64());
  // Splitting is const: substreams do not perturb the parent.
  RandomStream c(7), d(7);
  (void)c.split("x");
  CHECK(c.next_u64() == d.next_u64());
}

TEST_CASE("bounded draws stay in range and cover values") {
  RandomStream rng(9);
  bool seen[5] = {};
  for (int i = 0; i < 1000; ++i) {
    auto v = rng.next_below(5);
    REQUIRE(v < 5);
    seen[v] = true;
  }
  for (bool s : seen) CHECK(s);
}
