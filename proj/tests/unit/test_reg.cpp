#include <doctest.h>

#include <set>

#include "blab/reg/registry.hpp"
#include "blab/util/unicode.hpp"
#include "helpers.hpp"

using namespace blab;
using namespace blab::reg;

TEST_CASE("registry loads profiles and rejects bad files") {
  auto registry = load_entities(
      "entity a gender=masc number=sing\n"
      "full: descrição completa de A\n"
      "expr: A curto\n"
      "\n"
      "entity b gender=fem number=plur\n"
      "full: descrição de B\n"
      "expr: B curto\n"
      "expr: elas [pronoun]\n");
  CHECK(registry.size() == 2);
  CHECK(registry.profile("a").gender == Gender::Masc);
  CHECK(registry.profile("b").number == Number::Plur);
  CHECK(registry.profile("b").short_expressions[1].pronoun);
  CHECK_THROWS_AS(registry.profile("c"), UnknownEntity);

  // No expressions.
  CHECK_THROWS_AS(load_entities("entity x gender=masc number=sing\n"
                                "full: algo\n"),
                  RegistryError);
  // Duplicate id.
  try {
    load_entities(
        "entity x gender=masc number=sing\nfull: f\nexpr: e\n"
        "entity x gender=masc number=sing\nfull: f\nexpr: e\n");
    FAIL("expected RegistryError");
  } catch (const RegistryError& e) {
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    CHECK(e.line == 4);
  }
  // Full description repeated as an expression.
  CHECK_THROWS_AS(load_entities("entity x gender=masc number=sing\n"
                                "full: mesmo texto\nexpr: mesmo texto\n"),
                  RegistryError);
  // Pronouns only.
  CHECK_THROWS_AS(load_entities("entity x gender=masc number=sing\n"
                                "full: f\nexpr: ele [pronoun]\n"),
                  RegistryError);
  // Missing gender.
  CHECK_THROWS_AS(load_entities("entity x number=sing\nfull: f\nexpr: e\n"),
                  RegistryError);
}

TEST_CASE("first mention expands to the full description") {
  auto registry = testutil::english_registry();
  MentionHistory history;
  RandomStream rng(1);
  std::string out = resolve("Detected by «ENTITY:institute» today.", registry,
                            history, rng);
  CHECK(out ==
        "Detected by The Seismological Center at the University of São Paulo "
        "(USP) today.");
  CHECK(history.seen.contains("institute"));
}

TEST_CASE("later mentions draw from the expression list") {
  auto registry = testutil::english_registry();
  const auto& profile = registry.profile("institute");
  std::set<std::string> allowed;
  for (const auto& e : profile.short_expressions) allowed.insert(e.text);

  std::set<std::string> observed;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    MentionHistory history;
    RandomStream rng(seed);
    std::string out =
        resolve("«ENTITY:institute» reported. Then «ENTITY:institute» spoke.",
                registry, history, rng);
    size_t first = out.find(profile.full_description);
    REQUIRE(first == 0);
    std::string rest = out.substr(profile.full_description.size());
    bool found = false;
    for (const auto& expr : allowed)
      if (rest.find(expr) != std::string::npos) {
        observed.insert(expr);
        found = true;
      }
    CHECK(found);
    CHECK(out.find("«ENTITY:") == std::string::npos);
  }
  // Uniform sampling visits every expression in 300 draws.
  CHECK(observed.size() == allowed.size());
}

TEST_CASE("pronouns never cross a segment boundary") {
  auto registry = testutil::english_registry();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MentionHistory history;
    RandomStream rng(seed);
    // Segment 1 mentions it once; segment 2 refers again.
    (void)resolve("«ENTITY:institute» ligou.", registry, history, rng);
    std::string second =
        resolve("Depois, «ENTITY:institute» confirmou.", registry, history,
                rng);
    CHECK(second.find("it confirmou") == std::string::npos);

    // Within one segment, a pronoun is allowed on the second mention.
    MentionHistory fresh;
    std::string joined = resolve(
        "«ENTITY:institute» ligou. Depois «ENTITY:institute» confirmou.",
        registry, fresh, rng);
    CHECK(joined.find("«ENTITY:") == std::string::npos);
  }
}

TEST_CASE("text without tags passes through untouched") {
  auto registry = testutil::english_registry();
  MentionHistory history;
  RandomStream rng(3);
  std::string text = "Mar calmo, sem entidades.";
  CHECK(resolve(text, registry, history, rng) == text);
  CHECK(history.seen.empty());
}

TEST_CASE("unknown entity ids fail loudly") {
  auto registry = testutil::english_registry();
  MentionHistory history;
  RandomStream rng(4);
  CHECK_THROWS_AS(resolve("«ENTITY:nope»", registry, history, rng),
                  UnknownEntity);
}

TEST_CASE("resolution is deterministic per seed") {
  auto registry = testutil::english_registry();
  std::string text =
      "«ENTITY:institute» e «ENTITY:institute» e «ENTITY:institute».";
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MentionHistory h1, h2;
    RandomStream r1(seed), r2(seed);
    CHECK(resolve(text, registry, h1, r1) == resolve(text, registry, h2, r2));
  }
}

TEST_CASE("longest expression bounds every resolution") {
  auto registry = testutil::english_registry();
  const auto& profile = registry.profile("institute");
  size_t bound = max_expression_codepoints(profile);
  CHECK(bound == count_codepoints(profile.full_description));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    MentionHistory history;
    RandomStream rng(seed);
    std::string out = resolve("«ENTITY:institute»«ENTITY:institute»",
                              registry, history, rng);
    CHECK(count_codepoints(out) <= 2 * bound);
  }
}
