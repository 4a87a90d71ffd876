#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blab/selection/intent.hpp"
#include "blab/util/rng.hpp"

namespace blab::lexicalization {

using selection::AttrValue;
using selection::IntentMessage;
using selection::Predicate;

class GrammarError : public std::runtime_error {
 public:
  GrammarError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

class MissingTemplate : public std::runtime_error {
 public:
  explicit MissingTemplate(Predicate p)
      : std::runtime_error("no template for predicate " +
                           selection::predicate_name(p)) {}
};

class MissingAttribute : public std::runtime_error {
 public:
  explicit MissingAttribute(const std::string& slot)
      : std::runtime_error("message has no attribute '" + slot + "'") {}
};

class MissingLexiconEntry : public std::runtime_error {
 public:
  MissingLexiconEntry(const std::string& key, const std::string& surface)
      : std::runtime_error("no lexicon gender for (" + key + ", " + surface +
                           ")") {}
};

enum class Gender { Masc, Fem };

// One parsed pattern element. Agreement alternatives are sub-patterns and may
// nest plain slots, e.g. "{days#último dia|últimos {days} dias}".
struct PatternToken {
  enum class Type { Text, Slot, GenderAgreement, NumberAgreement, Entity };
  Type type = Type::Text;
  std::string text;   // literal text, or the slot name
  std::string alt_a;  // masculine / singular alternative
  std::string alt_b;  // feminine / plural alternative
};

struct Template {
  Predicate predicate = Predicate::CurrentWeatherAndTemperature;
  std::string pattern;
  double weight = 1.0;
  std::vector<PatternToken> tokens;
};

struct LexiconEntry {
  std::string attribute_key;
  std::string surface;
  Gender gender = Gender::Masc;
};

// Immutable after load; shareable across threads.
class Grammar {
 public:
  const std::vector<Template>& templates_for(Predicate p) const;
  bool covers(Predicate p) const { return templates_.contains(p); }

  std::optional<Gender> lexicon_gender(const std::string& attribute_key,
                                       const std::string& surface) const;

  // pt-BR surface for a canonical attribute value ("partly cloudy" →
  // "parcialmente nublado"); nullopt when no mapping is declared.
  std::optional<std::string> verbalization(const std::string& attribute_key,
                                           const std::string& value) const;

  const std::vector<LexiconEntry>& lexicon() const { return lexicon_; }

 private:
  friend Grammar load_grammar(const std::string& source);

  std::map<Predicate, std::vector<Template>> templates_;
  std::vector<LexiconEntry> lexicon_;
  std::map<std::pair<std::string, std::string>, std::string> verbalize_;
};

// Grammar file format, one declaration per line (# starts a comment):
//
//   template <PREDICATE> weight=<w>
//     <pattern on the following indented line>
//   lexicon <attribute_key> <surface...> <masc|fem>
//   verbalize <attribute_key> <canonical value>=<surface text>
//
// Pattern tokens: {slot}, {slot@masc|fem}, {slot#singular|plural},
// «ENTITY:slot». Load fails unless every predicate is covered, weights are
// positive, every slot names a required attribute of its predicate and every
// gender-agreement slot has lexicon coverage.
Grammar load_grammar(const std::string& source);

Grammar load_grammar_file(const std::string& path);

// Parses a pattern into tokens, validating slot names against the
// predicate's attribute schema. Throws GrammarError.
std::vector<PatternToken> parse_pattern(const std::string& pattern,
                                        Predicate predicate);

// Weighted random choice among the predicate's templates; a fixed seed gives
// a fixed choice sequence.
const Template& choose_template(const Grammar& grammar, Predicate predicate,
                                RandomStream& rng);

// Renders an attribute value as pt-BR surface text (decimal commas, "sim" /
// "não", dates written out). Text values pass through `verbalize` mappings.
std::string render_surface_value(const Grammar& grammar,
                                 const std::string& attribute_key,
                                 const AttrValue& value);

// Substitutes message attributes into the template. Entity tokens come out
// as «ENTITY:<id>» for the referring-expression stage; everything else is
// final surface text.
std::string fill(const Template& tmpl, const IntentMessage& message,
                 const Grammar& grammar);

}  // namespace blab::lexicalization
