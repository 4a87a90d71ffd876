#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "blab/selection/intent.hpp"

namespace blab::selection {

// The textual interchange form for intent messages, used by the annotated
// corpus files:
//
//   CURRENT WEATHER AND TEMPERATURE (weather="partly cloudy",
//       temperature="25ºC",city="Santos",timestamp="May 22, 2022");
//
// Canonical rendering rules (parse is lenient about whitespace, serialize
// always emits these):
//   - predicate and attribute names print with spaces instead of
//     underscores; predicates upper-case, attributes lower-case;
//   - attribute pairs are `key="value"` joined by "," with no spaces;
//   - messages end with ";" and are joined by a single space;
//   - numbers print trimmed with "." as decimal separator; unit "celsius"
//     renders as `NºC`, unit "m" as `N meters`, other units as `N <unit>`;
//   - booleans render "yes"/"no"; entity references "entity:<id>";
//   - dates render English-style, "May 22, 2022".
//
// Salience and report date are not part of the notation: parsing restores
// default salience per predicate, and every parsed message's report_date is
// the first date-valued attribute found in the block (Unix epoch when none).

class NotationError : public std::runtime_error {
 public:
  NotationError(int line, int column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

std::string render_attr_value(const AttrValue& value);

std::string serialize_intent(const IntentMessage& msg);
std::string serialize_intents(const std::vector<IntentMessage>& messages);

std::vector<IntentMessage> parse_intents(const std::string& text);

}  // namespace blab::selection
