#include "blab/selection/notation.hpp"

#include <array>
#include <cctype>

namespace blab::selection {

namespace {

constexpr std::array<const char*, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

std::string spaced(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (c == '_') c = ' ';
  return out;
}

std::string underscored(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (c == ' ') c = '_';
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string render_date(const CivilDate& d) {
  return std::string(kMonths[d.month - 1]) + " " + std::to_string(d.day) +
         ", " + std::to_string(d.year);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_plain_number(const std::string& s) {
  return static_cast<bool>(Decimal::parse(s)) &&
         s.find(',') == std::string::npos;
}

bool is_alpha_word(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  return true;
}

// "May 22, 2022" → CivilDate
std::optional<CivilDate> parse_notation_date(const std::string& s) {
  size_t sp = s.find(' ');
  if (sp == std::string::npos) return std::nullopt;
  int month = 0;
  for (size_t i = 0; i < kMonths.size(); ++i)
    if (s.substr(0, sp) == kMonths[i]) month = static_cast<int>(i) + 1;
  if (month == 0) return std::nullopt;
  size_t comma = s.find(", ", sp + 1);
  if (comma == std::string::npos) return std::nullopt;
  std::string day = s.substr(sp + 1, comma - sp - 1);
  std::string year = s.substr(comma + 2);
  if (!all_digits(day) || !all_digits(year) || day.size() > 2 ||
      year.size() != 4)
    return std::nullopt;
  int d = std::stoi(day);
  if (d < 1 || d > 31) return std::nullopt;
  return CivilDate{std::stoi(year), month, d};
}

AttrValue classify_value(const std::string& raw) {
  if (auto date = parse_notation_date(raw)) return *date;
  if (raw == "yes") return true;
  if (raw == "no") return false;
  if (raw.rfind("entity:", 0) == 0) return EntityRef{raw.substr(7)};
  static const std::string celsius = "ºC";  // 3 bytes, º is two
  if (raw.size() > celsius.size() &&
      raw.compare(raw.size() - celsius.size(), celsius.size(), celsius) == 0) {
    std::string num = raw.substr(0, raw.size() - celsius.size());
    if (is_plain_number(num)) return Quantity{*Decimal::parse(num), "celsius"};
  }
  if (is_plain_number(raw)) return Quantity{*Decimal::parse(raw), ""};
  size_t sp = raw.find(' ');
  if (sp != std::string::npos && sp + 1 < raw.size()) {
    std::string num = raw.substr(0, sp);
    std::string unit = raw.substr(sp + 1);
    if (is_plain_number(num) && is_alpha_word(unit)) {
      if (unit == "meters") unit = "m";
      return Quantity{*Decimal::parse(num), unit};
    }
  }
  return raw;
}

}  // namespace

std::string render_attr_value(const AttrValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, Quantity>) {
          std::string n = v.value.to_trimmed();
          if (v.unit == "celsius") return n + "ºC";
          if (v.unit == "m") return n + " meters";
          if (v.unit.empty()) return n;
          return n + " " + v.unit;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "yes" : "no";
        } else if constexpr (std::is_same_v<T, EntityRef>) {
          return "entity:" + v.id;
        } else {
          return render_date(v);
        }
      },
      value);
}

std::string serialize_intent(const IntentMessage& msg) {
  std::string out = spaced(predicate_name(msg.predicate));
  out += " (";
  bool first = true;
  for (const auto& [key, value] : msg.attributes) {
    if (!first) out += ",";
    first = false;
    out += spaced(key);
    out += "=\"";
    out += escape(render_attr_value(value));
    out += "\"";
  }
  out += ");";
  return out;
}

std::string serialize_intents(const std::vector<IntentMessage>& messages) {
  std::string out;
  for (const IntentMessage& msg : messages) {
    if (!out.empty()) out += " ";
    out += serialize_intent(msg);
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  std::vector<IntentMessage> run() {
    std::vector<IntentMessage> out;
    skip_ws();
    while (!eof()) {
      out.push_back(parse_message());
      skip_ws();
    }
    // Block-level report date: the first date attribute, message order.
    CivilDate report_date{1970, 1, 1};
    bool found = false;
    for (const IntentMessage& m : out) {
      for (const auto& [k, v] : m.attributes) {
        if (const auto* d = std::get_if<CivilDate>(&v)) {
          report_date = *d;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    for (IntentMessage& m : out) m.report_date = report_date;
    return out;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  void advance() {
    if (eof()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
      advance();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw NotationError(line_, col_, what);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  IntentMessage parse_message() {
    int name_line = line_, name_col = col_;
    std::string name;
    while (!eof() && (std::isupper(static_cast<unsigned char>(peek())) ||
                      std::isdigit(static_cast<unsigned char>(peek())) ||
                      peek() == ' ' || peek() == '_')) {
      name += peek();
      advance();
    }
    while (!name.empty() && name.back() == ' ') name.pop_back();
    if (name.empty()) fail("expected predicate name");
    auto predicate = predicate_from_name(underscored(name));
    if (!predicate)
      throw NotationError(name_line, name_col,
                          "unknown predicate: " + name);
    IntentMessage msg;
    msg.predicate = *predicate;
    msg.salience = default_salience(*predicate);
    expect('(');
    skip_ws();
    if (peek() != ')') {
      for (;;) {
        auto [key, value] = parse_pair();
        msg.attributes.set(key, value);
        skip_ws();
        // Parsing is lenient: "," and ";" both separate pairs.
        if (peek() == ',' || peek() == ';') {
          advance();
          skip_ws();
          continue;
        }
        break;
      }
    }
    expect(')');
    skip_ws();
    expect(';');
    if (auto problem = check_message(msg))
      throw NotationError(name_line, name_col, *problem);
    return msg;
  }

  std::pair<std::string, AttrValue> parse_pair() {
    std::string key;
    while (!eof() && (std::islower(static_cast<unsigned char>(peek())) ||
                      std::isdigit(static_cast<unsigned char>(peek())) ||
                      peek() == ' ' || peek() == '_')) {
      key += peek();
      advance();
    }
    while (!key.empty() && key.back() == ' ') key.pop_back();
    if (key.empty()) fail("expected attribute name");
    // Lenient on the key/value separator: "=" canonically, ":" accepted.
    if (peek() == '=' || peek() == ':')
      advance();
    else
      fail("expected '=' after attribute name");
    expect('"');
    std::string raw;
    while (!eof() && peek() != '"') {
      char c = peek();
      if (c == '\\') {
        advance();
        if (eof()) fail("dangling escape");
        c = peek();
      }
      raw += c;
      advance();
    }
    expect('"');
    return {canonical_key(underscored(key)), classify_value(raw)};
  }

  // Long-form keys some feeds use for the frozen schema names.
  static std::string canonical_key(const std::string& key) {
    if (key == "height_of_the_sea") return "height";
    return key;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<IntentMessage> parse_intents(const std::string& text) {
  return Parser(text).run();
}

}  // namespace blab::selection
