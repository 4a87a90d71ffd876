#include "blab/lexicalization/grammar.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace blab::lexicalization {

namespace {

constexpr std::array<const char*, 12> kPtMonths = {
    "janeiro", "fevereiro", "março",    "abril",   "maio",     "junho",
    "julho",   "agosto",    "setembro", "outubro", "novembro", "dezembro"};

const std::string kEntityOpen = "«ENTITY:";  // « is two bytes
const std::string kEntityClose = "»";

bool is_slot_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Splits "name@a|b" / "name#a|b" bodies at the top-level separator and '|',
// honoring nested braces inside the alternatives.
struct TokenBody {
  std::string name;
  char kind = 0;  // 0 plain, '@' gender, '#' number
  std::string alt_a, alt_b;
};

std::optional<TokenBody> split_token_body(const std::string& body) {
  TokenBody out;
  size_t i = 0;
  while (i < body.size() && is_slot_name_char(body[i])) ++i;
  out.name = body.substr(0, i);
  if (out.name.empty()) return std::nullopt;
  if (i == body.size()) return out;  // plain slot
  if (body[i] != '@' && body[i] != '#') return std::nullopt;
  out.kind = body[i];
  ++i;
  int depth = 0;
  size_t bar = std::string::npos;
  for (size_t j = i; j < body.size(); ++j) {
    if (body[j] == '{') ++depth;
    else if (body[j] == '}') --depth;
    else if (body[j] == '|' && depth == 0) {
      bar = j;
      break;
    }
  }
  if (bar == std::string::npos) return std::nullopt;
  out.alt_a = body.substr(i, bar - i);
  out.alt_b = body.substr(bar + 1);
  return out;
}

std::vector<PatternToken> parse_pattern_impl(const std::string& pattern,
                                             int line, Predicate predicate) {
  std::vector<PatternToken> tokens;
  const auto& allowed = selection::required_attributes(predicate);
  auto check_slot = [&](const std::string& slot) {
    for (const std::string& a : allowed)
      if (a == slot) return;
    throw GrammarError(line, "slot '{" + slot + "}' is not an attribute of " +
                                 selection::predicate_name(predicate));
  };

  std::string text;
  size_t i = 0;
  auto flush_text = [&] {
    if (text.empty()) return;
    tokens.push_back({PatternToken::Type::Text, text, "", ""});
    text.clear();
  };
  while (i < pattern.size()) {
    if (pattern.compare(i, kEntityOpen.size(), kEntityOpen) == 0) {
      size_t close = pattern.find(kEntityClose, i + kEntityOpen.size());
      if (close == std::string::npos)
        throw GrammarError(line, "unterminated entity token");
      std::string slot =
          pattern.substr(i + kEntityOpen.size(), close - i - kEntityOpen.size());
      check_slot(slot);
      flush_text();
      tokens.push_back({PatternToken::Type::Entity, slot, "", ""});
      i = close + kEntityClose.size();
      continue;
    }
    char c = pattern[i];
    if (c == '{') {
      int depth = 1;
      size_t j = i + 1;
      while (j < pattern.size() && depth > 0) {
        if (pattern[j] == '{') ++depth;
        if (pattern[j] == '}') --depth;
        ++j;
      }
      if (depth != 0) throw GrammarError(line, "unbalanced '{' in pattern");
      auto body = split_token_body(pattern.substr(i + 1, j - i - 2));
      if (!body)
        throw GrammarError(line, "malformed token in pattern: " +
                                     pattern.substr(i, j - i));
      check_slot(body->name);
      flush_text();
      PatternToken tok;
      tok.text = body->name;
      tok.alt_a = body->alt_a;
      tok.alt_b = body->alt_b;
      switch (body->kind) {
        case 0: tok.type = PatternToken::Type::Slot; break;
        case '@': tok.type = PatternToken::Type::GenderAgreement; break;
        default: tok.type = PatternToken::Type::NumberAgreement; break;
      }
      // Alternatives may nest plain slots; validate them now.
      for (const std::string* alt : {&tok.alt_a, &tok.alt_b})
        if (!alt->empty()) parse_pattern_impl(*alt, line, predicate);
      tokens.push_back(std::move(tok));
      i = j;
      continue;
    }
    if (c == '}') throw GrammarError(line, "unbalanced '}' in pattern");
    text += c;
    ++i;
  }
  flush_text();
  return tokens;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<Template>& Grammar::templates_for(Predicate p) const {
  auto it = templates_.find(p);
  if (it == templates_.end()) throw MissingTemplate(p);
  return it->second;
}

std::optional<Gender> Grammar::lexicon_gender(
    const std::string& attribute_key, const std::string& surface) const {
  for (const LexiconEntry& e : lexicon_)
    if (e.attribute_key == attribute_key && e.surface == surface)
      return e.gender;
  return std::nullopt;
}

std::optional<std::string> Grammar::verbalization(
    const std::string& attribute_key, const std::string& value) const {
  auto it = verbalize_.find({attribute_key, value});
  if (it == verbalize_.end()) return std::nullopt;
  return it->second;
}

Grammar load_grammar(const std::string& source) {
  Grammar g;
  std::istringstream in(source);
  std::string raw;
  int lineno = 0;
  std::optional<std::pair<Template, int>> pending;  // template awaiting pattern

  auto finish_pending = [&](const std::string& pattern_line, int line) {
    Template t = pending->first;
    t.pattern = trim(pattern_line);
    if (t.pattern.empty()) throw GrammarError(line, "empty pattern");
    t.tokens = parse_pattern_impl(t.pattern, line, t.predicate);
    g.templates_[t.predicate].push_back(std::move(t));
    pending.reset();
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') continue;

    if (pending) {
      if (raw[0] == ' ' || raw[0] == '\t') {
        finish_pending(raw, lineno);
        continue;
      }
      throw GrammarError(pending->second,
                         "template declaration without an indented pattern");
    }

    auto words = split_ws(stripped);
    if (words[0] == "template") {
      if (words.size() != 3 || words[2].rfind("weight=", 0) != 0)
        throw GrammarError(lineno, "expected: template <PREDICATE> weight=<w>");
      auto predicate = selection::predicate_from_name(words[1]);
      if (!predicate)
        throw GrammarError(lineno, "unknown predicate: " + words[1]);
      char* end = nullptr;
      std::string wstr = words[2].substr(7);
      double w = std::strtod(wstr.c_str(), &end);
      if (end != wstr.c_str() + wstr.size() || !(w > 0.0) || !std::isfinite(w))
        throw GrammarError(lineno, "weight must be a positive number");
      Template t;
      t.predicate = *predicate;
      t.weight = w;
      pending = {std::move(t), lineno};
    } else if (words[0] == "lexicon") {
      if (words.size() < 4)
        throw GrammarError(lineno,
                           "expected: lexicon <attribute> <surface> <gender>");
      LexiconEntry e;
      e.attribute_key = words[1];
      const std::string& gender = words.back();
      if (gender == "masc") e.gender = Gender::Masc;
      else if (gender == "fem") e.gender = Gender::Fem;
      else throw GrammarError(lineno, "gender must be masc or fem");
      for (size_t i = 2; i + 1 < words.size(); ++i) {
        if (i > 2) e.surface += ' ';
        e.surface += words[i];
      }
      for (const LexiconEntry& prev : g.lexicon_)
        if (prev.attribute_key == e.attribute_key && prev.surface == e.surface)
          throw GrammarError(lineno, "duplicate lexicon entry for (" +
                                         e.attribute_key + ", " + e.surface +
                                         ")");
      g.lexicon_.push_back(std::move(e));
    } else if (words[0] == "verbalize") {
      size_t attr_end = stripped.find(' ', 10);
      size_t eq = stripped.find('=');
      if (attr_end == std::string::npos || eq == std::string::npos ||
          eq < attr_end)
        throw GrammarError(lineno,
                           "expected: verbalize <attribute> <value>=<surface>");
      std::string attr = trim(stripped.substr(10, attr_end - 10));
      std::string value = trim(stripped.substr(attr_end + 1, eq - attr_end - 1));
      std::string surface = trim(stripped.substr(eq + 1));
      if (attr.empty() || value.empty() || surface.empty())
        throw GrammarError(lineno, "empty verbalize field");
      g.verbalize_[{attr, value}] = surface;
    } else {
      throw GrammarError(lineno, "unknown declaration: " + words[0]);
    }
  }
  if (pending)
    throw GrammarError(pending->second,
                       "template declaration without an indented pattern");

  for (Predicate p : selection::kAllPredicates)
    if (!g.templates_.contains(p))
      throw GrammarError(lineno, "no template for predicate " +
                                     selection::predicate_name(p));

  // Gender agreement needs lexicon coverage for the slot it inflects on.
  for (const auto& [predicate, templates] : g.templates_) {
    for (const Template& t : templates) {
      for (const PatternToken& tok : t.tokens) {
        if (tok.type != PatternToken::Type::GenderAgreement) continue;
        bool covered = false;
        for (const LexiconEntry& e : g.lexicon_)
          if (e.attribute_key == tok.text) covered = true;
        if (!covered)
          throw GrammarError(
              lineno, "agreement token '{" + tok.text +
                          "@...}' has no lexicon entries for its slot");
      }
    }
  }
  return g;
}

Grammar load_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError(0, "cannot open grammar file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_grammar(buf.str());
}

std::vector<PatternToken> parse_pattern(const std::string& pattern,
                                        Predicate predicate) {
  return parse_pattern_impl(pattern, 0, predicate);
}

const Template& choose_template(const Grammar& grammar, Predicate predicate,
                                RandomStream& rng) {
  const auto& templates = grammar.templates_for(predicate);
  std::vector<double> weights;
  weights.reserve(templates.size());
  for (const Template& t : templates) weights.push_back(t.weight);
  return templates[rng.pick_weighted(weights)];
}

namespace {

std::string render_pt_date(const CivilDate& d) {
  return std::to_string(d.day) + " de " + kPtMonths[d.month - 1] + " de " +
         std::to_string(d.year);
}

}  // namespace

std::string render_surface_value(const Grammar& grammar,
                                 const std::string& attribute_key,
                                 const AttrValue& value) {
  using selection::EntityRef;
  using selection::Quantity;
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (auto s = grammar.verbalization(attribute_key, v)) return *s;
          return v;
        } else if constexpr (std::is_same_v<T, Quantity>) {
          std::string n = v.value.to_trimmed_pt();
          if (v.unit == "celsius") return n + "ºC";
          if (v.unit == "m")
            return n + (v.value == Decimal::from_int(1) ? " metro" : " metros");
          if (v.unit.empty()) return n;
          return n + " " + v.unit;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "sim" : "não";
        } else if constexpr (std::is_same_v<T, EntityRef>) {
          // Entity ids never surface directly; templates must use
          // «ENTITY:slot» so the REG stage can name them.
          throw MissingAttribute(attribute_key +
                                 " is an entity and needs an entity token");
        } else {
          return render_pt_date(v);
        }
      },
      value);
}

namespace {

const AttrValue& want_attr(const IntentMessage& message,
                           const std::string& slot) {
  const AttrValue* v = message.attributes.find(slot);
  if (!v) throw MissingAttribute(slot);
  return *v;
}

std::string fill_pattern(const std::string& pattern,
                         const IntentMessage& message, const Grammar& grammar,
                         int depth);

std::string fill_tokens(const std::vector<PatternToken>& tokens,
                        const IntentMessage& message, const Grammar& grammar,
                        int depth) {
  std::string out;
  for (const PatternToken& tok : tokens) {
    switch (tok.type) {
      case PatternToken::Type::Text:
        out += tok.text;
        break;
      case PatternToken::Type::Slot:
        out += render_surface_value(grammar, tok.text,
                                    want_attr(message, tok.text));
        break;
      case PatternToken::Type::GenderAgreement: {
        std::string surface = render_surface_value(
            grammar, tok.text, want_attr(message, tok.text));
        auto gender = grammar.lexicon_gender(tok.text, surface);
        if (!gender) throw MissingLexiconEntry(tok.text, surface);
        const std::string& alt =
            *gender == Gender::Masc ? tok.alt_a : tok.alt_b;
        out += fill_pattern(alt, message, grammar, depth + 1);
        break;
      }
      case PatternToken::Type::NumberAgreement: {
        const AttrValue& v = want_attr(message, tok.text);
        const auto* q = std::get_if<selection::Quantity>(&v);
        if (!q)
          throw MissingAttribute(tok.text + " is not numeric (needed by '#')");
        bool plural = q->value != Decimal::from_int(1) &&
                      q->value != Decimal::from_int(-1);
        const std::string& alt = plural ? tok.alt_b : tok.alt_a;
        out += fill_pattern(alt, message, grammar, depth + 1);
        break;
      }
      case PatternToken::Type::Entity: {
        const AttrValue& v = want_attr(message, tok.text);
        const auto* e = std::get_if<selection::EntityRef>(&v);
        if (!e)
          throw MissingAttribute(tok.text +
                                 " is not an entity (needed by entity token)");
        out += kEntityOpen + e->id + kEntityClose;
        break;
      }
    }
  }
  return out;
}

std::string fill_pattern(const std::string& pattern,
                         const IntentMessage& message, const Grammar& grammar,
                         int depth) {
  if (depth > 4) throw MissingAttribute("agreement alternatives nest too deep");
  auto tokens = parse_pattern_impl(pattern, 0, message.predicate);
  return fill_tokens(tokens, message, grammar, depth);
}

}  // namespace

std::string fill(const Template& tmpl, const IntentMessage& message,
                 const Grammar& grammar) {
  return fill_tokens(tmpl.tokens, message, grammar, 0);
}

}  // namespace blab::lexicalization
