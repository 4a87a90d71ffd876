#include "blab/structuring/structuring.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "blab/util/unicode.hpp"

namespace blab::structuring {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

OrderingCatalog load_catalog(const std::string& source) {
  OrderingCatalog catalog;
  std::istringstream in(source);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw CatalogError(lineno, "expected 'context_tag: PRED > PRED'");
    CatalogEntry entry;
    entry.context_tag = trim(line.substr(0, colon));
    if (entry.context_tag.empty())
      throw CatalogError(lineno, "empty context tag");
    std::string rest = line.substr(colon + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t next = rest.find('>', pos);
      std::string name = trim(next == std::string::npos
                                  ? rest.substr(pos)
                                  : rest.substr(pos, next - pos));
      if (name.empty()) throw CatalogError(lineno, "empty predicate name");
      auto predicate = selection::predicate_from_name(name);
      if (!predicate)
        throw CatalogError(lineno, "unknown predicate: " + name);
      if (std::find(entry.predicates.begin(), entry.predicates.end(),
                    *predicate) != entry.predicates.end())
        throw CatalogError(lineno, "duplicate predicate in entry: " + name);
      entry.predicates.push_back(*predicate);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    catalog.entries.push_back(std::move(entry));
  }
  if (catalog.entries.empty()) throw CatalogError(lineno, "empty catalog");
  return catalog;
}

OrderingCatalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError(0, "cannot open catalog file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_catalog(buf.str());
}

std::vector<IntentMessage> order(const std::vector<IntentMessage>& messages,
                                 const OrderingCatalog& catalog) {
  if (messages.empty()) return {};

  const CatalogEntry* best = nullptr;
  size_t best_overlap = 0;
  for (const CatalogEntry& entry : catalog.entries) {
    size_t overlap = 0;
    for (const IntentMessage& m : messages)
      if (std::find(entry.predicates.begin(), entry.predicates.end(),
                    m.predicate) != entry.predicates.end())
        ++overlap;
    if (overlap > best_overlap) {  // ties keep the earlier entry
      best_overlap = overlap;
      best = &entry;
    }
  }
  if (!best) throw NoApplicableOrdering();

  auto entry_rank = [&](Predicate p) -> int {
    for (size_t i = 0; i < best->predicates.size(); ++i)
      if (best->predicates[i] == p) return static_cast<int>(i);
    return -1;
  };

  std::vector<IntentMessage> covered, rest;
  for (const IntentMessage& m : messages)
    (entry_rank(m.predicate) >= 0 ? covered : rest).push_back(m);

  std::stable_sort(covered.begin(), covered.end(),
                   [&](const IntentMessage& a, const IntentMessage& b) {
                     return entry_rank(a.predicate) < entry_rank(b.predicate);
                   });
  std::stable_sort(rest.begin(), rest.end(),
                   [](const IntentMessage& a, const IntentMessage& b) {
                     if (a.salience != b.salience)
                       return a.salience > b.salience;
                     return static_cast<int>(a.predicate) <
                            static_cast<int>(b.predicate);
                   });
  covered.insert(covered.end(), rest.begin(), rest.end());
  return covered;
}

namespace {

using lexicalization::Grammar;
using lexicalization::PatternToken;

size_t estimate_tokens(const std::vector<PatternToken>& tokens,
                       const IntentMessage& message, const Grammar& grammar,
                       const reg::EntityRegistry& entities);

size_t estimate_subpattern(const std::string& pattern,
                           const IntentMessage& message,
                           const Grammar& grammar,
                           const reg::EntityRegistry& entities) {
  auto tokens = lexicalization::parse_pattern(pattern, message.predicate);
  return estimate_tokens(tokens, message, grammar, entities);
}

size_t estimate_tokens(const std::vector<PatternToken>& tokens,
                       const IntentMessage& message, const Grammar& grammar,
                       const reg::EntityRegistry& entities) {
  size_t total = 0;
  for (const PatternToken& tok : tokens) {
    switch (tok.type) {
      case PatternToken::Type::Text:
        total += count_codepoints(tok.text);
        break;
      case PatternToken::Type::Slot: {
        const selection::AttrValue* v = message.attributes.find(tok.text);
        if (!v) throw lexicalization::MissingAttribute(tok.text);
        total += count_codepoints(
            lexicalization::render_surface_value(grammar, tok.text, *v));
        break;
      }
      case PatternToken::Type::GenderAgreement:
      case PatternToken::Type::NumberAgreement:
        total += std::max(
            estimate_subpattern(tok.alt_a, message, grammar, entities),
            estimate_subpattern(tok.alt_b, message, grammar, entities));
        break;
      case PatternToken::Type::Entity: {
        const selection::AttrValue* v = message.attributes.find(tok.text);
        if (!v) throw lexicalization::MissingAttribute(tok.text);
        const auto* ref = std::get_if<selection::EntityRef>(v);
        if (!ref)
          throw lexicalization::MissingAttribute(tok.text +
                                                 " is not an entity");
        total += reg::max_expression_codepoints(entities.profile(ref->id));
        break;
      }
    }
  }
  return total;
}

}  // namespace

size_t estimate_length(const IntentMessage& message, const Grammar& grammar,
                       const reg::EntityRegistry& entities) {
  const auto& templates = grammar.templates_for(message.predicate);
  size_t best = 0;
  for (const lexicalization::Template& t : templates)
    best = std::max(best,
                    estimate_tokens(t.tokens, message, grammar, entities));
  return best;
}

DiscoursePlan plan(const std::vector<IntentMessage>& ordered,
                   const Grammar& grammar,
                   const reg::EntityRegistry& entities, size_t budget,
                   size_t overhead, size_t first_segment_extra) {
  DiscoursePlan out;
  Segment current;
  auto capacity = [&](size_t segment_index) {
    size_t reserve = overhead + (segment_index == 0 ? first_segment_extra : 0);
    return budget > reserve ? budget - reserve : 0;
  };

  for (const IntentMessage& message : ordered) {
    size_t est = estimate_length(message, grammar, entities);
    size_t segment_index = out.segments.size();
    if (current.messages.empty()) {
      if (est > capacity(segment_index))
        throw MessageTooLarge(
            selection::predicate_name(message.predicate) + " estimate (" +
            std::to_string(est) + ") exceeds segment capacity (" +
            std::to_string(capacity(segment_index)) + ")");
      current.messages.push_back(message);
      current.estimated_length = est;
      continue;
    }
    size_t joined = current.estimated_length + 1 + est;
    if (joined <= capacity(segment_index)) {
      current.messages.push_back(message);
      current.estimated_length = joined;
    } else {
      out.segments.push_back(std::move(current));
      current = Segment{};
      if (est > capacity(out.segments.size()))
        throw MessageTooLarge(
            selection::predicate_name(message.predicate) + " estimate (" +
            std::to_string(est) + ") exceeds segment capacity (" +
            std::to_string(capacity(out.segments.size())) + ")");
      current.messages.push_back(message);
      current.estimated_length = est;
    }
  }
  if (!current.messages.empty()) out.segments.push_back(std::move(current));
  return out;
}

}  // namespace blab::structuring
