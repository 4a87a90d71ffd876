#include "blab/reg/registry.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "blab/util/unicode.hpp"

namespace blab::reg {

namespace {

const std::string kTagOpen = "«ENTITY:";
const std::string kTagClose = "»";

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void check_profile(const EntityProfile& p, int line) {
  if (p.entity_id.empty()) throw RegistryError(line, "entity id is empty");
  if (p.full_description.empty())
    throw RegistryError(line, "entity '" + p.entity_id +
                                  "' has no full description");
  if (p.short_expressions.empty())
    throw RegistryError(line,
                        "entity '" + p.entity_id + "' has no expressions");
  bool non_pronoun = false;
  for (const Expression& e : p.short_expressions) {
    if (e.text == p.full_description)
      throw RegistryError(line, "entity '" + p.entity_id +
                                    "' repeats its full description as an "
                                    "expression");
    if (!e.pronoun) non_pronoun = true;
  }
  if (!non_pronoun)
    throw RegistryError(line, "entity '" + p.entity_id +
                                  "' has only pronoun expressions");
}

}  // namespace

const EntityProfile& EntityRegistry::profile(const std::string& id) const {
  auto it = profiles_.find(id);
  if (it == profiles_.end()) throw UnknownEntity(id);
  return it->second;
}

void EntityRegistry::add(EntityProfile profile) {
  check_profile(profile, 0);
  if (profiles_.contains(profile.entity_id))
    throw RegistryError(0, "duplicate entity id: " + profile.entity_id);
  profiles_.emplace(profile.entity_id, std::move(profile));
}

EntityRegistry load_entities(const std::string& source) {
  EntityRegistry registry;
  std::istringstream in(source);
  std::string raw;
  int lineno = 0;
  std::optional<EntityProfile> current;
  int current_line = 0;

  auto finish = [&] {
    if (!current) return;
    check_profile(*current, current_line);
    if (registry.contains(current->entity_id))
      throw RegistryError(current_line,
                          "duplicate entity id: " + current->entity_id);
    registry.add(std::move(*current));
    current.reset();
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("entity ", 0) == 0) {
      finish();
      std::istringstream fields(line.substr(7));
      EntityProfile p;
      std::string tok;
      fields >> p.entity_id;
      bool have_gender = false, have_number = false;
      while (fields >> tok) {
        if (tok == "gender=masc") p.gender = Gender::Masc, have_gender = true;
        else if (tok == "gender=fem") p.gender = Gender::Fem, have_gender = true;
        else if (tok == "number=sing") p.number = Number::Sing, have_number = true;
        else if (tok == "number=plur") p.number = Number::Plur, have_number = true;
        else throw RegistryError(lineno, "unknown entity field: " + tok);
      }
      if (p.entity_id.empty() || !have_gender || !have_number)
        throw RegistryError(
            lineno, "expected: entity <id> gender=<g> number=<n>");
      current = std::move(p);
      current_line = lineno;
    } else if (line.rfind("full:", 0) == 0) {
      if (!current) throw RegistryError(lineno, "'full:' outside an entity");
      current->full_description = trim(line.substr(5));
    } else if (line.rfind("expr:", 0) == 0) {
      if (!current) throw RegistryError(lineno, "'expr:' outside an entity");
      Expression e;
      e.text = trim(line.substr(5));
      const std::string flag = "[pronoun]";
      if (e.text.size() > flag.size() &&
          e.text.compare(e.text.size() - flag.size(), flag.size(), flag) == 0) {
        e.pronoun = true;
        e.text = trim(e.text.substr(0, e.text.size() - flag.size()));
      }
      if (e.text.empty()) throw RegistryError(lineno, "empty expression");
      current->short_expressions.push_back(std::move(e));
    } else {
      throw RegistryError(lineno, "unrecognized line: " + line);
    }
  }
  finish();
  return registry;
}

EntityRegistry load_entities_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RegistryError(0, "cannot open registry file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_entities(buf.str());
}

std::string resolve(const std::string& text, const EntityRegistry& registry,
                    MentionHistory& history, RandomStream& rng) {
  std::string out;
  out.reserve(text.size());
  std::set<std::string> mentioned_here;  // same-segment mentions
  size_t pos = 0;
  while (pos < text.size()) {
    size_t open = text.find(kTagOpen, pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    out.append(text, pos, open - pos);
    size_t id_start = open + kTagOpen.size();
    size_t close = text.find(kTagClose, id_start);
    if (close == std::string::npos) throw UnknownEntity("<unterminated tag>");
    std::string id = text.substr(id_start, close - id_start);
    const EntityProfile& p = registry.profile(id);
    if (!history.seen.contains(id)) {
      out += p.full_description;
      history.seen.insert(id);
    } else {
      const bool allow_pronoun = mentioned_here.contains(id);
      std::vector<const Expression*> eligible;
      for (const Expression& e : p.short_expressions)
        if (allow_pronoun || !e.pronoun) eligible.push_back(&e);
      out += eligible[rng.next_below(eligible.size())]->text;
    }
    mentioned_here.insert(id);
    pos = close + kTagClose.size();
  }
  return out;
}

size_t max_expression_codepoints(const EntityProfile& profile) {
  size_t best = count_codepoints(profile.full_description);
  for (const Expression& e : profile.short_expressions)
    best = std::max(best, count_codepoints(e.text));
  return best;
}

}  // namespace blab::reg
