#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blab/util/rng.hpp"

namespace blab::reg {

class RegistryError : public std::runtime_error {
 public:
  RegistryError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

class UnknownEntity : public std::runtime_error {
 public:
  explicit UnknownEntity(const std::string& id)
      : std::runtime_error("unknown entity: " + id) {}
};

enum class Gender { Masc, Fem };
enum class Number { Sing, Plur };

struct Expression {
  std::string text;
  bool pronoun = false;
};

struct EntityProfile {
  std::string entity_id;
  std::string full_description;
  std::vector<Expression> short_expressions;  // nonempty, ≥1 non-pronoun
  Gender gender = Gender::Masc;
  Number number = Number::Sing;
};

class EntityRegistry {
 public:
  const EntityProfile& profile(const std::string& id) const;  // UnknownEntity
  bool contains(const std::string& id) const { return profiles_.contains(id); }
  size_t size() const { return profiles_.size(); }

  void add(EntityProfile profile);  // RegistryError(0) on duplicate/invalid

 private:
  std::map<std::string, EntityProfile> profiles_;
};

// Registry file format:
//
//   entity <id> gender=<masc|fem> number=<sing|plur>
//   full: <full description>
//   expr: <expression> [pronoun]
//   expr: ...
//
// Blank lines and # comments allowed between entities.
EntityRegistry load_entities(const std::string& source);
EntityRegistry load_entities_file(const std::string& path);

// Entities already named within the current report. Reset per report, never
// shared across reports.
struct MentionHistory {
  std::set<std::string> seen;
};

// Replaces every «ENTITY:id» tag. First mention in the report uses the full
// description; later mentions draw a random short expression. Pronoun
// expressions are only eligible when the entity was already named earlier in
// this same text segment.
std::string resolve(const std::string& text, const EntityRegistry& registry,
                    MentionHistory& history, RandomStream& rng);

// Longest surface any resolution could produce; used for length estimates.
size_t max_expression_codepoints(const EntityProfile& profile);

}  // namespace blab::reg
