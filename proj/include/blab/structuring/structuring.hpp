#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "blab/lexicalization/grammar.hpp"
#include "blab/reg/registry.hpp"
#include "blab/selection/intent.hpp"

namespace blab::structuring {

using selection::IntentMessage;
using selection::Predicate;

class CatalogError : public std::runtime_error {
 public:
  CatalogError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

class NoApplicableOrdering : public std::runtime_error {
 public:
  NoApplicableOrdering()
      : std::runtime_error("no catalog entry covers any message predicate") {}
};

class MessageTooLarge : public std::runtime_error {
 public:
  explicit MessageTooLarge(const std::string& what)
      : std::runtime_error(what) {}
};

struct CatalogEntry {
  std::string context_tag;
  std::vector<Predicate> predicates;  // no duplicates
};

struct OrderingCatalog {
  std::vector<CatalogEntry> entries;  // nonempty, file order preserved
};

// Catalog file: one entry per line, `context_tag: PRED_A > PRED_B > PRED_C`.
OrderingCatalog load_catalog(const std::string& source);
OrderingCatalog load_catalog_file(const std::string& path);

// Sorts messages by the catalog entry whose predicate set overlaps the
// message set the most (ties: earlier file entry). Predicates covered by the
// entry come first in entry order; the rest follow by descending salience,
// ties by predicate enum order. Stable within equal keys.
std::vector<IntentMessage> order(const std::vector<IntentMessage>& messages,
                                 const OrderingCatalog& catalog);

// Upper bound, in code points, on any realization of the message: maximum
// over the predicate's templates, with agreement alternatives maximized and
// entity tags replaced by each entity's longest expression.
size_t estimate_length(const IntentMessage& message,
                       const lexicalization::Grammar& grammar,
                       const reg::EntityRegistry& entities);

struct Segment {
  std::vector<IntentMessage> messages;
  size_t estimated_length = 0;  // includes single-space joiners
};

struct DiscoursePlan {
  std::vector<Segment> segments;
};

inline constexpr size_t kTweetBudget = 280;

// Per-segment reserve: thread numbering (" (10/10)" worst case), one
// appended emoji with its space, and a terminal period the polish step may
// add.
inline constexpr size_t kReservedOverhead = 14;

// Greedy packing. Messages never get dropped or reordered; a message whose
// estimate cannot fit an empty segment raises MessageTooLarge (the caller's
// fallback is dropping by ascending salience). `first_segment_extra`
// reserves room on segment one for the greeting polish will prepend.
DiscoursePlan plan(const std::vector<IntentMessage>& ordered,
                   const lexicalization::Grammar& grammar,
                   const reg::EntityRegistry& entities,
                   size_t budget = kTweetBudget,
                   size_t overhead = kReservedOverhead,
                   size_t first_segment_extra = 0);

}  // namespace blab::structuring
