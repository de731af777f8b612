#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fcr/context.hpp"

namespace fcr {

/// Aggregated verb-argument pair: a noun head seen with a "verb#role" predicate.
struct PairRecord {
  std::string head;
  std::string predicate;
  std::size_t count = 0;

  bool operator==(const PairRecord&) const = default;
};

/// Unique (head, predicate) records, sorted by head then predicate.
struct PairCollection {
  std::vector<PairRecord> records;
};

struct WeightedPair {
  std::string head;
  std::string predicate;
  double weight = 0.0;
};

/// `head<TAB>verb#role<TAB>count`, roles subj, obj or pp_<preposition>.
/// Duplicate pairs are summed.
PairCollection parse_pairs(std::istream& in);
PairCollection load_pairs(const std::filesystem::path& path);

/// P(head | predicate) = count(head, predicate) / total count of the predicate.
std::vector<WeightedPair> weigh_pairs(const PairCollection& pairs);

/// Heads become objects and predicates attributes (both sorted); a cell is
/// set when its weight exceeds `weight_threshold`. Empty rows and columns are dropped.
FormalContext build_context(const std::vector<WeightedPair>& pairs, double weight_threshold);

}  // namespace fcr
