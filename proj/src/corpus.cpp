#include "fcr/corpus.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "fcr/error.hpp"

namespace fcr {

namespace {

bool valid_role(std::string_view role) {
  if (role == "subj" || role == "obj") return true;
  return role.size() > 3 && role.substr(0, 3) == "pp_";
}

}  // namespace

PairCollection parse_pairs(std::istream& in) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError("expected head<TAB>verb#role<TAB>count", line_no);
    }
    std::string head = line.substr(0, t1);
    std::string predicate = line.substr(t1 + 1, t2 - t1 - 1);
    std::string count_text = line.substr(t2 + 1);
    if (head.empty()) throw ParseError("empty head", line_no);

    std::size_t hash = predicate.find('#');
    if (hash == 0 || hash == std::string::npos ||
        !valid_role(std::string_view(predicate).substr(hash + 1))) {
      throw ParseError("predicate '" + predicate + "' needs verb#role with role subj, obj or pp_<prep>",
                       line_no);
    }

    long long count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      throw ParseError("count '" + count_text + "' is not an integer", line_no);
    }
    if (count <= 0) throw ParseError("count must be positive", line_no);
    counts[{std::move(head), std::move(predicate)}] += static_cast<std::size_t>(count);
  }
  PairCollection out;
  for (auto& [key, count] : counts) out.records.push_back({key.first, key.second, count});
  return out;
}

PairCollection load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_pairs(in);
}

std::vector<WeightedPair> weigh_pairs(const PairCollection& pairs) {
  if (pairs.records.empty()) throw InputError("cannot weigh an empty pair collection");
  std::map<std::string, std::size_t> totals;
  for (const auto& r : pairs.records) totals[r.predicate] += r.count;
  std::vector<WeightedPair> out;
  out.reserve(pairs.records.size());
  for (const auto& r : pairs.records) {
    out.push_back({r.head, r.predicate,
                   static_cast<double>(r.count) / static_cast<double>(totals[r.predicate])});
  }
  return out;
}

FormalContext build_context(const std::vector<WeightedPair>& pairs, double weight_threshold) {
  if (!(weight_threshold >= 0.0 && weight_threshold <= 1.0)) {
    throw InputError("weight threshold must lie in [0, 1]");
  }
  std::set<std::string> heads, predicates;
  for (const auto& p : pairs) {
    if (p.weight > weight_threshold) {
      heads.insert(p.head);
      predicates.insert(p.predicate);
    }
  }
  std::vector<std::string> objects(heads.begin(), heads.end());
  std::vector<std::string> attributes(predicates.begin(), predicates.end());
  std::map<std::string, std::size_t> row_of, col_of;
  for (std::size_t i = 0; i < objects.size(); ++i) row_of[objects[i]] = i;
  for (std::size_t i = 0; i < attributes.size(); ++i) col_of[attributes[i]] = i;
  std::vector<BitSet> rows(objects.size(), BitSet(attributes.size()));
  for (const auto& p : pairs) {
    if (p.weight > weight_threshold) rows[row_of[p.head]].set(col_of[p.predicate]);
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

}  // namespace fcr
