#include "fcr/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fcr/error.hpp"

namespace fcr {

namespace {

void check_cap(std::size_t count, const LatticeOptions& options) {
  if (count > options.concept_cap) {
    throw CapacityError("concept cap of " + std::to_string(options.concept_cap) +
                            " exceeded after " + std::to_string(count) + " concepts",
                        count);
  }
}

// AND of the rows in `extent`, restricted to words [first, last).
void intersect_rows(const FormalContext& ctx, const BitSet& extent,
                    std::vector<BitSet::Word>& out, std::size_t first, std::size_t last) {
  for (std::size_t w = first; w < last; ++w) out[w] = ~BitSet::Word{0};
  extent.for_each([&](std::size_t g) {
    auto row = ctx.row(g).words();
    for (std::size_t w = first; w < last; ++w) out[w] &= row[w];
  });
}

BitSet words_to_set(std::size_t size, const std::vector<BitSet::Word>& words) {
  BitSet s(size);
  for (std::size_t i = 0; i < size; ++i) {
    if ((words[i / BitSet::kWordBits] >> (i % BitSet::kWordBits)) & 1u) s.set(i);
  }
  return s;
}

// Reorders concepts lectically by intent and rewrites covers accordingly.
void normalize(ConceptLattice& lattice) {
  const std::size_t n = lattice.concepts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lectic_less(lattice.concepts[a].intent, lattice.concepts[b].intent);
  });
  std::vector<std::size_t> position(n);
  std::vector<FormalConcept> sorted;
  sorted.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    position[order[k]] = k;
    sorted.push_back(std::move(lattice.concepts[order[k]]));
  }
  lattice.concepts = std::move(sorted);
  for (auto& [child, parent] : lattice.covers) {
    child = position[child];
    parent = position[parent];
  }
  std::sort(lattice.covers.begin(), lattice.covers.end());
  lattice.top = 0;
  lattice.bottom = n - 1;
}

// State of the incremental AddIntent construction. Concepts are stored by
// intent only; extents are derived once construction is complete.
class AddIntentBuilder {
 public:
  AddIntentBuilder(const FormalContext& ctx, const LatticeOptions& options)
      : ctx_(ctx), options_(options) {
    intents_.push_back(BitSet::full(ctx.num_attributes()));
    parents_.emplace_back();
  }

  void add_object(std::size_t g) { add_intent(ctx_.row(g), kBottom); }

  ConceptLattice finish() && {
    ConceptLattice lattice;
    lattice.object_labels = ctx_.objects();
    lattice.attribute_labels = ctx_.attributes();
    lattice.concepts.reserve(intents_.size());
    for (auto& intent : intents_) {
      BitSet extent = attribute_extent(ctx_, intent);
      lattice.concepts.push_back({std::move(extent), std::move(intent)});
    }
    for (std::size_t c = 0; c < parents_.size(); ++c) {
      for (std::size_t p : parents_[c]) lattice.covers.emplace_back(c, p);
    }
    normalize(lattice);
    return lattice;
  }

 private:
  static constexpr std::size_t kBottom = 0;

  std::size_t maximal_concept(const BitSet& intent, std::size_t generator) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t p : parents_[generator]) {
        if (intent.is_subset_of(intents_[p])) {
          generator = p;
          moved = true;
          break;
        }
      }
    }
    return generator;
  }

  std::size_t add_intent(const BitSet& intent, std::size_t generator) {
    generator = maximal_concept(intent, generator);
    if (intents_[generator] == intent) return generator;

    std::vector<std::size_t> new_parents;
    const std::vector<std::size_t> generator_parents = parents_[generator];
    for (std::size_t candidate : generator_parents) {
      if (!intents_[candidate].is_subset_of(intent)) {
        candidate = add_intent(intents_[candidate] & intent, candidate);
      }
      bool add = true;
      for (auto it = new_parents.begin(); it != new_parents.end();) {
        if (intents_[candidate].is_subset_of(intents_[*it])) {
          add = false;
          break;
        }
        if (intents_[*it].is_subset_of(intents_[candidate])) {
          it = new_parents.erase(it);
        } else {
          ++it;
        }
      }
      if (add) new_parents.push_back(candidate);
    }

    const std::size_t created = intents_.size();
    check_cap(created + 1, options_);
    intents_.push_back(intent);
    parents_.emplace_back();
    auto& gp = parents_[generator];
    for (std::size_t p : new_parents) {
      gp.erase(std::remove(gp.begin(), gp.end(), p), gp.end());
      parents_[created].push_back(p);
    }
    gp.push_back(created);
    return created;
  }

  const FormalContext& ctx_;
  const LatticeOptions& options_;
  std::vector<BitSet> intents_;
  std::vector<std::vector<std::size_t>> parents_;
};

std::string join_labels(const BitSet& set, const std::vector<std::string>& labels) {
  std::string out;
  set.for_each([&](std::size_t i) {
    if (!out.empty()) out += ", ";
    out += labels[i];
  });
  return out;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::vector<FormalConcept> enumerate_concepts(const FormalContext& ctx,
                                              const LatticeOptions& options) {
  const std::size_t m = ctx.num_attributes();
  const std::size_t num_words = (m + BitSet::kWordBits - 1) / BitSet::kWordBits;
  std::vector<FormalConcept> out;

  BitSet extent = BitSet::full(ctx.num_objects());
  BitSet intent = object_intent(ctx, extent);
  out.push_back({extent, intent});
  check_cap(out.size(), options);

  // prefix_extents[k] = extent of the first k attributes of the current intent.
  std::vector<BitSet> prefix_extents;
  std::vector<std::size_t> members;
  std::vector<BitSet::Word> scratch(num_words);

  while (intent.count() != m) {
    members = intent.indices();
    prefix_extents.assign(1, BitSet::full(ctx.num_objects()));
    for (std::size_t a : members) prefix_extents.push_back(prefix_extents.back() & ctx.column(a));

    bool advanced = false;
    std::size_t below = members.size();  // members strictly below i
    for (std::size_t i = m; i-- > 0;) {
      while (below > 0 && members[below - 1] >= i) --below;
      if (intent.test(i)) continue;

      BitSet candidate_extent = prefix_extents[below] & ctx.column(i);
      BitSet candidate;
      if (candidate_extent.none()) {
        // Closure is the full attribute set; canonical iff every j < i is present.
        if (below != i) continue;
        candidate = BitSet::full(m);
      } else {
        // Check canonicity on the words below i before finishing the closure.
        std::size_t prefix_words = i / BitSet::kWordBits + 1;
        intersect_rows(ctx, candidate_extent, scratch, 0, prefix_words);
        bool canonical = true;
        auto current = intent.words();
        for (std::size_t w = 0; w < prefix_words && canonical; ++w) {
          BitSet::Word mask = ~BitSet::Word{0};
          if (w == i / BitSet::kWordBits) {
            std::size_t rem = i % BitSet::kWordBits;
            mask = rem ? (BitSet::Word{1} << rem) - 1 : 0;
          }
          if ((scratch[w] ^ current[w]) & mask) canonical = false;
        }
        if (!canonical) continue;
        intersect_rows(ctx, candidate_extent, scratch, prefix_words, num_words);
        candidate = words_to_set(m, scratch);
      }
      intent = std::move(candidate);
      out.push_back({std::move(candidate_extent), intent});
      check_cap(out.size(), options);
      advanced = true;
      break;
    }
    if (!advanced) break;  // unreachable for a consistent context
  }
  return out;
}

std::vector<CoverPair> covering_relation(std::span<const FormalConcept> concepts) {
  const std::size_t n = concepts.size();
  {
    std::unordered_set<BitSet, BitSetHash> extents;
    for (const auto& c : concepts) {
      if (!extents.insert(c.extent).second) throw InputError("duplicate concept extent");
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) sizes[i] = concepts[i].extent.count();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });
  // first_larger[k]: first position in `order` whose extent is larger than order[k]'s.
  std::vector<std::size_t> first_larger(n);
  for (std::size_t k = n; k-- > 0;) {
    first_larger[k] =
        (k + 1 < n && sizes[order[k + 1]] == sizes[order[k]]) ? first_larger[k + 1] : k + 1;
  }

  std::vector<CoverPair> covers;
  std::vector<std::size_t> found;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    found.clear();
    for (std::size_t j = first_larger[k]; j < n; ++j) {
      const std::size_t p = order[j];
      if (!concepts[c].extent.is_subset_of(concepts[p].extent)) continue;
      bool covered = std::none_of(found.begin(), found.end(), [&](std::size_t q) {
        return concepts[q].extent.is_subset_of(concepts[p].extent);
      });
      if (covered) {
        found.push_back(p);
        covers.emplace_back(c, p);
      }
    }
  }
  std::sort(covers.begin(), covers.end());
  return covers;
}

ConceptLattice build_lattice_nextclosure(const FormalContext& ctx, const LatticeOptions& options) {
  ConceptLattice lattice;
  lattice.object_labels = ctx.objects();
  lattice.attribute_labels = ctx.attributes();
  lattice.concepts = enumerate_concepts(ctx, options);
  lattice.covers = covering_relation(lattice.concepts);
  lattice.top = 0;
  lattice.bottom = lattice.concepts.size() - 1;
  return lattice;
}

ConceptLattice build_lattice_addintent(const FormalContext& ctx, const LatticeOptions& options) {
  AddIntentBuilder builder(ctx, options);
  for (std::size_t g = 0; g < ctx.num_objects(); ++g) builder.add_object(g);
  return std::move(builder).finish();
}

ConceptLattice build_lattice(const FormalContext& ctx, LatticeAlgorithm algorithm,
                             const LatticeOptions& options) {
  return algorithm == LatticeAlgorithm::addintent ? build_lattice_addintent(ctx, options)
                                                  : build_lattice_nextclosure(ctx, options);
}

std::vector<std::size_t> rank_from_bottom(const ConceptLattice& lattice) {
  const std::size_t n = lattice.size();
  std::vector<std::vector<std::size_t>> uppers(n);
  for (auto [c, p] : lattice.covers) uppers[c].push_back(p);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) sizes[i] = lattice.concepts[i].extent.count();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });
  std::vector<std::size_t> rank(n, 0);
  for (std::size_t c : order) {
    for (std::size_t p : uppers[c]) rank[p] = std::max(rank[p], rank[c] + 1);
  }
  return rank;
}

LatticeInvariants invariants(const ConceptLattice& lattice) {
  const std::size_t n = lattice.size();
  LatticeInvariants inv;
  inv.concept_count = n;
  inv.edge_count = lattice.covers.size();
  if (n == 0) return inv;

  auto rank = rank_from_bottom(lattice);
  std::size_t max_rank = *std::max_element(rank.begin(), rank.end());
  inv.height = max_rank + 1;
  std::vector<std::size_t> per_rank(max_rank + 1, 0);
  for (std::size_t r : rank) ++per_rank[r];
  inv.width_lo = *std::max_element(per_rank.begin(), per_rank.end());

  if (n > kMaxWidthConcepts) {
    throw CapacityError("exact width limited to " + std::to_string(kMaxWidthConcepts) +
                            " concepts",
                        n);
  }
  // Strict up-sets, filled from the top down (descending rank).
  std::vector<std::vector<std::size_t>> uppers(n);
  for (auto [c, p] : lattice.covers) uppers[c].push_back(p);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rank[a] > rank[b]; });
  std::vector<BitSet> above(n, BitSet(n));
  for (std::size_t c : order) {
    for (std::size_t p : uppers[c]) {
      above[c] |= above[p];
      above[c].set(p);
    }
  }
  inv.width_hi = max_antichain_size(above);
  return inv;
}

std::string export_dot(const ConceptLattice& lattice, Labeling labeling) {
  const std::size_t n = lattice.size();
  std::vector<BitSet> own_objects(n, BitSet(lattice.object_labels.size()));
  std::vector<BitSet> own_attributes(n, BitSet(lattice.attribute_labels.size()));
  if (labeling == Labeling::reduced) {
    // An object labels the smallest concept containing it; an attribute the
    // largest concept whose intent contains it.
    for (std::size_t g = 0; g < lattice.object_labels.size(); ++g) {
      std::size_t best = n, best_size = 0;
      for (std::size_t c = 0; c < n; ++c) {
        const auto& ext = lattice.concepts[c].extent;
        if (ext.test(g) && (best == n || ext.count() < best_size)) {
          best = c;
          best_size = ext.count();
        }
      }
      if (best != n) own_objects[best].set(g);
    }
    for (std::size_t m = 0; m < lattice.attribute_labels.size(); ++m) {
      std::size_t best = n, best_size = 0;
      for (std::size_t c = 0; c < n; ++c) {
        const auto& in = lattice.concepts[c].intent;
        if (in.test(m) && (best == n || in.count() < best_size)) {
          best = c;
          best_size = in.count();
        }
      }
      if (best != n) own_attributes[best].set(m);
    }
  }

  std::ostringstream out;
  out << "digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t c = 0; c < n; ++c) {
    const auto& concept_ = lattice.concepts[c];
    const BitSet& objs = labeling == Labeling::full ? concept_.extent : own_objects[c];
    const BitSet& attrs = labeling == Labeling::full ? concept_.intent : own_attributes[c];
    out << "  c" << c << " [label=\"" << dot_escape(join_labels(objs, lattice.object_labels))
        << "\\n" << dot_escape(join_labels(attrs, lattice.attribute_labels)) << "\"];\n";
  }
  for (auto [child, parent] : lattice.covers) {
    out << "  c" << child << " -> c" << parent << ";\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::json lattice_to_json(const ConceptLattice& lattice) {
  nlohmann::json concepts = nlohmann::json::array();
  for (const auto& c : lattice.concepts) {
    nlohmann::json extent = nlohmann::json::array();
    nlohmann::json intent = nlohmann::json::array();
    c.extent.for_each([&](std::size_t g) { extent.push_back(lattice.object_labels[g]); });
    c.intent.for_each([&](std::size_t m) { intent.push_back(lattice.attribute_labels[m]); });
    concepts.push_back({{"extent", std::move(extent)}, {"intent", std::move(intent)}});
  }
  nlohmann::json covers = nlohmann::json::array();
  for (auto [c, p] : lattice.covers) covers.push_back({c, p});
  return {{"objects", lattice.object_labels},
          {"attributes", lattice.attribute_labels},
          {"concepts", std::move(concepts)},
          {"covers", std::move(covers)},
          {"top", lattice.top},
          {"bottom", lattice.bottom}};
}

ConceptLattice lattice_from_json(const nlohmann::json& doc) {
  try {
    ConceptLattice lattice;
    lattice.object_labels = doc.at("objects").get<std::vector<std::string>>();
    lattice.attribute_labels = doc.at("attributes").get<std::vector<std::string>>();
    std::unordered_map<std::string, std::size_t> obj_index, attr_index;
    for (std::size_t i = 0; i < lattice.object_labels.size(); ++i)
      obj_index.emplace(lattice.object_labels[i], i);
    for (std::size_t i = 0; i < lattice.attribute_labels.size(); ++i)
      attr_index.emplace(lattice.attribute_labels[i], i);

    auto lookup = [](const std::unordered_map<std::string, std::size_t>& index,
                     const std::string& label) {
      auto it = index.find(label);
      if (it == index.end()) throw ParseError("unknown label '" + label + "' in lattice", 0);
      return it->second;
    };
    for (const auto& c : doc.at("concepts")) {
      FormalConcept concept_{BitSet(lattice.object_labels.size()),
                             BitSet(lattice.attribute_labels.size())};
      for (const auto& g : c.at("extent")) concept_.extent.set(lookup(obj_index, g.get<std::string>()));
      for (const auto& m : c.at("intent")) concept_.intent.set(lookup(attr_index, m.get<std::string>()));
      lattice.concepts.push_back(std::move(concept_));
    }
    const std::size_t n = lattice.concepts.size();
    for (const auto& pair : doc.at("covers")) {
      auto c = pair.at(0).get<std::size_t>();
      auto p = pair.at(1).get<std::size_t>();
      if (c >= n || p >= n || c == p) throw ParseError("invalid cover pair", 0);
      lattice.covers.emplace_back(c, p);
    }
    std::sort(lattice.covers.begin(), lattice.covers.end());
    lattice.top = doc.at("top").get<std::size_t>();
    lattice.bottom = doc.at("bottom").get<std::size_t>();
    if (n == 0 || lattice.top >= n || lattice.bottom >= n) {
      throw ParseError("lattice needs valid top and bottom", 0);
    }
    return lattice;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed lattice JSON: ") + e.what(), 0);
  }
}

}  // namespace fcr
