#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fcr/bitset.hpp"
#include "fcr/context.hpp"

namespace fcr {

struct FormalConcept {
  BitSet extent;
  BitSet intent;

  bool operator==(const FormalConcept&) const = default;
};

/// (child, parent): the child's extent is a proper subset of the parent's
/// and no concept lies strictly between them.
using CoverPair = std::pair<std::size_t, std::size_t>;

/// All concepts of one context plus the Hasse diagram of their order.
struct ConceptLattice {
  std::vector<std::string> object_labels;
  std::vector<std::string> attribute_labels;
  std::vector<FormalConcept> concepts;  // lectic order of intents
  std::vector<CoverPair> covers;        // sorted
  std::size_t top = 0;                  // full extent
  std::size_t bottom = 0;               // full intent

  std::size_t size() const noexcept { return concepts.size(); }
};

struct LatticeInvariants {
  std::size_t concept_count = 0;
  std::size_t edge_count = 0;
  std::size_t height = 0;  // nodes on a longest bottom-to-top chain
  std::size_t width_lo = 0;
  std::size_t width_hi = 0;

  bool operator==(const LatticeInvariants&) const = default;
};

struct LatticeOptions {
  /// Construction aborts with CapacityError once more concepts than this exist.
  std::size_t concept_cap = std::size_t{1} << 20;
};

enum class LatticeAlgorithm { nextclosure, addintent };

/// NextClosure: every concept exactly once, intents in lectic order.
std::vector<FormalConcept> enumerate_concepts(const FormalContext& ctx,
                                              const LatticeOptions& options = {});

/// Transitive reduction of extent inclusion. Throws InputError on duplicates.
std::vector<CoverPair> covering_relation(std::span<const FormalConcept> concepts);

/// enumerate_concepts followed by covering_relation.
ConceptLattice build_lattice_nextclosure(const FormalContext& ctx,
                                         const LatticeOptions& options = {});

/// Incremental object-by-object construction (AddIntent); yields concepts
/// and covers together.
ConceptLattice build_lattice_addintent(const FormalContext& ctx,
                                       const LatticeOptions& options = {});

ConceptLattice build_lattice(const FormalContext& ctx, LatticeAlgorithm algorithm,
                             const LatticeOptions& options = {});

/// Largest poset on which exact width is computed; beyond it invariants()
/// throws CapacityError.
inline constexpr std::size_t kMaxWidthConcepts = 40000;

LatticeInvariants invariants(const ConceptLattice& lattice);

/// Longest distance (in cover edges) from the bottom, per concept.
std::vector<std::size_t> rank_from_bottom(const ConceptLattice& lattice);

enum class Labeling { full, reduced };

/// Graphviz digraph with one arc child -> parent per cover pair.
std::string export_dot(const ConceptLattice& lattice, Labeling labeling);

nlohmann::json lattice_to_json(const ConceptLattice& lattice);
/// Throws ParseError on inconsistent documents.
ConceptLattice lattice_from_json(const nlohmann::json& doc);

/// Size of a largest antichain of a poset given as strict up-sets.
/// `above[i]` holds every j with i < j.
std::size_t max_antichain_size(std::span<const BitSet> above);

}  // namespace fcr
