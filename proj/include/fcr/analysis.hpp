#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fcr/context.hpp"
#include "fcr/lattice.hpp"
#include "fcr/reduce.hpp"

namespace fcr {

/// Directed cover graph, edges (lower, upper). Multi-edges are allowed so
/// smoothing stays well defined.
struct HasseGraph {
  std::size_t num_nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t top = 0;
  std::size_t bottom = 0;

  static HasseGraph from_lattice(const ConceptLattice& lattice);
};

/// Replaces edge `edge` (lower, upper) by lower -> new node -> upper.
HasseGraph subdivide_edge(const HasseGraph& graph, std::size_t edge);

/// Removes every non-top, non-bottom node with exactly one lower and one
/// upper neighbour, joining those neighbours directly.
HasseGraph smooth(const HasseGraph& graph);

struct IsomorphismOptions {
  /// Largest graph searched exhaustively; larger graphs that cheap
  /// invariants cannot separate raise CapacityError.
  std::size_t max_nodes = 200;
};

bool is_isomorphic(const HasseGraph& a, const HasseGraph& b,
                   const IsomorphismOptions& options = {});
bool is_isomorphic(const ConceptLattice& a, const ConceptLattice& b,
                   const IsomorphismOptions& options = {});

bool is_homeomorphic(const HasseGraph& a, const HasseGraph& b,
                     const IsomorphismOptions& options = {});
bool is_homeomorphic(const ConceptLattice& a, const ConceptLattice& b,
                     const IsomorphismOptions& options = {});

/// Share of original cover pairs (c, p) whose images stay ordered in the
/// reduced lattice. Images come from translating intents through the trace
/// and closing them in `ctx_reduced`. 1 when the original has no covers.
double similarity(const ConceptLattice& original, const ConceptLattice& reduced,
                  const FormalContext& ctx_reduced, const MergeTrace& trace);

struct InvariantDelta {
  long long concepts = 0;  // a - b
  long long edges = 0;
  long long height = 0;
  long long width_lo = 0;
  long long width_hi = 0;
  double concept_reduction = 0.0;  // (a - b) / a, 0 when a is empty
  double edge_reduction = 0.0;
};

struct ComparisonReport {
  LatticeInvariants invariants_a;
  LatticeInvariants invariants_b;
  InvariantDelta delta;
  bool isomorphic = false;
  bool homeomorphic = false;
  double similarity = 1.0;
};

ComparisonReport compare(const ConceptLattice& a, const ConceptLattice& b,
                         const FormalContext& ctx_b, const MergeTrace& trace,
                         const IsomorphismOptions& options = {});

nlohmann::json invariants_to_json(const LatticeInvariants& inv);
nlohmann::json report_to_json(const ComparisonReport& report);
std::string report_table(const ComparisonReport& report);

}  // namespace fcr
