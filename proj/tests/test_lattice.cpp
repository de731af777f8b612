#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "fcr/error.hpp"
#include "fcr/lattice.hpp"
#include "oracles.hpp"

using fcr::BitSet;
using fcr::FormalContext;

namespace {

FormalContext worked_example() {
  return FormalContext::from_table({"W", "X", "Y", "Z"}, {"A", "B", "C", "D"},
                                   {{0, 1, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 1}});
}

using EdgeSet = std::set<std::pair<oracle::Bits, oracle::Bits>>;

oracle::Bits bits_of(const BitSet& b) {
  oracle::Bits out(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) out[k] = b.test(k);
  return out;
}

EdgeSet edge_set(const fcr::ConceptLattice& l) {
  EdgeSet out;
  for (auto [c, p] : l.covers) out.emplace(bits_of(l.concepts[c].extent), bits_of(l.concepts[p].extent));
  return out;
}

EdgeSet oracle_edges(const std::vector<oracle::Concept>& concepts) {
  std::vector<oracle::Bits> extents;
  for (const auto& c : concepts) extents.push_back(c.extent);
  EdgeSet out;
  for (auto [c, p] : oracle::covers(extents)) out.emplace(extents[c], extents[p]);
  return out;
}

bool extent_less(const oracle::Bits& a, const oracle::Bits& b) {
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && !b[k]) return false;
    strict |= !a[k] && b[k];
  }
  return strict;
}

fcr::LatticeInvariants oracle_invariants(const FormalContext& ctx) {
  auto concepts = oracle::all_concepts(ctx);
  const std::size_t n = concepts.size();
  auto less = [&](std::size_t i, std::size_t j) {
    return extent_less(concepts[i].extent, concepts[j].extent);
  };
  fcr::LatticeInvariants inv;
  inv.concept_count = n;
  inv.edge_count = oracle_edges(concepts).size();
  inv.height = oracle::longest_chain(n, less);
  // Longest chain below each element gives its rank level.
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> below;
    for (std::size_t j = 0; j < n; ++j) {
      if (less(j, i) || j == i) below.push_back(j);
    }
    rank[i] = oracle::longest_chain(below.size(), [&](std::size_t a, std::size_t b) {
      return less(below[a], below[b]);
    });
  }
  std::vector<std::size_t> level(n + 1, 0);
  for (std::size_t r : rank) ++level[r];
  inv.width_lo = *std::max_element(level.begin(), level.end());
  inv.width_hi = oracle::largest_antichain(n, less);
  return inv;
}

}  // namespace

TEST_CASE("the small example has seven concepts and the expected invariants") {
  auto ctx = worked_example();
  auto l = fcr::build_lattice_nextclosure(ctx);
  CHECK(l.size() == 7);
  CHECK(oracle::to_oracle(l.concepts) == oracle::all_concepts(ctx));
  fcr::LatticeInvariants expected{7, 9, 4, 3, 3};
  CHECK(fcr::invariants(l) == expected);
  CHECK(oracle_invariants(ctx) == expected);
  CHECK(l.concepts[l.top].extent.all());
  CHECK(l.concepts[l.bottom].intent.all());
}

TEST_CASE("NextClosure emits intents in strictly increasing lectic order") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto ctx = fcr::random_context(8, 9, 0.3 + 0.05 * (trial % 5), rng());
    auto concepts = fcr::enumerate_concepts(ctx);
    for (std::size_t i = 1; i < concepts.size(); ++i) {
      CHECK(fcr::lectic_less(concepts[i - 1].intent, concepts[i].intent));
    }
  }
}

TEST_CASE("both builders agree with the all-subsets oracle") {
  std::mt19937_64 rng(2024);
  for (double density : {0.1, 0.25, 0.5, 0.8}) {
    for (int trial = 0; trial < 25; ++trial) {
      std::size_t n = 1 + rng() % 10, m = 1 + rng() % 10;
      auto ctx = fcr::random_context(n, m, density, rng());
      auto expected = oracle::all_concepts(ctx);
      auto nc = fcr::build_lattice_nextclosure(ctx);
      auto ai = fcr::build_lattice_addintent(ctx);
      REQUIRE(oracle::to_oracle(nc.concepts) == expected);
      REQUIRE(oracle::to_oracle(ai.concepts) == expected);
      auto edges = oracle_edges(expected);
      CHECK(edge_set(nc) == edges);
      CHECK(edge_set(ai) == edges);
      CHECK(nc.covers == ai.covers);
      CHECK(fcr::invariants(nc) == oracle_invariants(ctx));
    }
  }
}

TEST_CASE("degenerate contexts") {
  FormalContext empty;
  auto l = fcr::build_lattice_addintent(empty);
  CHECK(l.size() == 1);
  CHECK(l.covers.empty());
  CHECK(fcr::invariants(l) == fcr::LatticeInvariants{1, 0, 1, 1, 1});
  CHECK(fcr::build_lattice_nextclosure(empty).size() == 1);

  auto all_true = FormalContext::from_table({"a", "b"}, {"x", "y"}, {{1, 1}, {1, 1}});
  CHECK(fcr::build_lattice_nextclosure(all_true).size() == 1);
  CHECK(fcr::build_lattice_addintent(all_true).size() == 1);

  auto diagonal = FormalContext::from_table({"a", "b", "c"}, {"x", "y", "z"},
                                            {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto d = fcr::build_lattice_addintent(diagonal);
  CHECK(fcr::invariants(d) == fcr::LatticeInvariants{5, 6, 3, 3, 3});
}

TEST_CASE("concept cap raises a capacity error with the count reached") {
  auto ctx = FormalContext::from_table(
      {"a", "b", "c", "d", "e", "f"}, {"1", "2", "3", "4", "5", "6"},
      {{0, 1, 1, 1, 1, 1}, {1, 0, 1, 1, 1, 1}, {1, 1, 0, 1, 1, 1}, {1, 1, 1, 0, 1, 1},
       {1, 1, 1, 1, 0, 1}, {1, 1, 1, 1, 1, 0}});
  CHECK(fcr::build_lattice_nextclosure(ctx).size() == 64);
  for (auto algorithm : {fcr::LatticeAlgorithm::nextclosure, fcr::LatticeAlgorithm::addintent}) {
    try {
      fcr::build_lattice(ctx, algorithm, {10});
      FAIL("expected a capacity error");
    } catch (const fcr::CapacityError& e) {
      CHECK(e.reached() > 10);
    }
  }
}

TEST_CASE("covering relation rejects duplicate extents") {
  std::vector<fcr::FormalConcept> dup{{BitSet(2, {0}), BitSet(2, {0})},
                                      {BitSet(2, {0}), BitSet(2, {1})}};
  CHECK_THROWS_AS(fcr::covering_relation(dup), fcr::InputError);
}

TEST_CASE("antichain size matches exhaustive search on random posets") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + rng() % 14;
    // Random order: i < j only when i < j numerically, closed transitively.
    std::vector<BitSet> above(n, BitSet(n));
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng() % 4 == 0) {
          above[i].set(j);
          above[i] |= above[j];
        }
      }
    }
    auto less = [&](std::size_t a, std::size_t b) { return above[a].test(b); };
    CHECK(fcr::max_antichain_size(above) == oracle::largest_antichain(n, less));
  }
}

TEST_CASE("rank from bottom") {
  auto l = fcr::build_lattice_nextclosure(worked_example());
  auto rank = fcr::rank_from_bottom(l);
  CHECK(rank[l.bottom] == 0);
  CHECK(rank[l.top] == 3);
  for (auto [c, p] : l.covers) CHECK(rank[c] < rank[p]);
}

TEST_CASE("DOT export") {
  auto one = FormalContext::from_table({"a"}, {"x"}, {{1}});
  auto dot = fcr::export_dot(fcr::build_lattice_nextclosure(one), fcr::Labeling::full);
  CHECK(dot == "digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n  c0 [label=\"a\\nx\"];\n}\n");

  auto l = fcr::build_lattice_nextclosure(worked_example());
  auto full = fcr::export_dot(l, fcr::Labeling::full);
  auto reduced = fcr::export_dot(l, fcr::Labeling::reduced);
  CHECK(std::count(full.begin(), full.end(), '>') == 9);
  // In the reduced labeling every object and attribute appears exactly once.
  std::string labels;
  for (std::size_t pos = reduced.find("label=\""); pos != std::string::npos;
       pos = reduced.find("label=\"", pos + 1)) {
    labels += reduced.substr(pos + 7, reduced.find('"', pos + 7) - pos - 7) + " ";
  }
  for (char label : std::string("WXYZABCD")) {
    auto hits = std::count(labels.begin(), labels.end(), label);
    CHECK(hits == 1);
  }
}

TEST_CASE("JSON round trip and validation") {
  auto l = fcr::build_lattice_addintent(worked_example());
  auto doc = fcr::lattice_to_json(l);
  auto back = fcr::lattice_from_json(doc);
  CHECK(back.concepts == l.concepts);
  CHECK(back.covers == l.covers);
  CHECK(back.top == l.top);
  CHECK(back.bottom == l.bottom);
  CHECK(fcr::invariants(back) == fcr::invariants(l));

  auto broken = doc;
  broken["covers"].push_back({0, 99});
  CHECK_THROWS_AS(fcr::lattice_from_json(broken), fcr::ParseError);
  auto unknown = doc;
  unknown["concepts"][0]["intent"].push_back("nope");
  CHECK_THROWS_AS(fcr::lattice_from_json(unknown), fcr::ParseError);
}
