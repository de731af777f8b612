#include <random>

#include "doctest.h"
#include "fcr/error.hpp"
#include "fcr/lattice.hpp"
#include "fcr/reduce.hpp"

using fcr::BitSet;
using fcr::FormalContext;
using fcr::Lexicon;
using fcr::ReductionMethod;
using fcr::Strategy;

namespace {

FormalContext worked_example() {
  return FormalContext::from_table({"W", "X", "Y", "Z"}, {"A", "B", "C", "D"},
                                   {{0, 1, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 1}});
}

FormalContext freq_example() {
  return FormalContext::from_table(
      {"V", "W", "X", "Y", "Z"}, {"A", "B", "C", "D"},
      {{0, 1, 0, 0}, {1, 1, 1, 0}, {1, 0, 1, 0}, {1, 0, 1, 1}, {0, 1, 1, 0}});
}

Lexicon toy_lexicon() {
  return Lexicon({{"wx", {"W", "X"}}, {"ab", {"A", "B"}}}, {});
}

// Each label gets its own synset; random upward edges keep the graph acyclic.
Lexicon random_lexicon(const FormalContext& ctx, std::mt19937_64& rng, bool synonyms_only) {
  std::vector<Lexicon::SynsetRecord> synsets;
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto* labels : {&ctx.objects(), &ctx.attributes()}) {
    std::vector<std::string> ids;
    std::size_t group = 0;
    for (std::size_t i = 0; i < labels->size(); ++i) {
      if (synonyms_only) {
        if (i == 0 || rng() % 3 == 0) {
          ids.push_back((*labels)[i] + "_s");
          synsets.push_back({ids.back(), {}});
          group = synsets.size() - 1;
        }
        synsets[group].lemmas.push_back((*labels)[i]);
        continue;
      }
      ids.push_back((*labels)[i] + "_s");
      synsets.push_back({ids.back(), {(*labels)[i]}});
      if (rng() % 5 == 0 && i > 0) synsets.back().lemmas.push_back((*labels)[rng() % i]);
    }
    if (!synonyms_only) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          if (rng() % 6 == 0) edges.emplace_back(ids[i], ids[j]);
        }
      }
    }
  }
  return Lexicon(std::move(synsets), std::move(edges));
}

}  // namespace

TEST_CASE("OR merge truth table") {
  auto ctx = FormalContext::from_table({"W", "X"}, {"p", "q", "r", "s"}, {{1, 1, 0, 0}, {1, 0, 1, 0}});
  std::vector<std::size_t> group{0, 1};
  auto merged = fcr::merge_rows(ctx, group, "W/X");
  REQUIRE(merged.num_objects() == 1);
  CHECK(merged.row(0) == BitSet(4, {0, 1, 2}));
  auto cols = fcr::merge_cols(fcr::transpose(ctx), group, "W/X");
  CHECK(cols.column(0) == BitSet(4, {0, 1, 2}));
}

TEST_CASE("merge argument validation") {
  auto ctx = worked_example();
  std::vector<std::size_t> one{0}, out_of_range{0, 9}, pair{0, 1};
  CHECK_THROWS_AS(fcr::merge_rows(ctx, one, "W"), fcr::InputError);
  CHECK_THROWS_AS(fcr::merge_rows(ctx, out_of_range, "W/Q"), fcr::InputError);
  CHECK_THROWS_AS(fcr::merge_rows(ctx, pair, "Y"), fcr::InputError);
  CHECK_NOTHROW(fcr::merge_rows(ctx, pair, "W"));
}

TEST_CASE("wordnet reduction reproduces the worked example") {
  auto ctx = worked_example();
  for (auto strategy : {Strategy::multidisciplinary, Strategy::single_dual}) {
    auto objects_only = fcr::wordnet_reduce(ctx, Lexicon({{"wx", {"W", "X"}}}, {}), 4, 4, strategy);
    CHECK(objects_only.context ==
          FormalContext::from_table({"W/X", "Y", "Z"}, {"A", "B", "C", "D"},
                                    {{0, 1, 1, 1}, {1, 1, 0, 0}, {0, 0, 0, 1}}));
    auto both = fcr::wordnet_reduce(ctx, toy_lexicon(), 4, 4, strategy);
    CHECK(both.context == FormalContext::from_table({"W/X", "Y", "Z"}, {"A/B", "C", "D"},
                                                    {{1, 1, 1}, {1, 0, 0}, {0, 0, 1}}));
    REQUIRE(both.trace.object_merges.size() == 1);
    CHECK(both.trace.object_merges[0].label == "W/X");
    CHECK(both.trace.attribute_merges[0].members == std::vector<std::string>{"A", "B"});
  }
}

TEST_CASE("hypernym merges take the more general label") {
  auto ctx = FormalContext::from_table({"puppy", "dog", "cat"}, {"m"}, {{1}, {0}, {1}});
  Lexicon lex({{"p", {"puppy"}}, {"d", {"dog"}}, {"c", {"cat"}}, {"a", {"animal"}}},
              {{"p", "d"}, {"d", "a"}, {"c", "a"}});
  auto r = fcr::wordnet_reduce(ctx, lex, 4, 4, Strategy::multidisciplinary);
  CHECK(r.context.objects() == std::vector<std::string>{"dog", "cat"});
  CHECK(r.context.row(0).test(0));
  // puppy -> dog needs one hypernym step.
  auto shallow = fcr::wordnet_reduce(ctx, lex, 0, 0, Strategy::multidisciplinary);
  CHECK(shallow.context == ctx);
  CHECK(shallow.trace.empty());
  // Pairs are (earlier, later); with dog first, puppy is reached as a hyponym.
  auto reversed = FormalContext::from_table({"dog", "puppy", "cat"}, {"m"}, {{0}, {1}, {1}});
  CHECK(fcr::wordnet_reduce(reversed, lex, 0, 1, Strategy::multidisciplinary).context.objects() ==
        std::vector<std::string>{"dog", "cat"});
  CHECK(fcr::wordnet_reduce(reversed, lex, 1, 0, Strategy::multidisciplinary).context == reversed);
}

TEST_CASE("frequency reduction keeps only strictly frequent rows and columns") {
  auto r = fcr::freq_reduce(freq_example(), 0.25);
  CHECK(r.context == FormalContext::from_table({"W", "X", "Y", "Z"}, {"A", "B", "C"},
                                               {{1, 1, 1}, {1, 0, 1}, {1, 0, 1}, {0, 1, 1}}));
  CHECK(r.trace.removed_objects == std::vector<std::string>{"V"});
  CHECK(r.trace.removed_attributes == std::vector<std::string>{"D"});
  // A second pass on the result removes nothing more.
  auto again = fcr::freq_reduce(r.context, 0.25);
  CHECK(again.context == r.context);
  CHECK(again.trace.empty());
  CHECK_THROWS_AS(fcr::freq_reduce(freq_example(), 1.5), fcr::InputError);
  CHECK_THROWS_AS(fcr::freq_reduce(freq_example(), -0.1), fcr::InputError);
}

TEST_CASE("frequency thresholds at the extremes") {
  auto ctx = freq_example();
  CHECK(fcr::freq_reduce(ctx, 0.0).context == ctx);
  auto none = fcr::freq_reduce(ctx, 1.0);
  CHECK(none.context.num_objects() == 0);
  CHECK(none.context.num_attributes() == 0);
  CHECK(fcr::build_lattice_addintent(none.context).size() == 1);
}

TEST_CASE("hybrid compositions") {
  auto ctx = worked_example();
  auto wn_freq = fcr::hybrid_reduce(ctx, toy_lexicon(), {4, 4, 0.25, Strategy::multidisciplinary},
                                    ReductionMethod::wn_then_freq);
  CHECK(wn_freq.context == FormalContext::from_table({"W/X", "Y", "Z"}, {"A/B", "C", "D"},
                                                     {{1, 1, 1}, {1, 0, 0}, {0, 0, 1}}));
  CHECK(wn_freq.trace.removed_objects.empty());
  CHECK(wn_freq.trace.method == ReductionMethod::wn_then_freq);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = fcr::random_context(8, 8, 0.4, rng());
    fcr::ReductionParams params{4, 4, 0.3, Strategy::multidisciplinary};
    CHECK(fcr::hybrid_reduce(r, Lexicon(), params, ReductionMethod::wn_then_freq).context ==
          fcr::freq_reduce(r, 0.3).context);
  }
  auto full_rows = FormalContext::from_table({"W", "X", "Y"}, {"A", "B"}, {{1, 0}, {0, 1}, {1, 1}});
  fcr::ReductionParams zero{4, 4, 0.0, Strategy::multidisciplinary};
  CHECK(fcr::hybrid_reduce(full_rows, toy_lexicon(), zero, ReductionMethod::freq_then_wn).context ==
        fcr::wordnet_reduce(full_rows, toy_lexicon(), 4, 4, Strategy::multidisciplinary).context);
  CHECK_THROWS_AS(fcr::hybrid_reduce(ctx, toy_lexicon(), zero, ReductionMethod::wordnet),
                  fcr::InputError);
}

TEST_CASE("trace replay reproduces every reduction") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto ctx = fcr::random_context(2 + rng() % 9, 2 + rng() % 9, 0.15 + 0.1 * (trial % 5), rng());
    auto lex = random_lexicon(ctx, rng, false);
    fcr::ReductionParams params{rng() % 4, rng() % 4, 0.05 * (rng() % 8),
                                trial % 2 ? Strategy::single_dual : Strategy::multidisciplinary};
    for (auto method : {ReductionMethod::wordnet, ReductionMethod::frequency,
                        ReductionMethod::wn_then_freq, ReductionMethod::freq_then_wn}) {
      auto r = fcr::reduce(ctx, lex, params, method);
      CHECK(fcr::apply_trace(ctx, r.trace) == r.context);
      auto reparsed = fcr::trace_from_json(fcr::trace_to_json(r.trace));
      CHECK(fcr::apply_trace(ctx, reparsed) == r.context);
      CHECK(r.context.num_objects() <= ctx.num_objects());
      CHECK(r.context.num_attributes() <= ctx.num_attributes());
    }
  }
}

TEST_CASE("strategies agree when relatedness is transitive") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto ctx = fcr::random_context(2 + rng() % 10, 2 + rng() % 10, 0.3, rng());
    auto lex = random_lexicon(ctx, rng, true);
    auto a = fcr::wordnet_reduce(ctx, lex, 4, 4, Strategy::single_dual);
    auto b = fcr::wordnet_reduce(ctx, lex, 4, 4, Strategy::multidisciplinary);
    CHECK(a.context == b.context);
  }
}

TEST_CASE("frequency reduction never adds concepts") {
  std::mt19937_64 rng(23);
  for (double density : {0.1, 0.25, 0.5}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto ctx = fcr::random_context(10, 10, density, rng());
      double threshold = 0.05 * (rng() % 10);
      auto r = fcr::freq_reduce(ctx, threshold);
      CHECK(fcr::build_lattice_addintent(r.context).size() <=
            fcr::build_lattice_addintent(ctx).size());
      auto higher = fcr::freq_reduce(ctx, threshold + 0.1);
      CHECK(higher.context.num_objects() <= r.context.num_objects());
      CHECK(higher.context.num_attributes() <= r.context.num_attributes());
    }
  }
}

TEST_CASE("attribute translation through a trace") {
  auto r = fcr::hybrid_reduce(freq_example(), toy_lexicon(), {4, 4, 0.25, Strategy::multidisciplinary},
                              ReductionMethod::freq_then_wn);
  CHECK(fcr::translate_attribute(r.trace, "A") == "A/B");
  CHECK(fcr::translate_attribute(r.trace, "B") == "A/B");
  CHECK(fcr::translate_attribute(r.trace, "C") == "C");
  CHECK_FALSE(fcr::translate_attribute(r.trace, "D").has_value());
  CHECK(fcr::apply_trace(freq_example(), r.trace) == r.context);
}

TEST_CASE("method and strategy names") {
  CHECK(fcr::parse_method("wn-then-freq") == ReductionMethod::wn_then_freq);
  CHECK(fcr::parse_method("freq_then_wn") == ReductionMethod::freq_then_wn);
  CHECK(fcr::parse_method("frequency") == ReductionMethod::frequency);
  CHECK(fcr::parse_strategy("single-dual") == Strategy::single_dual);
  CHECK_THROWS_AS(fcr::parse_method("eca"), fcr::InputError);
  CHECK(fcr::to_string(ReductionMethod::wordnet) == "wordnet");
}

TEST_CASE("apply_trace rejects labels it cannot find") {
  fcr::MergeTrace trace;
  trace.removed_objects = {"nobody"};
  trace.method = ReductionMethod::frequency;
  CHECK_THROWS_AS(fcr::apply_trace(worked_example(), trace), fcr::InputError);
  CHECK_THROWS_AS(fcr::trace_from_json(nlohmann::json::parse(R"({"method": 3})")),
                  fcr::InputError);
}
